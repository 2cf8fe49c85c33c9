#pragma once

#include <vector>

#include "osplit/boundary.hpp"
#include "osplit/grid.hpp"

namespace osplit::detail {

// One boundary node of a face with its two inward neighbors along the
// face normal and its along-face coordinate.
struct FaceNode {
    int b;
    int in1;
    int in2;
    double s;
    bool corner;
};

std::vector<FaceNode> face_nodes(const Grid& g, FaceId f);

// Grid spacing in the face-normal direction.
double normal_spacing(const Grid& g, FaceId f);

// Sign sigma such that the face's derivative convention reads
// sigma * (3u_B - 4u_I + u_II)/(2h) one-sided and
// sigma * (u_G - u_I)/(2h) centered with ghost u_G. All faces use +1
// (outward normal) except the 1D left face, whose convention is d/dx.
double deriv_sign(const Grid& g, FaceId f);

// Index into `faces` of the spec attached to `id`; throws if missing.
int face_index(const std::vector<BoundaryFaceSpec>& faces, FaceId id);

// Owner of a 2D corner shared by faces fx (left/right) and fy
// (bottom/top): a Dirichlet face wins, the y-face when both are
// Dirichlet; returns -1 when both faces are oblique.
int corner_owner(const std::vector<BoundaryFaceSpec>& faces, int fx, int fy);

}  // namespace osplit::detail

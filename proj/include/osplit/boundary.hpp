#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "osplit/grid.hpp"

namespace osplit {

// Face naming: 1D uses Left/Right; 2D adds Bottom (y = lo) and Top (y = hi).
enum class FaceId { Left = 0, Right = 1, Bottom = 2, Top = 3 };

const char* face_name(FaceId f);

// Oblique boundary condition on one face:
//   alpha * u + beta * (derivative of u) = data(s, t)
// where s is the coordinate along the face (ignored in 1D) and the
// derivative is d/dx at both faces in 1D and the outward normal in 2D.
struct BoundaryFaceSpec {
    FaceId face = FaceId::Left;
    double alpha = 1.0;
    double beta = 0.0;
    std::function<double(double, double)> data;  // (s, t)

    bool is_dirichlet() const { return beta == 0.0; }
    double eval_data(double s, double t) const { return data ? data(s, t) : 0.0; }
};

// Throws ConfigError when (alpha, beta) == (0, 0).
void validate_boundary_spec(const BoundaryFaceSpec& spec);

// Semilinear diffusion-reaction problem on an interval or rectangle:
//   du/dt = d2 u'' + d1 u' + d0 u + f(u)        (2D: Laplacian + f(u))
// with one BoundaryFaceSpec per face. Empty coefficient functions mean
// the Laplacian defaults d2=1, d1=0, d0=0.
struct ProblemSpec {
    std::function<double(double)> d2, d1, d0;
    std::function<double(double)> reaction, reaction_deriv;
    std::function<double(double, double)> initial;  // u0(x, y)
    std::vector<BoundaryFaceSpec> faces;

    const BoundaryFaceSpec& face(FaceId id) const;
};

// Discretized elliptic operator with the boundary operator eliminated.
// PDE rows (interior + oblique-face nodes) carry centered second-order
// stencils, with ghost values removed through the face closure; the
// inhomogeneous data lands in the affine injection g(t). Dirichlet-face
// nodes are slaved: zero matrix row, value imposed on every output.
struct DiscreteOperator {
    Grid grid;
    std::vector<BoundaryFaceSpec> faces;
    Eigen::SparseMatrix<double> matrix;  // A_h over all nodes

    // g(t) entries: sum of coeff * data(s, t) per recorded term
    struct InjectionTerm {
        int node;
        int face_idx;  // into faces
        double coeff;
        double s;
    };
    std::vector<InjectionTerm> injection_terms;

    struct SlavedNode {
        int node;
        int face_idx;
        double s;
    };
    std::vector<SlavedNode> slaved_nodes;
    std::vector<char> slaved_mask;  // 1 per slaved node

    Eigen::VectorXd injection(double t) const;
    // Sets every Dirichlet node to data(s, t) / alpha.
    void impose_dirichlet(Field& f, double t) const;
    bool is_slaved(int node) const { return slaved_mask[node] != 0; }
};

DiscreteOperator assemble_operator(const ProblemSpec& problem, const Grid& grid);

// Per-face residual alpha*u_B + beta*D_h u - data(t) with D_h the
// second-order one-sided 3-point difference in the face's derivative
// convention. In 2D the returned value is the max-abs over the face's
// nodes, corners counted only for the face that owns them.
std::vector<double> boundary_residual(const Field& field,
                                      const std::vector<BoundaryFaceSpec>& faces, double t);

}  // namespace osplit

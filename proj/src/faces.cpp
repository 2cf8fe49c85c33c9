#include "osplit/detail/faces.hpp"

#include "osplit/errors.hpp"

namespace osplit::detail {

std::vector<FaceNode> face_nodes(const Grid& g, FaceId f) {
    std::vector<FaceNode> out;
    if (g.dim == 1) {
        const int n = g.nx();
        if (f == FaceId::Left)
            out.push_back({g.index(0), g.index(1), g.index(2), 0.0, false});
        else if (f == FaceId::Right)
            out.push_back({g.index(n - 1), g.index(n - 2), g.index(n - 3), 0.0, false});
        else
            throw ConfigError("face_nodes: 1D grid has only left/right faces");
        return out;
    }
    const int nx = g.nx(), ny = g.ny();
    switch (f) {
        case FaceId::Left:
            for (int j = 0; j < ny; ++j)
                out.push_back({g.index(0, j), g.index(1, j), g.index(2, j), g.y(j),
                               j == 0 || j == ny - 1});
            break;
        case FaceId::Right:
            for (int j = 0; j < ny; ++j)
                out.push_back({g.index(nx - 1, j), g.index(nx - 2, j), g.index(nx - 3, j),
                               g.y(j), j == 0 || j == ny - 1});
            break;
        case FaceId::Bottom:
            for (int i = 0; i < nx; ++i)
                out.push_back({g.index(i, 0), g.index(i, 1), g.index(i, 2), g.x(i),
                               i == 0 || i == nx - 1});
            break;
        case FaceId::Top:
            for (int i = 0; i < nx; ++i)
                out.push_back({g.index(i, ny - 1), g.index(i, ny - 2), g.index(i, ny - 3),
                               g.x(i), i == 0 || i == nx - 1});
            break;
    }
    return out;
}

double normal_spacing(const Grid& g, FaceId f) {
    return (f == FaceId::Left || f == FaceId::Right) ? g.h[0] : g.h[1];
}

double deriv_sign(const Grid& g, FaceId f) {
    return (g.dim == 1 && f == FaceId::Left) ? -1.0 : 1.0;
}

int face_index(const std::vector<BoundaryFaceSpec>& faces, FaceId id) {
    for (int k = 0; k < static_cast<int>(faces.size()); ++k)
        if (faces[k].face == id) return k;
    throw ConfigError(std::string("missing boundary face spec for ") + face_name(id));
}

int corner_owner(const std::vector<BoundaryFaceSpec>& faces, int fx, int fy) {
    const bool dx = faces[fx].is_dirichlet();
    const bool dy = faces[fy].is_dirichlet();
    if (dy) return fy;
    if (dx) return fx;
    return -1;
}

}  // namespace osplit::detail

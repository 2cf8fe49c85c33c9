#include "osplit/boundary.hpp"

#include <cmath>
#include <string>

#include "osplit/detail/faces.hpp"
#include "osplit/errors.hpp"

namespace osplit {

namespace {

double eval_or(const std::function<double(double)>& fn, double x, double fallback) {
    return fn ? fn(x) : fallback;
}

}  // namespace

const char* face_name(FaceId f) {
    switch (f) {
        case FaceId::Left: return "left";
        case FaceId::Right: return "right";
        case FaceId::Bottom: return "bottom";
        case FaceId::Top: return "top";
    }
    return "?";
}

void validate_boundary_spec(const BoundaryFaceSpec& spec) {
    if (spec.alpha == 0.0 && spec.beta == 0.0)
        throw ConfigError(std::string("degenerate boundary face '") + face_name(spec.face) +
                          "': alpha and beta both zero");
}

const BoundaryFaceSpec& ProblemSpec::face(FaceId id) const {
    return faces[detail::face_index(faces, id)];
}

Eigen::VectorXd DiscreteOperator::injection(double t) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(grid.num_nodes());
    for (const auto& term : injection_terms)
        g[term.node] += term.coeff * faces[term.face_idx].eval_data(term.s, t);
    return g;
}

void DiscreteOperator::impose_dirichlet(Field& f, double t) const {
    for (const auto& sn : slaved_nodes) {
        const auto& spec = faces[sn.face_idx];
        f[sn.node] = spec.eval_data(sn.s, t) / spec.alpha;
    }
}

DiscreteOperator assemble_operator(const ProblemSpec& problem, const Grid& grid) {
    for (const auto& f : problem.faces) validate_boundary_spec(f);

    DiscreteOperator op;
    op.grid = grid;
    op.faces = problem.faces;
    const int N = grid.num_nodes();
    op.slaved_mask.assign(N, 0);
    std::vector<Eigen::Triplet<double>> trip;

    auto slave = [&](int node, int face_idx, double s) {
        op.slaved_nodes.push_back({node, face_idx, s});
        op.slaved_mask[node] = 1;
    };

    if (grid.dim == 1) {
        require(problem.faces.size() == 2, "1D problem needs exactly two faces");
        const double h = grid.h[0];
        const auto d2 = [&](double x) { return eval_or(problem.d2, x, 1.0); };
        const auto d1 = [&](double x) { return eval_or(problem.d1, x, 0.0); };
        const auto d0 = [&](double x) { return eval_or(problem.d0, x, 0.0); };
        for (int i = 1; i < grid.nx() - 1; ++i) {
            const double x = grid.x(i);
            const double a2 = d2(x), a1 = d1(x), a0 = d0(x);
            require(a2 > 0.0, "d2 must be uniformly positive");
            trip.emplace_back(i, i - 1, a2 / (h * h) - a1 / (2 * h));
            trip.emplace_back(i, i, -2 * a2 / (h * h) + a0);
            trip.emplace_back(i, i + 1, a2 / (h * h) + a1 / (2 * h));
        }
        for (FaceId id : {FaceId::Left, FaceId::Right}) {
            const int fi = detail::face_index(problem.faces, id);
            const auto& spec = problem.faces[fi];
            const auto fn = detail::face_nodes(grid, id)[0];
            if (spec.is_dirichlet()) {
                slave(fn.b, fi, fn.s);
                continue;
            }
            const double sgn = detail::deriv_sign(grid, id);
            const double x = grid.x(id == FaceId::Left ? 0 : grid.nx() - 1);
            const double a2 = d2(x), a1 = d1(x), a0 = d0(x);
            require(a2 > 0.0, "d2 must be uniformly positive");
            const double beta = spec.beta, alpha = spec.alpha;
            trip.emplace_back(fn.b, fn.in1, 2 * a2 / (h * h));
            trip.emplace_back(fn.b, fn.b,
                              -2 * a2 / (h * h) - 2 * alpha * a2 / (sgn * beta * h) -
                                  alpha * a1 / beta + a0);
            op.injection_terms.push_back(
                {fn.b, fi, 2 * a2 / (sgn * beta * h) + a1 / beta, fn.s});
        }
    } else {
        require(problem.faces.size() == 4, "2D problem needs exactly four faces");
        if (problem.d2 || problem.d1 || problem.d0)
            throw ConfigError("2D supports only the Laplacian (no variable coefficients)");
        const double hx = grid.h[0], hy = grid.h[1];
        const int nx = grid.nx(), ny = grid.ny();

        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const int k = grid.index(i, j);
                trip.emplace_back(k, grid.index(i - 1, j), 1.0 / (hx * hx));
                trip.emplace_back(k, grid.index(i + 1, j), 1.0 / (hx * hx));
                trip.emplace_back(k, grid.index(i, j - 1), 1.0 / (hy * hy));
                trip.emplace_back(k, grid.index(i, j + 1), 1.0 / (hy * hy));
                trip.emplace_back(k, k, -2.0 / (hx * hx) - 2.0 / (hy * hy));
            }

        // Ghost-eliminated normal-direction stencil of one face at one node.
        auto oblique_normal_part = [&](int face_idx, const detail::FaceNode& fn) {
            const auto& spec = op.faces[face_idx];
            const double h = detail::normal_spacing(grid, spec.face);
            const double sgn = detail::deriv_sign(grid, spec.face);
            trip.emplace_back(fn.b, fn.in1, 2.0 / (h * h));
            trip.emplace_back(fn.b, fn.b,
                              -2.0 / (h * h) - 2.0 * spec.alpha / (sgn * spec.beta * h));
            op.injection_terms.push_back(
                {fn.b, face_idx, 2.0 / (sgn * spec.beta * h), fn.s});
        };

        // Edge (non-corner) nodes, one face each.
        for (FaceId id : {FaceId::Left, FaceId::Right, FaceId::Bottom, FaceId::Top}) {
            const int fi = detail::face_index(problem.faces, id);
            const auto& spec = problem.faces[fi];
            const bool xface = (id == FaceId::Left || id == FaceId::Right);
            const double ht = xface ? hy : hx;  // tangential spacing
            for (const auto& fn : detail::face_nodes(grid, id)) {
                if (fn.corner) continue;
                if (spec.is_dirichlet()) {
                    slave(fn.b, fi, fn.s);
                    continue;
                }
                oblique_normal_part(fi, fn);
                // centered tangential second difference
                const int tb = xface ? fn.b - nx : fn.b - 1;
                const int tf = xface ? fn.b + nx : fn.b + 1;
                trip.emplace_back(fn.b, tb, 1.0 / (ht * ht));
                trip.emplace_back(fn.b, tf, 1.0 / (ht * ht));
                trip.emplace_back(fn.b, fn.b, -2.0 / (ht * ht));
            }
        }

        // Corners.
        for (int ci : {0, 1})
            for (int cj : {0, 1}) {
                const int i = ci == 0 ? 0 : nx - 1;
                const int j = cj == 0 ? 0 : ny - 1;
                const int k = grid.index(i, j);
                const int fx = detail::face_index(problem.faces,
                                                  ci == 0 ? FaceId::Left : FaceId::Right);
                const int fy = detail::face_index(problem.faces,
                                                  cj == 0 ? FaceId::Bottom : FaceId::Top);
                const int owner = detail::corner_owner(problem.faces, fx, fy);
                if (owner >= 0) {
                    const bool owner_is_x = (owner == fx);
                    slave(k, owner, owner_is_x ? grid.y(j) : grid.x(i));
                    continue;
                }
                // Both faces oblique: eliminate a ghost in each direction.
                detail::FaceNode fnx{k, grid.index(ci == 0 ? 1 : nx - 2, j),
                                     grid.index(ci == 0 ? 2 : nx - 3, j), grid.y(j), true};
                detail::FaceNode fny{k, grid.index(i, cj == 0 ? 1 : ny - 2),
                                     grid.index(i, cj == 0 ? 2 : ny - 3), grid.x(i), true};
                oblique_normal_part(fx, fnx);
                oblique_normal_part(fy, fny);
            }
    }

    op.matrix.resize(N, N);
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.matrix.makeCompressed();
    return op;
}

std::vector<double> boundary_residual(const Field& field,
                                      const std::vector<BoundaryFaceSpec>& faces, double t) {
    const Grid& grid = field.grid;
    std::vector<double> out;
    out.reserve(faces.size());
    for (const auto& spec : faces) {
        const double h = detail::normal_spacing(grid, spec.face);
        const double sgn = detail::deriv_sign(grid, spec.face);
        double worst = 0.0;
        for (const auto& fn : detail::face_nodes(grid, spec.face)) {
            if (grid.dim == 2 && fn.corner) {
                // count a corner only for the face that owns it
                const int i = fn.b % grid.nx();
                const int j = fn.b / grid.nx();
                const int ix = detail::face_index(faces, i == 0 ? FaceId::Left : FaceId::Right);
                const int iy =
                    detail::face_index(faces, j == 0 ? FaceId::Bottom : FaceId::Top);
                const int owner = detail::corner_owner(faces, ix, iy);
                const int self = detail::face_index(faces, spec.face);
                if (owner != self) continue;
            }
            const double dh = sgn *
                              (3.0 * field[fn.b] - 4.0 * field[fn.in1] + field[fn.in2]) /
                              (2.0 * h);
            const double r = spec.alpha * field[fn.b] + spec.beta * dh - spec.eval_data(fn.s, t);
            worst = std::max(worst, std::abs(r));
            if (grid.dim == 1) worst = r;  // signed single value in 1D
        }
        out.push_back(worst);
    }
    return out;
}

}  // namespace osplit

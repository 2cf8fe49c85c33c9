#include "osplit/correction.hpp"

#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <string>

#include "osplit/detail/faces.hpp"
#include "osplit/errors.hpp"

namespace osplit {

namespace {

double react(const ProblemSpec& p, double u) { return p.reaction ? p.reaction(u) : 0.0; }
double react_d(const ProblemSpec& p, double u) {
    return p.reaction_deriv ? p.reaction_deriv(u) : 0.0;
}

// Laplace problem whose closure the correction must satisfy.
ProblemSpec laplace_problem(const std::vector<BoundaryFaceSpec>& cfaces) {
    ProblemSpec p;
    p.faces = cfaces;
    return p;
}

// Set boundary nodes so the one-sided second-order discrete boundary
// operator reproduces the target data exactly.
void impose_one_sided_closure(Field& q, const std::vector<BoundaryFaceSpec>& cfaces) {
    const Grid& grid = q.grid;
    for (const auto& spec : cfaces) {
        const double h = detail::normal_spacing(grid, spec.face);
        const double sgn = detail::deriv_sign(grid, spec.face);
        const int self = detail::face_index(cfaces, spec.face);
        for (const auto& fn : detail::face_nodes(grid, spec.face)) {
            if (grid.dim == 2 && fn.corner) {
                const int i = fn.b % grid.nx();
                const int j = fn.b / grid.nx();
                const int ix =
                    detail::face_index(cfaces, i == 0 ? FaceId::Left : FaceId::Right);
                const int iy =
                    detail::face_index(cfaces, j == 0 ? FaceId::Bottom : FaceId::Top);
                if (detail::corner_owner(cfaces, ix, iy) != self) continue;
            }
            const double g = spec.eval_data(fn.s, 0.0);
            if (spec.is_dirichlet()) {
                q[fn.b] = g / spec.alpha;
            } else {
                const double bs = spec.beta * sgn / (2.0 * h);
                const double den = spec.alpha + 3.0 * bs;
                require(std::abs(den) > 1e-14, "degenerate one-sided boundary closure");
                q[fn.b] = (g + bs * (4.0 * q[fn.in1] - q[fn.in2])) / den;
            }
        }
    }
}

// A value interpolant alone cannot carry independent normal-derivative
// data on opposite faces (its blend has a single slope per axis), so
// each oblique face additionally receives a cubic bump that vanishes at
// both ends of the normal axis, has unit slope at its own face and zero
// slope at the opposite one. The bump amplitude is the per-node deficit
// between the face's oblique closure and the interpolant's one-sided
// derivative.
void add_slope_deficits(Field& q, const std::vector<BoundaryFaceSpec>& cfaces,
                        const Grid& grid) {
    for (const auto& spec : cfaces) {
        if (spec.is_dirichlet()) continue;
        const double h = detail::normal_spacing(grid, spec.face);
        const double sgn = detail::deriv_sign(grid, spec.face);
        const auto nodes = detail::face_nodes(grid, spec.face);
        std::vector<double> dout(nodes.size());
        for (size_t k = 0; k < nodes.size(); ++k) {
            const auto& fn = nodes[k];
            const double dh =
                sgn * (3.0 * q[fn.b] - 4.0 * q[fn.in1] + q[fn.in2]) / (2.0 * h);
            const double g = spec.eval_data(fn.s, 0.0);
            dout[k] = sgn * ((g - spec.alpha * q[fn.b]) / spec.beta - dh);
        }
        const bool xface = spec.face == FaceId::Left || spec.face == FaceId::Right;
        const int axis = (grid.dim == 1) ? 0 : (xface ? 0 : 1);
        const double len = grid.hi[axis] - grid.lo[axis];
        const int n_axis = xface || grid.dim == 1 ? grid.nx() : grid.ny();
        auto inward = [&](int idx) {
            const double t = static_cast<double>(idx) / (n_axis - 1);
            return (spec.face == FaceId::Left || spec.face == FaceId::Bottom) ? t : 1.0 - t;
        };
        if (grid.dim == 1) {
            for (int i = 0; i < grid.nx(); ++i) {
                const double z = inward(i);
                q[i] -= len * z * (1.0 - z) * (1.0 - z) * dout[0];
            }
            continue;
        }
        for (size_t k = 0; k < nodes.size(); ++k) {
            const int tang = xface ? nodes[k].b / grid.nx() : nodes[k].b % grid.nx();
            for (int m = 0; m < n_axis; ++m) {
                const double z = inward(m);
                const double bump = len * z * (1.0 - z) * (1.0 - z) * dout[k];
                const int idx = xface ? grid.index(m, tang) : grid.index(tang, m);
                q[idx] -= bump;
            }
        }
    }
}

// Step 1 of the interpolation-based builder: face anchor values from a
// first-order closure, filled into the domain by linear (1D) or Coons
// patch (2D) interpolation; the oblique anchors are refreshed once from
// the interpolant.
Field interpolate_targets(const std::vector<BoundaryFaceSpec>& cfaces, const Grid& grid) {
    auto anchor_first = [&](const BoundaryFaceSpec& spec, double g) {
        if (spec.is_dirichlet()) return g / spec.alpha;
        return spec.alpha != 0.0 ? g / spec.alpha : 0.0;
    };
    auto anchor_refresh = [&](const BoundaryFaceSpec& spec, double g, double u_inner) {
        if (spec.is_dirichlet()) return g / spec.alpha;
        const double h = detail::normal_spacing(grid, spec.face);
        const double bs = spec.beta * detail::deriv_sign(grid, spec.face);
        return (g * h + bs * u_inner) / (spec.alpha * h + bs);
    };

    if (grid.dim == 1) {
        const auto& L = cfaces[detail::face_index(cfaces, FaceId::Left)];
        const auto& R = cfaces[detail::face_index(cfaces, FaceId::Right)];
        double aL = anchor_first(L, L.eval_data(0, 0));
        double aR = anchor_first(R, R.eval_data(0, 0));
        auto line = [&](double aLv, double aRv) {
            Field q(grid);
            const double len = grid.hi[0] - grid.lo[0];
            for (int i = 0; i < grid.nx(); ++i)
                q[i] = aLv + (aRv - aLv) * (grid.x(i) - grid.lo[0]) / len;
            return q;
        };
        Field q = line(aL, aR);
        aL = anchor_refresh(L, L.eval_data(0, 0), q[1]);
        aR = anchor_refresh(R, R.eval_data(0, 0), q[grid.nx() - 2]);
        q = line(aL, aR);
        add_slope_deficits(q, cfaces, grid);
        return q;
    }

    const int nx = grid.nx(), ny = grid.ny();
    std::array<const BoundaryFaceSpec*, 4> fs{};
    for (FaceId id : {FaceId::Left, FaceId::Right, FaceId::Bottom, FaceId::Top})
        fs[static_cast<int>(id)] = &cfaces[detail::face_index(cfaces, id)];

    std::vector<double> L(ny), R(ny), B(nx), T(nx);
    auto fill = [&](std::vector<double>& arr, FaceId id,
                    const std::function<double(const BoundaryFaceSpec&, double, int)>& mk) {
        const auto& spec = *fs[static_cast<int>(id)];
        int k = 0;
        for (const auto& fn : detail::face_nodes(grid, id))
            arr[k++] = mk(spec, spec.eval_data(fn.s, 0.0), fn.in1);
    };
    auto first_pass = [&](const BoundaryFaceSpec& spec, double g, int) {
        return anchor_first(spec, g);
    };

    auto consistent_corners = [&]() {
        // each corner: one value (owner's), mirrored into both arrays so
        // the Coons patch interpolates all four faces
        for (int ci : {0, 1})
            for (int cj : {0, 1}) {
                std::vector<double>& ax = (ci == 0) ? L : R;
                std::vector<double>& ay = (cj == 0) ? B : T;
                const int jx = (cj == 0) ? 0 : ny - 1;  // position in L/R
                const int iy = (ci == 0) ? 0 : nx - 1;  // position in B/T
                const int fx = detail::face_index(
                    cfaces, ci == 0 ? FaceId::Left : FaceId::Right);
                const int fy = detail::face_index(
                    cfaces, cj == 0 ? FaceId::Bottom : FaceId::Top);
                const int owner = detail::corner_owner(cfaces, fx, fy);
                const double v = (owner == fy) ? ay[iy] : ax[jx];
                ax[jx] = v;
                ay[iy] = v;
            }
    };

    auto coons = [&]() {
        Field q(grid);
        for (int j = 0; j < ny; ++j) {
            const double eta = static_cast<double>(j) / (ny - 1);
            for (int i = 0; i < nx; ++i) {
                const double xi = static_cast<double>(i) / (nx - 1);
                const double face_part = (1 - xi) * L[j] + xi * R[j] + (1 - eta) * B[i] +
                                         eta * T[i];
                const double corner_part = (1 - xi) * (1 - eta) * L[0] +
                                           xi * (1 - eta) * R[0] + (1 - xi) * eta * L[ny - 1] +
                                           xi * eta * R[ny - 1];
                q[grid.index(i, j)] = face_part - corner_part;
            }
        }
        return q;
    };

    fill(L, FaceId::Left, first_pass);
    fill(R, FaceId::Right, first_pass);
    fill(B, FaceId::Bottom, first_pass);
    fill(T, FaceId::Top, first_pass);
    // a pure-Neumann face prescribes no value; seeding it with zeros
    // would clash with the corner values mirrored from the adjacent
    // faces and destroy the interpolation property of the patch, so
    // seed it with the blend of its corner values instead
    auto reseed_neumann = [&](FaceId id, std::vector<double>& arr,
                              const std::vector<double>& lo_perp,
                              const std::vector<double>& hi_perp, int pos) {
        const auto& spec = *fs[static_cast<int>(id)];
        if (spec.is_dirichlet() || spec.alpha != 0.0) return;
        const int n = static_cast<int>(arr.size());
        const double c0 = lo_perp[pos], c1 = hi_perp[pos];
        for (int k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) / (n - 1);
            arr[k] = (1.0 - t) * c0 + t * c1;
        }
    };
    reseed_neumann(FaceId::Left, L, B, T, 0);
    reseed_neumann(FaceId::Right, R, B, T, nx - 1);
    reseed_neumann(FaceId::Bottom, B, L, R, 0);
    reseed_neumann(FaceId::Top, T, L, R, ny - 1);
    consistent_corners();
    Field q = coons();

    auto refresh = [&](const BoundaryFaceSpec& spec, double g, int in1) {
        return anchor_refresh(spec, g, q[in1]);
    };
    fill(L, FaceId::Left, refresh);
    fill(R, FaceId::Right, refresh);
    fill(B, FaceId::Bottom, refresh);
    fill(T, FaceId::Top, refresh);
    consistent_corners();
    q = coons();
    add_slope_deficits(q, cfaces, grid);
    return q;
}

Field solve_harmonic(const std::vector<BoundaryFaceSpec>& cfaces, const Grid& grid) {
    DiscreteOperator lap = assemble_operator(laplace_problem(cfaces), grid);
    const int N = grid.num_nodes();
    const Eigen::VectorXd g = lap.injection(0.0);

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = -g;
    for (int col = 0; col < lap.matrix.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(lap.matrix, col); it; ++it)
            if (!lap.is_slaved(static_cast<int>(it.row())))
                trip.emplace_back(it.row(), it.col(), it.value());
    for (const auto& sn : lap.slaved_nodes) {
        trip.emplace_back(sn.node, sn.node, 1.0);
        const auto& spec = cfaces[sn.face_idx];
        rhs[sn.node] = spec.eval_data(sn.s, 0.0) / spec.alpha;
    }
    Eigen::SparseMatrix<double> S(N, N);
    S.setFromTriplets(trip.begin(), trip.end());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success)
        throw SolverError("harmonic correction solve: factorization failed");
    Eigen::VectorXd qv = lu.solve(rhs);
    qv += lu.solve(rhs - S * qv);  // one refinement step

    const double resid = (S * qv - rhs).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (!(resid <= 1e-10 * scale))
        throw SolverError("harmonic correction solve did not converge, residual " +
                          std::to_string(resid));

    Field q(grid);
    for (int k = 0; k < N; ++k) q[k] = qv[k];
    return q;
}

}  // namespace

ExtensionStrategy custom_strategy(std::function<double(double, double)> perturbation,
                                  std::shared_ptr<const ExtensionStrategy> base) {
    return {Custom{std::move(base), std::move(perturbation)}};
}

CorrectionTargets boundary_targets(const Field& u, const ProblemSpec& problem, double t,
                                   TargetMode mode) {
    CorrectionTargets targets;
    targets.face_values.resize(problem.faces.size());
    for (size_t fi = 0; fi < problem.faces.size(); ++fi) {
        const auto& spec = problem.faces[fi];
        auto& vals = targets.face_values[fi];
        for (const auto& fn : detail::face_nodes(u.grid, spec.face)) {
            const double b = spec.eval_data(fn.s, t);
            const double ub = u[fn.b];
            double g;
            if (mode == TargetMode::DirichletEverywhere) {
                g = spec.is_dirichlet() ? react(problem, b / spec.alpha) : react(problem, ub);
            } else if (spec.is_dirichlet()) {
                g = spec.alpha * react(problem, b / spec.alpha);
            } else {
                g = spec.alpha * react(problem, ub) +
                    react_d(problem, ub) * (b - spec.alpha * ub);
            }
            if (!std::isfinite(g))
                throw SolverError(std::string("non-finite correction target on face ") +
                                  face_name(spec.face));
            vals.push_back(g);
        }
    }
    return targets;
}

std::vector<BoundaryFaceSpec> correction_faces(const std::vector<BoundaryFaceSpec>& faces,
                                               const CorrectionTargets& targets,
                                               const Grid& grid, TargetMode mode) {
    std::vector<BoundaryFaceSpec> out;
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        BoundaryFaceSpec cf;
        cf.face = faces[fi].face;
        if (mode == TargetMode::DirichletEverywhere) {
            cf.alpha = 1.0;
            cf.beta = 0.0;
        } else {
            cf.alpha = faces[fi].alpha;
            cf.beta = faces[fi].beta;
        }
        const bool along_x = (cf.face == FaceId::Bottom || cf.face == FaceId::Top);
        const double s0 = grid.dim == 1 ? 0.0 : (along_x ? grid.lo[0] : grid.lo[1]);
        const double hs = grid.dim == 1 ? 1.0 : (along_x ? grid.h[0] : grid.h[1]);
        const std::vector<double> vals = targets.face_values[fi];
        cf.data = [vals, s0, hs](double s, double) {
            const int k = static_cast<int>(std::lround((s - s0) / hs));
            return vals[std::min(std::max(k, 0), static_cast<int>(vals.size()) - 1)];
        };
        out.push_back(std::move(cf));
    }
    return out;
}

Field extend_analytic_1d(const CorrectionTargets& targets,
                         const std::vector<BoundaryFaceSpec>& faces, const Grid& grid) {
    require(grid.dim == 1, "extend_analytic_1d: 1D only");
    const int fL = detail::face_index(faces, FaceId::Left);
    const int fR = detail::face_index(faces, FaceId::Right);
    const double g[2] = {targets.face_values[fL][0], targets.face_values[fR][0]};
    const double alpha[2] = {faces[fL].alpha, faces[fR].alpha};
    const double beta[2] = {faces[fL].beta, faces[fR].beta};
    const double len = grid.hi[0] - grid.lo[0];
    const double xi[2] = {0.0, len};  // face positions in x - a

    // lowest-degree monomial pair (in x - a) with a nonsingular face system
    const std::array<std::array<int, 2>, 3> tiers{{{0, 1}, {1, 2}, {0, 2}}};
    auto mono = [](double s, int p) { return p == 0 ? 1.0 : (p == 1 ? s : s * s); };
    auto dmono = [](double s, int p) { return p == 0 ? 0.0 : (p == 1 ? 1.0 : 2.0 * s); };

    for (const auto& tier : tiers) {
        double M[2][2];
        double scale = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                M[r][c] = alpha[r] * mono(xi[r], tier[c]) + beta[r] * dmono(xi[r], tier[c]);
                scale = std::max(scale, std::abs(M[r][c]));
            }
        const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
        if (std::abs(det) <= 1e-10 * scale * scale) continue;
        const double c0 = (g[0] * M[1][1] - g[1] * M[0][1]) / det;
        const double c1 = (M[0][0] * g[1] - M[1][0] * g[0]) / det;
        Field q(grid);
        for (int i = 0; i < grid.nx(); ++i) {
            const double s = grid.x(i) - grid.lo[0];
            q[i] = c0 * mono(s, tier[0]) + c1 * mono(s, tier[1]);
        }
        return q;
    }
    throw SolverError("extend_analytic_1d: no degree-2 polynomial fits the face conditions");
}

Field weighted_jacobi_smooth(const Field& field, const Grid& grid,
                             const std::vector<BoundaryFaceSpec>& faces,
                             const CorrectionTargets& targets, int iterations, double weight) {
    require(iterations >= 0, "weighted_jacobi_smooth: iterations must be >= 0");
    require(weight > 0.0 && weight <= 1.0, "weighted_jacobi_smooth: weight in (0, 1]");
    const auto cfaces = correction_faces(faces, targets, grid, TargetMode::Full);
    DiscreteOperator lap = assemble_operator(laplace_problem(cfaces), grid);
    const int N = grid.num_nodes();
    const Eigen::VectorXd g = lap.injection(0.0);
    const Eigen::VectorXd diag = lap.matrix.diagonal();

    std::vector<char> on_boundary(N, 0);
    for (const auto& spec : cfaces)
        for (const auto& fn : detail::face_nodes(grid, spec.face)) on_boundary[fn.b] = 1;
    std::vector<int> oblique_nodes;
    for (int k = 0; k < N; ++k)
        if (on_boundary[k] && !lap.is_slaved(k)) oblique_nodes.push_back(k);

    Eigen::VectorXd q(N);
    for (int k = 0; k < N; ++k) q[k] = field[k];

    for (int sweep = 0; sweep < iterations; ++sweep) {
        Eigen::VectorXd r = lap.matrix * q + g;
        Eigen::VectorXd qn = q;
        for (int k = 0; k < N; ++k)
            if (!on_boundary[k]) qn[k] = q[k] - weight * r[k] / diag[k];
        for (const auto& sn : lap.slaved_nodes) {
            const auto& spec = cfaces[sn.face_idx];
            qn[sn.node] = spec.eval_data(sn.s, 0.0) / spec.alpha;
        }
        Eigen::VectorXd rb = lap.matrix * qn + g;
        for (int k : oblique_nodes) qn[k] -= rb[k] / diag[k];
        q = qn;
    }

    Field out(grid);
    for (int k = 0; k < N; ++k) out[k] = q[k];
    return out;
}

Field build_correction(const Field& u, const ProblemSpec& problem, double t,
                       const ExtensionStrategy& strategy, TargetMode mode) {
    const Grid& grid = u.grid;
    const CorrectionTargets targets = boundary_targets(u, problem, t, mode);
    const auto cfaces = correction_faces(problem.faces, targets, grid, mode);

    struct Visitor {
        const Field& u;
        const ProblemSpec& problem;
        double t;
        TargetMode mode;
        const CorrectionTargets& targets;
        const std::vector<BoundaryFaceSpec>& cfaces;
        const Grid& grid;

        Field operator()(const Analytic1D&) const {
            return extend_analytic_1d(targets, cfaces, grid);
        }
        Field operator()(const HarmonicSolve&) const {
            Field q = solve_harmonic(cfaces, grid);
            impose_one_sided_closure(q, cfaces);
            return q;
        }
        Field operator()(const Algorithm1& alg) const {
            Field q = interpolate_targets(cfaces, grid);
            q = weighted_jacobi_smooth(q, grid, cfaces, targets, alg.iterations, alg.weight);
            impose_one_sided_closure(q, cfaces);
            return q;
        }
        Field operator()(const Custom& c) const {
            Field q = c.base ? build_correction(u, problem, t, *c.base, mode) : Field(grid);
            if (c.perturbation)
                for (int j = 0; j < grid.ny(); ++j)
                    for (int i = 0; i < grid.nx(); ++i)
                        q[grid.index(i, j)] +=
                            c.perturbation(grid.x(i), grid.dim == 2 ? grid.y(j) : 0.0);
            return q;
        }
    };
    return std::visit(Visitor{u, problem, t, mode, targets, cfaces, grid}, strategy.v);
}

}  // namespace osplit

#include <doctest.h>

#include <cmath>
#include <random>

#include "osplit/correction.hpp"
#include "osplit/grid.hpp"

using namespace osplit;

namespace {

BoundaryFaceSpec face_1d(FaceId id, double alpha, double beta, double b) {
    BoundaryFaceSpec s;
    s.face = id;
    s.alpha = alpha;
    s.beta = beta;
    s.data = [b](double, double) { return b; };
    return s;
}

ProblemSpec quadratic_reaction(std::vector<BoundaryFaceSpec> faces) {
    ProblemSpec p;
    p.reaction = [](double u) { return u * u; };
    p.reaction_deriv = [](double u) { return 2.0 * u; };
    p.faces = std::move(faces);
    return p;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("correction");

TEST_CASE("boundary targets: Dirichlet, Neumann, Robin formulas") {
    Grid g = make_uniform_grid_1d(11, 0.0, 1.0);

    SUBCASE("Dirichlet face with f(u)=u^2, b=2 gives f(b)=4") {
        auto p = quadratic_reaction({face_1d(FaceId::Left, 1.0, 0.0, 2.0),
                                     face_1d(FaceId::Right, 0.0, 1.0, 0.0)});
        Field u(g);
        auto t = boundary_targets(u, p, 0.0);
        CHECK(t.face_values[0][0] == doctest::Approx(4.0));
    }
    SUBCASE("Neumann face at x=1 with b=1, u(1)=3 gives f'(3) = 6") {
        auto p = quadratic_reaction({face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                     face_1d(FaceId::Right, 0.0, 1.0, 1.0)});
        Field u(g);
        u[10] = 3.0;
        auto t = boundary_targets(u, p, 0.0);
        CHECK(t.face_values[1][0] == doctest::Approx(6.0));
    }
    SUBCASE("Robin face alpha=beta=1 gives u1^2 + 2 u1 (b - u1)") {
        const double b1 = 1.0 + 2.0 / M_PI;
        auto p = quadratic_reaction({face_1d(FaceId::Left, 1.0, 1.0, 0.0),
                                     face_1d(FaceId::Right, 1.0, 1.0, b1)});
        Field u(g);
        const double u1 = 0.7;
        u[10] = u1;
        auto t = boundary_targets(u, p, 0.0);
        CHECK(t.face_values[1][0] == doctest::Approx(2.0 * b1 * u1 - u1 * u1));
    }
}

TEST_CASE("analytic 1d extension reproduces the minimal-degree polynomials") {
    Grid g = make_uniform_grid_1d(21, 0.0, 1.0);
    const double u1 = 1.3;

    SUBCASE("Neumann/Neumann g=(0, 2 u1) -> q = u1 x^2") {
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 0.0, 1.0, 0.0),
                                               face_1d(FaceId::Right, 0.0, 1.0, 0.0)};
        CorrectionTargets t{{{0.0}, {2.0 * u1}}};
        Field q = extend_analytic_1d(t, faces, g);
        for (int i = 0; i < g.num_nodes(); ++i)
            CHECK(q[i] == doctest::Approx(u1 * g.x(i) * g.x(i)).epsilon(1e-12));
    }
    SUBCASE("Dirichlet/Neumann g=(1, 2 u1) -> q = 1 + 2 u1 x") {
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                               face_1d(FaceId::Right, 0.0, 1.0, 0.0)};
        CorrectionTargets t{{{1.0}, {2.0 * u1}}};
        Field q = extend_analytic_1d(t, faces, g);
        for (int i = 0; i < g.num_nodes(); ++i)
            CHECK(q[i] == doctest::Approx(1.0 + 2.0 * u1 * g.x(i)).epsilon(1e-12));
    }
    SUBCASE("zero targets -> zero field") {
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 1.0, 0.0),
                                               face_1d(FaceId::Right, 1.0, 1.0, 0.0)};
        CorrectionTargets t{{{0.0}, {0.0}}};
        Field q = extend_analytic_1d(t, faces, g);
        for (int i = 0; i < g.num_nodes(); ++i) CHECK(q[i] == 0.0);
    }
}

TEST_CASE("weighted Jacobi sweep: hand-checked update and fixed points") {
    SUBCASE("one sweep with omega=2/3 maps interior (0,1,0) to (1/3,1/3,1/3)") {
        Grid g = make_uniform_grid_1d(5, 0.0, 1.0);
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                               face_1d(FaceId::Right, 1.0, 0.0, 0.0)};
        CorrectionTargets t{{{0.0}, {0.0}}};
        Field start(g);
        start[2] = 1.0;
        Field out = weighted_jacobi_smooth(start, g, faces, t, 1, 2.0 / 3.0);
        CHECK(out[0] == doctest::Approx(0.0));
        CHECK(out[1] == doctest::Approx(1.0 / 3.0));
        CHECK(out[2] == doctest::Approx(1.0 / 3.0));
        CHECK(out[3] == doctest::Approx(1.0 / 3.0));
        CHECK(out[4] == doctest::Approx(0.0));
    }
    SUBCASE("the linear interpolant of Dirichlet data is a fixed point") {
        Grid g = make_uniform_grid_1d(5, 0.0, 1.0);
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                               face_1d(FaceId::Right, 1.0, 0.0, 0.0)};
        CorrectionTargets t{{{0.0}, {1.0}}};
        Field lin = eval_on_grid([](double x, double) { return x; }, g);
        Field out = weighted_jacobi_smooth(lin, g, faces, t, 7, 2.0 / 3.0);
        for (int i = 0; i < g.num_nodes(); ++i)
            CHECK(out[i] == doctest::Approx(lin[i]).epsilon(1e-14));
    }
    SUBCASE("zero sweeps leave the field untouched except for the closure") {
        Grid g = make_uniform_grid_1d(5, 0.0, 1.0);
        std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                               face_1d(FaceId::Right, 1.0, 0.0, 0.0)};
        CorrectionTargets t{{{0.0}, {0.0}}};
        Field start(g);
        start[1] = 0.25;
        start[3] = -0.5;
        Field out = weighted_jacobi_smooth(start, g, faces, t, 0, 2.0 / 3.0);
        CHECK(out[1] == 0.25);
        CHECK(out[3] == -0.5);
    }
}

TEST_CASE("Jacobi smoothing damps high-frequency residual by at least 2x") {
    // on 21 nodes sin(10 pi x) is the mid-spectrum mode (mode 10 of 20),
    // where the omega=2/3 sweep damps amplitudes by a factor 3 each
    Grid g = make_uniform_grid_1d(21, 0.0, 1.0);
    std::vector<BoundaryFaceSpec> faces = {face_1d(FaceId::Left, 1.0, 0.0, 0.0),
                                           face_1d(FaceId::Right, 1.0, 0.0, 0.0)};
    CorrectionTargets t{{{0.0}, {1.0}}};
    Field noisy = eval_on_grid(
        [](double x, double) { return x + 0.05 * std::sin(10.0 * M_PI * x); }, g);
    auto residual = [&](const Field& q) {
        const double h2 = g.h[0] * g.h[0];
        double worst = 0.0;
        for (int i = 1; i + 1 < g.num_nodes(); ++i)
            worst = std::max(worst, std::abs((q[i - 1] - 2.0 * q[i] + q[i + 1]) / h2));
        return worst;
    };
    Field smooth = weighted_jacobi_smooth(noisy, g, faces, t, 5, 2.0 / 3.0);
    CHECK(residual(noisy) / residual(smooth) >= 2.0);
}

TEST_CASE("harmonic extension in 1d is the affine interpolant of f(b)") {
    Grid g = make_uniform_grid_1d(41, 0.0, 1.0);
    auto p = quadratic_reaction(
        {face_1d(FaceId::Left, 1.0, 0.0, 1.0), face_1d(FaceId::Right, 1.0, 0.0, 2.0)});
    Field u(g);
    // targets (f(1), f(2)) = (1, 4): harmonic in 1d means q = 1 + 3x
    Field q = build_correction(u, p, 0.0, harmonic_strategy());
    for (int i = 0; i < g.num_nodes(); ++i)
        CHECK(q[i] == doctest::Approx(1.0 + 3.0 * g.x(i)).epsilon(1e-9));
}

TEST_CASE("custom strategy adds a pointwise perturbation") {
    Grid g = make_uniform_grid_1d(33, 0.0, 1.0);
    auto p = quadratic_reaction(
        {face_1d(FaceId::Left, 1.0, 0.0, 1.0), face_1d(FaceId::Right, 1.0, 0.0, 2.0)});
    Field u(g);
    auto osc = [](double x, double) { return 1.0 + x + std::sin(10.0 * M_PI * x); };
    Field q = build_correction(u, p, 0.0, custom_strategy(osc));
    for (int i = 0; i < g.num_nodes(); ++i)
        CHECK(q[i] == doctest::Approx(osc(g.x(i), 0.0)).epsilon(1e-12));
}

TEST_CASE("built corrections conform to their boundary targets") {
    Grid g = make_uniform_grid_1d(200, 0.0, 1.0);
    const double b1 = 1.0 + 2.0 / M_PI;
    auto p = quadratic_reaction(
        {face_1d(FaceId::Left, 1.0, 1.0, 0.0), face_1d(FaceId::Right, 1.0, 1.0, b1)});
    Field u = eval_on_grid(
        [](double x, double) { return -(2.0 / M_PI) * std::cos(M_PI * x / 2.0) + 2.0 / M_PI; },
        g);
    auto targets = boundary_targets(u, p, 0.0);
    auto cfaces = correction_faces(p.faces, targets, g, TargetMode::Full);

    for (const auto& strategy :
         {analytic_strategy(), harmonic_strategy(), algorithm1_strategy(5, 2.0 / 3.0)}) {
        Field q = build_correction(u, p, 0.0, strategy);
        CHECK(max_abs(boundary_residual(q, cfaces, 0.0)) <= 1e-8);
    }
}

TEST_CASE("targets respond linearly to O(tau) perturbations of u_n") {
    Grid g = make_uniform_grid_1d(50, 0.0, 1.0);
    auto p = quadratic_reaction(
        {face_1d(FaceId::Left, 1.0, 1.0, 0.3), face_1d(FaceId::Right, 1.0, 1.0, 1.1)});
    Field u = eval_on_grid([](double x, double) { return 1.0 + x * x; }, g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field noise(g);
    for (int i = 0; i < noise.size(); ++i) noise[i] = dist(rng);

    auto target_shift = [&](double tau) {
        Field v = u;
        for (int i = 0; i < v.size(); ++i) v[i] += tau * noise[i];
        auto t0 = boundary_targets(u, p, 0.0);
        auto t1 = boundary_targets(v, p, 0.0);
        double d = 0.0;
        for (size_t f = 0; f < t0.face_values.size(); ++f)
            for (size_t k = 0; k < t0.face_values[f].size(); ++k)
                d = std::max(d, std::abs(t1.face_values[f][k] - t0.face_values[f][k]));
        return d;
    };
    const double d1 = target_shift(1e-3);
    const double d2 = target_shift(5e-4);
    CHECK(d1 > 0.0);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));  // linear in tau
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <variant>

#include "osplit/errors.hpp"
#include "osplit/lab.hpp"

using namespace osplit;

namespace {

ReportRow make_row(const std::string& scheme, const std::string& norm, double tau,
                   double error, std::optional<double> order) {
    ReportRow r;
    r.preset = "synthetic";
    r.scheme = scheme;
    r.norm = norm;
    r.tau = tau;
    r.error = error;
    r.observed_order = order;
    return r;
}

}  // namespace

TEST_SUITE_BEGIN("lab");

TEST_CASE("observed_order examples") {
    CHECK(observed_order(4.0, 1.0) == doctest::Approx(2.0));
    CHECK(observed_order(5.718e-3, 2.736e-3) == doctest::Approx(1.06).epsilon(0.005));
    CHECK(observed_order(2.130e-5, 6.364e-6) == doctest::Approx(1.74).epsilon(0.005));
    CHECK(std::isnan(observed_order(0.0, 1.0)));
    CHECK(std::isnan(observed_order(1.0, -2.0)));
}

TEST_CASE("expected classic Strang orders per boundary class") {
    ConvergenceExpectation dir;
    dir.cls = ConvergenceExpectation::BoundaryClass::AllBetaZero;
    CHECK(dir.classic_strang_order(NormKind::L1) == doctest::Approx(1.50));
    CHECK(dir.classic_strang_order(NormKind::L2) == doctest::Approx(1.25));
    CHECK(dir.classic_strang_order(NormKind::LInf) == doctest::Approx(1.00));
    ConvergenceExpectation obl;
    obl.cls = ConvergenceExpectation::BoundaryClass::SomeBetaNonzero;
    CHECK(obl.classic_strang_order(NormKind::L1) == doctest::Approx(2.00));
    CHECK(obl.classic_strang_order(NormKind::L2) == doctest::Approx(1.75));
    CHECK(obl.classic_strang_order(NormKind::LInf) == doctest::Approx(1.50));
}

TEST_CASE("norm names round-trip") {
    for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::LInf})
        CHECK(norm_from_name(norm_name(k)) == k);
    CHECK_FALSE(norm_from_name("sup").has_value());
}

TEST_CASE("presets carry the documented experiment data") {
    auto names = preset_names();
    REQUIRE(names.size() == 5);
    CHECK_THROWS_AS(make_preset("nonexistent"), ConfigError);

    Preset n1 = make_preset("neumann1d");
    CHECK(n1.grid.num_nodes() == 500);
    CHECK(n1.T == doctest::Approx(0.5));
    CHECK(n1.taus.front() == doctest::Approx(3.125e-2));
    CHECK(n1.taus.size() == 5);
    CHECK(n1.expectation.cls == ConvergenceExpectation::BoundaryClass::SomeBetaNonzero);
    // u0 = -(2/pi) cos(pi x / 2)
    CHECK(n1.problem.initial(0.0, 0.0) == doctest::Approx(-2.0 / M_PI));
    CHECK(n1.problem.initial(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(n1.problem.reaction(3.0) == doctest::Approx(9.0));

    Preset r1 = make_preset("robin1d");
    CHECK(r1.T == doctest::Approx(0.25));
    CHECK(r1.problem.face(FaceId::Right).alpha == doctest::Approx(1.0));
    CHECK(r1.problem.face(FaceId::Right).beta == doctest::Approx(1.0));
    CHECK(r1.problem.face(FaceId::Right).eval_data(0.0, 0.0) ==
          doctest::Approx(1.0 + 2.0 / M_PI));

    Preset m1 = make_preset("mixed1d");
    CHECK(m1.problem.face(FaceId::Left).is_dirichlet());
    CHECK_FALSE(m1.problem.face(FaceId::Right).is_dirichlet());
    CHECK(m1.expectation.cls == ConvergenceExpectation::BoundaryClass::AllBetaZero);

    Preset m2 = make_preset("mixed2d");
    CHECK(m2.grid.dim == 2);
    CHECK(m2.grid.nx() == 100);
    CHECK(m2.mode == LinearFlowSolver::Mode::ImplicitAdaptive);
    // Neumann data chosen so u0 is consistent: -du0/dx at x=0 equals b
    const double y = 0.37;
    const double b_left = m2.problem.face(FaceId::Left).eval_data(y, 0.0);
    const double eps = 1e-6;
    const double du0 = (m2.problem.initial(eps, y) - m2.problem.initial(-eps, y)) / (2 * eps);
    CHECK(-du0 == doctest::Approx(b_left).epsilon(1e-6));

    Preset sm = make_preset("dirichlet1d_smoothness", 101);
    CHECK(sm.grid.num_nodes() == 101);  // node override respected
}

TEST_CASE("csv emission matches the column contract") {
    ConvergenceReport empty;
    CHECK(emit_csv(empty) ==
          "preset,scheme,norm,tau,error,observed_order,expected_order,pass\n");

    ConvergenceReport one;
    one.rows.push_back(make_row("strang", "linf", 0.01, 2.5e-4, std::nullopt));
    std::string csv = emit_csv(one);
    CHECK(csv.find("synthetic,strang,linf,") != std::string::npos);
    // no predecessor: the order field stays empty
    CHECK(csv.find(",,") != std::string::npos);
}

TEST_CASE("check_expectations averages the last two orders and is pure") {
    ConvergenceReport report;
    report.rows.push_back(make_row("strang", "linf", 4e-3, 1e-3, std::nullopt));
    report.rows.push_back(make_row("strang", "linf", 2e-3, 4e-4, 9.67));  // pre-asymptotic
    report.rows.push_back(make_row("strang", "linf", 1e-3, 1.5e-4, 1.54));
    report.rows.push_back(make_row("strang", "linf", 5e-4, 5e-5, 1.57));
    ConvergenceExpectation e;
    e.cls = ConvergenceExpectation::BoundaryClass::SomeBetaNonzero;  // expect 1.50

    auto s1 = check_expectations(report, e);
    CHECK(s1.checked == 1);
    CHECK(s1.ok());
    CHECK(report.rows[2].pass == true);

    auto s2 = check_expectations(report, e);
    CHECK(s2.messages == s1.messages);
    CHECK(s2.failed == s1.failed);

    // shifting the last orders far from 1.5 must flip the verdict
    report.rows[2].observed_order = 0.9;
    report.rows[3].observed_order = 0.9;
    auto s3 = check_expectations(report, e);
    CHECK_FALSE(s3.ok());
}

TEST_CASE("parse_strategy understands every CLI spelling") {
    CHECK(std::holds_alternative<Analytic1D>(parse_strategy("analytic").v));
    CHECK(std::holds_alternative<HarmonicSolve>(parse_strategy("harmonic").v));
    auto alg = parse_strategy("algorithm1", 7, 0.5);
    REQUIRE(std::holds_alternative<Algorithm1>(alg.v));
    CHECK(std::get<Algorithm1>(alg.v).iterations == 7);
    CHECK(std::get<Algorithm1>(alg.v).weight == doctest::Approx(0.5));

    auto cus = parse_strategy("custom:1,1,sin:10");
    REQUIRE(std::holds_alternative<Custom>(cus.v));
    const auto& c = std::get<Custom>(cus.v);
    CHECK(c.perturbation(0.25, 0.0) ==
          doctest::Approx(1.25 + std::sin(10.0 * M_PI * 0.25)));

    CHECK_THROWS_AS(parse_strategy("spline"), ConfigError);
    CHECK_THROWS_AS(parse_strategy("custom:"), ConfigError);
}

TEST_CASE("small end-to-end study: row counts and error decay") {
    Preset preset = make_preset("mixed1d", 80);
    StudyOptions options;
    options.taus = std::vector<double>{1e-2, 5e-3, 2.5e-3};
    auto report = run_convergence_study(preset, {SchemeId::StrangModified}, options);
    // 1 scheme x |norms| x 3 taus
    CHECK(report.rows.size() == preset.norms.size() * 3);
    for (const auto& norm : {"linf", "l2"}) {
        const ReportRow* coarse = report.find("strang-mod", norm, 1e-2);
        const ReportRow* fine = report.find("strang-mod", norm, 2.5e-3);
        REQUIRE(coarse);
        REQUIRE(fine);
        CHECK(coarse->error > fine->error);  // errors shrink with tau
    }
    const ReportRow* mid = report.find("strang-mod", "linf", 5e-3);
    REQUIRE(mid);
    REQUIRE(mid->observed_order.has_value());
    CHECK(*mid->observed_order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_SUITE_END();

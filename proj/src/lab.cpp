#include "osplit/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "osplit/errors.hpp"

namespace osplit {

namespace {

constexpr double kPi = 3.14159265358979323846;

Field error_field(const Field& u, const Field& ref) {
    Field d(u.grid);
    for (int k = 0; k < u.size(); ++k) d[k] = u[k] - ref[k];
    return d;
}

std::vector<double> halving(double tau0, int count) {
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) t[k] = tau0 / (1 << k);
    return t;
}

double expected_order_for(SchemeId scheme, NormKind kind,
                          const ConvergenceExpectation& e) {
    switch (scheme) {
        case SchemeId::LieClassic:
        case SchemeId::LieModified: return 1.0;
        case SchemeId::StrangClassic: return e.classic_strang_order(kind);
        case SchemeId::StrangModified: return 2.0;
        case SchemeId::StrangDirichletOnly: return 1.5;
    }
    return 0.0;
}

double order_tolerance_for(SchemeId scheme, const ConvergenceExpectation& e) {
    switch (scheme) {
        case SchemeId::LieClassic:
        case SchemeId::LieModified: return 0.15;
        case SchemeId::StrangClassic: return e.tol_classic;
        default: return e.tol_modified;
    }
}

}  // namespace

double ConvergenceExpectation::classic_strang_order(NormKind kind) const {
    const bool dir = cls == BoundaryClass::AllBetaZero;
    switch (kind) {
        case NormKind::L1: return dir ? 1.50 : 2.00;
        case NormKind::L2: return dir ? 1.25 : 1.75;
        case NormKind::LInf: return dir ? 1.00 : 1.50;
    }
    return 0.0;
}

const char* norm_name(NormKind kind) {
    switch (kind) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::LInf: return "linf";
    }
    return "?";
}

std::optional<NormKind> norm_from_name(const std::string& name) {
    for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::LInf})
        if (name == norm_name(k)) return k;
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"neumann1d", "mixed1d", "robin1d", "dirichlet1d_smoothness", "mixed2d"};
}

Preset make_preset(const std::string& name, int nodes_override) {
    Preset p;
    p.name = name;

    auto square = [](double u) { return u * u; };
    auto two_u = [](double u) { return 2.0 * u; };
    p.problem.reaction = square;
    p.problem.reaction_deriv = two_u;

    auto face_1d = [](FaceId id, double alpha, double beta, double b) {
        BoundaryFaceSpec f;
        f.face = id;
        f.alpha = alpha;
        f.beta = beta;
        f.data = [b](double, double) { return b; };
        return f;
    };

    if (name == "neumann1d") {
        const int n = nodes_override > 0 ? nodes_override : 500;
        p.grid = make_uniform_grid_1d(n, 0.0, 1.0);
        p.problem.faces = {face_1d(FaceId::Left, 0, 1, 0.0), face_1d(FaceId::Right, 0, 1, 1.0)};
        p.problem.initial = [](double x, double) { return -2.0 / kPi * std::cos(0.5 * kPi * x); };
        p.T = 0.5;
        p.tau_ref = 1e-4;
        p.taus = halving(3.125e-2, 5);
        p.norms = {NormKind::LInf, NormKind::L2};
        p.expectation.cls = ConvergenceExpectation::BoundaryClass::SomeBetaNonzero;
    } else if (name == "mixed1d") {
        const int n = nodes_override > 0 ? nodes_override : 500;
        p.grid = make_uniform_grid_1d(n, 0.0, 1.0);
        p.problem.faces = {face_1d(FaceId::Left, 1, 0, 1.0), face_1d(FaceId::Right, 0, 1, 1.0)};
        p.problem.initial = [](double x, double) {
            return 1.0 + 2.0 / kPi - 2.0 / kPi * std::cos(0.5 * kPi * x);
        };
        p.T = 0.2;
        p.tau_ref = 5e-5;
        p.taus = halving(1.25e-2, 5);
        p.norms = {NormKind::LInf, NormKind::L2};
        p.expectation.cls = ConvergenceExpectation::BoundaryClass::AllBetaZero;
    } else if (name == "robin1d") {
        const int n = nodes_override > 0 ? nodes_override : 500;
        p.grid = make_uniform_grid_1d(n, 0.0, 1.0);
        p.problem.faces = {face_1d(FaceId::Left, 1, 1, 0.0),
                           face_1d(FaceId::Right, 1, 1, 1.0 + 2.0 / kPi)};
        p.problem.initial = [](double x, double) {
            return -2.0 / kPi * std::cos(0.5 * kPi * x) + 2.0 / kPi;
        };
        p.T = 0.25;
        p.tau_ref = 5e-5;
        p.taus = halving(1.5625e-2, 5);
        p.norms = {NormKind::LInf, NormKind::L2};
        p.expectation.cls = ConvergenceExpectation::BoundaryClass::SomeBetaNonzero;
    } else if (name == "dirichlet1d_smoothness") {
        const int n = nodes_override > 0 ? nodes_override : 500;
        p.grid = make_uniform_grid_1d(n, 0.0, 1.0);
        p.problem.faces = {face_1d(FaceId::Left, 1, 0, 1.0), face_1d(FaceId::Right, 1, 0, 2.0)};
        p.problem.initial = [](double x, double) { return 1.0 + x; };
        p.T = 0.1;
        p.tau_ref = 5e-5;
        p.taus = {1.25e-3};
        p.norms = {NormKind::LInf};
        p.expectation.cls = ConvergenceExpectation::BoundaryClass::AllBetaZero;
        p.default_strategy = harmonic_strategy();
    } else if (name == "mixed2d") {
        const int n = nodes_override > 0 ? nodes_override : 100;
        p.grid = make_uniform_grid_2d(n, n, 0.0, 1.0, 0.0, 1.0);
        auto u0 = [](double x, double y) {
            return 3.0 + std::exp(-5.0 * (y - 0.5) * (y - 0.5)) * std::cos(2.0 * kPi * (x + y));
        };
        p.problem.initial = u0;
        auto bump = [](double y) { return std::exp(-5.0 * (y - 0.5) * (y - 0.5)); };
        BoundaryFaceSpec left, right, bottom, top;
        left.face = FaceId::Left;
        left.alpha = 0;
        left.beta = 1;
        left.data = [bump](double y, double) { return 2.0 * kPi * bump(y) * std::sin(2.0 * kPi * y); };
        right.face = FaceId::Right;
        right.alpha = 0;
        right.beta = 1;
        right.data = [bump](double y, double) {
            return -2.0 * kPi * bump(y) * std::sin(2.0 * kPi * y);
        };
        bottom.face = FaceId::Bottom;
        bottom.alpha = 1;
        bottom.beta = 0;
        bottom.data = [u0](double x, double) { return u0(x, 0.0); };
        top.face = FaceId::Top;
        top.alpha = 1;
        top.beta = 0;
        top.data = [u0](double x, double) { return u0(x, 1.0); };
        p.problem.faces = {left, right, bottom, top};
        p.T = 0.1;
        p.tau_ref = 0.1 / 67.0;  // ~1.5e-3, a whole number of steps
        p.taus = {0.1, 0.05, 0.025, 0.0125};
        p.norms = {NormKind::LInf};
        p.expectation.cls = ConvergenceExpectation::BoundaryClass::AllBetaZero;
        p.expectation.tol_classic = 0.25;
        p.expectation.tol_modified = 0.25;
        p.mode = LinearFlowSolver::Mode::ImplicitAdaptive;
        p.linear_tolerance = 1e-9;
        p.default_strategy = algorithm1_strategy();
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return p;
}

const ReportRow* ConvergenceReport::find(const std::string& scheme, const std::string& nrm,
                                         double tau) const {
    for (const auto& r : rows)
        if (r.scheme == scheme && r.norm == nrm && std::abs(r.tau - tau) <= 1e-12 * tau)
            return &r;
    return nullptr;
}

double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(e_coarse / e_fine);
}

ConvergenceReport run_convergence_study(const Preset& preset,
                                        const std::vector<SchemeId>& schemes,
                                        const StudyOptions& options) {
    auto op = std::make_shared<const DiscreteOperator>(
        assemble_operator(preset.problem, preset.grid));
    auto linear =
        std::make_shared<const LinearFlowSolver>(op, preset.mode, preset.linear_tolerance);
    auto reaction = std::make_shared<const ReactionFlowSolver>(preset.problem.reaction,
                                                               preset.problem.reaction_deriv);
    const ExtensionStrategy strategy =
        options.strategy ? *options.strategy : preset.default_strategy;
    const std::vector<double> taus = options.taus ? *options.taus : preset.taus;

    Field u0 = eval_on_grid(preset.problem.initial, preset.grid);
    op->impose_dirichlet(u0, 0.0);

    SplittingStepper ref_stepper(preset.problem, op, SchemeId::StrangModified, strategy,
                                 linear, reaction);
    const Field u_ref = ref_stepper.integrate(u0, preset.tau_ref, preset.T);

    std::vector<SchemeId> run_schemes = schemes;
    if (preset.name == "mixed2d" &&
        std::find(run_schemes.begin(), run_schemes.end(), SchemeId::StrangDirichletOnly) ==
            run_schemes.end())
        run_schemes.push_back(SchemeId::StrangDirichletOnly);

    ConvergenceReport report;
    for (SchemeId scheme : run_schemes) {
        SplittingStepper stepper(preset.problem, op, scheme, strategy, linear, reaction);
        std::vector<std::optional<Field>> results;
        for (double tau : taus) {
            try {
                results.emplace_back(stepper.integrate(u0, tau, preset.T));
            } catch (const BlowUpError&) {
                results.emplace_back(std::nullopt);
            } catch (const SolverError&) {
                results.emplace_back(std::nullopt);
            }
        }
        for (NormKind kind : preset.norms) {
            double prev_error = -1.0;
            for (size_t k = 0; k < taus.size(); ++k) {
                ReportRow row;
                row.preset = preset.name;
                row.scheme = scheme_name(scheme);
                row.norm = norm_name(kind);
                row.tau = taus[k];
                row.expected_order = expected_order_for(scheme, kind, preset.expectation);
                if (results[k]) {
                    row.error = norm(error_field(*results[k], u_ref), kind);
                    if (k > 0 && prev_error > 0.0)
                        row.observed_order = observed_order(prev_error, row.error);
                    prev_error = row.error;
                } else {
                    row.error = std::numeric_limits<double>::quiet_NaN();
                    row.failed_run = true;
                    row.pass = false;
                    prev_error = -1.0;
                }
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

CheckSummary check_expectations(ConvergenceReport& report,
                                const ConvergenceExpectation& expectation) {
    CheckSummary summary;
    std::map<std::pair<std::string, std::string>, std::vector<ReportRow*>> groups;
    for (auto& row : report.rows) groups[{row.scheme, row.norm}].push_back(&row);

    for (auto& [key, rows] : groups) {
        const auto scheme = scheme_from_name(key.first);
        const auto kind = norm_from_name(key.second);
        if (!scheme || !kind) continue;

        std::vector<double> orders;
        for (const auto* r : rows)
            if (r->observed_order && std::isfinite(*r->observed_order))
                orders.push_back(*r->observed_order);
        if (orders.size() < 1) {
            for (auto* r : rows)
                if (r->failed_run) {
                    ++summary.checked;
                    ++summary.failed;
                    summary.messages.push_back(key.first + "/" + key.second + ": run failed");
                    break;
                }
            continue;
        }

        // ignore pre-asymptotic leading rows: average the last two orders
        const size_t take = std::min<size_t>(2, orders.size());
        double mean = 0.0;
        for (size_t k = orders.size() - take; k < orders.size(); ++k) mean += orders[k];
        mean /= static_cast<double>(take);

        const double expected = expected_order_for(*scheme, *kind, expectation);
        const double tol = order_tolerance_for(*scheme, expectation);
        const bool ok = std::abs(mean - expected) <= tol;
        ++summary.checked;
        if (!ok) ++summary.failed;
        std::ostringstream msg;
        msg << key.first << "/" << key.second << ": observed " << mean << " vs expected "
            << expected << " +- " << tol << (ok ? " [pass]" : " [FAIL]");
        summary.messages.push_back(msg.str());
        for (auto* r : rows)
            if (!r->failed_run) r->pass = ok;
    }
    return summary;
}

double SmoothnessReport::error(const std::string& scheme, const std::string& correction) const {
    for (const auto& r : rows)
        if (r.scheme == scheme && r.correction == correction) return r.error;
    throw ConfigError("smoothness report: no row " + scheme + "/" + correction);
}

SmoothnessReport run_smoothness_study(int nodes_override) {
    const Preset preset = make_preset("dirichlet1d_smoothness", nodes_override);
    auto op = std::make_shared<const DiscreteOperator>(
        assemble_operator(preset.problem, preset.grid));
    auto linear =
        std::make_shared<const LinearFlowSolver>(op, preset.mode, preset.linear_tolerance);
    auto reaction = std::make_shared<const ReactionFlowSolver>(preset.problem.reaction,
                                                               preset.problem.reaction_deriv);
    Field u0 = eval_on_grid(preset.problem.initial, preset.grid);
    op->impose_dirichlet(u0, 0.0);

    SplittingStepper ref_stepper(preset.problem, op, SchemeId::StrangModified,
                                 harmonic_strategy(), linear, reaction);
    const Field u_ref = ref_stepper.integrate(u0, preset.tau_ref, preset.T);
    const double tau = preset.taus.front();

    auto sine = [](int k) {
        return [k](double x, double) { return std::sin(k * kPi * x); };
    };
    auto affine_1x = [](double x, double) { return 1.0 + x; };

    const auto harmonic_base = std::make_shared<const ExtensionStrategy>(harmonic_strategy());
    std::vector<std::pair<std::string, ExtensionStrategy>> corrections = {
        {"harmonic", harmonic_strategy()},
        {"harmonic+sin(pi x)", custom_strategy(sine(1), harmonic_base)},
        {"harmonic+sin(10pi x)", custom_strategy(sine(10), harmonic_base)},
        {"q=1+x", custom_strategy(affine_1x)},
        {"q=1+x+sin(pi x)",
         custom_strategy([affine_1x, sine](double x, double y) {
             return affine_1x(x, y) + sine(1)(x, y);
         })},
        {"q=1+x+sin(10pi x)",
         custom_strategy([affine_1x, sine](double x, double y) {
             return affine_1x(x, y) + sine(10)(x, y);
         })},
    };

    SmoothnessReport report;
    auto record = [&](const std::string& scheme_label, SchemeId scheme,
                      const ExtensionStrategy& strategy, const std::string& label) {
        SplittingStepper stepper(preset.problem, op, scheme, strategy, linear, reaction);
        const Field u = stepper.integrate(u0, tau, preset.T);
        report.rows.push_back(
            {scheme_label, label, norm(error_field(u, u_ref), NormKind::LInf)});
    };

    record("lie", SchemeId::LieClassic, harmonic_strategy(), "none");
    record("strang", SchemeId::StrangClassic, harmonic_strategy(), "none");
    for (const auto& [label, strategy] : corrections) {
        record("lie-mod", SchemeId::LieModified, strategy, label);
        record("strang-mod", SchemeId::StrangModified, strategy, label);
    }
    return report;
}

std::string emit_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "preset,scheme,norm,tau,error,observed_order,expected_order,pass\n";
    out.precision(12);
    for (const auto& r : report.rows) {
        out << r.preset << ',' << r.scheme << ',' << r.norm << ',' << r.tau << ',' << r.error
            << ',';
        if (r.observed_order && std::isfinite(*r.observed_order)) out << *r.observed_order;
        out << ',';
        if (r.expected_order) out << *r.expected_order;
        out << ',';
        if (r.pass) out << (*r.pass ? "pass" : "fail");
        out << '\n';
    }
    return out.str();
}

std::string emit_table(const ConvergenceReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %-12s %-5s %-12s %-12s %-8s %-8s %s\n", "preset",
                  "scheme", "norm", "tau", "error", "order", "expected", "pass");
    out << line;
    for (const auto& r : report.rows) {
        char order[32] = "--";
        if (r.observed_order && std::isfinite(*r.observed_order))
            std::snprintf(order, sizeof(order), "%.2f", *r.observed_order);
        char expected[32] = "--";
        if (r.expected_order) std::snprintf(expected, sizeof(expected), "%.2f", *r.expected_order);
        std::snprintf(line, sizeof(line), "%-10s %-12s %-5s %-12.4e %-12.4e %-8s %-8s %s\n",
                      r.preset.c_str(), r.scheme.c_str(), r.norm.c_str(), r.tau, r.error, order,
                      expected, r.pass ? (*r.pass ? "pass" : "fail") : "");
        out << line;
    }
    return out.str();
}

std::string emit_csv(const SmoothnessReport& report) {
    std::ostringstream out;
    out << "scheme,correction,linf_error\n";
    out.precision(12);
    for (const auto& r : report.rows)
        out << r.scheme << ',' << r.correction << ',' << r.error << '\n';
    return out.str();
}

std::string emit_table(const SmoothnessReport& report) {
    std::ostringstream out;
    char line[120];
    std::snprintf(line, sizeof(line), "%-12s %-22s %s\n", "scheme", "correction", "linf error");
    out << line;
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof(line), "%-12s %-22s %.3e\n", r.scheme.c_str(),
                      r.correction.c_str(), r.error);
        out << line;
    }
    return out.str();
}

ExtensionStrategy parse_strategy(const std::string& text, int jacobi_iters,
                                 double jacobi_weight) {
    if (text == "analytic") return analytic_strategy();
    if (text == "harmonic") return harmonic_strategy();
    if (text == "algorithm1") return algorithm1_strategy(jacobi_iters, jacobi_weight);
    const std::string prefix = "custom:";
    if (text.rfind(prefix, 0) == 0) {
        std::string spec = text.substr(prefix.size());
        double c0 = 0.0, c1 = 0.0;
        int sin_k = 0;
        std::istringstream in(spec);
        std::string tok;
        int pos = 0;
        while (std::getline(in, tok, ',')) {
            if (tok.rfind("sin:", 0) == 0) {
                sin_k = std::stoi(tok.substr(4));
            } else if (pos == 0) {
                c0 = std::stod(tok);
            } else if (pos == 1) {
                c1 = std::stod(tok);
            } else {
                throw ConfigError("bad custom correction spec '" + spec + "'");
            }
            ++pos;
        }
        require(pos >= 1, "empty custom correction spec");
        return custom_strategy([c0, c1, sin_k](double x, double) {
            return c0 + c1 * x + (sin_k > 0 ? std::sin(sin_k * kPi * x) : 0.0);
        });
    }
    throw ConfigError("unknown correction strategy '" + text +
                      "' (expected analytic|harmonic|algorithm1|custom:<spec>)");
}

}  // namespace osplit

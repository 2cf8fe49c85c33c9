#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osplit/boundary.hpp"
#include "osplit/correction.hpp"
#include "osplit/flows.hpp"
#include "osplit/grid.hpp"
#include "osplit/steppers.hpp"

namespace osplit {

// Expected classic-Strang convergence orders per norm, by boundary
// class: (L1, L2, Linf) = (1.50, 1.25, 1.00) when every face is
// effectively Dirichlet-limited, (2.00, 1.75, 1.50) otherwise.
struct ConvergenceExpectation {
    enum class BoundaryClass { AllBetaZero, SomeBetaNonzero };
    BoundaryClass cls = BoundaryClass::AllBetaZero;
    double tol_classic = 0.2;
    double tol_modified = 0.15;

    double classic_strang_order(NormKind kind) const;
};

const char* norm_name(NormKind kind);
std::optional<NormKind> norm_from_name(const std::string& name);

struct Preset {
    std::string name;
    Grid grid;
    ProblemSpec problem;
    double T = 0.0;         // error-measurement time (= final time)
    double tau_ref = 0.0;   // reference step size
    std::vector<double> taus;
    std::vector<NormKind> norms;
    ConvergenceExpectation expectation;
    LinearFlowSolver::Mode mode = LinearFlowSolver::Mode::ExactPhi;
    double linear_tolerance = 1e-10;
    ExtensionStrategy default_strategy = analytic_strategy();
};

std::vector<std::string> preset_names();
Preset make_preset(const std::string& name, int nodes_override = 0);

struct ReportRow {
    std::string preset, scheme, norm;
    double tau = 0.0;
    double error = 0.0;
    std::optional<double> observed_order;
    std::optional<double> expected_order;
    std::optional<bool> pass;
    bool failed_run = false;  // blow-up / solver failure
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    const ReportRow* find(const std::string& scheme, const std::string& norm,
                          double tau) const;
};

// log2(e_coarse / e_fine); NaN when either error is nonpositive.
double observed_order(double e_coarse, double e_fine);

struct StudyOptions {
    std::optional<ExtensionStrategy> strategy;
    std::optional<std::vector<double>> taus;
};

ConvergenceReport run_convergence_study(const Preset& preset,
                                        const std::vector<SchemeId>& schemes,
                                        const StudyOptions& options = {});

struct CheckSummary {
    int checked = 0;
    int failed = 0;
    std::vector<std::string> messages;
    bool ok() const { return failed == 0; }
};

// Compares the mean of the last two observed orders per (scheme, norm)
// group against the expected order, filling the rows' expected/pass
// fields. Pure in the report contents: identical reports yield identical
// flags.
CheckSummary check_expectations(ConvergenceReport& report,
                                const ConvergenceExpectation& expectation);

struct SmoothnessRow {
    std::string scheme;
    std::string correction;
    double error = 0.0;
};

struct SmoothnessReport {
    std::vector<SmoothnessRow> rows;
    double error(const std::string& scheme, const std::string& correction) const;
};

// Table-5 style study: Dirichlet data (1, 2), f(u) = u^2, comparing the
// harmonic correction against smooth and oscillatory perturbations of
// it, plus the literal affine interpolant family.
SmoothnessReport run_smoothness_study(int nodes_override = 0);

std::string emit_csv(const ConvergenceReport& report);
std::string emit_table(const ConvergenceReport& report);
std::string emit_csv(const SmoothnessReport& report);
std::string emit_table(const SmoothnessReport& report);

// "--correction" values: analytic | harmonic | algorithm1 |
// custom:<c0>,<c1>[,sin:<k>]  (q = c0 + c1 x + sin(k pi x)).
ExtensionStrategy parse_strategy(const std::string& text, int jacobi_iters = 5,
                                 double jacobi_weight = 2.0 / 3.0);

}  // namespace osplit

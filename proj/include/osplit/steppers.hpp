#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "osplit/boundary.hpp"
#include "osplit/correction.hpp"
#include "osplit/flows.hpp"
#include "osplit/grid.hpp"

namespace osplit {

enum class SchemeId {
    LieClassic,
    LieModified,
    StrangClassic,
    StrangModified,
    StrangDirichletOnly,  // 2D variant: corrects as if the whole boundary were Dirichlet
};

const char* scheme_name(SchemeId s);
std::optional<SchemeId> scheme_from_name(const std::string& name);
bool scheme_is_modified(SchemeId s);
bool scheme_is_strang(SchemeId s);

// Optional per-step record of how well the correction and the corrected
// reaction field respect the boundary closure.
struct StepDiagnostics {
    struct Row {
        int step;
        double correction_residual;      // max over faces of B q - g
        double reaction_field_residual;  // max over faces of B(f(u) - q) vs 0
    };
    std::vector<Row> rows;
};

// One splitting time stepper: builds the boundary correction from u_n at
// the start of each step (identically zero for the classic schemes) and
// composes the two partial flows.
class SplittingStepper {
public:
    SplittingStepper(const ProblemSpec& problem, std::shared_ptr<const DiscreteOperator> op,
                     SchemeId scheme, ExtensionStrategy strategy,
                     std::shared_ptr<const LinearFlowSolver> linear,
                     std::shared_ptr<const ReactionFlowSolver> reaction,
                     bool lie_diffusion_first = false);

    Field step(const Field& u, double t, double tau) const;
    Field lie_step(const Field& u, double t, double tau) const;
    Field strang_step(const Field& u, double t, double tau) const;

    // Applies the chosen step T/tau times (T/tau must be integral).
    Field integrate(const Field& u0, double tau, double T,
                    StepDiagnostics* diagnostics = nullptr) const;

    Field correction(const Field& u, double t) const;
    SchemeId scheme() const { return scheme_; }

private:
    const ProblemSpec& problem_;
    std::shared_ptr<const DiscreteOperator> op_;
    SchemeId scheme_;
    ExtensionStrategy strategy_;
    std::shared_ptr<const LinearFlowSolver> linear_;
    std::shared_ptr<const ReactionFlowSolver> reaction_;
    bool lie_diffusion_first_;
};

}  // namespace osplit

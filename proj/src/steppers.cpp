#include "osplit/steppers.hpp"

#include <cmath>

#include "osplit/errors.hpp"

namespace osplit {

const char* scheme_name(SchemeId s) {
    switch (s) {
        case SchemeId::LieClassic: return "lie";
        case SchemeId::LieModified: return "lie-mod";
        case SchemeId::StrangClassic: return "strang";
        case SchemeId::StrangModified: return "strang-mod";
        case SchemeId::StrangDirichletOnly: return "strang-dir";
    }
    return "?";
}

std::optional<SchemeId> scheme_from_name(const std::string& name) {
    for (SchemeId s : {SchemeId::LieClassic, SchemeId::LieModified, SchemeId::StrangClassic,
                       SchemeId::StrangModified, SchemeId::StrangDirichletOnly})
        if (name == scheme_name(s)) return s;
    return std::nullopt;
}

bool scheme_is_modified(SchemeId s) {
    return s == SchemeId::LieModified || s == SchemeId::StrangModified ||
           s == SchemeId::StrangDirichletOnly;
}

bool scheme_is_strang(SchemeId s) {
    return s == SchemeId::StrangClassic || s == SchemeId::StrangModified ||
           s == SchemeId::StrangDirichletOnly;
}

SplittingStepper::SplittingStepper(const ProblemSpec& problem,
                                   std::shared_ptr<const DiscreteOperator> op, SchemeId scheme,
                                   ExtensionStrategy strategy,
                                   std::shared_ptr<const LinearFlowSolver> linear,
                                   std::shared_ptr<const ReactionFlowSolver> reaction,
                                   bool lie_diffusion_first)
    : problem_(problem),
      op_(std::move(op)),
      scheme_(scheme),
      strategy_(std::move(strategy)),
      linear_(std::move(linear)),
      reaction_(std::move(reaction)),
      lie_diffusion_first_(lie_diffusion_first) {}

Field SplittingStepper::correction(const Field& u, double t) const {
    if (!scheme_is_modified(scheme_)) return Field(u.grid);
    const TargetMode mode = scheme_ == SchemeId::StrangDirichletOnly
                                ? TargetMode::DirichletEverywhere
                                : TargetMode::Full;
    return build_correction(u, problem_, t, strategy_, mode);
}

Field SplittingStepper::lie_step(const Field& u, double t, double tau) const {
    const Field q = correction(u, t);
    if (lie_diffusion_first_) {
        Field v = linear_->diffusion_substep(u, q, t, tau);
        return reaction_->reaction_substep(v, q, tau);
    }
    Field w = reaction_->reaction_substep(u, q, tau);
    return linear_->diffusion_substep(w, q, t, tau);
}

Field SplittingStepper::strang_step(const Field& u, double t, double tau) const {
    // the correction is frozen at u_n for all three substeps
    const Field q = correction(u, t);
    Field v = linear_->diffusion_substep(u, q, t, 0.5 * tau);
    Field w = reaction_->reaction_substep(v, q, tau);
    return linear_->diffusion_substep(w, q, t, 0.5 * tau);
}

Field SplittingStepper::step(const Field& u, double t, double tau) const {
    return scheme_is_strang(scheme_) ? strang_step(u, t, tau) : lie_step(u, t, tau);
}

Field SplittingStepper::integrate(const Field& u0, double tau, double T,
                                  StepDiagnostics* diagnostics) const {
    require(tau > 0.0, "integrate: tau must be positive");
    const double ratio = T / tau;
    const long long n_steps = std::llround(ratio);
    require(std::abs(ratio - static_cast<double>(n_steps)) <= 1e-8 * std::max(1.0, ratio),
            "integrate: T/tau must be a whole number of steps");

    Field u = u0;
    for (long long n = 0; n < n_steps; ++n) {
        const double t = static_cast<double>(n) * tau;
        if (diagnostics && scheme_is_modified(scheme_)) {
            const TargetMode mode = scheme_ == SchemeId::StrangDirichletOnly
                                        ? TargetMode::DirichletEverywhere
                                        : TargetMode::Full;
            const Field q = build_correction(u, problem_, t, strategy_, mode);
            const auto targets = boundary_targets(u, problem_, t, mode);
            const auto cfaces = correction_faces(problem_.faces, targets, u.grid, mode);
            double q_res = 0.0;
            for (double r : boundary_residual(q, cfaces, 0.0))
                q_res = std::max(q_res, std::abs(r));

            Field rf(u.grid);
            for (int k = 0; k < u.size(); ++k)
                rf[k] = (problem_.reaction ? problem_.reaction(u[k]) : 0.0) - q[k];
            auto hom = cfaces;
            for (auto& f : hom) f.data = nullptr;  // homogeneous target
            double f_res = 0.0;
            for (double r : boundary_residual(rf, hom, 0.0))
                f_res = std::max(f_res, std::abs(r));
            diagnostics->rows.push_back({static_cast<int>(n), q_res, f_res});
        }
        try {
            u = step(u, t, tau);
        } catch (const BlowUpError& e) {
            throw BlowUpError(e.node, std::string(e.what()) + " during step " +
                                          std::to_string(n) + " of " + std::to_string(n_steps));
        }
    }
    return u;
}

}  // namespace osplit

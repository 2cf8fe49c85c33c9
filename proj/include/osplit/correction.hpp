#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "osplit/boundary.hpp"
#include "osplit/grid.hpp"

namespace osplit {

// Per-face boundary data of the correction problem B q = g. One value
// per face node (a single value in 1D), ordered as detail::face_nodes.
struct CorrectionTargets {
    std::vector<std::vector<double>> face_values;  // indexed like the faces vector
};

enum class TargetMode {
    Full,                 // g = alpha f(u_n) + f'(u_n)(b - alpha u_n)
    DirichletEverywhere,  // treat every face as Dirichlet: g = f(trace)
};

CorrectionTargets boundary_targets(const Field& u, const ProblemSpec& problem, double t,
                                   TargetMode mode = TargetMode::Full);

// Extension strategies for turning face targets into a full-grid field.
struct ExtensionStrategy;

struct Analytic1D {};
struct HarmonicSolve {};
struct Algorithm1 {
    int iterations = 5;
    double weight = 2.0 / 3.0;
};
// Base extension (zero when null) plus a pointwise perturbation field.
struct Custom {
    std::shared_ptr<const ExtensionStrategy> base;
    std::function<double(double, double)> perturbation;
};

struct ExtensionStrategy {
    std::variant<Analytic1D, HarmonicSolve, Algorithm1, Custom> v;
};

inline ExtensionStrategy analytic_strategy() { return {Analytic1D{}}; }
inline ExtensionStrategy harmonic_strategy() { return {HarmonicSolve{}}; }
inline ExtensionStrategy algorithm1_strategy(int k = 5, double w = 2.0 / 3.0) {
    return {Algorithm1{k, w}};
}
ExtensionStrategy custom_strategy(std::function<double(double, double)> perturbation,
                                  std::shared_ptr<const ExtensionStrategy> base = nullptr);

// The faces of the discrete Laplace problem the correction solves:
// same (alpha, beta) as the problem faces (all-Dirichlet in
// DirichletEverywhere mode) with the target values as data.
std::vector<BoundaryFaceSpec> correction_faces(const std::vector<BoundaryFaceSpec>& faces,
                                               const CorrectionTargets& targets,
                                               const Grid& grid, TargetMode mode);

// Minimal-degree polynomial (degree <= 2) matching both 1D face
// conditions alpha q + beta q' = g, sampled on the grid.
Field extend_analytic_1d(const CorrectionTargets& targets,
                         const std::vector<BoundaryFaceSpec>& faces, const Grid& grid);

// k sweeps of weighted Jacobi for the discrete Laplace equation with the
// face closure given by (faces, targets); the closure is re-imposed
// after every sweep.
Field weighted_jacobi_smooth(const Field& field, const Grid& grid,
                             const std::vector<BoundaryFaceSpec>& faces,
                             const CorrectionTargets& targets, int iterations, double weight);

Field build_correction(const Field& u, const ProblemSpec& problem, double t,
                       const ExtensionStrategy& strategy, TargetMode mode = TargetMode::Full);

}  // namespace osplit

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>

#include "osplit/boundary.hpp"
#include "osplit/grid.hpp"

namespace osplit {

// phi1(z) = (e^z - 1)/z evaluated on a dense matrix by scaling and
// squaring with a Taylor kernel on the scaled matrix.
Eigen::MatrixXd phi1_matrix(const Eigen::MatrixXd& m);
Eigen::VectorXd phi1_apply(const Eigen::MatrixXd& m, const Eigen::VectorXd& v);

// Solves the inhomogeneous linear substep dv/dt = A_h v + q + g(t) with
// the boundary data frozen at the substep's start time.
//
// ExactPhi: v(tau) = v0 + tau * phi1(tau A_h) (A_h v0 + q + g), exact for
// constant forcing; dense, for grids up to ~2000 nodes. The phi1 matrix
// is cached per step size.
//
// ImplicitAdaptive: L-stable three-stage SDIRK of order three with
// Richardson step-halving until the estimated relative error is below
// the configured tolerance; factorizations are cached per substep size.
class LinearFlowSolver {
public:
    enum class Mode { ExactPhi, ImplicitAdaptive };

    LinearFlowSolver(std::shared_ptr<const DiscreteOperator> op, Mode mode,
                     double tolerance = 1e-10);

    Field diffusion_substep(const Field& v0, const Field& q, double t, double tau) const;

    Mode mode() const { return mode_; }
    double tolerance() const { return tol_; }
    const DiscreteOperator& op() const { return *op_; }

private:
    Eigen::VectorXd forcing(const Field& q, double t) const;
    Eigen::VectorXd sdirk_run(const Eigen::VectorXd& v0, const Eigen::VectorXd& c, double tau,
                              int steps) const;

    std::shared_ptr<const DiscreteOperator> op_;
    Mode mode_;
    double tol_;
    mutable std::map<std::uint64_t, Eigen::MatrixXd> phi_cache_;
    mutable std::map<std::uint64_t, std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>>
        lu_cache_;
    mutable int start_steps_ = 1;
};

// Solves the pointwise reaction substep dw/dt = f(w) - q node by node
// with classical RK4, doubling the internal substep count until the
// Richardson error estimate is below tolerance * (1 + |w|).
class ReactionFlowSolver {
public:
    ReactionFlowSolver(std::function<double(double)> f, std::function<double(double)> fprime,
                       double tolerance = 1e-10, double blowup_bound = 1e8);

    Field reaction_substep(const Field& w0, const Field& q, double tau) const;

    double blowup_bound() const { return bound_; }

private:
    std::function<double(double)> f_;
    std::function<double(double)> fprime_;  // kept for diagnostics/consistency checks
    double tol_;
    double bound_;
};

}  // namespace osplit

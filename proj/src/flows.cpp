#include "osplit/flows.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "osplit/errors.hpp"

namespace osplit {

namespace {

constexpr int kDenseLimit = 2048;
constexpr double kSdirkGamma = 0.4358665215084590;

std::uint64_t key_bits(double x) {
    std::uint64_t k;
    std::memcpy(&k, &x, sizeof(k));
    return k;
}

}  // namespace

Eigen::MatrixXd phi1_matrix(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const double nrm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
    const Eigen::MatrixXd ms = m / std::pow(2.0, s);

    // Taylor kernel on the scaled matrix: E = e^Ms, P = phi1(Ms)
    Eigen::MatrixXd term = id;
    Eigen::MatrixXd e = id;
    Eigen::MatrixXd p = id;
    for (int k = 1; k <= 40; ++k) {
        term = (term * ms) / k;
        e += term;
        p += term / (k + 1);
        if (term.cwiseAbs().maxCoeff() < 1e-20) break;
    }
    // doubling: phi1(2z) = (e^z + 1) phi1(z) / 2
    for (int k = 0; k < s; ++k) {
        p = 0.5 * (e + id) * p;
        e = e * e;
    }
    return p;
}

Eigen::VectorXd phi1_apply(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
    if (m.rows() > kDenseLimit)
        throw SolverError("phi1_apply: matrix too large for the dense path (" +
                          std::to_string(m.rows()) + " > " + std::to_string(kDenseLimit) +
                          " rows); use the implicit-adaptive linear flow instead");
    return phi1_matrix(m) * v;
}

LinearFlowSolver::LinearFlowSolver(std::shared_ptr<const DiscreteOperator> op, Mode mode,
                                   double tolerance)
    : op_(std::move(op)), mode_(mode), tol_(tolerance) {
    require(op_ != nullptr, "LinearFlowSolver: null operator");
    if (mode_ == Mode::ImplicitAdaptive)
        require(tol_ <= 1e-8, "LinearFlowSolver: implicit tolerance must be <= 1e-8");
}

Eigen::VectorXd LinearFlowSolver::forcing(const Field& q, double t) const {
    Eigen::VectorXd c = op_->injection(t);
    for (int k = 0; k < op_->grid.num_nodes(); ++k)
        if (!op_->is_slaved(k)) c[k] += q[k];
    return c;
}

Eigen::VectorXd LinearFlowSolver::sdirk_run(const Eigen::VectorXd& v0, const Eigen::VectorXd& c,
                                            double tau, int steps) const {
    const double g = kSdirkGamma;
    const double b1 = -(6 * g * g - 16 * g + 1) / 4;
    const double b2 = (6 * g * g - 20 * g + 5) / 4;
    const double a21 = (1 - g) / 2;
    const double dt = tau / steps;

    auto& lu = lu_cache_[key_bits(g * dt)];
    if (!lu) {
        const int n = static_cast<int>(v0.size());
        Eigen::SparseMatrix<double> id(n, n);
        id.setIdentity();
        Eigen::SparseMatrix<double> sys = id - (g * dt) * op_->matrix;
        lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        lu->compute(sys);
        if (lu->info() != Eigen::Success)
            throw SolverError("implicit linear flow: factorization failed");
    }

    const auto& a = op_->matrix;
    Eigen::VectorXd v = v0;
    for (int n = 0; n < steps; ++n) {
        const Eigen::VectorXd k1 = lu->solve(a * v + c);
        const Eigen::VectorXd k2 = lu->solve(a * (v + dt * a21 * k1) + c);
        const Eigen::VectorXd k3 = lu->solve(a * (v + dt * (b1 * k1 + b2 * k2)) + c);
        v += dt * (b1 * k1 + b2 * k2 + g * k3);
    }
    return v;
}

Field LinearFlowSolver::diffusion_substep(const Field& v0, const Field& q, double t,
                                          double tau) const {
    const int n = op_->grid.num_nodes();
    // the linear flow imposes the boundary data instantly: a reacted
    // Dirichlet value on the input must not act as boundary datum for the
    // whole substep (slaved rows hold their value), so project it first
    Field v0c = v0;
    op_->impose_dirichlet(v0c, t);
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v[k] = v0c[k];
    const Eigen::VectorXd c = forcing(q, t);

    Eigen::VectorXd out;
    if (mode_ == Mode::ExactPhi) {
        if (n > kDenseLimit)
            throw SolverError("diffusion_substep: grid too large for exact_phi mode (" +
                              std::to_string(n) + " nodes); use implicit_adaptive");
        auto it = phi_cache_.find(key_bits(tau));
        if (it == phi_cache_.end()) {
            Eigen::MatrixXd dense = Eigen::MatrixXd(op_->matrix) * tau;
            it = phi_cache_.emplace(key_bits(tau), phi1_matrix(dense)).first;
        }
        out = v + tau * (it->second * (op_->matrix * v + c));
    } else {
        int m = start_steps_;
        Eigen::VectorXd coarse = sdirk_run(v, c, tau, m);
        Eigen::VectorXd fine = sdirk_run(v, c, tau, 2 * m);
        while (true) {
            const double err = (fine - coarse).lpNorm<Eigen::Infinity>() /
                               (7.0 * (1.0 + fine.lpNorm<Eigen::Infinity>()));
            if (err <= tol_) break;
            if (m > (1 << 20))
                throw SolverError("implicit linear flow did not reach tolerance");
            m *= 2;
            coarse = std::move(fine);
            fine = sdirk_run(v, c, tau, 2 * m);
        }
        out = fine + (fine - coarse) / 7.0;
        start_steps_ = std::max(1, m / 2);
    }

    Field result(op_->grid);
    for (int k = 0; k < n; ++k) result[k] = out[k];
    op_->impose_dirichlet(result, t);
    return result;
}

ReactionFlowSolver::ReactionFlowSolver(std::function<double(double)> f,
                                       std::function<double(double)> fprime, double tolerance,
                                       double blowup_bound)
    : f_(std::move(f)), fprime_(std::move(fprime)), tol_(tolerance), bound_(blowup_bound) {
    require(static_cast<bool>(f_), "ReactionFlowSolver: missing reaction function");
}

Field ReactionFlowSolver::reaction_substep(const Field& w0, const Field& q, double tau) const {
    Field out(w0.grid);
    const int n = w0.size();
    for (int node = 0; node < n; ++node) {
        const double qi = q.size() == n ? q[node] : 0.0;
        auto rhs = [&](double w) { return f_(w) - qi; };
        auto run = [&](int steps) {
            const double dt = tau / steps;
            double w = w0[node];
            for (int s = 0; s < steps; ++s) {
                const double k1 = rhs(w);
                const double k2 = rhs(w + 0.5 * dt * k1);
                const double k3 = rhs(w + 0.5 * dt * k2);
                const double k4 = rhs(w + dt * k3);
                w += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
                if (!std::isfinite(w) || std::abs(w) > bound_)
                    throw BlowUpError(node, "reaction substep blow-up at node " +
                                                std::to_string(node) + " (|w| > " +
                                                std::to_string(bound_) + ")");
            }
            return w;
        };

        int m = 2;
        double coarse = run(m);
        double fine = run(2 * m);
        while (std::abs(fine - coarse) / 15.0 > tol_ * (1.0 + std::abs(fine))) {
            if (m > (1 << 22))
                throw SolverError("reaction substep did not reach tolerance at node " +
                                  std::to_string(node));
            m *= 2;
            coarse = fine;
            fine = run(2 * m);
        }
        out[node] = fine + (fine - coarse) / 15.0;
    }
    return out;
}

}  // namespace osplit

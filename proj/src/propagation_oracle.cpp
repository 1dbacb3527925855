// Brute-force reference integrator. Builds the truncated Hamiltonian from the operator
// algebra (sigma_z, sigma_±, a, a†) on {e,g} ⊗ {|0>..|n_max+1>} and steps it with RK4.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

#include "jcdeco/errors.hpp"
#include "jcdeco/propagation.hpp"

namespace jcdeco {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using Vec = Eigen::VectorXcd;

SpMat to_sparse(const Eigen::MatrixXcd& m) { return m.sparseView(); }

// H / hbar in rad/s. Atom index 0 = e, 1 = g; full index = atom * levels + n.
SpMat truncated_hamiltonian(std::size_t levels, const ModelParams& params, Frame frame) {
    const auto dim = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd a_dag = a.adjoint();
    const Eigen::MatrixXcd id_field = Eigen::MatrixXcd::Identity(dim, dim);

    Eigen::Matrix2cd sigma_z, sigma_plus, id_atom;
    sigma_z << 1.0, 0.0, 0.0, -1.0;
    sigma_plus << 0.0, 1.0, 0.0, 0.0;
    id_atom.setIdentity();
    const Eigen::Matrix2cd sigma_minus = sigma_plus.adjoint();

    Eigen::MatrixXcd h = params.g * (Eigen::kroneckerProduct(sigma_plus, a).eval() +
                                     Eigen::kroneckerProduct(sigma_minus, a_dag).eval());
    if (frame == Frame::schroedinger) {
        h += params.omega * (0.5 * Eigen::kroneckerProduct(sigma_z, id_field).eval() +
                             Eigen::kroneckerProduct(id_atom, a_dag * a).eval());
    }
    return to_sparse(h);
}

Vec pack(const JointPureState& s, std::size_t levels) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(2 * levels));
    const auto e = s.amps_e();
    const auto g = s.amps_g();
    for (std::size_t n = 0; n < e.size(); ++n) v(static_cast<Eigen::Index>(n)) = e[n];
    for (std::size_t n = 0; n < g.size(); ++n) v(static_cast<Eigen::Index>(levels + n)) = g[n];
    return v;
}

JointPureState unpack(const Vec& v, std::size_t n_max) {
    const std::size_t levels = n_max + 2;
    std::vector<cplx> e(n_max + 1);
    std::vector<cplx> g(n_max + 2);
    for (std::size_t n = 0; n <= n_max; ++n) e[n] = v(static_cast<Eigen::Index>(n));
    for (std::size_t n = 0; n <= n_max + 1; ++n) g[n] = v(static_cast<Eigen::Index>(levels + n));
    return {std::move(e), std::move(g)};
}

}  // namespace

JointPureState evolve_oracle(const JointPureState& state, const ModelParams& params, double t,
                             Frame frame, std::size_t steps) {
    params.validate();
    if (steps < 1) throw InputError("evolve_oracle: steps must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("evolve_oracle: t must be >= 0");
    state.require_normalized("evolve_oracle");

    const std::size_t levels = state.n_max() + 2;
    const SpMat h = truncated_hamiltonian(levels, params, frame);
    const cplx minus_i{0.0, -1.0};
    const double dt = t / static_cast<double>(steps);

    Vec psi = pack(state, levels);
    Vec k1, k2, k3, k4;
    for (std::size_t s = 0; s < steps; ++s) {
        k1 = minus_i * (h * psi);
        k2 = minus_i * (h * (psi + (0.5 * dt) * k1));
        k3 = minus_i * (h * (psi + (0.5 * dt) * k2));
        k4 = minus_i * (h * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return unpack(psi, state.n_max());
}

OracleRun evolve_oracle_checked(const JointPureState& state, const ModelParams& params, double t,
                                Frame frame, std::size_t steps, double tolerance) {
    const JointPureState coarse = evolve_oracle(state, params, t, frame, steps);
    JointPureState fine = evolve_oracle(state, params, t, frame, 2 * steps);
    const double residual = coarse.max_abs_diff(fine);
    if (!(residual <= tolerance)) {
        throw ToleranceError("evolve_oracle: " + std::to_string(steps) +
                                 " steps do not meet tolerance " + std::to_string(tolerance) +
                                 ", achieved residual " + std::to_string(residual),
                             residual);
    }
    return {std::move(fine), residual};
}

}  // namespace jcdeco

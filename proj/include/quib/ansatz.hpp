#pragma once

// Layered hardware-efficient ansatz: per layer, Rx then Ry then Rz on every
// qubit (independent angles, R_P(a) = exp(-i a P / 2)) followed by a CNOT
// ladder with control q and target q+1. Qubit 0 is the most significant bit
// of the basis index, matching the row-major register convention.

#include <Eigen/Dense>
#include <random>

#include "quib/state.hpp"

namespace quib {
namespace ansatz {

struct AnsatzSpec {
    int n_qubits = 1;
    int layers = 1;
    int param_count() const { return 3 * n_qubits * layers; }
    // Deep enough to pin a rank-2 eigenframe (~4 * 2^n real dofs against
    // 3nL parameters); the small-n values are fixed by measurement.
    static int default_layers(int n_qubits) {
        if (n_qubits <= 2) return 4;
        if (n_qubits <= 4) return 6;
        return (4 << n_qubits) / (3 * n_qubits) + 1;
    }
};

// Parameter index of (layer, qubit, axis) with axis 0,1,2 = x,y,z.
inline int param_index(const AnsatzSpec& spec, int layer, int qubit, int axis) {
    return (layer * spec.n_qubits + qubit) * 3 + axis;
}

// Apply the circuit to a vector in place.
void apply_ansatz(const AnsatzSpec& spec, const Eigen::VectorXd& theta,
                  Eigen::VectorXcd& v);

Eigen::MatrixXcd build_unitary(const AnsatzSpec& spec, const Eigen::VectorXd& theta);

// Rank-r eigenfactor F of rho (rho = F F^dagger) so diagonal expectations
// cost O(d * rank) instead of O(d^2) per column.
struct DensityFactor {
    Eigen::MatrixXcd f;
    long dim() const { return f.rows(); }
};
DensityFactor factor_density(const DensityMatrix& rho, double tol = 1e-14);

// e_i = <i| U(theta)^dagger rho U(theta) |i> for i = 0..r-1. With shots > 0
// each e_i is replaced by a Binomial(shots, e_i)/shots draw from rng.
Eigen::VectorXd diagonal_expectations(const DensityMatrix& rho, const AnsatzSpec& spec,
                                      const Eigen::VectorXd& theta, int r,
                                      int shots = 0, std::mt19937_64* rng = nullptr);
Eigen::VectorXd diagonal_expectations(const DensityFactor& rho, const AnsatzSpec& spec,
                                      const Eigen::VectorXd& theta, int r,
                                      int shots = 0, std::mt19937_64* rng = nullptr);

// Parameter-shift gradient of g(theta) = -c * sum_i t_i e_i(theta):
// dg/dtheta_j = (g(theta + pi/2 e_j) - g(theta - pi/2 e_j)) / 2.
Eigen::VectorXd shift_gradient(const DensityFactor& rho, const AnsatzSpec& spec,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& t,
                               double c, int shots = 0, std::mt19937_64* rng = nullptr);
Eigen::VectorXd shift_gradient(const DensityMatrix& rho, const AnsatzSpec& spec,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& t,
                               double c, int shots = 0, std::mt19937_64* rng = nullptr);

}  // namespace ansatz
}  // namespace quib

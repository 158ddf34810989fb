#pragma once

// Variational entropy estimator. The objective
//   f(theta, w) = -c sum_i t_i e_i(theta) + log(d - r + sum_i exp(c t_i)),
// with t = softmax(w) on the probability simplex, upper-bounds the von
// Neumann entropy S_ln(rho) for every parameter value (Gibbs variational
// principle) and comes within epsilon of it once
// c >= 2 r log d - r log epsilon.

#include <cstdint>
#include <optional>
#include <vector>

#include "quib/ansatz.hpp"
#include "quib/state.hpp"

namespace quib {
namespace estimator {

struct EstimatorConfig {
    int rank = 0;                 // 0 = use known/numerical rank of the input
    double epsilon = 0.01;        // target gap, nats
    std::optional<double> c_override;
    double c_max = 500.0;         // clamp on c; <= 0 disables
    double learning_rate = 0.05;
    int max_steps = 1000;
    int conv_window = 25;
    double conv_tol = 1e-4;       // nats
    bool early_stop = true;
    int layers = 0;               // 0 = default for the qubit count
    int shots = 0;                // 0 = exact expectations
    std::uint64_t seed = 0;
};

struct SimplexWeights {
    Eigen::VectorXd logits;
    Eigen::VectorXd values() const;  // softmax(logits)
};

struct TraceRow {
    int step;
    double cost_nats;
    double grad_norm;
};

struct EntropyEstimate {
    double value_nats = 0.0;
    double value_bits = 0.0;
    int steps_used = 0;
    bool converged = false;
    std::vector<TraceRow> trace;
};

double choose_c(int r, long d, double epsilon);

Eigen::VectorXd softmax(const Eigen::VectorXd& w);

double cost(const DensityMatrix& rho, const ansatz::AnsatzSpec& spec,
            const Eigen::VectorXd& theta, const Eigen::VectorXd& w, double c);

struct Gradient {
    Eigen::VectorXd d_theta;
    Eigen::VectorXd d_w;
};
Gradient gradient(const DensityMatrix& rho, const ansatz::AnsatzSpec& spec,
                  const Eigen::VectorXd& theta, const Eigen::VectorXd& w, double c);

// Adam descent over (theta, w); returns the best cost seen along the
// trajectory. Requires a power-of-two dimension and 1 <= rank <= dim.
EntropyEstimate minimize(const DensityMatrix& rho, const EstimatorConfig& config);

// Convenience wrapper for bound computations: resolves rank 0 to the known
// or numerical rank and zero-pads non-power-of-two dimensions first.
EntropyEstimate estimate_entropy(const DensityMatrix& rho, EstimatorConfig config);

}  // namespace estimator
}  // namespace quib

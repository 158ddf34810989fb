#include "quib/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace quib {
namespace estimator {

namespace {

// log(d - r + sum_i exp(c t_i)) with the largest exponent factored out.
double safe_log_partition(const Eigen::VectorXd& t, double c, long d) {
    const long r = t.size();
    double m = 0.0;  // exponents are c t_i >= 0
    for (long i = 0; i < r; ++i) m = std::max(m, c * t[i]);
    double acc = static_cast<double>(d - r) * std::exp(-m);
    for (long i = 0; i < r; ++i) acc += std::exp(c * t[i] - m);
    return m + std::log(acc);
}

double cost_from(const Eigen::VectorXd& e, const Eigen::VectorXd& t, double c, long d) {
    return -c * t.dot(e) + safe_log_partition(t, c, d);
}

// d/dt_i of the objective at fixed expectations.
Eigen::VectorXd cost_dt(const Eigen::VectorXd& e, const Eigen::VectorXd& t, double c,
                        long d) {
    const long r = t.size();
    double m = 0.0;
    for (long i = 0; i < r; ++i) m = std::max(m, c * t[i]);
    double z = static_cast<double>(d - r) * std::exp(-m);
    for (long i = 0; i < r; ++i) z += std::exp(c * t[i] - m);
    Eigen::VectorXd g(r);
    for (long i = 0; i < r; ++i) g[i] = -c * e[i] + c * std::exp(c * t[i] - m) / z;
    return g;
}

// Pullback through the softmax Jacobian J_ij = t_i (delta_ij - t_j);
// components of the result always sum to zero.
Eigen::VectorXd softmax_pullback(const Eigen::VectorXd& t, const Eigen::VectorXd& df_dt) {
    const double mean = t.dot(df_dt);
    return t.array() * (df_dt.array() - mean);
}

void validate_config(const EstimatorConfig& config) {
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (config.learning_rate <= 0.0)
        throw std::invalid_argument("learning rate must be positive");
    if (config.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (config.conv_window < 1) throw std::invalid_argument("conv_window must be >= 1");
    if (config.conv_tol <= 0.0) throw std::invalid_argument("conv_tol must be positive");
    if (config.shots < 0) throw std::invalid_argument("shots must be >= 0");
}

}  // namespace

Eigen::VectorXd SimplexWeights::values() const { return softmax(logits); }

double choose_c(int r, long d, double epsilon) {
    if (d < 2) throw DimensionError("choose_c requires d >= 2");
    if (r < 1 || r > d) throw DimensionError("choose_c requires 1 <= r <= d");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("choose_c requires epsilon in (0, 1)");
    return 2.0 * r * std::log(static_cast<double>(d)) - r * std::log(epsilon);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& w) {
    if (w.size() < 1) throw DimensionError("softmax needs at least one logit");
    Eigen::VectorXd t = (w.array() - w.maxCoeff()).exp();
    t /= t.sum();
    return t;
}

double cost(const DensityMatrix& rho, const ansatz::AnsatzSpec& spec,
            const Eigen::VectorXd& theta, const Eigen::VectorXd& w, double c) {
    const Eigen::VectorXd t = softmax(w);
    const Eigen::VectorXd e =
        ansatz::diagonal_expectations(rho, spec, theta, static_cast<int>(t.size()));
    return cost_from(e, t, c, rho.dim());
}

Gradient gradient(const DensityMatrix& rho, const ansatz::AnsatzSpec& spec,
                  const Eigen::VectorXd& theta, const Eigen::VectorXd& w, double c) {
    const Eigen::VectorXd t = softmax(w);
    const Eigen::VectorXd e =
        ansatz::diagonal_expectations(rho, spec, theta, static_cast<int>(t.size()));
    Gradient g;
    g.d_theta = ansatz::shift_gradient(rho, spec, theta, t, c);
    g.d_w = softmax_pullback(t, cost_dt(e, t, c, rho.dim()));
    return g;
}

EntropyEstimate minimize(const DensityMatrix& rho, const EstimatorConfig& config) {
    validate_config(config);
    const long d = rho.dim();
    const int n = log2_exact(d);
    const int r = config.rank;
    if (r < 1 || r > d) throw DimensionError("rank must satisfy 1 <= rank <= dim");

    ansatz::AnsatzSpec spec;
    spec.n_qubits = n;
    spec.layers = config.layers > 0 ? config.layers : ansatz::AnsatzSpec::default_layers(n);

    double c = config.c_override ? *config.c_override : choose_c(r, d, config.epsilon);
    if (config.c_max > 0.0) c = std::min(c, config.c_max);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Eigen::VectorXd theta(spec.param_count());
    for (long i = 0; i < theta.size(); ++i) theta[i] = angle(rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(r);

    const ansatz::DensityFactor factor = ansatz::factor_density(rho);
    const int shots = config.shots;
    std::mt19937_64* rng_ptr = shots > 0 ? &rng : nullptr;

    const long np = theta.size();
    Eigen::VectorXd m1 = Eigen::VectorXd::Zero(np + r);
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(np + r);
    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

    EntropyEstimate est;
    est.value_nats = std::numeric_limits<double>::infinity();
    est.trace.reserve(config.max_steps);

    for (int step = 0; step < config.max_steps; ++step) {
        const Eigen::VectorXd t = softmax(w);
        const Eigen::VectorXd e =
            ansatz::diagonal_expectations(factor, spec, theta, r, shots, rng_ptr);
        const double f = cost_from(e, t, c, d);

        Eigen::VectorXd grad(np + r);
        grad.head(np) = ansatz::shift_gradient(factor, spec, theta, t, c, shots, rng_ptr);
        grad.tail(r) = softmax_pullback(t, cost_dt(e, t, c, d));

        est.trace.push_back({step, f, grad.norm()});
        est.value_nats = std::min(est.value_nats, f);

        if (config.early_stop && step >= config.conv_window) {
            const double prev = est.trace[step - config.conv_window].cost_nats;
            if (std::abs(f - prev) < config.conv_tol) {
                est.converged = true;
                break;
            }
        }

        m1 = beta1 * m1 + (1.0 - beta1) * grad;
        m2 = beta2 * m2 + (1.0 - beta2) * grad.cwiseProduct(grad);
        const double bc1 = 1.0 - std::pow(beta1, step + 1);
        const double bc2 = 1.0 - std::pow(beta2, step + 1);
        // cosine decay to a tenth of the base rate: the trace tail goes
        // quiet without giving up the initial descent speed
        const double floor_lr = 0.1 * config.learning_rate;
        const double rate =
            floor_lr + 0.5 * (config.learning_rate - floor_lr) *
                           (1.0 + std::cos(std::numbers::pi * double(step) /
                                           double(config.max_steps)));
        const Eigen::VectorXd update =
            (rate / bc1) *
            (m1.array() / ((m2.array() / bc2).sqrt() + adam_eps)).matrix();
        theta -= update.head(np);
        w -= update.tail(r);
    }

    est.steps_used = static_cast<int>(est.trace.size());
    est.value_bits = est.value_nats / std::numbers::ln2;
    return est;
}

EntropyEstimate estimate_entropy(const DensityMatrix& rho, EstimatorConfig config) {
    if (config.rank == 0)
        config.rank = rho.known_rank() ? *rho.known_rank() : numerical_rank(rho);
    const DensityMatrix padded = pad_to_power_of_two(rho);
    return minimize(padded, config);
}

}  // namespace estimator
}  // namespace quib

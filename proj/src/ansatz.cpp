#include "quib/ansatz.hpp"

#include <cmath>
#include <numbers>

namespace quib {
namespace ansatz {

namespace {

void check(const AnsatzSpec& spec, const Eigen::VectorXd& theta) {
    if (spec.n_qubits < 1 || spec.layers < 1)
        throw DimensionError("ansatz needs at least one qubit and one layer");
    if (theta.size() != spec.param_count())
        throw DimensionError("parameter count does not match ansatz spec");
}

inline long qubit_mask(int n_qubits, int q) { return 1L << (n_qubits - 1 - q); }

template <typename F>
void for_each_pair(long dim, long mask, F&& body) {
    for (long base = 0; base < dim; base += 2 * mask)
        for (long off = 0; off < mask; ++off) body(base + off, base + off + mask);
}

void apply_rx(Eigen::VectorXcd& v, long mask, double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    const Cx is(0, -s);
    for_each_pair(v.size(), mask, [&](long i0, long i1) {
        const Cx a = v[i0], b = v[i1];
        v[i0] = c * a + is * b;
        v[i1] = is * a + c * b;
    });
}

void apply_ry(Eigen::VectorXcd& v, long mask, double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    for_each_pair(v.size(), mask, [&](long i0, long i1) {
        const Cx a = v[i0], b = v[i1];
        v[i0] = c * a - s * b;
        v[i1] = s * a + c * b;
    });
}

void apply_rz(Eigen::VectorXcd& v, long mask, double angle) {
    const Cx e0 = std::polar(1.0, -angle / 2), e1 = std::polar(1.0, angle / 2);
    for_each_pair(v.size(), mask, [&](long i0, long i1) {
        v[i0] *= e0;
        v[i1] *= e1;
    });
}

void apply_cnot(Eigen::VectorXcd& v, long control_mask, long target_mask) {
    for (long i = 0; i < v.size(); ++i)
        if ((i & control_mask) && !(i & target_mask)) std::swap(v[i], v[i | target_mask]);
}

Eigen::VectorXd sample_binomial(const Eigen::VectorXd& e, int shots, std::mt19937_64* rng) {
    if (rng == nullptr) throw std::invalid_argument("shot sampling requires an rng");
    Eigen::VectorXd out(e.size());
    for (long i = 0; i < e.size(); ++i) {
        const double p = std::min(std::max(e[i], 0.0), 1.0);
        std::binomial_distribution<int> bin(shots, p);
        out[i] = static_cast<double>(bin(*rng)) / shots;
    }
    return out;
}

template <typename Rho>
Eigen::VectorXd expectations_impl(const Rho& rho, const AnsatzSpec& spec,
                                  const Eigen::VectorXd& theta, int r, int shots,
                                  std::mt19937_64* rng) {
    check(spec, theta);
    const long d = rho.dim();
    if (d != (1L << spec.n_qubits))
        throw DimensionError("state dimension does not match the qubit count");
    if (r < 1 || r > d) throw DimensionError("expectation count must satisfy 1 <= r <= d");

    Eigen::VectorXd e(r);
    Eigen::VectorXcd col(d);
    for (int i = 0; i < r; ++i) {
        col.setZero();
        col[i] = Cx(1, 0);
        apply_ansatz(spec, theta, col);
        if constexpr (std::is_same_v<Rho, DensityFactor>) {
            e[i] = (rho.f.adjoint() * col).squaredNorm();
        } else {
            e[i] = col.dot(rho.matrix() * col).real();
        }
    }
    if (shots > 0) e = sample_binomial(e, shots, rng);
    return e;
}

template <typename Rho>
Eigen::VectorXd shift_gradient_impl(const Rho& rho, const AnsatzSpec& spec,
                                    const Eigen::VectorXd& theta, const Eigen::VectorXd& t,
                                    double c, int shots, std::mt19937_64* rng) {
    check(spec, theta);
    const int r = static_cast<int>(t.size());
    const double half_pi = std::numbers::pi / 2;
    Eigen::VectorXd grad(theta.size());
    Eigen::VectorXd shifted = theta;
    for (long j = 0; j < theta.size(); ++j) {
        shifted[j] = theta[j] + half_pi;
        const double plus = -c * t.dot(expectations_impl(rho, spec, shifted, r, shots, rng));
        shifted[j] = theta[j] - half_pi;
        const double minus = -c * t.dot(expectations_impl(rho, spec, shifted, r, shots, rng));
        shifted[j] = theta[j];
        grad[j] = (plus - minus) / 2.0;
    }
    return grad;
}

}  // namespace

void apply_ansatz(const AnsatzSpec& spec, const Eigen::VectorXd& theta,
                  Eigen::VectorXcd& v) {
    check(spec, theta);
    const int n = spec.n_qubits;
    if (v.size() != (1L << n))
        throw DimensionError("vector dimension does not match the qubit count");
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int q = 0; q < n; ++q) {
            const long mask = qubit_mask(n, q);
            apply_rx(v, mask, theta[param_index(spec, layer, q, 0)]);
            apply_ry(v, mask, theta[param_index(spec, layer, q, 1)]);
            apply_rz(v, mask, theta[param_index(spec, layer, q, 2)]);
        }
        for (int q = 0; q + 1 < n; ++q)
            apply_cnot(v, qubit_mask(n, q), qubit_mask(n, q + 1));
    }
}

Eigen::MatrixXcd build_unitary(const AnsatzSpec& spec, const Eigen::VectorXd& theta) {
    check(spec, theta);
    const long d = 1L << spec.n_qubits;
    Eigen::MatrixXcd u(d, d);
    Eigen::VectorXcd col(d);
    for (long i = 0; i < d; ++i) {
        col.setZero();
        col[i] = Cx(1, 0);
        apply_ansatz(spec, theta, col);
        u.col(i) = col;
    }
    return u;
}

DensityFactor factor_density(const DensityMatrix& rho, double tol) {
    const Spectrum spec = eigensystem(rho);
    int r = 0;
    for (long i = 0; i < spec.eigenvalues.size(); ++i)
        if (spec.eigenvalues[i] > tol) r = static_cast<int>(i) + 1;
    r = std::max(r, 1);
    DensityFactor f;
    f.f = spec.eigenvectors.leftCols(r);
    for (int i = 0; i < r; ++i)
        f.f.col(i) *= std::sqrt(std::max(spec.eigenvalues[i], 0.0));
    return f;
}

Eigen::VectorXd diagonal_expectations(const DensityMatrix& rho, const AnsatzSpec& spec,
                                      const Eigen::VectorXd& theta, int r, int shots,
                                      std::mt19937_64* rng) {
    return expectations_impl(rho, spec, theta, r, shots, rng);
}

Eigen::VectorXd diagonal_expectations(const DensityFactor& rho, const AnsatzSpec& spec,
                                      const Eigen::VectorXd& theta, int r, int shots,
                                      std::mt19937_64* rng) {
    return expectations_impl(rho, spec, theta, r, shots, rng);
}

Eigen::VectorXd shift_gradient(const DensityFactor& rho, const AnsatzSpec& spec,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& t,
                               double c, int shots, std::mt19937_64* rng) {
    return shift_gradient_impl(rho, spec, theta, t, c, shots, rng);
}

Eigen::VectorXd shift_gradient(const DensityMatrix& rho, const AnsatzSpec& spec,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& t,
                               double c, int shots, std::mt19937_64* rng) {
    return shift_gradient_impl(rho, spec, theta, t, c, shots, rng);
}

}  // namespace ansatz
}  // namespace quib

#include "quib/generators.hpp"

#include <cmath>

namespace quib {

namespace {

// Draw order per amplitude is fixed (real then imaginary) so that equal
// seeds reproduce states bit for bit within one build.
Eigen::VectorXcd gaussian_vector(long dim, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (long i = 0; i < dim; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v[i] = Cx(re, im);
    }
    return v;
}

}  // namespace

void DecompositionSpec::validate() const {
    double s = 0.0;
    for (double x : c) {
        if (x < 0.0) throw std::invalid_argument("decomposition weights must be >= 0");
        s += x * x;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("decomposition weights must satisfy sum c_i^2 = 1");
}

PureState haar_random_pure(const RegisterLayout& layout, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd v = gaussian_vector(layout.total_dim(), rng);
    v /= v.norm();
    return PureState(layout, std::move(v));
}

DensityMatrix random_density(int dim, int rank, std::uint64_t seed) {
    if (dim < 1 || rank < 1 || rank > dim)
        throw DimensionError("random_density requires 1 <= rank <= dim");
    RegisterLayout layout({{"M", dim}, {"P", rank}});
    PureState psi = haar_random_pure(layout, seed);
    DensityMatrix rho = reduce(psi, {"M"});
    return DensityMatrix(rho.layout(), rho.matrix(), rank);
}

PureState planted_common_subspace_state(int n_a, int k, int n_r, double lambda,
                                        std::uint64_t seed) {
    const int da = 1 << n_a;
    const int dr = 1 << n_r;
    if (n_a < 1 || n_r < 1) throw DimensionError("planted state needs n_a, n_r >= 1");
    if (k < 1 || k > da) throw DimensionError("planted k must satisfy 1 <= k <= 2^n_a");
    if (lambda <= 0.0 || lambda >= 1.0)
        throw std::invalid_argument("planted lambda must lie in (0, 1)");

    RegisterLayout layout({{"A", da}, {"B", da}, {"R", dr}});
    Rng rng(seed);

    Eigen::VectorXcd sym = Eigen::VectorXcd::Zero(layout.total_dim());
    {
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(k * k, dr);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                for (int r = 0; r < dr; ++r) {
                    const double re = g(rng);
                    const double im = g(rng);
                    block(a * k + b, r) = Cx(re, im);
                }
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                for (int r = 0; r < dr; ++r) {
                    const Cx v = (block(a * k + b, r) + block(b * k + a, r)) / 2.0;
                    sym[layout.flat({a, b, r})] = v;
                }
        sym /= sym.norm();
    }

    if (k == da) return PureState(layout, std::move(sym));  // no complement block

    Eigen::VectorXcd comp = Eigen::VectorXcd::Zero(layout.total_dim());
    {
        std::normal_distribution<double> g(0.0, 1.0);
        for (int a = k; a < da; ++a)
            for (int b = k; b < da; ++b)
                for (int r = 0; r < dr; ++r) {
                    const double re = g(rng);
                    const double im = g(rng);
                    comp[layout.flat({a, b, r})] = Cx(re, im);
                }
        comp /= comp.norm();
    }

    Eigen::VectorXcd amps = std::sqrt(lambda) * sym + std::sqrt(1.0 - lambda) * comp;
    return PureState(layout, std::move(amps));
}

PureState decomposable_state(const DecompositionSpec& spec) {
    spec.validate();
    RegisterLayout layout({{"A", 6}, {"B", 6}, {"R", 6}});
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(layout.total_dim());
    amps[layout.flat({0, 0, 0})] = spec.c[0] * s;  // EPR between A and R
    amps[layout.flat({1, 0, 1})] = spec.c[0] * s;
    amps[layout.flat({2, 1, 2})] = spec.c[1] * s;  // EPR between B and R
    amps[layout.flat({2, 2, 3})] = spec.c[1] * s;
    amps[layout.flat({3, 3, 4})] = spec.c[2] * s;  // EPR between A and B
    amps[layout.flat({4, 4, 4})] = spec.c[2] * s;
    amps[layout.flat({5, 5, 5})] = spec.c[3];      // product branch
    return PureState(layout, std::move(amps));
}

std::uint64_t subseed(std::uint64_t seed, const std::string& tag) {
    // FNV-1a over the tag, mixed with the run seed.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h ^ (seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL);
}

}  // namespace quib

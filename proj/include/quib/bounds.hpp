#pragma once

// Loose and tight bounds on uncommon information for pure states on
// registers (A, B, R). The tight upper bound conditions R on the original
// register A of the stretched state; the tight lower bound evaluates the
// EPR/GHZ decomposition of the three-qudit family.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quib/estimator.hpp"
#include "quib/generators.hpp"
#include "quib/state.hpp"

namespace quib {
namespace bounds {

enum class Mode { oracle, estimator };

struct BoundConfig {
    Mode mode = Mode::oracle;
    estimator::EstimatorConfig est;
    double align_tol = 1e-9;       // eigenvalue matching tolerance
    double coeff_tol = 1e-9;       // nonzero-amplitude threshold
    bool condition_on_ancilla = false;  // use S(R|A A') instead of S(R|A)
};

struct CommonSubspace {
    std::vector<int> indices;      // aligned-basis indices, sorted
    Eigen::MatrixXcd align_u;      // acts on A
    Eigen::MatrixXcd align_w;      // acts on B
};

struct AlignResult {
    Eigen::MatrixXcd u;
    Eigen::MatrixXcd w;
    int matched = 0;               // matched eigenvalues sit at 0..matched-1
};

// Unitaries diagonalizing both marginals with eigenvalues equal within tol
// moved to the same leading positions (greedy two-pointer matching over the
// descending spectra).
AlignResult spectral_align(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                           double tol = 1e-9);

// Connected components of a ~ b iff some |psi[(a,b,r)]| or |psi[(b,a,r)]|
// exceeds tol; singletons included.
std::vector<std::vector<int>> nonzero_classes(const PureState& psi, double tol = 1e-9);

// Exact exchange-symmetry test of the class projection.
bool class_symmetry_test(const PureState& psi, const std::vector<int>& cls,
                         double coeff_tol = 1e-9);
// Swap-test simulation: accept with probability 1/2 + fidelity^2 / 2 per
// shot; the class passes when the acceptance fraction reaches threshold.
bool class_symmetry_test_sampled(const PureState& psi, const std::vector<int>& cls,
                                 int shots, double threshold, std::uint64_t seed,
                                 double coeff_tol = 1e-9);

CommonSubspace find_common_subspace(const PureState& psi, double tol = 1e-9);

// Stretched state on (A, B, R, Ap, Bp): the class component stays on ABR
// with ancillas fixed at x, the complement component moves to (Ap, Bp) with
// A, B fixed at y. The assembled vector is normalized.
PureState build_stretched(const PureState& psi_aligned, const std::vector<int>& indices,
                          int x_index, int y_index);

struct BoundValue {
    double bits = 0.0;
    std::map<std::string, estimator::EntropyEstimate> estimates;
};

BoundValue loose_upper(const PureState& psi, const BoundConfig& config);
BoundValue loose_lower(const PureState& psi, const BoundConfig& config);

struct TightUpperResult {
    double bits = 0.0;             // min(u, loose upper)
    double u_bits = 0.0;           // conditional-entropy value
    double loose_upper_bits = 0.0;
    CommonSubspace subspace;
    std::map<std::string, estimator::EntropyEstimate> estimates;
};
TightUpperResult tight_upper(const PureState& psi,
                             const std::optional<CommonSubspace>& subspace,
                             const BoundConfig& config);

struct RatesReport {
    double r1 = 0, r2 = 0, r3 = 0;
    double r4 = 0;                 // bits
};
RatesReport decomposition_rates(const DecompositionSpec& spec);

BoundValue tight_lower(const DecompositionSpec& spec, const BoundConfig& config);

}  // namespace bounds
}  // namespace quib

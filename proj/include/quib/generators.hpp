#pragma once

// Seeded state generators. Identical seeds give bit-identical states within
// one build of the library.

#include <array>
#include <cstdint>
#include <random>

#include "quib/state.hpp"

namespace quib {

using Rng = std::mt19937_64;

// Four branch weights of the decomposable three-qudit family; c must be
// nonnegative with sum of squares 1.
struct DecompositionSpec {
    std::array<double, 4> c{0.5, 0.5, 0.5, 0.5};
    void validate() const;
};

PureState haar_random_pure(const RegisterLayout& layout, std::uint64_t seed);

// Random rank-r density matrix: marginal of a Haar pure state on
// (main, purifier of dimension rank).
DensityMatrix random_density(int dim, int rank, std::uint64_t seed);

// State on (A, B, R) = (2^n_a, 2^n_a, 2^n_r) with an exchange-symmetric
// component planted on span{0..k-1} x span{0..k-1} (weight lambda) and a
// random component on the complement block pair (weight 1 - lambda).
PureState planted_common_subspace_state(int n_a, int k, int n_r, double lambda,
                                        std::uint64_t seed);

// (A, B, R) = (6, 6, 6) family: EPR(A,R), EPR(B,R), EPR(A,B) and a product
// branch with weights c1..c4.
PureState decomposable_state(const DecompositionSpec& spec);

// Deterministic sub-seed for named sub-computations of a run.
std::uint64_t subseed(std::uint64_t seed, const std::string& tag);

}  // namespace quib

#include <doctest.h>

#include <cmath>
#include <set>

#include "quib/bounds.hpp"
#include "quib/generators.hpp"

using namespace quib;

namespace {

DensityMatrix diagonal_density(const std::vector<double>& lam) {
    const int d = static_cast<int>(lam.size());
    RegisterLayout layout({{"M", d}});
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = lam[i];
    return DensityMatrix(layout, m);
}

// three-level state with one symmetric class {0} and one asymmetric class
// {1,2}; all amplitudes real so every value below is exact by hand
PureState handmade_state() {
    RegisterLayout layout({{"A", 3}, {"B", 3}, {"R", 2}});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(18);
    v[layout.flat({0, 0, 0})] = std::sqrt(0.5);
    v[layout.flat({1, 2, 1})] = std::sqrt(0.3);
    v[layout.flat({2, 1, 1})] = std::sqrt(0.2);
    return PureState(layout, std::move(v));
}

DecompositionSpec generic_spec() {
    DecompositionSpec spec;
    spec.c = {0.6, 0.2, 0.4, std::sqrt(0.44)};
    return spec;
}

bounds::BoundConfig oracle_mode() {
    bounds::BoundConfig config;
    config.mode = bounds::Mode::oracle;
    return config;
}

}  // namespace

TEST_CASE("spectral alignment sorts matched eigenvalues together") {
    DensityMatrix rho_a = diagonal_density({0.3, 0.6, 0.1});
    DensityMatrix rho_b = diagonal_density({0.1, 0.3, 0.6});
    bounds::AlignResult align = bounds::spectral_align(rho_a, rho_b, 1e-9);
    CHECK(align.matched == 3);

    Eigen::MatrixXcd da = align.u * rho_a.matrix() * align.u.adjoint();
    Eigen::MatrixXcd db = align.w * rho_b.matrix() * align.w.adjoint();
    CHECK((da - db).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(da(0, 0).real() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(da(2, 2).real() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK((align.u * align.u.adjoint() - Eigen::MatrixXcd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("spectral alignment matches greedily within tolerance") {
    CHECK(bounds::spectral_align(diagonal_density({0.7, 0.3}),
                                 diagonal_density({0.6, 0.4}), 1e-9)
              .matched == 0);
    CHECK(bounds::spectral_align(diagonal_density({0.5, 0.3, 0.2}),
                                 diagonal_density({0.5, 0.25, 0.25}), 1e-9)
              .matched == 1);
    CHECK(bounds::spectral_align(diagonal_density({0.7, 0.3}),
                                 diagonal_density({0.6, 0.4}), 0.15)
              .matched == 2);
    CHECK_THROWS_AS(bounds::spectral_align(diagonal_density({0.5, 0.5}),
                                           diagonal_density({1.0})),
                    DimensionError);
}

TEST_CASE("index classes connect rows and columns of nonzero amplitudes") {
    PureState psi = decomposable_state(DecompositionSpec{});
    const auto classes = bounds::nonzero_classes(psi, 1e-9);
    REQUIRE(classes.size() == 4);
    CHECK(classes[0] == std::vector<int>{0, 1, 2});
    CHECK(classes[1] == std::vector<int>{3});
    CHECK(classes[2] == std::vector<int>{4});
    CHECK(classes[3] == std::vector<int>{5});

    CHECK_FALSE(bounds::class_symmetry_test(psi, {0, 1, 2}, 1e-9));
    CHECK(bounds::class_symmetry_test(psi, {3}, 1e-9));
    CHECK(bounds::class_symmetry_test(psi, {4}, 1e-9));
    CHECK(bounds::class_symmetry_test(psi, {5}, 1e-9));
}

TEST_CASE("class granularity follows the amplitude tolerance") {
    RegisterLayout layout({{"A", 2}, {"B", 2}, {"R", 1}});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[layout.flat({0, 0, 0})] = std::sqrt(1.0 - 1e-20);
    v[layout.flat({0, 1, 0})] = 1e-10;
    PureState psi(layout, std::move(v));
    CHECK(bounds::nonzero_classes(psi, 1e-9).size() == 2);
    CHECK(bounds::nonzero_classes(psi, 1e-11).size() == 1);
}

TEST_CASE("sampled symmetry test separates the classes") {
    PureState psi = decomposable_state(DecompositionSpec{});
    CHECK(bounds::class_symmetry_test_sampled(psi, {3}, 4000, 0.95, 1, 1e-9));
    // fidelity 1/2 gives acceptance probability 5/8, far below the threshold
    CHECK_FALSE(bounds::class_symmetry_test_sampled(psi, {0, 1, 2}, 4000, 0.95, 1, 1e-9));
    CHECK_THROWS_AS(bounds::class_symmetry_test_sampled(psi, {3}, 0, 0.95, 1, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("common subspace of the decomposable family") {
    PureState psi = decomposable_state(generic_spec());
    bounds::CommonSubspace sub = bounds::find_common_subspace(psi, 1e-9);
    CHECK(sub.indices == std::vector<int>{0, 1, 2});

    // the aligned indices correspond to original basis vectors {3, 4, 5}
    std::set<int> sources;
    for (int idx : sub.indices) {
        int argmax = 0;
        for (int j = 1; j < 6; ++j)
            if (std::abs(sub.align_u(idx, j)) > std::abs(sub.align_u(idx, argmax)))
                argmax = j;
        sources.insert(argmax);
    }
    CHECK(sources == std::set<int>{3, 4, 5});
}

TEST_CASE("common subspace of planted states") {
    // one-qubit sides with a planted 1-dim block: the 1-dim complement is
    // symmetric as well, so discovery returns both indices
    bounds::CommonSubspace small =
        bounds::find_common_subspace(planted_common_subspace_state(1, 1, 2, 0.5, 2), 1e-9);
    CHECK(small.indices == std::vector<int>{0, 1});

    // two-qubit sides: the random 2x2 complement block is asymmetric
    bounds::CommonSubspace big =
        bounds::find_common_subspace(planted_common_subspace_state(2, 2, 4, 0.5, 2), 1e-9);
    CHECK(big.indices == std::vector<int>{0, 1});
}

TEST_CASE("haar states have no common subspace") {
    PureState psi = haar_random_pure(RegisterLayout({{"A", 2}, {"B", 2}, {"R", 4}}), 8);
    CHECK(bounds::find_common_subspace(psi, 1e-9).indices.empty());
}

TEST_CASE("stretched state construction") {
    PureState psi = handmade_state();
    PureState stretched = bounds::build_stretched(psi, {0}, 1, 0);
    const auto& layout = stretched.layout();
    CHECK(layout.size() == 5);
    CHECK(layout.dim_of("Ap") == 3);
    CHECK(stretched.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));

    // common branch keeps (a, b) and tags (Ap, Bp) = (x, x)
    CHECK(std::abs(stretched.amplitudes()[layout.flat({0, 0, 0, 1, 1})] -
                   Cx(std::sqrt(0.5), 0)) < 1e-12);
    // uncommon branch moves (a, b) to (Ap, Bp) under the (y, y) tag
    CHECK(std::abs(stretched.amplitudes()[layout.flat({0, 0, 1, 1, 2})] -
                   Cx(std::sqrt(0.3), 0)) < 1e-12);
    CHECK(std::abs(stretched.amplitudes()[layout.flat({0, 0, 1, 2, 1})] -
                   Cx(std::sqrt(0.2), 0)) < 1e-12);

    CHECK_THROWS_AS(bounds::build_stretched(psi, {0, 1, 2}, 0, 0), DimensionError);
    CHECK_THROWS_AS(bounds::build_stretched(psi, {0}, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(bounds::build_stretched(psi, {0}, 1, 2), std::invalid_argument);
}

TEST_CASE("tight upper bound on the handmade state") {
    PureState psi = handmade_state();

    SUBCASE("explicit one-dim common subspace gives one bit") {
        bounds::CommonSubspace sub;
        sub.indices = {0};
        bounds::TightUpperResult r = bounds::tight_upper(psi, sub, oracle_mode());
        CHECK(r.u_bits == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.loose_upper_bits == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.bits == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("discovery aligns the state into a fully common form") {
        bounds::TightUpperResult r = bounds::tight_upper(psi, std::nullopt, oracle_mode());
        CHECK(r.subspace.indices == std::vector<int>{0, 1, 2});
        CHECK(r.u_bits == doctest::Approx(0.0));
        CHECK(r.bits == doctest::Approx(0.0));
    }

    SUBCASE("empty subspace reproduces the loose upper bound") {
        bounds::CommonSubspace sub;  // no indices, identity alignment
        bounds::TightUpperResult r = bounds::tight_upper(psi, sub, oracle_mode());
        CHECK(r.u_bits == doctest::Approx(r.loose_upper_bits).epsilon(1e-9));
    }
}

TEST_CASE("tight upper bound sandwich on planted states") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        PureState psi = planted_common_subspace_state(2, 2, 4, 0.5, seed);
        bounds::TightUpperResult r = bounds::tight_upper(psi, std::nullopt, oracle_mode());
        const double lower = bounds::loose_lower(psi, oracle_mode()).bits;
        CHECK(r.u_bits >= lower - 1e-9);
        CHECK(r.bits <= r.loose_upper_bits + 1e-12);
    }
}

TEST_CASE("fully symmetric planted states carry no uncommon information") {
    PureState psi = planted_common_subspace_state(1, 1, 2, 0.5, 6);
    bounds::TightUpperResult r = bounds::tight_upper(psi, std::nullopt, oracle_mode());
    CHECK(r.subspace.indices.size() == 2);  // full
    CHECK(r.u_bits == doctest::Approx(0.0));
}

TEST_CASE("loose bounds against purity") {
    PureState psi = haar_random_pure(RegisterLayout({{"A", 4}, {"B", 4}, {"R", 2}}), 12);
    const double upper = bounds::loose_upper(psi, oracle_mode()).bits;
    const double lower = bounds::loose_lower(psi, oracle_mode()).bits;
    CHECK(lower <= upper + 1e-9);
    // for a pure global state S(AB) equals S(R)
    CHECK(upper ==
          doctest::Approx(entropy_exact(reduce(psi, {"R"}), LogBase::bits)).epsilon(1e-9));
}

TEST_CASE("decomposition rates and the analytic lower bound") {
    bounds::RatesReport r = bounds::decomposition_rates(DecompositionSpec{});
    CHECK(r.r1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.r2 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.r3 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.r4 == doctest::Approx(2.0).epsilon(1e-15));

    CHECK(bounds::tight_lower(DecompositionSpec{}, oracle_mode()).bits ==
          doctest::Approx(0.5).epsilon(1e-12));

    DecompositionSpec spec = generic_spec();
    CHECK(bounds::tight_lower(spec, oracle_mode()).bits ==
          doctest::Approx(0.36 + 0.04).epsilon(1e-12));

    bounds::RatesReport g = bounds::decomposition_rates(spec);
    double h = 0.0;
    for (double ci : spec.c) h -= ci * ci * std::log2(ci * ci);
    CHECK(g.r4 == doctest::Approx(h).epsilon(1e-15));
}

TEST_CASE("lower bound never exceeds the upper bound on the same family") {
    DecompositionSpec spec = generic_spec();
    const double lower = bounds::tight_lower(spec, oracle_mode()).bits;
    bounds::TightUpperResult upper =
        bounds::tight_upper(decomposable_state(spec), std::nullopt, oracle_mode());
    CHECK(lower <= upper.bits + 1e-6);
}

TEST_CASE("estimator mode tracks the oracle") {
    bounds::BoundConfig config;
    config.mode = bounds::Mode::estimator;
    config.est.seed = 5;
    config.est.max_steps = 400;
    bounds::BoundValue est = bounds::tight_lower(DecompositionSpec{}, config);
    CHECK(std::abs(est.bits - 0.5) < 0.05);
    CHECK(est.estimates.count("S_A1") == 1);
    CHECK(est.estimates.count("S_A3R3") == 1);
}

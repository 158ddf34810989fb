// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only if all pass.
// argv[1] is the path to the command-line binary (used by the determinism
// criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quib/bounds.hpp"
#include "quib/estimator.hpp"
#include "quib/experiments.hpp"
#include "quib/generators.hpp"
#include "quib/io.hpp"
#include "quib/state.hpp"

using namespace quib;
namespace fs = std::filesystem;

namespace {

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw CriterionFailure(detail);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// (U (x) W (x) I) |psi> on registers (A, B, R); the alignment unitaries are
// applied locally so recovered classes can be re-checked for symmetry.
PureState apply_pair(const PureState& psi, const Eigen::MatrixXcd& u,
                     const Eigen::MatrixXcd& w) {
    const RegisterLayout& layout = psi.layout();
    const long da = layout.dim_of("A");
    const long db = layout.dim_of("B");
    const long dr = layout.dim_of("R");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(layout.total_dim());
    for (long ap = 0; ap < da; ++ap)
        for (long bp = 0; bp < db; ++bp)
            for (long r = 0; r < dr; ++r) {
                Cx acc = 0.0;
                for (long a = 0; a < da; ++a)
                    for (long b = 0; b < db; ++b)
                        acc += u(ap, a) * w(bp, b) *
                               psi.amplitudes()[layout.flat({a, b, r})];
                out[layout.flat({ap, bp, r})] = acc;
            }
    return PureState(layout, std::move(out));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// ---- criteria ----

void exact_entropy_oracle() {
    for (std::uint64_t seed : {11, 12}) {
        const PureState psi = haar_random_pure(RegisterLayout({{"M", 4}}), seed);
        const double s = entropy_exact(to_density(psi));
        require(std::abs(s) <= 1e-10, "pure state entropy " + fmt(s));
    }
    for (long d : {2L, 3L, 4L, 6L, 8L, 16L}) {
        DensityMatrix mixed(RegisterLayout({{"M", d}}),
                            Eigen::MatrixXcd::Identity(d, d) / double(d));
        const double s = entropy_exact(mixed);
        require(std::abs(s - std::log2(double(d))) <= 1e-10,
                "maximally mixed d=" + std::to_string(d) + " entropy " + fmt(s));
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 0.5;
    m(1, 1) = 0.25;
    m(2, 2) = 0.25;
    DensityMatrix rho(RegisterLayout({{"M", 3}}), std::move(m));
    const double s = entropy_exact(rho);
    require(std::abs(s - 1.5) <= 1e-10, "diag(.5,.25,.25) entropy " + fmt(s));
}

void cost_dominates_entropy() {
    int violations = 0;
    double worst = 1e300;
    for (int i = 0; i < 200; ++i) {
        const long d = std::vector<long>{2, 4, 8}[i % 3];
        std::mt19937_64 rng(900 + i);
        const int rank = 1 + int(rng() % std::uint64_t(d));
        const DensityMatrix rho = random_density(d, rank, 900 + i);

        ansatz::AnsatzSpec spec{int(std::lround(std::log2(double(d)))), 2};
        std::uniform_real_distribution<double> angle(-M_PI, M_PI);
        std::normal_distribution<double> logit(0.0, 1.0);
        std::uniform_real_distribution<double> penalty(0.5, 25.0);
        Eigen::VectorXd theta(spec.param_count());
        for (long k = 0; k < theta.size(); ++k) theta[k] = angle(rng);
        Eigen::VectorXd w(rank);
        for (int k = 0; k < rank; ++k) w[k] = logit(rng);
        const double c = penalty(rng);

        const double f = estimator::cost(rho, spec, theta, w, c);
        const double floor = entropy_exact(rho, LogBase::nats);
        worst = std::min(worst, f - floor);
        if (f < floor - 1e-9) ++violations;
    }
    require(violations == 0, std::to_string(violations) +
                                 " violations, worst margin " + fmt(worst));
}

void gradients_match_finite_differences() {
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const long d = (i % 2 == 0) ? 2 : 4;
        std::mt19937_64 rng(1300 + i);
        const int rank = 1 + int(rng() % std::uint64_t(d));
        const DensityMatrix rho = random_density(d, rank, 1300 + i);

        ansatz::AnsatzSpec spec{int(std::lround(std::log2(double(d)))), 2};
        std::uniform_real_distribution<double> angle(-M_PI, M_PI);
        std::normal_distribution<double> logit(0.0, 1.0);
        Eigen::VectorXd theta(spec.param_count());
        for (long k = 0; k < theta.size(); ++k) theta[k] = angle(rng);
        Eigen::VectorXd w(rank);
        for (int k = 0; k < rank; ++k) w[k] = logit(rng);
        const double c = 3.0 + double(i % 5);

        const estimator::Gradient g = estimator::gradient(rho, spec, theta, w, c);
        Eigen::VectorXd analytic(theta.size() + w.size());
        analytic << g.d_theta, g.d_w;
        Eigen::VectorXd numeric(analytic.size());
        for (long k = 0; k < theta.size(); ++k) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[k] += h;
            tm[k] -= h;
            numeric[k] = (estimator::cost(rho, spec, tp, w, c) -
                          estimator::cost(rho, spec, tm, w, c)) /
                         (2 * h);
        }
        for (long k = 0; k < w.size(); ++k) {
            Eigen::VectorXd wp = w, wm = w;
            wp[k] += h;
            wm[k] -= h;
            numeric[theta.size() + k] = (estimator::cost(rho, spec, theta, wp, c) -
                                         estimator::cost(rho, spec, theta, wm, c)) /
                                        (2 * h);
        }
        const double rel =
            (analytic - numeric).norm() / std::max(numeric.norm(), 1e-12);
        worst = std::max(worst, rel);
    }
    require(worst <= 1e-4, "worst relative error " + fmt(worst));
}

void estimator_reaches_oracle() {
    double worst4 = 0.0, worst16 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_density(4, 2, 2000 + i);
        estimator::EstimatorConfig cfg;
        cfg.max_steps = 500;
        cfg.seed = 2000 + i;
        const estimator::EntropyEstimate est = estimator::estimate_entropy(rho, cfg);
        require(est.steps_used <= 500, "d=4 used too many steps");
        worst4 = std::max(worst4,
                          std::abs(est.value_bits - entropy_exact(rho)));
    }
    require(worst4 <= 0.05, "d=4 worst gap " + fmt(worst4) + " bits");
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_density(16, 2, 2100 + i);
        estimator::EstimatorConfig cfg;
        cfg.max_steps = 1000;
        cfg.seed = 2100 + i;
        const estimator::EntropyEstimate est = estimator::estimate_entropy(rho, cfg);
        require(est.steps_used <= 1000, "d=16 used too many steps");
        worst16 = std::max(worst16,
                           std::abs(est.value_bits - entropy_exact(rho)));
    }
    require(worst16 <= 0.1, "d=16 worst gap " + fmt(worst16) + " bits");
}

void reproduce_traces_stabilize() {
    io::RunConfig cfg;
    cfg.steps = 750;
    for (int size : {4, 6}) {
        const experiments::ExperimentSummary s =
            experiments::run_reproduce("loose-upper", size, cfg);
        require(s.stabilization_step_002 >= 0 && s.stabilization_step_002 <= 500,
                "loose-upper size " + std::to_string(size) + " stabilizes at step " +
                    std::to_string(s.stabilization_step_002));
        require(s.gap_bits <= 0.1, "loose-upper size " + std::to_string(size) +
                                       " final gap " + fmt(s.gap_bits) + " bits");
    }
    const experiments::ExperimentSummary s =
        experiments::run_reproduce("loose-lower", 4, cfg);
    require(s.stabilization_step_002 >= 0 && s.stabilization_step_002 <= 250,
            "loose-lower size 4 stabilizes at step " +
                std::to_string(s.stabilization_step_002));
}

void common_subspace_recovery() {
    for (int i = 0; i < 10; ++i) {
        const PureState psi = planted_common_subspace_state(1, 1, 2, 0.5, 4000 + i);
        const bounds::CommonSubspace cs = bounds::find_common_subspace(psi);
        bool has_planted = false;
        for (int idx : cs.indices) has_planted |= (idx == 0);
        require(has_planted, "instance " + std::to_string(i) +
                                 " misses the planted index");

        // every recovered index must sit in a class that is genuinely
        // exchange symmetric after alignment
        const PureState aligned = apply_pair(psi, cs.align_u, cs.align_w);
        const auto classes = bounds::nonzero_classes(aligned);
        for (int idx : cs.indices) {
            bool verified = false;
            for (const auto& cls : classes) {
                bool member = false;
                for (int a : cls) member |= (a == idx);
                if (!member) continue;
                bool inside = true;
                for (int a : cls) {
                    bool in_recovered = false;
                    for (int b : cs.indices) in_recovered |= (a == b);
                    inside &= in_recovered;
                }
                verified = inside && bounds::class_symmetry_test(aligned, cls);
                break;
            }
            require(verified, "instance " + std::to_string(i) + " index " +
                                  std::to_string(idx) + " is not symmetric");
        }

        bounds::BoundConfig oracle;
        const bounds::TightUpperResult tu = bounds::tight_upper(psi, cs, oracle);
        const double s_ab = entropy_exact(reduce(psi, {"A", "B"}));
        require(tu.u_bits <= s_ab + 1e-9,
                "instance " + std::to_string(i) + " u=" + fmt(tu.u_bits) +
                    " exceeds S(AB)=" + fmt(s_ab));

        bounds::BoundConfig est;
        est.mode = bounds::Mode::estimator;
        est.est.seed = 4100 + i;
        est.est.max_steps = 400;
        const bounds::TightUpperResult te =
            bounds::tight_upper(psi, std::nullopt, est);
        require(std::abs(te.u_bits - tu.u_bits) <= 0.1,
                "instance " + std::to_string(i) + " estimator u=" + fmt(te.u_bits) +
                    " vs oracle " + fmt(tu.u_bits));
    }

    // analytic anchors, oracle mode
    bounds::BoundConfig oracle;
    const PureState psi = planted_common_subspace_state(1, 1, 2, 0.5, 4242);
    const bounds::TightUpperResult empty =
        bounds::tight_upper(psi, bounds::CommonSubspace{}, oracle);
    const double s_ab = entropy_exact(reduce(psi, {"A", "B"}));
    require(std::abs(empty.u_bits - s_ab) <= 1e-9,
            "empty subspace u=" + fmt(empty.u_bits) + " vs S(AB)=" + fmt(s_ab));

    const PureState sym = planted_common_subspace_state(1, 2, 2, 0.5, 4243);
    const bounds::TightUpperResult full =
        bounds::tight_upper(sym, std::nullopt, oracle);
    require(std::abs(full.u_bits) <= 1e-9,
            "fully symmetric state u=" + fmt(full.u_bits));
}

void decomposition_lower_bound() {
    for (int i = 0; i < 10; ++i) {
        std::mt19937_64 rng(5000 + i);
        std::normal_distribution<double> g(0.0, 1.0);
        DecompositionSpec spec;
        double sq = 0.0;
        for (double& c : spec.c) {
            c = std::abs(g(rng));
            sq += c * c;
        }
        for (double& c : spec.c) c /= std::sqrt(sq);

        bounds::BoundConfig oracle;
        const bounds::BoundValue l = bounds::tight_lower(spec, oracle);
        const double expected = spec.c[0] * spec.c[0] + spec.c[1] * spec.c[1];
        require(std::abs(l.bits - expected) <= 1e-9,
                "instance " + std::to_string(i) + " oracle l=" + fmt(l.bits) +
                    " expected " + fmt(expected));

        bounds::BoundConfig est;
        est.mode = bounds::Mode::estimator;
        est.est.seed = 5100 + i;
        est.est.max_steps = 800;
        const bounds::BoundValue le = bounds::tight_lower(spec, est);
        require(std::abs(le.bits - l.bits) <= 0.05,
                "instance " + std::to_string(i) + " estimator l=" + fmt(le.bits) +
                    " vs oracle " + fmt(l.bits));

        const bounds::TightUpperResult u =
            bounds::tight_upper(decomposable_state(spec), std::nullopt, oracle);
        require(l.bits <= u.bits + 1e-6,
                "instance " + std::to_string(i) + " l=" + fmt(l.bits) +
                    " above u=" + fmt(u.bits));
    }
}

void entropy_difference_bounded() {
    const std::vector<std::vector<long>> dims = {
        {2, 2, 2}, {2, 3, 2}, {3, 2, 4}, {4, 4, 2}, {2, 2, 8}};
    for (int i = 0; i < 100; ++i) {
        const auto& d = dims[i % dims.size()];
        const RegisterLayout layout({{"A", d[0]}, {"B", d[1]}, {"R", d[2]}});
        const PureState psi = haar_random_pure(layout, 6000 + i);
        const double sa = entropy_exact(reduce(psi, {"A"}));
        const double sb = entropy_exact(reduce(psi, {"B"}));
        const double sab = entropy_exact(reduce(psi, {"A", "B"}));
        require(std::abs(sa - sb) <= sab + 1e-9,
                "instance " + std::to_string(i) + ": |" + fmt(sa) + " - " + fmt(sb) +
                    "| > " + fmt(sab));
    }
}

void seeded_runs_are_byte_identical(const std::string& cli) {
    require(!cli.empty(), "path to the command-line binary was not supplied");
    const fs::path tmp =
        fs::temp_directory_path() /
        ("quib_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(tmp);
    struct Cleanup {
        fs::path p;
        ~Cleanup() { fs::remove_all(p); }
    } cleanup{tmp};

    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        require(status == 0, "command failed: " + cmd);
    };
    auto path = [&](const std::string& name) { return (tmp / name).string(); };

    // identical commands run twice; pass-1 outputs are set aside, then
    // compared byte for byte against pass 2
    const std::vector<std::string> outputs = {"rep.json", "rep.csv", "gen.json",
                                              "est.json", "bnd.json"};
    for (int pass : {1, 2}) {
        run("gen-state --kind planted --na 1 --k 1 --nr 2 --lambda 0.5 --seed 3 "
            "--out " +
            path("gen.json"));
        run("reproduce --figure loose-lower --size 4 --steps 50 --seed 9 --out " +
            path("rep.json") + " --trace " + path("rep.csv"));
        run("estimate-entropy " + path("gen.json") +
            " --target A --steps 40 --seed 5 --oracle --out " + path("est.json"));
        run("bounds --which loose --mode oracle " + path("gen.json") + " --out " +
            path("bnd.json"));
        if (pass == 1)
            for (const auto& name : outputs)
                fs::rename(path(name), path(name + ".first"));
    }
    for (const auto& name : outputs) {
        const std::string a = slurp(path(name + ".first"));
        const std::string b = slurp(path(name));
        require(!a.empty() && a == b, name + " differs between identical runs");
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    int failures = 0;

    auto criterion = [&](const std::string& name, const std::function<void()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            fn();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        char line[512];
        if (ok)
            std::snprintf(line, sizeof line, "PASS - %s (%.1fs)", name.c_str(), secs);
        else
            std::snprintf(line, sizeof line, "FAIL - %s (%s)", name.c_str(),
                          detail.c_str());
        std::cout << line << std::endl;
        if (!ok) ++failures;
    };

    criterion("exact entropy oracle", exact_entropy_oracle);
    criterion("variational cost dominates entropy", cost_dominates_entropy);
    criterion("analytic gradients match finite differences",
              gradients_match_finite_differences);
    criterion("estimator reaches oracle accuracy", estimator_reaches_oracle);
    criterion("reproduce traces stabilize on the oracle", reproduce_traces_stabilize);
    criterion("common subspace recovery and conditional bound",
              common_subspace_recovery);
    criterion("decomposition lower bound", decomposition_lower_bound);
    criterion("entropy difference bounded by joint entropy",
              entropy_difference_bounded);
    criterion("seeded runs are byte-identical",
              [&] { seeded_runs_are_byte_identical(cli); });

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}

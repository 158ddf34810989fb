#include "quib/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace quib {
namespace bounds {

namespace {

constexpr double kSymmetryTol = 1e-9;

// One-sided local action: (1 x ... x M x ... x 1) v on the register at pos.
Eigen::VectorXcd apply_local(const RegisterLayout& layout, const Eigen::VectorXcd& v,
                             int pos, const Eigen::MatrixXcd& m) {
    const int dim = layout.at(pos).dim;
    const long stride = layout.stride(pos);
    if (m.rows() != dim || m.cols() != dim)
        throw DimensionError("local operator does not match register dimension");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (long i = 0; i < v.size(); ++i) {
        const int digit = static_cast<int>(i / stride) % dim;
        const long base = i - static_cast<long>(digit) * stride;
        Cx acc(0, 0);
        for (int j = 0; j < dim; ++j) acc += m(digit, j) * v[base + j * stride];
        out[i] = acc;
    }
    return out;
}

Eigen::VectorXcd exchange_raw(const RegisterLayout& layout, const Eigen::VectorXcd& v) {
    const int pa = layout.position("A"), pb = layout.position("B");
    const int dim = layout.at(pa).dim;
    if (layout.at(pb).dim != dim)
        throw DimensionError("exchange requires equal A and B dimensions");
    const long sa = layout.stride(pa), sb = layout.stride(pb);
    Eigen::VectorXcd out(v.size());
    for (long i = 0; i < v.size(); ++i) {
        const int da = static_cast<int>(i / sa) % dim;
        const int db = static_cast<int>(i / sb) % dim;
        out[i + (db - da) * sa + (da - db) * sb] = v[i];
    }
    return out;
}

// Projection onto (block x block) of the A,B digits, other registers intact.
Eigen::VectorXcd project_block(const PureState& psi, const std::set<int>& block) {
    const auto& layout = psi.layout();
    const int pa = layout.position("A"), pb = layout.position("B");
    const long sa = layout.stride(pa), sb = layout.stride(pb);
    const int da = layout.at(pa).dim, db = layout.at(pb).dim;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.dim());
    for (long i = 0; i < psi.dim(); ++i) {
        const int a = static_cast<int>(i / sa) % da;
        const int b = static_cast<int>(i / sb) % db;
        if (block.count(a) && block.count(b)) out[i] = psi.amplitudes()[i];
    }
    return out;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

double symmetry_fidelity(const PureState& psi, const std::vector<int>& cls,
                         double coeff_tol, bool& nonzero) {
    const std::set<int> block(cls.begin(), cls.end());
    const Eigen::VectorXcd proj = project_block(psi, block);
    const double n2 = proj.squaredNorm();
    nonzero = n2 >= coeff_tol;
    if (!nonzero) return 0.0;
    const Eigen::VectorXcd exchanged = exchange_raw(psi.layout(), proj);
    return std::abs(proj.dot(exchanged)) / n2;
}

estimator::EstimatorConfig seeded(const BoundConfig& config, const std::string& tag) {
    estimator::EstimatorConfig est = config.est;
    est.seed = subseed(config.est.seed, tag);
    return est;
}

// Exact or variational entropy of a reduced state, recorded under `tag`.
double entropy_term(const PureState& psi, const std::vector<std::string>& keep,
                    const std::string& tag, const BoundConfig& config,
                    std::map<std::string, estimator::EntropyEstimate>& estimates) {
    const DensityMatrix rho = reduce(psi, keep);
    if (config.mode == Mode::oracle) return entropy_exact(rho, LogBase::bits);
    estimator::EntropyEstimate est = estimator::estimate_entropy(rho, seeded(config, tag));
    estimates[tag] = est;
    return est.value_bits;
}

CommonSubspace find_common_subspace_ex(const PureState& psi, double align_tol,
                                       double coeff_tol);

}  // namespace

AlignResult spectral_align(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                           double tol) {
    if (rho_a.dim() != rho_b.dim())
        throw DimensionError("spectral_align requires equal dimensions");
    const Spectrum sa = eigensystem(rho_a);
    const Spectrum sb = eigensystem(rho_b);
    const long d = rho_a.dim();

    // Greedy two-pointer matching over the descending spectra; each
    // eigenvalue is matched at most once.
    std::vector<int> ma, mb;
    std::vector<bool> used_a(d, false), used_b(d, false);
    long i = 0, j = 0;
    while (i < d && j < d) {
        const double diff = sa.eigenvalues[i] - sb.eigenvalues[j];
        if (std::abs(diff) <= tol) {
            ma.push_back(static_cast<int>(i));
            mb.push_back(static_cast<int>(j));
            used_a[i] = used_b[j] = true;
            ++i;
            ++j;
        } else if (diff > 0) {
            ++i;  // later b eigenvalues are only smaller
        } else {
            ++j;
        }
    }

    std::vector<int> order_a = ma, order_b = mb;
    for (long k = 0; k < d; ++k) {
        if (!used_a[k]) order_a.push_back(static_cast<int>(k));
        if (!used_b[k]) order_b.push_back(static_cast<int>(k));
    }

    AlignResult out;
    out.matched = static_cast<int>(ma.size());
    out.u.resize(d, d);
    out.w.resize(d, d);
    for (long p = 0; p < d; ++p) {
        out.u.row(p) = sa.eigenvectors.col(order_a[p]).adjoint();
        out.w.row(p) = sb.eigenvectors.col(order_b[p]).adjoint();
    }
    return out;
}

std::vector<std::vector<int>> nonzero_classes(const PureState& psi, double tol) {
    const auto& layout = psi.layout();
    const int pa = layout.position("A"), pb = layout.position("B");
    const int da = layout.at(pa).dim;
    if (layout.at(pb).dim != da)
        throw DimensionError("nonzero_classes requires equal A and B dimensions");
    const long sa = layout.stride(pa), sb = layout.stride(pb);

    DisjointSets sets(da);
    for (long i = 0; i < psi.dim(); ++i) {
        if (std::abs(psi.amplitudes()[i]) <= tol) continue;
        const int a = static_cast<int>(i / sa) % da;
        const int b = static_cast<int>(i / sb) % da;
        sets.unite(a, b);
    }

    std::map<int, std::vector<int>> by_root;
    for (int a = 0; a < da; ++a) by_root[sets.find(a)].push_back(a);
    std::vector<std::vector<int>> classes;
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        classes.push_back(std::move(members));
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

bool class_symmetry_test(const PureState& psi, const std::vector<int>& cls,
                         double coeff_tol) {
    bool nonzero = false;
    const double fidelity = symmetry_fidelity(psi, cls, coeff_tol, nonzero);
    return nonzero && fidelity >= 1.0 - kSymmetryTol;
}

bool class_symmetry_test_sampled(const PureState& psi, const std::vector<int>& cls,
                                 int shots, double threshold, std::uint64_t seed,
                                 double coeff_tol) {
    if (shots < 1) throw std::invalid_argument("swap test needs at least one shot");
    bool nonzero = false;
    const double fidelity = symmetry_fidelity(psi, cls, coeff_tol, nonzero);
    if (!nonzero) return false;
    const double p_accept = 0.5 + 0.5 * fidelity * fidelity;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution accept(p_accept);
    int accepted = 0;
    for (int s = 0; s < shots; ++s)
        if (accept(rng)) ++accepted;
    return static_cast<double>(accepted) / shots >= threshold;
}

namespace {

CommonSubspace find_common_subspace_ex(const PureState& psi, double align_tol,
                                       double coeff_tol) {
    const DensityMatrix rho_a = reduce(psi, {"A"});
    const DensityMatrix rho_b = reduce(psi, {"B"});
    const AlignResult align = spectral_align(rho_a, rho_b, align_tol);

    const auto& layout = psi.layout();
    Eigen::VectorXcd v = apply_local(layout, psi.amplitudes(), layout.position("A"), align.u);
    v = apply_local(layout, v, layout.position("B"), align.w);
    const PureState aligned(layout, std::move(v));

    CommonSubspace out;
    out.align_u = align.u;
    out.align_w = align.w;
    for (const auto& cls : nonzero_classes(aligned, coeff_tol))
        if (class_symmetry_test(aligned, cls, coeff_tol))
            out.indices.insert(out.indices.end(), cls.begin(), cls.end());
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

}  // namespace

CommonSubspace find_common_subspace(const PureState& psi, double tol) {
    return find_common_subspace_ex(psi, tol, tol);
}

PureState build_stretched(const PureState& psi_aligned, const std::vector<int>& indices,
                          int x_index, int y_index) {
    const auto& layout = psi_aligned.layout();
    const int da = layout.dim_of("A");
    const int db = layout.dim_of("B");
    const int dr = layout.dim_of("R");
    if (da != db) throw DimensionError("stretched state requires equal A and B dimensions");
    if (layout.size() != 3)
        throw DimensionError("stretched state expects registers (A, B, R)");

    const std::set<int> cset(indices.begin(), indices.end());
    if (static_cast<int>(cset.size()) == da)
        throw DimensionError("stretched state undefined for the full common subspace");
    if (x_index < 0 || x_index >= da || cset.count(x_index))
        throw std::invalid_argument("x index must lie outside the common subspace");
    if (y_index < 0 || y_index >= da || (!cset.empty() && !cset.count(y_index)))
        throw std::invalid_argument("y index must lie inside the common subspace");

    std::set<int> complement;
    for (int a = 0; a < da; ++a)
        if (!cset.count(a)) complement.insert(a);

    const Eigen::VectorXcd common = project_block(psi_aligned, cset);
    const Eigen::VectorXcd uncommon = project_block(psi_aligned, complement);

    RegisterLayout out_layout({{"A", da}, {"B", da}, {"R", dr}, {"Ap", da}, {"Bp", da}});
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(out_layout.total_dim());
    for (long i = 0; i < psi_aligned.dim(); ++i) {
        const auto digits = layout.digits(i);
        const int a = digits[layout.position("A")];
        const int b = digits[layout.position("B")];
        const int r = digits[layout.position("R")];
        if (common[i] != Cx(0, 0))
            amps[out_layout.flat({a, b, r, x_index, x_index})] += common[i];
        if (uncommon[i] != Cx(0, 0))
            amps[out_layout.flat({y_index, y_index, r, a, b})] += uncommon[i];
    }
    const double norm = amps.norm();
    if (norm <= 0.0)
        throw std::invalid_argument("stretched state has no support");
    amps /= norm;
    return PureState(std::move(out_layout), std::move(amps));
}

BoundValue loose_upper(const PureState& psi, const BoundConfig& config) {
    BoundValue out;
    out.bits = entropy_term(psi, {"A", "B"}, "S_AB", config, out.estimates);
    return out;
}

BoundValue loose_lower(const PureState& psi, const BoundConfig& config) {
    BoundValue out;
    const double sa = entropy_term(psi, {"A"}, "S_A", config, out.estimates);
    const double sb = entropy_term(psi, {"B"}, "S_B", config, out.estimates);
    out.bits = std::abs(sb - sa);
    return out;
}

TightUpperResult tight_upper(const PureState& psi,
                             const std::optional<CommonSubspace>& subspace,
                             const BoundConfig& config) {
    TightUpperResult out;
    out.subspace = subspace ? *subspace
                            : find_common_subspace_ex(psi, config.align_tol,
                                                      config.coeff_tol);

    BoundValue loose = loose_upper(psi, config);
    out.loose_upper_bits = loose.bits;
    out.estimates = std::move(loose.estimates);

    const int da = psi.layout().dim_of("A");
    if (static_cast<int>(out.subspace.indices.size()) == da) {
        // Full common subspace: nothing needs exchanging and the stretched
        // construction degenerates; S(R|A) evaluates to S(B) - S(A).
        const double sa = entropy_term(psi, {"A"}, "S_A", config, out.estimates);
        const double sb = entropy_term(psi, {"B"}, "S_B", config, out.estimates);
        out.u_bits = sb - sa;
    } else {
        const auto& layout = psi.layout();
        if (out.subspace.align_u.size() == 0)
            out.subspace.align_u = Eigen::MatrixXcd::Identity(da, da);
        if (out.subspace.align_w.size() == 0)
            out.subspace.align_w = Eigen::MatrixXcd::Identity(da, da);
        Eigen::VectorXcd v = apply_local(layout, psi.amplitudes(), layout.position("A"),
                                         out.subspace.align_u);
        v = apply_local(layout, v, layout.position("B"), out.subspace.align_w);
        const PureState aligned(layout, std::move(v));

        const std::set<int> cset(out.subspace.indices.begin(), out.subspace.indices.end());
        int x_index = 0;
        while (cset.count(x_index)) ++x_index;
        const int y_index = cset.empty() ? 0 : *cset.begin();
        const PureState stretched = build_stretched(aligned, out.subspace.indices,
                                                    x_index, y_index);

        std::vector<std::string> cond = {"A"};
        if (config.condition_on_ancilla) cond.push_back("Ap");
        std::vector<std::string> joint = {"R"};
        joint.insert(joint.end(), cond.begin(), cond.end());

        const double s_joint = entropy_term(stretched, joint, "S_RA", config, out.estimates);
        const double s_cond = entropy_term(stretched, cond, "S_A", config, out.estimates);
        out.u_bits = s_joint - s_cond;
    }

    out.bits = std::min(out.u_bits, out.loose_upper_bits);
    return out;
}

RatesReport decomposition_rates(const DecompositionSpec& spec) {
    spec.validate();
    RatesReport r;
    r.r1 = spec.c[0] * spec.c[0];
    r.r2 = spec.c[1] * spec.c[1];
    r.r3 = spec.c[2] * spec.c[2];
    double h = 0.0;
    for (double ci : spec.c) {
        const double p = ci * ci;
        if (p > 0.0) h -= p * std::log2(p);
    }
    r.r4 = h;
    return r;
}

BoundValue tight_lower(const DecompositionSpec& spec, const BoundConfig& config) {
    const RatesReport rates = decomposition_rates(spec);

    const double inv = 1.0 / std::sqrt(2.0);
    RegisterLayout l1({{"A1", 2}, {"R1", 2}});
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
    e1[l1.flat({0, 0})] = inv;
    e1[l1.flat({1, 1})] = inv;
    const PureState epr_ar(l1, std::move(e1));

    RegisterLayout l2({{"B1", 2}, {"R2", 2}});
    Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(4);
    e2[l2.flat({0, 0})] = inv;
    e2[l2.flat({1, 1})] = inv;
    const PureState epr_br(l2, std::move(e2));

    RegisterLayout l4({{"A3", 2}, {"B3", 2}, {"R3", 2}});
    Eigen::VectorXcd e4 = Eigen::VectorXcd::Zero(8);
    e4[l4.flat({0, 0, 0})] = inv;
    e4[l4.flat({1, 1, 1})] = inv;
    const PureState ghz(l4, std::move(e4));

    BoundValue out;
    const double s_a1 = entropy_term(epr_ar, {"A1"}, "S_A1", config, out.estimates);
    const double s_b1 = entropy_term(epr_br, {"B1"}, "S_B1", config, out.estimates);
    const double s_b3r3 = entropy_term(ghz, {"B3", "R3"}, "S_B3R3", config, out.estimates);
    const double s_a3r3 = entropy_term(ghz, {"A3", "R3"}, "S_A3R3", config, out.estimates);

    out.bits = rates.r1 * s_a1 + rates.r2 * s_b1 + rates.r4 * (s_b3r3 - s_a3r3);
    return out;
}

}  // namespace bounds
}  // namespace quib

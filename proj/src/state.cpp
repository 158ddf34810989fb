#include "quib/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quib {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kHermTol = 1e-10;
constexpr double kEigenClampFloor = -1e-10;
constexpr double kRankTol = 1e-10;

double log_in(double x, LogBase base) {
    return base == LogBase::bits ? std::log2(x) : std::log(x);
}

// Offsets of every combination of the registers at `positions`.
std::vector<long> block_offsets(const RegisterLayout& layout,
                                const std::vector<int>& positions) {
    long count = 1;
    for (int p : positions) count *= layout.at(p).dim;
    std::vector<long> offsets(count, 0);
    long repeat = 1;
    for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
        const int dim = layout.at(*it).dim;
        const long stride = layout.stride(*it);
        for (long i = 0; i < count; ++i)
            offsets[i] += ((i / repeat) % dim) * stride;
        repeat *= dim;
    }
    return offsets;
}

struct SplitPositions {
    std::vector<int> keep;
    std::vector<int> trace;
};

SplitPositions split_positions(const RegisterLayout& layout,
                               const std::vector<std::string>& keep) {
    if (keep.empty()) throw DimensionError("must keep at least one register");
    std::vector<bool> kept(layout.size(), false);
    for (const auto& name : keep) {
        int p = layout.position(name);
        if (kept[p]) throw DimensionError("register listed twice: " + name);
        kept[p] = true;
    }
    SplitPositions out;
    for (int i = 0; i < layout.size(); ++i)
        (kept[i] ? out.keep : out.trace).push_back(i);
    return out;
}

RegisterLayout sub_layout(const RegisterLayout& layout, const std::vector<int>& positions) {
    std::vector<Register> regs;
    regs.reserve(positions.size());
    for (int p : positions) regs.push_back(layout.at(p));
    return RegisterLayout(std::move(regs));
}

}  // namespace

PureState::PureState(RegisterLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.total_dim())
        throw DimensionError("amplitude count does not match layout dimension");
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > kNormTol)
        throw std::invalid_argument("pure state is not normalized");
}

DensityMatrix::DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix,
                             std::optional<int> known_rank)
    : layout_(std::move(layout)), mat_(std::move(matrix)), known_rank_(known_rank) {
    if (mat_.rows() != mat_.cols() || mat_.rows() != layout_.total_dim())
        throw DimensionError("matrix shape does not match layout dimension");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > kNormTol ||
        std::abs(mat_.trace().imag()) > kNormTol)
        throw std::invalid_argument("density matrix trace is not 1");
    if (known_rank_ && (*known_rank_ < 1 || *known_rank_ > mat_.rows()))
        throw std::invalid_argument("known rank out of range");
}

void DensityMatrix::validate(double psd_tol) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -psd_tol)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

PureState tensor_product(const PureState& a, const PureState& b) {
    RegisterLayout layout = concat(a.layout(), b.layout());
    const long db = b.dim();
    Eigen::VectorXcd amps(a.dim() * db);
    for (long i = 0; i < a.dim(); ++i)
        amps.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
    return PureState(std::move(layout), std::move(amps));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    RegisterLayout layout = concat(a.layout(), b.layout());
    const long da = a.dim(), db = b.dim();
    Eigen::MatrixXcd m(da * db, da * db);
    for (long i = 0; i < da; ++i)
        for (long j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    std::optional<int> rank;
    if (a.known_rank() && b.known_rank()) rank = *a.known_rank() * *b.known_rank();
    return DensityMatrix(std::move(layout), std::move(m), rank);
}

DensityMatrix to_density(const PureState& psi) {
    return DensityMatrix(psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint(), 1);
}

DensityMatrix reduce(const PureState& psi, const std::vector<std::string>& keep) {
    const auto& layout = psi.layout();
    const auto split = split_positions(layout, keep);
    const auto keep_off = block_offsets(layout, split.keep);
    const auto trace_off = block_offsets(layout, split.trace);
    const long dk = static_cast<long>(keep_off.size());
    const auto& v = psi.amplitudes();

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    for (long i = 0; i < dk; ++i) {
        for (long j = 0; j <= i; ++j) {
            Cx acc(0, 0);
            for (long t : trace_off) acc += v[keep_off[i] + t] * std::conj(v[keep_off[j] + t]);
            rho(i, j) = acc;
            rho(j, i) = std::conj(acc);
        }
    }
    return DensityMatrix(sub_layout(layout, split.keep), std::move(rho));
}

DensityMatrix reduce(const DensityMatrix& dm, const std::vector<std::string>& keep) {
    const auto& layout = dm.layout();
    const auto split = split_positions(layout, keep);
    const auto keep_off = block_offsets(layout, split.keep);
    const auto trace_off = block_offsets(layout, split.trace);
    const long dk = static_cast<long>(keep_off.size());
    const auto& m = dm.matrix();

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    for (long i = 0; i < dk; ++i) {
        for (long j = 0; j <= i; ++j) {
            Cx acc(0, 0);
            for (long t : trace_off) acc += m(keep_off[i] + t, keep_off[j] + t);
            rho(i, j) = acc;
            rho(j, i) = std::conj(acc);
        }
    }
    // Exact Hermitian symmetrization of the diagonal.
    for (long i = 0; i < dk; ++i) rho(i, i) = Cx(rho(i, i).real(), 0.0);
    return DensityMatrix(sub_layout(layout, split.keep), std::move(rho));
}

Spectrum eigensystem(const DensityMatrix& rho) {
    const auto& m = rho.matrix();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("eigensystem: input is not Hermitian");
    Eigen::MatrixXcd sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");

    const long d = m.rows();
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ev[a] > ev[b]; });

    Spectrum s;
    s.eigenvalues.resize(d);
    s.eigenvectors.resize(d, d);
    for (long i = 0; i < d; ++i) {
        s.eigenvalues[i] = ev[order[i]];
        s.eigenvectors.col(i) = solver.eigenvectors().col(order[i]);
    }
    return s;
}

double entropy_of_spectrum(const Eigen::VectorXd& lambda, LogBase base) {
    double s = 0.0;
    for (long i = 0; i < lambda.size(); ++i) {
        double x = lambda[i];
        if (x < 0.0) {
            if (x < kEigenClampFloor)
                throw std::invalid_argument("eigenvalue below clamp floor");
            x = 0.0;
        }
        if (x > 0.0) s -= x * log_in(x, base);
    }
    return std::max(s, 0.0);
}

double entropy_exact(const DensityMatrix& rho, LogBase base) {
    return entropy_of_spectrum(eigensystem(rho).eigenvalues, base);
}

double conditional_entropy_exact(const PureState& psi, const std::vector<std::string>& x,
                                 const std::vector<std::string>& y, LogBase base) {
    for (const auto& n : x)
        if (std::find(y.begin(), y.end(), n) != y.end())
            throw DimensionError("conditional entropy: register sets overlap at " + n);
    std::vector<std::string> xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    return entropy_exact(reduce(psi, xy), base) - entropy_exact(reduce(psi, y), base);
}

Cx overlap(const PureState& x, const PureState& y) {
    if (!x.layout().same_dims(y.layout()))
        throw DimensionError("overlap: layouts have different dimensions");
    return x.amplitudes().dot(y.amplitudes());
}

PureState exchange_ab(const PureState& psi, const std::string& a, const std::string& b) {
    const auto& layout = psi.layout();
    const int pa = layout.position(a), pb = layout.position(b);
    if (layout.at(pa).dim != layout.at(pb).dim)
        throw DimensionError("exchange: registers have different dimensions");
    const long sa = layout.stride(pa), sb = layout.stride(pb);
    const int dim = layout.at(pa).dim;

    Eigen::VectorXcd out(psi.dim());
    for (long idx = 0; idx < psi.dim(); ++idx) {
        const int da = static_cast<int>(idx / sa) % dim;
        const int db = static_cast<int>(idx / sb) % dim;
        const long swapped = idx + (db - da) * sa + (da - db) * sb;
        out[swapped] = psi.amplitudes()[idx];
    }
    return PureState(layout, std::move(out));
}

int numerical_rank(const DensityMatrix& rho, double tol) {
    const auto spec = eigensystem(rho);
    int r = 0;
    for (long i = 0; i < spec.eigenvalues.size(); ++i)
        if (spec.eigenvalues[i] > tol) ++r;
    return std::max(r, 1);
}

PureState purify(const DensityMatrix& rho, const std::string& ref_name) {
    const auto spec = eigensystem(rho);
    int r = rho.known_rank() ? *rho.known_rank() : 0;
    if (r == 0) {
        for (long i = 0; i < spec.eigenvalues.size(); ++i)
            if (spec.eigenvalues[i] > kRankTol) r = static_cast<int>(i) + 1;
        r = std::max(r, 1);
    }

    std::vector<Register> regs = rho.layout().registers();
    regs.push_back({ref_name, r});
    RegisterLayout layout(std::move(regs));

    const long d = rho.dim();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d * r);
    for (int k = 0; k < r; ++k) {
        const double lam = std::max(spec.eigenvalues[k], 0.0);
        if (lam == 0.0) continue;
        Eigen::VectorXcd col = spec.eigenvectors.col(k);
        // Deterministic phase: largest-magnitude entry made real positive.
        long arg_max = 0;
        col.cwiseAbs().maxCoeff(&arg_max);
        const Cx z = col[arg_max];
        if (std::abs(z) > 0) col *= std::conj(z) / std::abs(z);
        const double w = std::sqrt(lam);
        for (long i = 0; i < d; ++i) amps[i * r + k] = w * col[i];
    }
    amps /= amps.norm();
    return PureState(std::move(layout), std::move(amps));
}

DensityMatrix pad_to_power_of_two(const DensityMatrix& rho) {
    const long d = rho.dim();
    if (is_power_of_two(d)) return rho;
    long p = 1;
    while (p < d) p <<= 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, p);
    m.topLeftCorner(d, d) = rho.matrix();
    std::string name;
    for (const auto& r : rho.layout().registers()) name += r.name;
    return DensityMatrix(RegisterLayout({{name, static_cast<int>(p)}}), std::move(m),
                         rho.known_rank());
}

}  // namespace quib

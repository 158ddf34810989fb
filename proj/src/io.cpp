#include "quib/io.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace quib {
namespace io {

namespace {

using nlohmann::json;

json layout_json(const RegisterLayout& layout) {
    json regs = json::array();
    for (const auto& r : layout.registers()) regs.push_back({{"name", r.name}, {"dim", r.dim}});
    return regs;
}

RegisterLayout layout_from_json(const json& j) {
    if (!j.is_array()) throw IoError("state file: registers must be an array");
    std::vector<Register> regs;
    for (const auto& r : j)
        regs.push_back({r.at("name").get<std::string>(), r.at("dim").get<int>()});
    return RegisterLayout(std::move(regs));
}

json complex_list(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (long i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
    return out;
}

Eigen::VectorXcd complex_list_from_json(const json& j, long expected) {
    if (!j.is_array() || static_cast<long>(j.size()) != expected)
        throw IoError("state file: wrong number of complex entries");
    Eigen::VectorXcd v(expected);
    for (long i = 0; i < expected; ++i) {
        const auto& pair = j[i];
        if (!pair.is_array() || pair.size() != 2)
            throw IoError("state file: complex entries must be [re, im] pairs");
        v[i] = Cx(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path);
}

void save_state(const std::string& path, const PureState& psi) {
    json j;
    j["registers"] = layout_json(psi.layout());
    j["amplitudes"] = complex_list(psi.amplitudes());
    write_text_atomic(path, j.dump(2) + "\n");
}

void save_state(const std::string& path, const DensityMatrix& rho) {
    json j;
    j["registers"] = layout_json(rho.layout());
    const long d = rho.dim();
    Eigen::VectorXcd flat(d * d);
    for (long i = 0; i < d; ++i)
        for (long k = 0; k < d; ++k) flat[i * d + k] = rho.matrix()(i, k);
    j["matrix"] = complex_list(flat);
    write_text_atomic(path, j.dump(2) + "\n");
}

LoadedState load_state(const std::string& path) {
    const json j = parse_file(path);
    RegisterLayout layout = layout_from_json(j.at("registers"));
    const long d = layout.total_dim();
    if (j.contains("amplitudes")) {
        Eigen::VectorXcd amps = complex_list_from_json(j.at("amplitudes"), d);
        try {
            return PureState(std::move(layout), std::move(amps));
        } catch (const std::invalid_argument& e) {
            throw IoError(std::string("invalid state in ") + path + ": " + e.what());
        }
    }
    if (j.contains("matrix")) {
        Eigen::VectorXcd flat = complex_list_from_json(j.at("matrix"), d * d);
        Eigen::MatrixXcd m(d, d);
        for (long i = 0; i < d; ++i)
            for (long k = 0; k < d; ++k) m(i, k) = flat[i * d + k];
        try {
            DensityMatrix rho(std::move(layout), std::move(m));
            rho.validate();
            return rho;
        } catch (const std::invalid_argument& e) {
            throw IoError(std::string("invalid state in ") + path + ": " + e.what());
        }
    }
    throw IoError("state file " + path + " has neither amplitudes nor matrix");
}

std::string trace_csv(const estimator::EntropyEstimate& est) { return trace_csv(est.trace); }

std::string trace_csv(const std::vector<estimator::TraceRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "step,cost_nats,cost_bits,grad_norm\n";
    for (const auto& row : rows)
        os << row.step << ',' << row.cost_nats << ',' << row.cost_nats / std::numbers::ln2
           << ',' << row.grad_norm << '\n';
    return os.str();
}

void write_trace(const std::string& path, const estimator::EntropyEstimate& est) {
    write_text_atomic(path, trace_csv(est));
}

estimator::EstimatorConfig RunConfig::estimator_config() const {
    estimator::EstimatorConfig est;
    est.seed = seed;
    est.max_steps = steps;
    est.learning_rate = lr;
    est.layers = layers;
    est.epsilon = epsilon;
    est.rank = rank;
    est.shots = shots;
    return est;
}

std::string RunConfig::to_json() const {
    json j;
    j["seed"] = seed;
    j["steps"] = steps;
    j["lr"] = lr;
    j["layers"] = layers;
    j["epsilon"] = epsilon;
    j["rank"] = rank;
    j["shots"] = shots;
    j["format"] = format;
    return j.dump(2);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("steps")) c.steps = j["steps"].get<int>();
        if (j.contains("lr")) c.lr = j["lr"].get<double>();
        if (j.contains("layers")) c.layers = j["layers"].get<int>();
        if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
        if (j.contains("rank")) c.rank = j["rank"].get<int>();
        if (j.contains("shots")) c.shots = j["shots"].get<int>();
        if (j.contains("format")) c.format = j["format"].get<std::string>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (c.format != "json" && c.format != "csv")
        throw std::invalid_argument("config: format must be json or csv");
    return c;
}

std::string estimate_json(const estimator::EntropyEstimate& est, const RunConfig& config,
                          std::optional<double> oracle_bits) {
    json j;
    j["value_nats"] = est.value_nats;
    j["value_bits"] = est.value_bits;
    j["steps_used"] = est.steps_used;
    j["converged"] = est.converged;
    if (oracle_bits) {
        j["oracle_bits"] = *oracle_bits;
        j["abs_gap_bits"] = std::abs(est.value_bits - *oracle_bits);
    }
    j["config"] = json::parse(config.to_json());
    return j.dump(2) + "\n";
}

std::string bound_report_json(const BoundReport& report) {
    json j;
    j["mode"] = report.mode;
    j["loose_upper_bits"] =
        report.loose_upper_bits ? json(*report.loose_upper_bits) : json(nullptr);
    j["loose_lower_bits"] =
        report.loose_lower_bits ? json(*report.loose_lower_bits) : json(nullptr);
    j["tight_upper_bits"] =
        report.tight_upper_bits ? json(*report.tight_upper_bits) : json(nullptr);
    j["tight_lower_bits"] =
        report.tight_lower_bits ? json(*report.tight_lower_bits) : json(nullptr);
    j["common_subspace_indices"] = report.common_subspace_indices;
    json traces = json::object();
    for (const auto& [name, path] : report.traces) traces[name] = path;
    j["traces"] = traces;
    return j.dump(2) + "\n";
}

}  // namespace io
}  // namespace quib

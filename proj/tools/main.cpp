// Command line front end: generate states, estimate entropies, evaluate
// uncommon-information bounds, and rerun the convergence experiments.
//
// Exit codes: 0 success, 2 invalid input, 3 dimension mismatch, 4 file I/O.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quib/bounds.hpp"
#include "quib/errors.hpp"
#include "quib/estimator.hpp"
#include "quib/experiments.hpp"
#include "quib/generators.hpp"
#include "quib/io.hpp"
#include "quib/state.hpp"

namespace {

using namespace quib;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Shared run options plus the CLI11 handles needed to tell "set on the
// command line" apart from "left at its default".
struct CommonOpts {
    io::RunConfig flags;
    std::string config_path;
    CLI::Option* seed = nullptr;
    CLI::Option* steps = nullptr;
    CLI::Option* lr = nullptr;
    CLI::Option* layers = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* rank = nullptr;
    CLI::Option* shots = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* config = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    o.seed = cmd->add_option("--seed", o.flags.seed, "RNG seed");
    o.steps = cmd->add_option("--steps", o.flags.steps, "optimizer step budget");
    o.lr = cmd->add_option("--lr", o.flags.lr, "Adam learning rate");
    o.layers = cmd->add_option("--layers", o.flags.layers, "circuit layers (0 = auto)");
    o.epsilon = cmd->add_option("--epsilon", o.flags.epsilon, "target accuracy in nats");
    o.rank = cmd->add_option("--rank", o.flags.rank, "state rank (0 = auto)");
    o.shots = cmd->add_option("--shots", o.flags.shots,
                              "samples per expectation value (0 = exact)");
    o.format = cmd->add_option("--format", o.flags.format, "output format")
                   ->check(CLI::IsMember({"json", "csv"}));
    o.config = cmd->add_option("--config", o.config_path, "JSON config file");
}

std::uint64_t parse_seed_env(const char* text) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != std::string(text).size()) throw std::invalid_argument("");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("UB_DEFAULT_SEED is not an integer: ") +
                                    text);
    }
}

// Precedence: command line flag > config file field > UB_DEFAULT_SEED (seed
// only) > built-in default.
io::RunConfig resolve_config(const CommonOpts& o, int default_steps) {
    io::RunConfig cfg;
    cfg.steps = default_steps;

    nlohmann::json file_fields = nlohmann::json::object();
    if (o.config->count() > 0) {
        const std::string text = slurp(o.config_path);
        const io::RunConfig file_cfg = io::RunConfig::from_json_text(text);
        file_fields = nlohmann::json::parse(text);
        if (file_fields.contains("seed")) cfg.seed = file_cfg.seed;
        if (file_fields.contains("steps")) cfg.steps = file_cfg.steps;
        if (file_fields.contains("lr")) cfg.lr = file_cfg.lr;
        if (file_fields.contains("layers")) cfg.layers = file_cfg.layers;
        if (file_fields.contains("epsilon")) cfg.epsilon = file_cfg.epsilon;
        if (file_fields.contains("rank")) cfg.rank = file_cfg.rank;
        if (file_fields.contains("shots")) cfg.shots = file_cfg.shots;
        if (file_fields.contains("format")) cfg.format = file_cfg.format;
    }

    if (o.seed->count() == 0 && !file_fields.contains("seed")) {
        if (const char* env = std::getenv("UB_DEFAULT_SEED")) cfg.seed = parse_seed_env(env);
    }

    if (o.seed->count()) cfg.seed = o.flags.seed;
    if (o.steps->count()) cfg.steps = o.flags.steps;
    if (o.lr->count()) cfg.lr = o.flags.lr;
    if (o.layers->count()) cfg.layers = o.flags.layers;
    if (o.epsilon->count()) cfg.epsilon = o.flags.epsilon;
    if (o.rank->count()) cfg.rank = o.flags.rank;
    if (o.shots->count()) cfg.shots = o.flags.shots;
    if (o.format->count()) cfg.format = o.flags.format;
    return cfg;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        io::write_text_atomic(out_path, content);
}

DecompositionSpec spec_from(const std::vector<double>& c) {
    if (c.size() != 4)
        throw std::invalid_argument("--c expects four comma separated coefficients");
    DecompositionSpec spec;
    std::copy(c.begin(), c.end(), spec.c.begin());
    spec.validate();
    return spec;
}

std::string combined_trace_csv(const std::vector<double>& trace_bits) {
    std::ostringstream os;
    os.precision(17);
    os << "step,value_bits\n";
    for (size_t i = 0; i < trace_bits.size(); ++i) os << i << ',' << trace_bits[i] << '\n';
    return os.str();
}

std::map<std::string, std::string> write_estimate_traces(
    const std::string& dir, const std::map<std::string, estimator::EntropyEstimate>& ests) {
    std::map<std::string, std::string> paths;
    if (dir.empty()) return paths;
    for (const auto& [tag, est] : ests) {
        const std::string path = (std::filesystem::path(dir) / (tag + ".csv")).string();
        io::write_trace(path, est);
        paths[tag] = path;
    }
    return paths;
}

int cmd_gen_state(const std::string& kind, const std::vector<int>& dims, int n_a, int k,
                  int n_r, double lambda, const std::vector<double>& c,
                  const io::RunConfig& cfg, const std::string& out_path) {
    if (kind == "haar") {
        if (dims.empty() || dims.size() > 3)
            throw std::invalid_argument("--dims expects one to three dimensions");
        const std::vector<std::string> names = {"A", "B", "R"};
        std::vector<Register> regs;
        for (size_t i = 0; i < dims.size(); ++i) regs.push_back({names[i], dims[i]});
        io::save_state(out_path, haar_random_pure(RegisterLayout(regs), cfg.seed));
    } else if (kind == "planted") {
        io::save_state(out_path,
                       planted_common_subspace_state(n_a, k, n_r, lambda, cfg.seed));
    } else if (kind == "decomposable") {
        io::save_state(out_path, decomposable_state(spec_from(c)));
    } else {
        throw std::invalid_argument("unknown state kind: " + kind);
    }
    return 0;
}

int cmd_estimate_entropy(const std::string& state_path,
                         const std::vector<std::string>& target, bool with_oracle,
                         const io::RunConfig& cfg, const std::string& out_path,
                         const std::string& trace_path) {
    const io::LoadedState loaded = io::load_state(state_path);
    DensityMatrix rho = [&] {
        if (std::holds_alternative<PureState>(loaded)) {
            const PureState& psi = std::get<PureState>(loaded);
            return target.empty() ? to_density(psi) : reduce(psi, target);
        }
        const DensityMatrix& dm = std::get<DensityMatrix>(loaded);
        return target.empty() ? dm : reduce(dm, target);
    }();

    std::optional<double> oracle;
    if (with_oracle) oracle = entropy_exact(rho, LogBase::bits);

    const estimator::EntropyEstimate est =
        estimator::estimate_entropy(rho, cfg.estimator_config());
    if (!trace_path.empty()) io::write_trace(trace_path, est);

    if (cfg.format == "csv")
        emit(out_path, io::trace_csv(est));
    else
        emit(out_path, io::estimate_json(est, cfg, oracle));
    return 0;
}

int cmd_bounds(const std::string& which, const std::string& mode,
               const std::string& state_path, const std::vector<double>& c,
               const io::RunConfig& cfg, const std::string& out_path,
               const std::string& trace_dir) {
    bounds::BoundConfig bc;
    bc.mode = (mode == "oracle") ? bounds::Mode::oracle : bounds::Mode::estimator;
    bc.est = cfg.estimator_config();

    io::BoundReport report;
    report.mode = mode;
    std::map<std::string, estimator::EntropyEstimate> all_estimates;

    if (which == "tight-lower") {
        const bounds::BoundValue v = bounds::tight_lower(spec_from(c), bc);
        report.tight_lower_bits = v.bits;
        all_estimates = v.estimates;
    } else {
        if (state_path.empty())
            throw std::invalid_argument(which + " needs a state file argument");
        const io::LoadedState loaded = io::load_state(state_path);
        if (!std::holds_alternative<PureState>(loaded))
            throw std::invalid_argument("bounds are defined for pure states");
        const PureState& psi = std::get<PureState>(loaded);

        if (which == "loose") {
            const bounds::BoundValue upper = bounds::loose_upper(psi, bc);
            const bounds::BoundValue lower = bounds::loose_lower(psi, bc);
            report.loose_upper_bits = upper.bits;
            report.loose_lower_bits = lower.bits;
            all_estimates = upper.estimates;
            all_estimates.insert(lower.estimates.begin(), lower.estimates.end());
        } else if (which == "tight-upper") {
            const bounds::TightUpperResult r = bounds::tight_upper(psi, std::nullopt, bc);
            report.tight_upper_bits = r.bits;
            report.loose_upper_bits = r.loose_upper_bits;
            report.common_subspace_indices = r.subspace.indices;
            all_estimates = r.estimates;
        } else {
            throw std::invalid_argument("unknown bound: " + which);
        }
    }

    report.traces = write_estimate_traces(trace_dir, all_estimates);
    emit(out_path, io::bound_report_json(report));
    return 0;
}

int cmd_reproduce(const std::string& figure, int size, const std::vector<double>& c,
                  const io::RunConfig& cfg, const std::string& out_path,
                  const std::string& trace_path, const std::string& trace_dir) {
    const experiments::ExperimentSummary summary =
        experiments::run_reproduce(figure, size, cfg, spec_from(c));

    std::map<std::string, std::string> trace_paths =
        write_estimate_traces(trace_dir, summary.estimates);
    if (!trace_path.empty()) {
        io::write_text_atomic(trace_path, combined_trace_csv(summary.trace_bits));
        trace_paths["combined"] = trace_path;
    }

    if (cfg.format == "csv")
        emit(out_path, combined_trace_csv(summary.trace_bits));
    else
        emit(out_path, experiments::summary_json(summary, cfg, trace_paths));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational entropy estimates and uncommon-information bounds"};
    app.require_subcommand(1);

    // gen-state
    auto* gen = app.add_subcommand("gen-state", "generate a state file");
    std::string kind;
    std::vector<int> dims = {4, 4, 2};
    int n_a = 1, k = 1, n_r = 2;
    double lambda = 0.5;
    std::vector<double> coeffs = {0.5, 0.5, 0.5, 0.5};
    std::string gen_out;
    CommonOpts gen_common;
    gen->add_option("--kind", kind, "haar | planted | decomposable")
        ->required()
        ->check(CLI::IsMember({"haar", "planted", "decomposable"}));
    gen->add_option("--dims", dims, "register dimensions for haar (A,B[,R])")
        ->delimiter(',');
    gen->add_option("--na", n_a, "qubits per side (planted)");
    gen->add_option("--k", k, "common subspace dimension (planted)");
    gen->add_option("--nr", n_r, "reference qubits (planted)");
    gen->add_option("--lambda", lambda, "symmetric branch weight (planted)");
    gen->add_option("--c", coeffs, "decomposition coefficients c1,c2,c3,c4")
        ->delimiter(',');
    gen->add_option("--out", gen_out, "output state file")->required();
    add_common(gen, gen_common);

    // estimate-entropy
    auto* est = app.add_subcommand("estimate-entropy",
                                   "variational entropy of a stored state");
    std::string est_state, est_out, est_trace;
    std::vector<std::string> target;
    bool with_oracle = false;
    CommonOpts est_common;
    est->add_option("state", est_state, "state file")->required();
    est->add_option("--target", target, "registers to keep (reduce first)")
        ->delimiter(',');
    est->add_flag("--oracle", with_oracle, "include the exact value in the report");
    est->add_option("--out", est_out, "report file (stdout when omitted)");
    est->add_option("--trace", est_trace, "per-step trace CSV");
    add_common(est, est_common);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "uncommon-information bounds");
    std::string which, mode = "oracle", bnd_state, bnd_out, bnd_trace_dir;
    std::vector<double> bnd_coeffs = {0.5, 0.5, 0.5, 0.5};
    CommonOpts bnd_common;
    bnd->add_option("--which", which, "loose | tight-upper | tight-lower")
        ->required()
        ->check(CLI::IsMember({"loose", "tight-upper", "tight-lower"}));
    bnd->add_option("--mode", mode, "oracle | estimator")
        ->check(CLI::IsMember({"oracle", "estimator"}));
    bnd->add_option("state", bnd_state, "state file (loose and tight-upper)");
    bnd->add_option("--c", bnd_coeffs, "decomposition coefficients (tight-lower)")
        ->delimiter(',');
    bnd->add_option("--out", bnd_out, "report file (stdout when omitted)");
    bnd->add_option("--trace-dir", bnd_trace_dir, "directory for per-entropy trace CSVs");
    add_common(bnd, bnd_common);

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "rerun a convergence experiment");
    std::string figure, rep_out, rep_trace, rep_trace_dir;
    int size = 4;
    std::vector<double> rep_coeffs = {0.5, 0.5, 0.5, 0.5};
    CommonOpts rep_common;
    rep->add_option("--figure", figure,
                    "loose-upper | loose-lower | tight-upper | tight-lower")
        ->required()
        ->check(CLI::IsMember(
            {"loose-upper", "loose-lower", "tight-upper", "tight-lower"}));
    rep->add_option("--size", size, "total qubit count of the experiment state");
    rep->add_option("--c", rep_coeffs, "decomposition coefficients (tight-lower)")
        ->delimiter(',');
    rep->add_option("--out", rep_out, "summary file (stdout when omitted)");
    rep->add_option("--trace", rep_trace, "combined per-step trace CSV");
    rep->add_option("--trace-dir", rep_trace_dir, "directory for per-entropy trace CSVs");
    add_common(rep, rep_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen_state(kind, dims, n_a, k, n_r, lambda, coeffs,
                                 resolve_config(gen_common, 1000), gen_out);
        if (est->parsed())
            return cmd_estimate_entropy(est_state, target, with_oracle,
                                        resolve_config(est_common, 1000), est_out,
                                        est_trace);
        if (bnd->parsed())
            return cmd_bounds(which, mode, bnd_state, bnd_coeffs,
                              resolve_config(bnd_common, 1000), bnd_out, bnd_trace_dir);
        if (rep->parsed())
            return cmd_reproduce(figure, size, rep_coeffs,
                                 resolve_config(rep_common, 750), rep_out, rep_trace,
                                 rep_trace_dir);
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

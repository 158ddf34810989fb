#pragma once

// File formats: state JSON ({"registers": [{"name","dim"},...],
// "amplitudes" | "matrix": [[re,im],...]}), per-step trace CSV with header
// step,cost_nats,cost_bits,grad_norm, and report JSON. All writes are
// atomic (temp file then rename).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "quib/bounds.hpp"
#include "quib/estimator.hpp"
#include "quib/state.hpp"

namespace quib {
namespace io {

using LoadedState = std::variant<PureState, DensityMatrix>;

void save_state(const std::string& path, const PureState& psi);
void save_state(const std::string& path, const DensityMatrix& rho);
LoadedState load_state(const std::string& path);

void write_text_atomic(const std::string& path, const std::string& content);

std::string trace_csv(const estimator::EntropyEstimate& est);
// Generic per-step trace (already in bits alongside nats).
std::string trace_csv(const std::vector<estimator::TraceRow>& rows);
void write_trace(const std::string& path, const estimator::EntropyEstimate& est);

// Effective settings of one CLI run; round-trips losslessly through JSON.
struct RunConfig {
    std::uint64_t seed = 1;
    int steps = 1000;
    double lr = 0.05;
    int layers = 0;
    double epsilon = 0.01;
    int rank = 0;
    int shots = 0;
    std::string format = "json";

    estimator::EstimatorConfig estimator_config() const;
    std::string to_json() const;
    static RunConfig from_json_text(const std::string& text);
};

std::string estimate_json(const estimator::EntropyEstimate& est, const RunConfig& config,
                          std::optional<double> oracle_bits);

struct BoundReport {
    std::string mode;
    std::optional<double> loose_upper_bits;
    std::optional<double> loose_lower_bits;
    std::optional<double> tight_upper_bits;
    std::optional<double> tight_lower_bits;
    std::vector<int> common_subspace_indices;
    std::map<std::string, std::string> traces;  // name -> csv path
};
std::string bound_report_json(const BoundReport& report);

}  // namespace io
}  // namespace quib

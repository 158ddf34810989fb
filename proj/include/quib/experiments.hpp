#pragma once

// Convergence experiments behind the `reproduce` command: per-step traces of
// the estimated bound against the exact oracle, with stabilization analysis.

#include <string>
#include <vector>

#include "quib/bounds.hpp"
#include "quib/io.hpp"

namespace quib {
namespace experiments {

// figure: loose-upper | loose-lower | tight-upper | tight-lower
struct ExperimentSummary {
    std::string figure;
    int size = 0;
    double oracle_bits = 0.0;
    double final_bits = 0.0;
    double best_bits = 0.0;
    double gap_bits = 0.0;              // |final - oracle|
    int stabilization_step_002 = -1;    // first step staying within 0.02 bits of final
    int stabilization_step_010 = -1;    // same with 0.10 bits
    int steps = 0;
    std::vector<int> common_subspace_indices;
    std::vector<double> trace_bits;     // combined per-step bound value
    std::map<std::string, estimator::EntropyEstimate> estimates;
};

ExperimentSummary run_reproduce(const std::string& figure, int size,
                                const io::RunConfig& config,
                                const DecompositionSpec& spec = {});

// First index i such that |trace[j] - trace.back()| <= tol_bits for all
// j >= i; -1 for an empty trace.
int stabilization_step(const std::vector<double>& trace_bits, double tol_bits);

std::string summary_json(const ExperimentSummary& summary, const io::RunConfig& config,
                         const std::map<std::string, std::string>& trace_paths);

}  // namespace experiments
}  // namespace quib

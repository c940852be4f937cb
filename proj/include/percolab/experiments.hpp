#pragma once

#include <string>
#include <vector>

#include "percolab/percolation.hpp"

namespace percolab {

struct ExperimentConfig {
    std::string group_id = "z2";
    std::string model_id;
    double p = 0.5;
    std::vector<int> radii;
    int64_t samples = 1000;
    uint64_t seed = 1;
    bool condition = false;
    int condition_radius = -1;  // -1: largest requested radius
    int scan_radius = 64;
    bool force_unstable = false;
    int threads = 0;  // 0: hardware concurrency
    std::string out_path;
    std::string dump_what = "sample";  // "sample" or "model"
    int64_t sample_index = 0;
    std::string event_id = "boundary-reach";
    int reach = -1;
    std::vector<std::string> f_edges;  // cylinder edges as endpoint lines
};

// Loads recognized keys from a JSON file into cfg; unknown keys are errors.
void apply_json_config(ExperimentConfig& cfg, const std::string& path);

std::vector<EstimateRow> singularity_experiment(const ExperimentConfig& cfg);
std::vector<EstimateRow> saturation_experiment(const ExperimentConfig& cfg);

// Event predicates selectable by id: "always", "isolated-origin", "full-plus",
// "vertical-path", "boundary-reach", "cluster-min:<k>", "match:<model>:<r>".
ConfigEvent make_event(const std::string& id, const GroupSpec& spec, int scan_radius = 64,
                       bool force_unstable = false);

std::string format_double(double v);

// CSV bodies for the CLI subcommands (deterministic for fixed configs).
std::string singularity_csv(const ExperimentConfig& cfg);
std::string saturation_csv(const ExperimentConfig& cfg);
std::string sample_summary_csv(const ExperimentConfig& cfg);
std::string dump_csv(const ExperimentConfig& cfg);
std::string oracle_csv(const ExperimentConfig& cfg);
std::string repetitive_check_csv(const ExperimentConfig& cfg);
// Builds the library, saves it under cfg.out_path when set, returns a summary.
std::string patterns_summary_csv(const ExperimentConfig& cfg);

}  // namespace percolab

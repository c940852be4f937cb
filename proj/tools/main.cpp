#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percolab/experiments.hpp"

namespace {

struct Staged {
    std::optional<std::string> group, model, out, config, what, event;
    std::optional<double> p;
    std::vector<int> radii;
    std::vector<int> radius;
    std::optional<int64_t> samples, index;
    std::optional<uint64_t> seed;
    std::optional<int> condition_radius, scan, threads, reach;
    bool condition = false;
    bool force_unstable = false;
    std::vector<std::string> f_edges;
};

void add_common(CLI::App* sub, Staged& st) {
    sub->add_option("--group", st.group, "group id: z1, z2, f2");
    sub->add_option("--model", st.model,
                    "model id: full, even-rows, periodic:<b1;b2;motif-file>, fib-fence");
    sub->add_option("--p", st.p, "edge retention probability in [0,1]");
    sub->add_option("--radius", st.radius, "radius (repeatable)");
    sub->add_option("--radii", st.radii, "comma-separated radius list")->delimiter(',');
    sub->add_option("--samples", st.samples, "number of Monte Carlo samples");
    sub->add_option("--seed", st.seed, "master seed");
    sub->add_flag("--condition", st.condition, "keep only boundary-reaching samples");
    sub->add_option("--condition-radius", st.condition_radius,
                    "boundary-reach radius (default: largest radius)");
    sub->add_option("--scan", st.scan, "pattern scan radius");
    sub->add_flag("--force-unstable", st.force_unstable, "accept unstable pattern libraries");
    sub->add_option("--threads", st.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", st.out, "output file (patterns: library directory)");
    sub->add_option("--config", st.config, "JSON config file; explicit flags win");
}

percolab::ExperimentConfig build_config(const Staged& st) {
    percolab::ExperimentConfig cfg;
    if (st.config) percolab::apply_json_config(cfg, *st.config);
    if (st.group) cfg.group_id = *st.group;
    if (st.model) cfg.model_id = *st.model;
    if (st.p) cfg.p = *st.p;
    if (!st.radii.empty() && !st.radius.empty())
        throw percolab::UsageError("use --radius or --radii, not both");
    if (!st.radii.empty()) cfg.radii = st.radii;
    if (!st.radius.empty()) cfg.radii = st.radius;
    if (st.samples) cfg.samples = *st.samples;
    if (st.seed) cfg.seed = *st.seed;
    if (st.condition) cfg.condition = true;
    if (st.condition_radius) cfg.condition_radius = *st.condition_radius;
    if (st.scan) cfg.scan_radius = *st.scan;
    if (st.force_unstable) cfg.force_unstable = true;
    if (st.threads) cfg.threads = *st.threads;
    if (st.out) cfg.out_path = *st.out;
    if (st.what) cfg.dump_what = *st.what;
    if (st.index) cfg.sample_index = *st.index;
    if (st.event) cfg.event_id = *st.event;
    if (st.reach) cfg.reach = *st.reach;
    if (!st.f_edges.empty()) cfg.f_edges = st.f_edges;
    return cfg;
}

void deliver(const percolab::ExperimentConfig& cfg, const std::string& body) {
    if (cfg.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.out_path);
    if (!out) throw percolab::ResourceError("cannot open output file: " + cfg.out_path);
    out << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bernoulli percolation laboratory on Cayley graphs"};
    app.require_subcommand(1);
    Staged st;

    CLI::App* cmd_sample =
        app.add_subcommand("sample", "per-sample open-edge and cluster summaries");
    CLI::App* cmd_patterns =
        app.add_subcommand("patterns", "build a model's r-ball pattern library");
    CLI::App* cmd_repetitive = app.add_subcommand(
        "repetitive-check", "certify pattern recurrence within a bounded reach");
    CLI::App* cmd_singularity = app.add_subcommand(
        "singularity", "decay of cluster-pattern match probability in r");
    CLI::App* cmd_saturation = app.add_subcommand(
        "saturation", "growth of cylinder saturation probability in R");
    CLI::App* cmd_oracle =
        app.add_subcommand("oracle", "exact event probability vs Monte Carlo");
    CLI::App* cmd_dump = app.add_subcommand("dump", "edge list of one sample or model window");

    for (CLI::App* sub : {cmd_sample, cmd_patterns, cmd_repetitive, cmd_singularity,
                          cmd_saturation, cmd_oracle, cmd_dump})
        add_common(sub, st);
    cmd_repetitive->add_option("--reach", st.reach, "recurrence distance R");
    cmd_oracle->add_option("--event", st.event,
                           "event id: always, isolated-origin, full-plus, vertical-path, "
                           "boundary-reach, cluster-min:<k>, match:<model>:<r>");
    cmd_dump->add_option("--what", st.what, "dump kind: sample or model");
    cmd_dump->add_option("--index", st.index, "sample index to dump");
    cmd_saturation->add_option("--f-edge", st.f_edges,
                               "cylinder edge endpoints, e.g. \"0,0,1,0\" (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        percolab::ExperimentConfig cfg = build_config(st);
        if (cfg.radii.empty()) {
            if (cmd_singularity->parsed()) cfg.radii = {1, 2, 3, 4};
            else if (cmd_saturation->parsed()) cfg.radii = {5, 10, 20, 40};
            else cfg.radii = {1};
        }

        if (cmd_sample->parsed()) deliver(cfg, percolab::sample_summary_csv(cfg));
        else if (cmd_patterns->parsed()) std::cout << percolab::patterns_summary_csv(cfg);
        else if (cmd_repetitive->parsed()) deliver(cfg, percolab::repetitive_check_csv(cfg));
        else if (cmd_singularity->parsed()) deliver(cfg, percolab::singularity_csv(cfg));
        else if (cmd_saturation->parsed()) deliver(cfg, percolab::saturation_csv(cfg));
        else if (cmd_oracle->parsed()) deliver(cfg, percolab::oracle_csv(cfg));
        else if (cmd_dump->parsed()) deliver(cfg, percolab::dump_csv(cfg));
        return 0;
    } catch (const percolab::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const percolab::HorizonError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const percolab::UnstableLibraryError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const percolab::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

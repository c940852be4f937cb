#include "percolab/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace percolab {

namespace {

std::vector<EdgeId> parse_f_edges(const std::vector<std::string>& lines, const GroupSpec& spec) {
    std::string joined;
    for (const std::string& line : lines) joined += line + '\n';
    std::istringstream in(joined);
    return read_edge_list(in, spec);
}

void require_radii(const ExperimentConfig& cfg) {
    if (cfg.radii.empty()) throw UsageError("at least one radius is required");
}

MatchOptions match_options(const ExperimentConfig& cfg) {
    MatchOptions opts;
    opts.condition = cfg.condition;
    opts.condition_radius = cfg.condition_radius;
    opts.scan_radius = cfg.scan_radius;
    opts.force_unstable = cfg.force_unstable;
    opts.threads = cfg.threads;
    return opts;
}

std::string estimate_csv(const char* param_name, const char* estimate_name,
                         const std::vector<EstimateRow>& rows) {
    std::string out = std::string(param_name) + "," + estimate_name + ",stderr,n\n";
    for (const EstimateRow& row : rows) {
        out += format_double(row.parameter) + ',' + format_double(row.estimate) + ',' +
               format_double(row.std_error) + ',' + std::to_string(row.n) + '\n';
    }
    return out;
}

}  // namespace

void apply_json_config(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open config file: " + path);
    nlohmann::json config;
    try {
        in >> config;
        if (!config.is_object()) throw UsageError("config must be a JSON object");
        for (const auto& [key, value] : config.items()) {
            if (key == "group") cfg.group_id = value.get<std::string>();
            else if (key == "model") cfg.model_id = value.get<std::string>();
            else if (key == "p") cfg.p = value.get<double>();
            else if (key == "radii") cfg.radii = value.get<std::vector<int>>();
            else if (key == "radius") cfg.radii = {value.get<int>()};
            else if (key == "samples") cfg.samples = value.get<int64_t>();
            else if (key == "seed") cfg.seed = value.get<uint64_t>();
            else if (key == "condition") cfg.condition = value.get<bool>();
            else if (key == "condition_radius") cfg.condition_radius = value.get<int>();
            else if (key == "scan") cfg.scan_radius = value.get<int>();
            else if (key == "force_unstable") cfg.force_unstable = value.get<bool>();
            else if (key == "threads") cfg.threads = value.get<int>();
            else if (key == "out") cfg.out_path = value.get<std::string>();
            else if (key == "what") cfg.dump_what = value.get<std::string>();
            else if (key == "index") cfg.sample_index = value.get<int64_t>();
            else if (key == "event") cfg.event_id = value.get<std::string>();
            else if (key == "reach") cfg.reach = value.get<int>();
            else if (key == "f_edges") cfg.f_edges = value.get<std::vector<std::string>>();
            else throw UsageError("unknown config key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad JSON config: ") + e.what());
    }
}

std::vector<EstimateRow> singularity_experiment(const ExperimentConfig& cfg) {
    if (cfg.group_id != "z2")
        throw UsageError("repetitive models live on z2; --group z2 is required here");
    if (cfg.model_id.empty()) throw UsageError("singularity needs --model");
    require_radii(cfg);
    const auto model = make_model(cfg.model_id);
    if (cfg.model_id != "full" && !is_proper(*model, cfg.scan_radius))
        throw UsageError("model is not a proper subgraph (only \"full\" may be improper)");
    return match_probabilities(*model, cfg.radii, BernoulliLaw(cfg.p), cfg.samples, cfg.seed,
                               match_options(cfg));
}

std::vector<EstimateRow> saturation_experiment(const ExperimentConfig& cfg) {
    require_radii(cfg);
    const GroupSpec spec = GroupSpec::from_id(cfg.group_id);
    SaturationOptions opts;
    opts.condition = cfg.condition;
    opts.condition_radius = cfg.condition_radius;
    opts.threads = cfg.threads;
    opts.F = parse_f_edges(cfg.f_edges, spec);
    return saturation_probabilities(spec, cfg.radii, BernoulliLaw(cfg.p), cfg.samples,
                                    cfg.seed, opts);
}

ConfigEvent make_event(const std::string& id, const GroupSpec& spec, int scan_radius,
                       bool force_unstable) {
    if (id == "always") return [](const Configuration&) { return true; };
    if (id == "boundary-reach") return [](const Configuration& w) { return boundary_reach(w); };
    if (id == "isolated-origin") {
        return [](const Configuration& w) {
            const Window& win = w.window();
            const int origin = win.vertex_index(win.spec().identity());
            if (origin < 0) throw UsageError("identity lies outside the window");
            for (const Window::Incidence& inc : win.incident(origin))
                if (w.open(inc.edge)) return false;
            return true;
        };
    }
    if (id == "full-plus") {
        return [](const Configuration& w) {
            const Window& win = w.window();
            const int origin = win.vertex_index(win.spec().identity());
            if (origin < 0) throw UsageError("identity lies outside the window");
            for (const Window::Incidence& inc : win.incident(origin))
                if (!w.open(inc.edge)) return false;
            return true;
        };
    }
    if (id == "vertical-path") {
        if (spec.kind() != GroupKind::lattice || spec.dimension() != 2)
            throw UsageError("vertical-path is a z2 event");
        return [](const Configuration& w) {
            const EdgeId up{GroupElement::lattice({0, 0}), 1};
            const EdgeId down{GroupElement::lattice({0, -1}), 1};
            const EdgeId right{GroupElement::lattice({0, 0}), 0};
            const EdgeId left{GroupElement::lattice({-1, 0}), 0};
            return w.open_edge(up) && w.open_edge(down) && !w.open_edge(right) &&
                   !w.open_edge(left);
        };
    }
    const auto parse_count = [&id](const std::string& token) {
        long value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0)
            throw UsageError("bad count in event id: " + id);
        return value;
    };
    if (id.starts_with("cluster-min:")) {
        const size_t min_size = static_cast<size_t>(parse_count(id.substr(12)));
        return [min_size](const Configuration& w) {
            return cluster_of(w, w.window().spec().identity()).vertices.size() >= min_size;
        };
    }
    if (id.starts_with("match:")) {
        const size_t split = id.rfind(':');
        if (split < 6)
            throw UsageError("match event needs match:<model>:<r>");
        const auto model = make_model(id.substr(6, split - 6));
        const int r = static_cast<int>(parse_count(id.substr(split + 1)));
        PatternLibrary lib = patterns(*model, r, scan_radius);
        if (!lib.stable && !force_unstable)
            throw UnstableLibraryError("pattern library for event " + id + " is unstable");
        return [lib = std::move(lib)](const Configuration& w) {
            return in_closure(cluster_of(w, w.window().spec().identity()), lib);
        };
    }
    throw UsageError("unknown event id: " + id);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string singularity_csv(const ExperimentConfig& cfg) {
    return estimate_csv("r", "m_hat", singularity_experiment(cfg));
}

std::string saturation_csv(const ExperimentConfig& cfg) {
    return estimate_csv("R", "s_hat", saturation_experiment(cfg));
}

std::string sample_summary_csv(const ExperimentConfig& cfg) {
    require_radii(cfg);
    if (cfg.samples < 1) throw UsageError("sample count must be at least 1");
    const GroupSpec spec = GroupSpec::from_id(cfg.group_id);
    const Window window(spec, cfg.radii.back());
    const BernoulliLaw law(cfg.p);

    std::string out = "i,open_edges,cluster_size,reaches_boundary\n";
    for (int64_t i = 0; i < cfg.samples; ++i) {
        const Configuration w = sample(window, law, static_cast<uint64_t>(i), cfg.seed);
        const RootedGraph cluster = cluster_of(w, spec.identity());
        out += std::to_string(i) + ',' + std::to_string(w.open_count()) + ',' +
               std::to_string(cluster.vertices.size()) + ',' +
               (boundary_reach(w) ? "1" : "0") + '\n';
    }
    return out;
}

std::string dump_csv(const ExperimentConfig& cfg) {
    require_radii(cfg);
    std::ostringstream out;
    if (cfg.dump_what == "model") {
        if (cfg.model_id.empty()) throw UsageError("model dump needs --model");
        const auto model = make_model(cfg.model_id);
        const Window window(GroupSpec::lattice(2), cfg.radii.back());
        std::vector<EdgeId> open;
        for (const EdgeId& e : window.edges())
            if (model->is_edge(e)) open.push_back(e);
        write_edge_list(out, open, ',');
    } else if (cfg.dump_what == "sample") {
        const GroupSpec spec = GroupSpec::from_id(cfg.group_id);
        const Window window(spec, cfg.radii.back());
        const Configuration w = sample(window, BernoulliLaw(cfg.p),
                                       static_cast<uint64_t>(cfg.sample_index), cfg.seed);
        write_edge_list(out, w.open_edges(), ',');
    } else {
        throw UsageError("dump kind must be \"sample\" or \"model\"");
    }
    return out.str();
}

std::string oracle_csv(const ExperimentConfig& cfg) {
    require_radii(cfg);
    const GroupSpec spec = GroupSpec::from_id(cfg.group_id);
    const int radius = cfg.radii.back();
    const Window window(spec, radius);
    const BernoulliLaw law(cfg.p);
    const ConfigEvent event =
        make_event(cfg.event_id, spec, cfg.scan_radius, cfg.force_unstable);
    const double exact = brute_force_probability(window, law, event);

    EstimateRow row = make_estimate(radius, 0, 0);
    if (cfg.samples > 0) {
        SampleSpec sample_spec{radius, law, cfg.seed, cfg.samples};
        row = estimate_probability(spec, sample_spec, event, cfg.threads);
    }
    return "event,p,exact,estimate,stderr,n\n" + cfg.event_id + ',' + format_double(cfg.p) +
           ',' + format_double(exact) + ',' + format_double(row.estimate) + ',' +
           format_double(row.std_error) + ',' + std::to_string(row.n) + '\n';
}

std::string repetitive_check_csv(const ExperimentConfig& cfg) {
    if (cfg.model_id.empty()) throw UsageError("repetitive-check needs --model");
    require_radii(cfg);
    if (cfg.reach < 0) throw UsageError("repetitive-check needs --reach");
    const auto model = make_model(cfg.model_id);
    const RepetitivenessReport report =
        is_repetitive(*model, cfg.radii.back(), cfg.reach, cfg.scan_radius);
    std::string witness;
    if (!report.ok) witness = format_element(report.center);
    return "ok,r,reach,scan_radius,witness\n" + std::string(report.ok ? "1" : "0") + ',' +
           std::to_string(cfg.radii.back()) + ',' + std::to_string(cfg.reach) + ',' +
           std::to_string(cfg.scan_radius) + ',' + witness + '\n';
}

std::string patterns_summary_csv(const ExperimentConfig& cfg) {
    if (cfg.model_id.empty()) throw UsageError("patterns needs --model");
    require_radii(cfg);
    const auto model = make_model(cfg.model_id);
    const PatternLibrary lib = patterns(*model, cfg.radii.back(), cfg.scan_radius);
    if (!cfg.out_path.empty()) save_library(lib, cfg.model_id, cfg.out_path);
    return "model,r,scan_radius,stable,patterns\n" + cfg.model_id + ',' +
           std::to_string(lib.r) + ',' + std::to_string(lib.scan_radius) + ',' +
           (lib.stable ? "1" : "0") + ',' + std::to_string(lib.patterns.size()) + '\n';
}

}  // namespace percolab

#include "percolab/percolation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace percolab {

uint64_t mix_seed(uint64_t master, uint64_t index) {
    uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t SampleStream::next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double SampleStream::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

EstimateRow make_estimate(double parameter, uint64_t hits, uint64_t trials) {
    EstimateRow row;
    row.parameter = parameter;
    row.n = static_cast<int64_t>(trials);
    if (trials == 0) {
        row.estimate = std::numeric_limits<double>::quiet_NaN();
        row.std_error = std::numeric_limits<double>::quiet_NaN();
        return row;
    }
    row.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    row.std_error = std::sqrt(row.estimate * (1.0 - row.estimate) / static_cast<double>(trials));
    return row;
}

Configuration sample(const Window& window, BernoulliLaw law, uint64_t sample_index,
                     uint64_t master_seed) {
    Configuration out(window);
    SampleStream stream(mix_seed(master_seed, sample_index));
    const double p = law.p();
    const int m = window.edge_count();
    for (int e = 0; e < m; ++e)
        if (stream.next_unit() < p) out.set_open(e, true);
    return out;
}

double cylinder_probability(const std::vector<EdgeId>& F, BernoulliLaw law) {
    std::vector<EdgeId> distinct = F;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    return std::pow(law.p(), static_cast<double>(distinct.size()));
}

double brute_force_probability(const Window& window, BernoulliLaw law,
                               const ConfigEvent& event) {
    const int m = window.edge_count();
    if (m > 24) throw ResourceError("brute-force enumeration limited to 24-edge windows");
    const double p = law.p();
    std::vector<double> open_pow(m + 1, 1.0), closed_pow(m + 1, 1.0);
    for (int i = 1; i <= m; ++i) {
        open_pow[i] = open_pow[i - 1] * p;
        closed_pow[i] = closed_pow[i - 1] * (1.0 - p);
    }
    Configuration cfg(window);
    double total = 0.0;
    for (uint64_t mask = 0; mask < (1ull << m); ++mask) {
        cfg.assign_mask(mask);
        if (event(cfg)) {
            const int open = std::popcount(mask);
            total += open_pow[open] * closed_pow[m - open];
        }
    }
    return total;
}

std::vector<uint64_t> monte_carlo_counts(
    int64_t n, size_t k, int threads,
    const std::function<void(int64_t, std::vector<uint64_t>&)>& body) {
    if (n < 0) throw UsageError("sample count must be nonnegative");
    int64_t workers = threads <= 0 ? static_cast<int64_t>(std::thread::hardware_concurrency())
                                   : threads;
    workers = std::clamp<int64_t>(workers, 1, std::max<int64_t>(n, 1));

    if (workers == 1) {
        std::vector<uint64_t> counts(k, 0);
        for (int64_t i = 0; i < n; ++i) body(i, counts);
        return counts;
    }

    std::vector<std::vector<uint64_t>> partial(workers, std::vector<uint64_t>(k, 0));
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int64_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int64_t i = t; i < n; i += workers) body(i, partial[t]);
            } catch (...) {
                std::scoped_lock lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<uint64_t> counts(k, 0);
    for (const auto& part : partial)
        for (size_t j = 0; j < k; ++j) counts[j] += part[j];
    return counts;
}

EstimateRow estimate_probability(const GroupSpec& spec, const SampleSpec& sample_spec,
                                 const ConfigEvent& event, int threads) {
    if (sample_spec.n < 1) throw UsageError("sample count must be at least 1");
    const Window window(spec, sample_spec.radius);
    const auto counts = monte_carlo_counts(
        sample_spec.n, 1, threads, [&](int64_t i, std::vector<uint64_t>& c) {
            if (event(sample(window, sample_spec.law, static_cast<uint64_t>(i),
                             sample_spec.master_seed)))
                ++c[0];
        });
    return make_estimate(sample_spec.radius, counts[0],
                         static_cast<uint64_t>(sample_spec.n));
}

namespace {

int64_t cylinder_reach(const std::vector<EdgeId>& F) {
    int64_t reach = 0;
    for (const EdgeId& e : F) {
        auto [a, b] = edge_endpoints(e);
        reach = std::max({reach, word_length(a), word_length(b)});
    }
    return reach;
}

void require_increasing(const std::vector<int>& radii) {
    if (radii.empty()) throw UsageError("at least one radius is required");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0) throw UsageError("radii must be nonnegative");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw UsageError("radii must be strictly increasing");
    }
}

}  // namespace

int saturation_min_radius(const Configuration& w, const std::vector<EdgeId>& F) {
    if (F.empty()) return 0;
    const RootedGraph cluster = cluster_of(w, w.window().spec().identity());
    int best = -1;
    for (const GroupElement& g : cluster.vertices) {
        const bool translate = !g.is_identity();
        bool all = true;
        for (const EdgeId& e : F) {
            if (!w.open_edge(translate ? translate_edge(e, g) : e)) {
                all = false;
                break;
            }
        }
        if (!all) continue;
        const int len = static_cast<int>(word_length(g));
        if (best < 0 || len < best) best = len;
    }
    return best;
}

bool saturation_member(const Configuration& w, const std::vector<EdgeId>& F, int R) {
    if (R < 0) throw UsageError("translate length bound must be nonnegative");
    if (w.window().radius() < R + cylinder_reach(F))
        throw UsageError("window too small to hold F and its R-translates");
    const int m = saturation_min_radius(w, F);
    return m >= 0 && m <= R;
}

std::vector<EstimateRow> match_probabilities(const SubgraphModel& model,
                                             const std::vector<int>& radii, BernoulliLaw law,
                                             int64_t n, uint64_t master_seed,
                                             const MatchOptions& options) {
    require_increasing(radii);
    if (n < 1) throw UsageError("sample count must be at least 1");

    std::vector<std::unordered_set<RootedGraph, RootedGraphHash, RootedGraphEq>> libraries;
    for (int r : radii) {
        PatternLibrary lib = patterns(model, r, options.scan_radius);
        if (!lib.stable && !options.force_unstable)
            throw UnstableLibraryError(
                "pattern library at radius " + std::to_string(r) +
                " grew when the scan radius doubled; increase the scan or force");
        libraries.emplace_back(lib.patterns.begin(), lib.patterns.end());
    }

    const int condition_radius =
        options.condition
            ? (options.condition_radius >= 0 ? options.condition_radius : radii.back())
            : 0;
    const Window window(GroupSpec::lattice(2), std::max(radii.back(), condition_radius));
    const GroupElement origin = window.spec().identity();

    const size_t k = radii.size() + 1;
    const auto counts =
        monte_carlo_counts(n, k, options.threads, [&](int64_t i, std::vector<uint64_t>& c) {
            const Configuration cfg = sample(window, law, static_cast<uint64_t>(i), master_seed);
            if (options.condition && !cluster_reaches(cfg, condition_radius)) return;
            ++c[k - 1];
            const RootedGraph cluster = cluster_of(cfg, origin);
            for (size_t j = 0; j < radii.size(); ++j)
                if (libraries[j].contains(ball(cluster, radii[j]))) ++c[j];
        });

    std::vector<EstimateRow> rows;
    rows.reserve(radii.size());
    for (size_t j = 0; j < radii.size(); ++j)
        rows.push_back(make_estimate(radii[j], counts[j], counts[k - 1]));
    return rows;
}

EstimateRow match_probability(const SubgraphModel& model, int r, BernoulliLaw law, int64_t n,
                              uint64_t master_seed, const MatchOptions& options) {
    return match_probabilities(model, {r}, law, n, master_seed, options).front();
}

std::vector<EstimateRow> saturation_probabilities(const GroupSpec& spec,
                                                  const std::vector<int>& radii,
                                                  BernoulliLaw law, int64_t n,
                                                  uint64_t master_seed,
                                                  const SaturationOptions& options) {
    require_increasing(radii);
    if (n < 1) throw UsageError("sample count must be at least 1");

    std::vector<EdgeId> F = options.F;
    if (F.empty()) F.push_back(EdgeId{spec.identity(), 0});
    for (const EdgeId& e : F) {
        spec.require_compatible(e.base);
        if (e.dir < 0 || static_cast<size_t>(e.dir) >= spec.positive_count())
            throw UsageError("cylinder edge direction out of range for the group");
    }

    const int condition_radius =
        options.condition
            ? (options.condition_radius >= 0 ? options.condition_radius : radii.back())
            : 0;
    const int64_t window_radius =
        std::max<int64_t>(radii.back() + cylinder_reach(F), condition_radius);
    const Window window(spec, static_cast<int>(window_radius));

    const size_t k = radii.size() + 1;
    const auto counts =
        monte_carlo_counts(n, k, options.threads, [&](int64_t i, std::vector<uint64_t>& c) {
            const Configuration cfg = sample(window, law, static_cast<uint64_t>(i), master_seed);
            if (options.condition && !cluster_reaches(cfg, condition_radius)) return;
            ++c[k - 1];
            const int m = saturation_min_radius(cfg, F);
            if (m < 0) return;
            for (size_t j = 0; j < radii.size(); ++j)
                if (m <= radii[j]) ++c[j];
        });

    std::vector<EstimateRow> rows;
    rows.reserve(radii.size());
    for (size_t j = 0; j < radii.size(); ++j)
        rows.push_back(make_estimate(radii[j], counts[j], counts[k - 1]));
    return rows;
}

ConfigEvent insertion_image_event(const Window& window, const std::vector<EdgeId>& F,
                                  ConfigEvent base) {
    if (window.edge_count() > 64)
        throw UsageError("image events are decidable only on <= 64-edge windows");
    uint64_t f_mask = 0;
    for (const EdgeId& e : F) {
        const int idx = window.edge_index(e);
        if (idx < 0) throw UsageError("inserted edge lies outside the window");
        f_mask |= 1ull << idx;
    }
    return [window, f_mask, base = std::move(base)](const Configuration& w) {
        const uint64_t m = w.mask();
        if ((m & f_mask) != f_mask) return false;
        Configuration probe(window);
        const uint64_t rest = m & ~f_mask;
        uint64_t sub = f_mask;
        while (true) {
            probe.assign_mask(rest | sub);
            if (base(probe)) return true;
            if (sub == 0) return false;
            sub = (sub - 1) & f_mask;
        }
    };
}

}  // namespace percolab

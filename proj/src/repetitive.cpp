#include "percolab/repetitive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace percolab {

namespace {

int64_t floor_div(int64_t n, int64_t d) {
    int64_t q = n / d, r = n % d;
    if (r != 0 && ((r < 0) != (d < 0))) --q;
    return q;
}

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct FullModel final : SubgraphModel {
    std::string name = "full";
    const std::string& id() const override { return name; }
    bool has_edge(int64_t, int64_t, int) const override { return true; }
};

struct EvenRowsModel final : SubgraphModel {
    std::string name = "even-rows";
    const std::string& id() const override { return name; }
    bool has_edge(int64_t, int64_t y, int dir) const override {
        return dir == 1 || (y % 2) == 0;
    }
};

struct FenceModel final : SubgraphModel {
    std::string name = "fib-fence";
    const std::string& id() const override { return name; }
    bool has_edge(int64_t, int64_t y, int dir) const override {
        return dir == 1 || sturmian_bit(y) == 1;
    }
};

struct PeriodicModel final : SubgraphModel {
    std::string name;
    int64_t a, c, b, d;  // basis columns (a,c) and (b,d)
    int64_t det;
    std::unordered_set<uint64_t> motif;

    const std::string& id() const override { return name; }

    static uint64_t key(int64_t rx, int64_t ry, int dir) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(rx)) << 33) |
               (static_cast<uint64_t>(static_cast<uint32_t>(ry)) << 1) |
               static_cast<uint64_t>(dir);
    }

    std::pair<int64_t, int64_t> reduce(int64_t x, int64_t y) const {
        const int64_t q1 = floor_div(d * x - b * y, det);
        const int64_t q2 = floor_div(-c * x + a * y, det);
        return {x - (a * q1 + b * q2), y - (c * q1 + d * q2)};
    }

    bool has_edge(int64_t x, int64_t y, int dir) const override {
        auto [rx, ry] = reduce(x, y);
        return motif.contains(key(rx, ry, dir));
    }
};

std::unique_ptr<PeriodicModel> parse_periodic(const std::string& id, const std::string& body) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : body) {
        if (ch == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw UsageError("periodic model needs <bx1,by1;bx2,by2;motif-file>: " + id);

    auto parse_vec = [&](const std::string& s) {
        std::string t = s;
        std::replace(t.begin(), t.end(), ',', ' ');
        std::istringstream in(t);
        int64_t x, y;
        if (!(in >> x >> y)) throw UsageError("bad basis vector: " + s);
        if (std::abs(x) > 10000 || std::abs(y) > 10000)
            throw UsageError("basis entries limited to |v| <= 10000");
        return std::pair{x, y};
    };

    auto m = std::make_unique<PeriodicModel>();
    m->name = id;
    std::tie(m->a, m->c) = parse_vec(parts[0]);
    std::tie(m->b, m->d) = parse_vec(parts[1]);
    m->det = m->a * m->d - m->b * m->c;
    if (m->det == 0) throw UsageError("periodic basis is singular");

    std::ifstream motif_in(parts[2]);
    if (!motif_in) throw ResourceError("cannot open motif file: " + parts[2]);
    const GroupSpec z2 = GroupSpec::lattice(2);
    for (const EdgeId& e : read_edge_list(motif_in, z2)) {
        auto [rx, ry] = m->reduce(e.base.data()[0], e.base.data()[1]);
        m->motif.insert(PeriodicModel::key(rx, ry, e.dir));
    }
    return m;
}

}  // namespace

bool SubgraphModel::is_edge(const EdgeId& e) const {
    if (e.base.kind() != GroupKind::lattice || e.base.data().size() != 2)
        throw UsageError("subgraph models live on the square lattice");
    if (e.dir != 0 && e.dir != 1) throw UsageError("edge direction out of range");
    return has_edge(e.base.data()[0], e.base.data()[1], e.dir);
}

std::unique_ptr<SubgraphModel> make_model(const std::string& id) {
    if (id == "full") return std::make_unique<FullModel>();
    if (id == "even-rows") return std::make_unique<EvenRowsModel>();
    if (id == "fib-fence") return std::make_unique<FenceModel>();
    if (id.starts_with("periodic:")) return parse_periodic(id, id.substr(9));
    throw UsageError("unknown model id: " + id);
}

int64_t sturmian_floor(int64_t n) {
    if (n < 0) return -sturmian_floor(-n) - 1;
    if (n > 1'000'000'000)
        throw UsageError("sturmian coordinate too large for exact arithmetic");
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t t = isqrt_u64(5 * un * un);
    return (static_cast<int64_t>(t) - n) / 2;
}

int sturmian_bit(int64_t n) {
    return static_cast<int>(sturmian_floor(n + 1) - sturmian_floor(n));
}

namespace {

// BFS ball of the model graph on the dense (2r+1)² offset grid; vertices and
// edges come out presorted because offsets are generated in ascending order.
template <class EdgeFn>
RootedGraph grid_ball(int64_t gx, int64_t gy, int r, EdgeFn&& open) {
    const int side = 2 * r + 1;
    std::vector<int16_t> dist(static_cast<size_t>(side) * side, -1);
    const auto at = [&](int u, int v) { return (u + r) * side + (v + r); };

    std::vector<std::pair<int16_t, int16_t>> frontier{{0, 0}}, next;
    dist[at(0, 0)] = 0;
    for (int depth = 0; depth < r && !frontier.empty(); ++depth) {
        next.clear();
        for (auto [u, v] : frontier) {
            const auto try_step = [&](int nu, int nv, int64_t ex, int64_t ey, int dir) {
                if (nu < -r || nu > r || nv < -r || nv > r) return;
                if (dist[at(nu, nv)] >= 0 || !open(ex, ey, dir)) return;
                dist[at(nu, nv)] = static_cast<int16_t>(depth + 1);
                next.emplace_back(nu, nv);
            };
            try_step(u + 1, v, gx + u, gy + v, 0);
            try_step(u - 1, v, gx + u - 1, gy + v, 0);
            try_step(u, v + 1, gx + u, gy + v, 1);
            try_step(u, v - 1, gx + u, gy + v - 1, 1);
        }
        std::swap(frontier, next);
    }

    RootedGraph out;
    out.truncation = r;
    for (int u = -r; u <= r; ++u) {
        for (int v = -r; v <= r; ++v) {
            if (dist[at(u, v)] < 0) continue;
            out.vertices.push_back(GroupElement::lattice({u, v}));
            if (u < r && dist[at(u + 1, v)] >= 0 && open(gx + u, gy + v, 0))
                out.edges.push_back(EdgeId{out.vertices.back(), 0});
            if (v < r && dist[at(u, v + 1)] >= 0 && open(gx + u, gy + v, 1))
                out.edges.push_back(EdgeId{out.vertices.back(), 1});
        }
    }
    return out;
}

// Edge bits of the model cached on a square patch around the origin, so scan
// loops do not re-evaluate the oracle per traversal.
struct DenseOracle {
    const SubgraphModel& model;
    int64_t half;
    int64_t side;
    std::vector<uint8_t> hbit, vbit;

    DenseOracle(const SubgraphModel& m, int64_t half_width)
        : model(m), half(half_width), side(2 * half_width + 1) {
        hbit.resize(static_cast<size_t>(side) * side);
        vbit.resize(static_cast<size_t>(side) * side);
        for (int64_t u = -half; u <= half; ++u) {
            for (int64_t v = -half; v <= half; ++v) {
                const size_t i = static_cast<size_t>(u + half) * side + (v + half);
                hbit[i] = m.has_edge(u, v, 0);
                vbit[i] = m.has_edge(u, v, 1);
            }
        }
    }

    bool operator()(int64_t x, int64_t y, int dir) const {
        if (x < -half || x > half || y < -half || y > half)
            return model.has_edge(x, y, dir);
        const size_t i = static_cast<size_t>(x + half) * side + (y + half);
        return dir == 0 ? hbit[i] : vbit[i];
    }
};

void require_z2_center(const GroupElement& g) {
    if (g.kind() != GroupKind::lattice || g.data().size() != 2)
        throw UsageError("subgraph models live on the square lattice");
}

using PatternIndex =
    std::unordered_map<RootedGraph, int, RootedGraphHash, RootedGraphEq>;

}  // namespace

RootedGraph local_ball(const SubgraphModel& model, const GroupElement& g, int r) {
    require_z2_center(g);
    if (r < 0) throw UsageError("ball radius must be nonnegative");
    return grid_ball(g.data()[0], g.data()[1], r,
                     [&](int64_t x, int64_t y, int dir) { return model.has_edge(x, y, dir); });
}

PatternLibrary patterns(const SubgraphModel& model, int r, int scan_radius) {
    if (r < 0 || scan_radius < r)
        throw UsageError("pattern scan needs scan_radius >= r >= 0");
    if (!connected_on_window(model, scan_radius, 8))
        throw UsageError("model subgraph is disconnected within the scan window: " + model.id());

    const GroupSpec z2 = GroupSpec::lattice(2);
    const DenseOracle oracle(model, 2 * static_cast<int64_t>(scan_radius) + r + 1);

    PatternLibrary lib;
    lib.r = r;
    lib.scan_radius = scan_radius;
    PatternIndex seen;
    for (const GroupElement& g : enumerate_ball(z2, scan_radius).elements) {
        RootedGraph p = grid_ball(g.data()[0], g.data()[1], r, oracle);
        if (seen.emplace(p, static_cast<int>(lib.patterns.size())).second)
            lib.patterns.push_back(std::move(p));
    }

    lib.stable = true;
    for (const GroupElement& g : enumerate_ball(z2, 2 * scan_radius).elements) {
        if (!seen.contains(grid_ball(g.data()[0], g.data()[1], r, oracle))) {
            lib.stable = false;
            break;
        }
    }
    return lib;
}

RepetitivenessReport is_repetitive(const SubgraphModel& model, int r, int R, int scan_radius) {
    if (r < 0 || R < 0) throw UsageError("radii must be nonnegative");
    if (scan_radius < R + r)
        throw UsageError("repetitiveness scan needs scan_radius >= R + r");

    const PatternLibrary lib = patterns(model, r, scan_radius);
    PatternIndex index;
    for (size_t i = 0; i < lib.patterns.size(); ++i)
        index.emplace(lib.patterns[i], static_cast<int>(i));

    const GroupSpec z2 = GroupSpec::lattice(2);
    const DenseOracle oracle(model, static_cast<int64_t>(scan_radius) + r + 1);

    // Pattern id of every potential occurrence center in the scan ball.
    const int64_t side = 2 * static_cast<int64_t>(scan_radius) + 1;
    const auto at = [&](int64_t u, int64_t v) {
        return static_cast<size_t>(u + scan_radius) * side + (v + scan_radius);
    };
    std::vector<int32_t> pattern_of(static_cast<size_t>(side) * side, -1);
    for (const GroupElement& g : enumerate_ball(z2, scan_radius).elements)
        pattern_of[at(g.data()[0], g.data()[1])] =
            index.at(grid_ball(g.data()[0], g.data()[1], r, oracle));

    std::vector<int32_t> visit(static_cast<size_t>(side) * side, -1);
    int32_t epoch = -1;
    std::vector<std::pair<int32_t, int32_t>> frontier, next;
    std::vector<uint8_t> found(lib.patterns.size());

    for (const GroupElement& g : enumerate_ball(z2, scan_radius - R).elements) {
        ++epoch;
        std::fill(found.begin(), found.end(), 0);
        size_t found_count = 0;

        frontier.assign(1, {static_cast<int32_t>(g.data()[0]), static_cast<int32_t>(g.data()[1])});
        visit[at(g.data()[0], g.data()[1])] = epoch;
        for (int depth = 0; found_count < found.size() && !frontier.empty(); ++depth) {
            for (auto [u, v] : frontier) {
                const int32_t pid = pattern_of[at(u, v)];
                if (!found[pid]) {
                    found[pid] = 1;
                    if (++found_count == found.size()) break;
                }
            }
            if (found_count == found.size() || depth == R) break;
            next.clear();
            for (auto [u, v] : frontier) {
                const auto try_step = [&](int32_t nu, int32_t nv, int64_t ex, int64_t ey,
                                          int dir) {
                    if (visit[at(nu, nv)] == epoch || !oracle(ex, ey, dir)) return;
                    visit[at(nu, nv)] = epoch;
                    next.emplace_back(nu, nv);
                };
                try_step(u + 1, v, u, v, 0);
                try_step(u - 1, v, u - 1, v, 0);
                try_step(u, v + 1, u, v, 1);
                try_step(u, v - 1, u, v - 1, 1);
            }
            std::swap(frontier, next);
        }

        if (found_count < found.size()) {
            const size_t missing =
                std::find(found.begin(), found.end(), 0) - found.begin();
            return {false, lib.patterns[missing], g};
        }
    }
    return {true, RootedGraph{}, z2.identity()};
}

bool in_closure(const RootedGraph& K, const PatternLibrary& lib) {
    if (K.truncation < lib.r)
        throw HorizonError("graph truncation below the library radius");
    const RootedGraph b = ball(K, lib.r);
    return std::any_of(lib.patterns.begin(), lib.patterns.end(),
                       [&](const RootedGraph& p) { return same_graph(b, p); });
}

bool is_proper(const SubgraphModel& model, int scan_radius) {
    for (int64_t u = -scan_radius; u <= scan_radius; ++u) {
        for (int64_t v = -scan_radius; v <= scan_radius; ++v) {
            if (std::abs(u) + std::abs(v) > scan_radius) continue;
            if (std::abs(u + 1) + std::abs(v) <= scan_radius && !model.has_edge(u, v, 0))
                return true;
            if (std::abs(u) + std::abs(v + 1) <= scan_radius && !model.has_edge(u, v, 1))
                return true;
        }
    }
    return false;
}

bool connected_on_window(const SubgraphModel& model, int radius, int slack) {
    const int64_t reach = static_cast<int64_t>(radius) + slack;
    const int64_t side = 2 * reach + 1;
    const auto at = [&](int64_t u, int64_t v) {
        return static_cast<size_t>(u + reach) * side + (v + reach);
    };
    std::vector<uint8_t> seen(static_cast<size_t>(side) * side, 0);
    std::vector<std::pair<int64_t, int64_t>> stack{{0, 0}};
    seen[at(0, 0)] = 1;
    while (!stack.empty()) {
        auto [u, v] = stack.back();
        stack.pop_back();
        const auto try_step = [&](int64_t nu, int64_t nv, int64_t ex, int64_t ey, int dir) {
            if (std::abs(nu) + std::abs(nv) > reach || seen[at(nu, nv)]) return;
            if (!model.has_edge(ex, ey, dir)) return;
            seen[at(nu, nv)] = 1;
            stack.emplace_back(nu, nv);
        };
        try_step(u + 1, v, u, v, 0);
        try_step(u - 1, v, u - 1, v, 0);
        try_step(u, v + 1, u, v, 1);
        try_step(u, v - 1, u, v - 1, 1);
    }
    for (int64_t u = -radius; u <= radius; ++u)
        for (int64_t v = -radius; v <= radius; ++v)
            if (std::abs(u) + std::abs(v) <= radius && !seen[at(u, v)]) return false;
    return true;
}

void save_library(const PatternLibrary& lib, const std::string& model_id,
                  const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ResourceError("cannot create library directory: " + dir);

    nlohmann::json manifest;
    manifest["model"] = model_id;
    manifest["r"] = lib.r;
    manifest["scan_radius"] = lib.scan_radius;
    manifest["stable"] = lib.stable;
    std::vector<std::string> files;
    for (size_t i = 0; i < lib.patterns.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "pattern_%04zu.txt", i);
        files.emplace_back(name);
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw ResourceError("cannot write pattern file in " + dir);
        write_rooted_graph(out, lib.patterns[i]);
    }
    manifest["patterns"] = files;

    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw ResourceError("cannot write manifest in " + dir);
    out << manifest.dump(2) << '\n';
}

PatternLibrary load_library(const std::string& dir, std::string* model_id) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw ResourceError("cannot open manifest in " + dir);
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad library manifest: ") + e.what());
    }

    PatternLibrary lib;
    const GroupSpec z2 = GroupSpec::lattice(2);
    try {
        lib.r = manifest.at("r").get<int>();
        lib.scan_radius = manifest.at("scan_radius").get<int>();
        lib.stable = manifest.at("stable").get<bool>();
        if (model_id) *model_id = manifest.at("model").get<std::string>();
        for (const auto& name : manifest.at("patterns")) {
            std::ifstream pin(fs::path(dir) / name.get<std::string>());
            if (!pin)
                throw ResourceError("cannot open pattern file: " + name.get<std::string>());
            lib.patterns.push_back(read_rooted_graph(pin, z2));
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad library manifest: ") + e.what());
    }
    return lib;
}

}  // namespace percolab

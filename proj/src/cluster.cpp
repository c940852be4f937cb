#include "percolab/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace percolab {

bool same_graph(const RootedGraph& a, const RootedGraph& b) {
    return a.vertices == b.vertices && a.edges == b.edges;
}

size_t RootedGraphHash::operator()(const RootedGraph& g) const {
    size_t h = 0x811c9dc5u;
    for (const GroupElement& v : g.vertices) h = h * 0x01000193u ^ ElementHash{}(v);
    for (const EdgeId& e : g.edges) h = h * 0x01000193u ^ EdgeIdHash{}(e);
    return h;
}

namespace {

struct Adjacency {
    std::unordered_map<GroupElement, int32_t, ElementHash> index;
    std::vector<std::vector<int32_t>> neighbors;

    explicit Adjacency(const RootedGraph& g) {
        index.reserve(g.vertices.size());
        for (size_t i = 0; i < g.vertices.size(); ++i)
            index.emplace(g.vertices[i], static_cast<int32_t>(i));
        neighbors.resize(g.vertices.size());
        for (const EdgeId& e : g.edges) {
            auto [a, b] = edge_endpoints(e);
            auto ia = index.find(a), ib = index.find(b);
            if (ia == index.end() || ib == index.end())
                throw UsageError("edge endpoint missing from vertex set");
            neighbors[ia->second].push_back(ib->second);
            neighbors[ib->second].push_back(ia->second);
        }
    }
};

// Graph distances from the identity root; -1 marks unreachable.
std::vector<int32_t> root_distances(const RootedGraph& g, const Adjacency& adj) {
    std::vector<int32_t> dist(g.vertices.size(), -1);
    auto it = std::find_if(g.vertices.begin(), g.vertices.end(),
                           [](const GroupElement& v) { return v.is_identity(); });
    if (it == g.vertices.end()) throw UsageError("rooted graph is missing the identity root");
    std::queue<int32_t> frontier;
    const int32_t start = static_cast<int32_t>(it - g.vertices.begin());
    dist[start] = 0;
    frontier.push(start);
    while (!frontier.empty()) {
        const int32_t u = frontier.front();
        frontier.pop();
        for (int32_t v : adj.neighbors[u]) {
            if (dist[v] >= 0) continue;
            dist[v] = dist[u] + 1;
            frontier.push(v);
        }
    }
    return dist;
}

}  // namespace

RootedGraph make_rooted(std::vector<GroupElement> vertices, std::vector<EdgeId> edges,
                        int truncation) {
    if (truncation < 0) throw UsageError("truncation must be nonnegative");
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    RootedGraph g{std::move(vertices), std::move(edges), truncation};
    Adjacency adj(g);
    const auto dist = root_distances(g, adj);
    if (std::any_of(dist.begin(), dist.end(), [](int32_t d) { return d < 0; }))
        throw UsageError("rooted graph is not connected");
    return g;
}

RootedGraph cluster_of(const Configuration& w, const GroupElement& g) {
    const Window& win = w.window();
    const int start = win.vertex_index(g);
    if (start < 0) throw UsageError("cluster root lies outside the window");

    std::vector<char> seen(win.vertex_count(), 0);
    std::vector<char> edge_seen(win.edge_count(), 0);
    std::vector<int32_t> order;
    std::vector<int32_t> cluster_edges;
    order.push_back(start);
    seen[start] = 1;
    for (size_t head = 0; head < order.size(); ++head) {
        for (const Window::Incidence& inc : win.incident(order[head])) {
            if (!w.open(inc.edge)) continue;
            if (!edge_seen[inc.edge]) {
                edge_seen[inc.edge] = 1;
                cluster_edges.push_back(inc.edge);
            }
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                order.push_back(inc.neighbor);
            }
        }
    }

    const bool translate = !g.is_identity();
    const GroupElement g_inv = translate ? inverse(g) : GroupElement();
    RootedGraph out;
    out.vertices.reserve(order.size());
    for (int32_t i : order) {
        GroupElement v = win.vertex(i);
        out.vertices.push_back(translate ? multiply(v, g_inv) : std::move(v));
    }
    out.edges.reserve(cluster_edges.size());
    for (int32_t e : cluster_edges) {
        EdgeId id = win.edge(e);
        out.edges.push_back(translate ? translate_edge(id, g_inv) : std::move(id));
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    std::sort(out.edges.begin(), out.edges.end());
    out.truncation = win.radius() - win.vertex_distance(start);
    return out;
}

RootedGraph ball(const RootedGraph& H, int r) {
    if (r < 0) throw UsageError("ball radius must be nonnegative");
    if (r > H.truncation)
        throw HorizonError("ball radius exceeds the truncation horizon");
    Adjacency adj(H);
    const auto dist = root_distances(H, adj);
    RootedGraph out;
    out.truncation = r;
    for (size_t i = 0; i < H.vertices.size(); ++i)
        if (dist[i] >= 0 && dist[i] <= r) out.vertices.push_back(H.vertices[i]);
    for (const EdgeId& e : H.edges) {
        auto [a, b] = edge_endpoints(e);
        const int32_t da = dist[adj.index.at(a)], db = dist[adj.index.at(b)];
        if (da >= 0 && da <= r && db >= 0 && db <= r) out.edges.push_back(e);
    }
    return out;
}

MetricResult gh_distance(const RootedGraph& a, const RootedGraph& b) {
    const int horizon = std::min(a.truncation, b.truncation);

    // Vertices keyed by (root distance, element) and edges by (max endpoint
    // distance, edge): balls agree through radius r exactly when every group
    // with key ≤ r matches, since agreement is nested downward in r.
    auto vertex_keys = [](const RootedGraph& g) {
        Adjacency adj(g);
        const auto dist = root_distances(g, adj);
        std::vector<std::pair<int32_t, GroupElement>> vk;
        std::vector<std::pair<int32_t, EdgeId>> ek;
        for (size_t i = 0; i < g.vertices.size(); ++i)
            if (dist[i] >= 0) vk.emplace_back(dist[i], g.vertices[i]);
        for (const EdgeId& e : g.edges) {
            auto [u, v] = edge_endpoints(e);
            const int32_t du = dist[adj.index.at(u)], dv = dist[adj.index.at(v)];
            if (du >= 0 && dv >= 0) ek.emplace_back(std::max(du, dv), e);
        }
        std::sort(vk.begin(), vk.end());
        std::sort(ek.begin(), ek.end());
        return std::pair{std::move(vk), std::move(ek)};
    };

    const auto [va, ea] = vertex_keys(a);
    const auto [vb, eb] = vertex_keys(b);

    int agreement = 0;
    for (int r = 1; r <= horizon; ++r) {
        auto slice_equal = [r](const auto& xs, const auto& ys) {
            auto xlo = std::lower_bound(xs.begin(), xs.end(), r,
                                        [](const auto& kv, int key) { return kv.first < key; });
            auto xhi = std::upper_bound(xs.begin(), xs.end(), r,
                                        [](int key, const auto& kv) { return key < kv.first; });
            auto ylo = std::lower_bound(ys.begin(), ys.end(), r,
                                        [](const auto& kv, int key) { return kv.first < key; });
            auto yhi = std::upper_bound(ys.begin(), ys.end(), r,
                                        [](int key, const auto& kv) { return key < kv.first; });
            return std::equal(xlo, xhi, ylo, yhi);
        };
        if (!slice_equal(va, vb) || !slice_equal(ea, eb)) break;
        agreement = r;
    }

    MetricResult m;
    m.agreement = agreement;
    m.exact = agreement < horizon;
    m.value = std::exp(-static_cast<double>(agreement));
    return m;
}

Configuration reroot(const Configuration& w, const GroupElement& g) {
    const RootedGraph cluster = cluster_of(w, w.window().spec().identity());
    if (!std::binary_search(cluster.vertices.begin(), cluster.vertices.end(), g))
        throw UsageError("element outside the identity's cluster: not a cluster-relation move");
    return shift(w, g);
}

bool cluster_reaches(const Configuration& w, int radius) {
    const Window& win = w.window();
    const int start = win.vertex_index(win.spec().identity());
    if (start < 0) throw UsageError("identity lies outside the window");
    if (radius <= 0) return true;

    std::vector<char> seen(win.vertex_count(), 0);
    std::vector<int32_t> stack{static_cast<int32_t>(start)};
    seen[start] = 1;
    while (!stack.empty()) {
        const int32_t u = stack.back();
        stack.pop_back();
        if (word_length(win.vertex(u)) >= radius) return true;
        for (const Window::Incidence& inc : win.incident(u)) {
            if (!w.open(inc.edge) || seen[inc.neighbor]) continue;
            seen[inc.neighbor] = 1;
            stack.push_back(inc.neighbor);
        }
    }
    return false;
}

bool boundary_reach(const Configuration& w) {
    return cluster_reaches(w, w.window().radius());
}

void write_rooted_graph(std::ostream& out, const RootedGraph& g) {
    auto root = std::find_if(g.vertices.begin(), g.vertices.end(),
                             [](const GroupElement& v) { return v.is_identity(); });
    if (root == g.vertices.end()) throw UsageError("rooted graph is missing the identity root");
    out << "root " << format_element(*root) << " truncation " << g.truncation << '\n';
    write_edge_list(out, g.edges);
}

RootedGraph read_rooted_graph(std::istream& in, const GroupSpec& spec) {
    std::string header;
    if (!std::getline(in, header)) throw UsageError("missing rooted-graph header");
    std::istringstream hs(header);
    std::vector<std::string> tokens;
    std::string tok;
    while (hs >> tok) tokens.push_back(tok);
    if (tokens.size() < 4 || tokens.front() != "root" || tokens[tokens.size() - 2] != "truncation")
        throw UsageError("bad rooted-graph header: " + header);
    std::string elt;
    for (size_t i = 1; i + 2 < tokens.size(); ++i) elt += (i > 1 ? " " : "") + tokens[i];
    const GroupElement root = parse_element(spec, elt);
    if (!root.is_identity()) throw UsageError("rooted graphs must be rooted at the identity");
    const int truncation = std::stoi(tokens.back());

    std::vector<EdgeId> edges = read_edge_list(in, spec);
    std::vector<GroupElement> vertices{spec.identity()};
    for (const EdgeId& e : edges) {
        auto [a, b] = edge_endpoints(e);
        vertices.push_back(std::move(a));
        vertices.push_back(std::move(b));
    }
    return make_rooted(std::move(vertices), std::move(edges), truncation);
}

}  // namespace percolab

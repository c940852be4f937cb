#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percolab/group.hpp"

namespace percolab {

// Canonical undirected edge {base, s·base} with s the positive generator of
// axis/letter `dir`.
struct EdgeId {
    GroupElement base;
    int32_t dir = 0;

    friend bool operator==(const EdgeId&, const EdgeId&) = default;
    friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct EdgeIdHash {
    size_t operator()(const EdgeId& e) const;
};

// Undirected quotient of the adjacent pair (a, b); ba⁻¹ must be a generator.
EdgeId canonical_edge(const GroupElement& a, const GroupElement& b);
std::pair<GroupElement, GroupElement> edge_endpoints(const EdgeId& e);
// Right-translates both endpoints: {a, b} ↦ {a·t, b·t}.
EdgeId translate_edge(const EdgeId& e, const GroupElement& t);

// Ball of radius R around `center` together with every edge whose endpoints
// both lie inside it, in a fixed deterministic order.  Copies share the
// enumerated identity-centered core; only the center varies.
class Window {
  public:
    Window(GroupSpec spec, int radius);
    Window with_center(GroupElement center) const;

    const GroupSpec& spec() const { return core_->spec; }
    int radius() const { return core_->radius; }
    const GroupElement& center() const { return center_; }

    int vertex_count() const { return static_cast<int>(core_->ball.elements.size()); }
    int edge_count() const { return static_cast<int>(core_->edge_base.size()); }

    GroupElement vertex(int i) const;
    int vertex_distance(int i) const { return core_->ball.distance[i]; }
    int vertex_index(const GroupElement& g) const;  // -1 if outside
    bool contains_vertex(const GroupElement& g) const { return vertex_index(g) >= 0; }

    EdgeId edge(int i) const;
    int edge_index(const EdgeId& e) const;  // -1 if outside
    bool contains_edge(const EdgeId& e) const { return edge_index(e) >= 0; }
    std::vector<EdgeId> edges() const;

    struct Incidence {
        int32_t edge;
        int32_t neighbor;
    };
    std::span<const Incidence> incident(int vertex) const;

    // Window edge index of the positive-`dir` edge out of vertex i, -1 if absent.
    int edge_from(int vertex, int dir) const {
        return core_->edge_from[static_cast<size_t>(vertex) * core_->spec.positive_count() + dir];
    }

    friend bool operator==(const Window& a, const Window& b) {
        return a.core_ == b.core_ && a.center_ == b.center_;
    }

  private:
    struct Core {
        Core(GroupSpec s, int r) : spec(std::move(s)), radius(r) {}
        GroupSpec spec;
        int radius = 0;
        BallEnumeration ball;
        std::unordered_map<GroupElement, int32_t, ElementHash> vertex_index;
        std::vector<int32_t> edge_base;  // vertex index of each edge's base
        std::vector<int32_t> edge_dir;
        std::unordered_map<EdgeId, int32_t, EdgeIdHash> edge_index;  // identity-centered keys
        std::vector<int32_t> edge_from;                              // vertex-major, |S⁺| per vertex
        std::vector<Incidence> incidence;
        std::vector<int32_t> incidence_offset;
    };

    Window(std::shared_ptr<const Core> core, GroupElement center)
        : core_(std::move(core)), center_(std::move(center)) {}

    std::shared_ptr<const Core> core_;
    GroupElement center_;
};

Window window_edges(const GroupSpec& spec, int radius);

// One point of 2^E restricted to a window: an open/closed bit per window edge.
class Configuration {
  public:
    explicit Configuration(Window window);

    const Window& window() const { return window_; }
    int edge_count() const { return window_.edge_count(); }

    bool open(int edge_index) const {
        return (bits_[static_cast<size_t>(edge_index) >> 6] >> (edge_index & 63)) & 1u;
    }
    void set_open(int edge_index, bool value);
    bool open_edge(const EdgeId& e) const;  // false when e is outside the window

    int open_count() const;
    uint64_t mask() const;           // requires ≤ 64 edges
    void assign_mask(uint64_t mask); // requires ≤ 64 edges
    std::vector<EdgeId> open_edges() const;

    std::span<const uint64_t> words() const { return bits_; }

  private:
    Configuration(Window window, std::vector<uint64_t> bits)
        : window_(std::move(window)), bits_(std::move(bits)) {}
    friend Configuration shift(const Configuration&, const GroupElement&);

    Window window_;
    std::vector<uint64_t> bits_;
};

Configuration shift(const Configuration& w, const GroupElement& g);
Configuration insert(const Configuration& w, const std::vector<EdgeId>& F);
bool cylinder_contains(const Configuration& w, const std::vector<EdgeId>& F);

// One edge per line: endpoints as "x1 y1 x2 y2" (lattice) or "w1 w2" (free
// group); `sep` switches the token separator (',' for CSV dumps).
void write_edge_list(std::ostream& out, const std::vector<EdgeId>& edges, char sep = ' ');
std::vector<EdgeId> read_edge_list(std::istream& in, const GroupSpec& spec);

}  // namespace percolab

#include "percolab/config_space.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace percolab {

size_t EdgeIdHash::operator()(const EdgeId& e) const {
    size_t h = ElementHash{}(e.base);
    h ^= static_cast<size_t>(e.dir) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

namespace {

// The positive generator for direction `dir`, inferred from the element kind
// (unit vector for lattices, single positive letter for free groups).
GroupElement positive_step(const GroupElement& like, int dir) {
    if (like.kind() == GroupKind::lattice) {
        if (dir < 0 || static_cast<size_t>(dir) >= like.data().size())
            throw UsageError("edge direction out of range for lattice dimension");
        std::vector<int64_t> unit(like.data().size(), 0);
        unit[dir] = 1;
        return GroupElement::lattice(std::move(unit));
    }
    if (dir < 0) throw UsageError("edge direction out of range");
    return GroupElement::word({dir + 1});
}

}  // namespace

EdgeId canonical_edge(const GroupElement& a, const GroupElement& b) {
    const GroupElement s = multiply(b, inverse(a));
    if (s.kind() == GroupKind::lattice) {
        int axis = -1;
        int64_t step = 0;
        for (size_t i = 0; i < s.data().size(); ++i) {
            if (s.data()[i] == 0) continue;
            if (axis >= 0 || (s.data()[i] != 1 && s.data()[i] != -1))
                throw UsageError("vertices are not Cayley-adjacent");
            axis = static_cast<int>(i);
            step = s.data()[i];
        }
        if (axis < 0) throw UsageError("vertices are not Cayley-adjacent");
        return step > 0 ? EdgeId{a, axis} : EdgeId{b, axis};
    }
    if (s.data().size() != 1) throw UsageError("vertices are not Cayley-adjacent");
    const int64_t letter = s.data()[0];
    return letter > 0 ? EdgeId{a, static_cast<int32_t>(letter - 1)}
                      : EdgeId{b, static_cast<int32_t>(-letter - 1)};
}

std::pair<GroupElement, GroupElement> edge_endpoints(const EdgeId& e) {
    return {e.base, multiply(positive_step(e.base, e.dir), e.base)};
}

EdgeId translate_edge(const EdgeId& e, const GroupElement& t) {
    return EdgeId{multiply(e.base, t), e.dir};
}

Window::Window(GroupSpec spec, int radius) {
    if (radius < 0) throw UsageError("window radius must be nonnegative");
    auto core = std::make_shared<Core>(std::move(spec), radius);
    core->ball = enumerate_ball(core->spec, radius);

    const auto& elements = core->ball.elements;
    core->vertex_index.reserve(elements.size());
    for (size_t i = 0; i < elements.size(); ++i)
        core->vertex_index.emplace(elements[i], static_cast<int32_t>(i));

    const size_t dirs = core->spec.positive_count();
    core->edge_from.assign(elements.size() * dirs, -1);
    for (size_t i = 0; i < elements.size(); ++i) {
        for (size_t d = 0; d < dirs; ++d) {
            GroupElement other = multiply(core->spec.positive_generator(d), elements[i]);
            auto it = core->vertex_index.find(other);
            if (it == core->vertex_index.end()) continue;
            const int32_t idx = static_cast<int32_t>(core->edge_base.size());
            core->edge_base.push_back(static_cast<int32_t>(i));
            core->edge_dir.push_back(static_cast<int32_t>(d));
            core->edge_index.emplace(EdgeId{elements[i], static_cast<int32_t>(d)}, idx);
            core->edge_from[i * dirs + d] = idx;
        }
    }

    std::vector<int32_t> degree(elements.size(), 0);
    for (size_t e = 0; e < core->edge_base.size(); ++e) {
        ++degree[core->edge_base[e]];
        const GroupElement other =
            multiply(core->spec.positive_generator(core->edge_dir[e]), elements[core->edge_base[e]]);
        ++degree[core->vertex_index.at(other)];
    }
    core->incidence_offset.assign(elements.size() + 1, 0);
    for (size_t i = 0; i < elements.size(); ++i)
        core->incidence_offset[i + 1] = core->incidence_offset[i] + degree[i];
    core->incidence.resize(core->incidence_offset.back());
    std::vector<int32_t> cursor(core->incidence_offset.begin(), core->incidence_offset.end() - 1);
    for (size_t e = 0; e < core->edge_base.size(); ++e) {
        const int32_t u = core->edge_base[e];
        const GroupElement other =
            multiply(core->spec.positive_generator(core->edge_dir[e]), elements[u]);
        const int32_t v = core->vertex_index.at(other);
        core->incidence[cursor[u]++] = {static_cast<int32_t>(e), v};
        core->incidence[cursor[v]++] = {static_cast<int32_t>(e), u};
    }

    center_ = core->spec.identity();
    core_ = std::move(core);
}

Window Window::with_center(GroupElement center) const {
    core_->spec.require_compatible(center);
    return Window(core_, std::move(center));
}

GroupElement Window::vertex(int i) const {
    if (center_.is_identity()) return core_->ball.elements[i];
    return multiply(core_->ball.elements[i], center_);
}

int Window::vertex_index(const GroupElement& g) const {
    const GroupElement rel = center_.is_identity() ? g : multiply(g, inverse(center_));
    auto it = core_->vertex_index.find(rel);
    return it == core_->vertex_index.end() ? -1 : it->second;
}

EdgeId Window::edge(int i) const {
    return EdgeId{vertex(core_->edge_base[i]), core_->edge_dir[i]};
}

int Window::edge_index(const EdgeId& e) const {
    const EdgeId rel =
        center_.is_identity() ? e : EdgeId{multiply(e.base, inverse(center_)), e.dir};
    auto it = core_->edge_index.find(rel);
    return it == core_->edge_index.end() ? -1 : it->second;
}

std::vector<EdgeId> Window::edges() const {
    std::vector<EdgeId> out;
    out.reserve(core_->edge_base.size());
    for (int i = 0; i < edge_count(); ++i) out.push_back(edge(i));
    return out;
}

std::span<const Window::Incidence> Window::incident(int vertex) const {
    const auto begin = core_->incidence.begin() + core_->incidence_offset[vertex];
    const auto end = core_->incidence.begin() + core_->incidence_offset[vertex + 1];
    return {&*begin, static_cast<size_t>(end - begin)};
}

Window window_edges(const GroupSpec& spec, int radius) { return Window(spec, radius); }

Configuration::Configuration(Window window)
    : window_(std::move(window)),
      bits_((static_cast<size_t>(window_.edge_count()) + 63) / 64, 0) {}

void Configuration::set_open(int edge_index, bool value) {
    if (edge_index < 0 || edge_index >= window_.edge_count())
        throw UsageError("edge index outside window");
    const uint64_t bit = 1ull << (edge_index & 63);
    if (value)
        bits_[static_cast<size_t>(edge_index) >> 6] |= bit;
    else
        bits_[static_cast<size_t>(edge_index) >> 6] &= ~bit;
}

bool Configuration::open_edge(const EdgeId& e) const {
    const int idx = window_.edge_index(e);
    return idx >= 0 && open(idx);
}

int Configuration::open_count() const {
    int total = 0;
    for (uint64_t w : bits_) total += std::popcount(w);
    return total;
}

uint64_t Configuration::mask() const {
    if (window_.edge_count() > 64) throw UsageError("window too wide for a 64-bit mask");
    return bits_.empty() ? 0 : bits_[0];
}

void Configuration::assign_mask(uint64_t mask) {
    const int m = window_.edge_count();
    if (m > 64) throw UsageError("window too wide for a 64-bit mask");
    if (m < 64 && (mask >> m) != 0) throw UsageError("mask has bits beyond the window edges");
    if (!bits_.empty()) bits_[0] = mask;
}

std::vector<EdgeId> Configuration::open_edges() const {
    std::vector<EdgeId> out;
    out.reserve(open_count());
    for (int i = 0; i < window_.edge_count(); ++i)
        if (open(i)) out.push_back(window_.edge(i));
    return out;
}

Configuration shift(const Configuration& w, const GroupElement& g) {
    w.window().spec().require_compatible(g);
    return Configuration(w.window().with_center(multiply(w.window().center(), inverse(g))),
                         std::vector<uint64_t>(w.words().begin(), w.words().end()));
}

Configuration insert(const Configuration& w, const std::vector<EdgeId>& F) {
    Configuration out = w;
    for (const EdgeId& e : F) {
        const int idx = w.window().edge_index(e);
        if (idx < 0) throw UsageError("inserted edge lies outside the window");
        out.set_open(idx, true);
    }
    return out;
}

bool cylinder_contains(const Configuration& w, const std::vector<EdgeId>& F) {
    return std::all_of(F.begin(), F.end(), [&](const EdgeId& e) { return w.open_edge(e); });
}

void write_edge_list(std::ostream& out, const std::vector<EdgeId>& edges, char sep) {
    for (const EdgeId& e : edges) {
        auto [a, b] = edge_endpoints(e);
        if (a.kind() == GroupKind::lattice) {
            for (size_t i = 0; i < a.data().size(); ++i) out << a.data()[i] << sep;
            for (size_t i = 0; i < b.data().size(); ++i) {
                if (i) out << sep;
                out << b.data()[i];
            }
        } else {
            out << format_element(a) << sep << format_element(b);
        }
        out << '\n';
    }
}

std::vector<EdgeId> read_edge_list(std::istream& in, const GroupSpec& spec) {
    std::vector<EdgeId> out;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (row >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        GroupElement a, b;
        if (spec.kind() == GroupKind::lattice) {
            const size_t d = static_cast<size_t>(spec.dimension());
            if (tokens.size() != 2 * d) throw UsageError("bad edge line: " + line);
            std::string left, right;
            for (size_t i = 0; i < d; ++i) left += (i ? " " : "") + tokens[i];
            for (size_t i = d; i < 2 * d; ++i) right += (i > d ? " " : "") + tokens[i];
            a = parse_element(spec, left);
            b = parse_element(spec, right);
        } else {
            if (tokens.size() != 2) throw UsageError("bad edge line: " + line);
            a = parse_element(spec, tokens[0]);
            b = parse_element(spec, tokens[1]);
        }
        out.push_back(canonical_edge(a, b));
    }
    return out;
}

}  // namespace percolab

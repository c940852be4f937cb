#include "percolab/group.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace percolab {

GroupElement GroupElement::lattice(std::vector<int64_t> coords) {
    GroupElement g;
    g.kind_ = GroupKind::lattice;
    g.data_ = std::move(coords);
    return g;
}

GroupElement GroupElement::word(std::vector<int64_t> letters) {
    GroupElement g;
    g.kind_ = GroupKind::free_group;
    g.data_.reserve(letters.size());
    for (int64_t l : letters) {
        if (l == 0) throw UsageError("word letters must be nonzero generator indices");
        if (!g.data_.empty() && g.data_.back() == -l) {
            g.data_.pop_back();
        } else {
            g.data_.push_back(l);
        }
    }
    return g;
}

bool GroupElement::is_identity() const {
    if (kind_ == GroupKind::free_group) return data_.empty();
    return std::all_of(data_.begin(), data_.end(), [](int64_t c) { return c == 0; });
}

size_t ElementHash::operator()(const GroupElement& g) const {
    uint64_t h = 0xcbf29ce484222325ull ^ (g.kind() == GroupKind::lattice ? 0x9eu : 0x3bu);
    for (int64_t v : g.data()) {
        h ^= static_cast<uint64_t>(v);
        h *= 0x100000001b3ull;
    }
    h ^= g.data().size();
    h *= 0x100000001b3ull;
    return static_cast<size_t>(h);
}

static void require_same_kind(const GroupElement& a, const GroupElement& b) {
    if (a.kind() != b.kind()) throw UsageError("group elements from different groups");
    if (a.kind() == GroupKind::lattice && a.data().size() != b.data().size())
        throw UsageError("lattice elements of different dimension");
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    require_same_kind(a, b);
    if (a.kind() == GroupKind::lattice) {
        std::vector<int64_t> c(a.data().size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.data()[i] + b.data()[i];
        return GroupElement::lattice(std::move(c));
    }
    std::vector<int64_t> letters = a.data();
    letters.insert(letters.end(), b.data().begin(), b.data().end());
    return GroupElement::word(std::move(letters));
}

GroupElement inverse(const GroupElement& a) {
    if (a.kind() == GroupKind::lattice) {
        std::vector<int64_t> c(a.data().size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = -a.data()[i];
        return GroupElement::lattice(std::move(c));
    }
    std::vector<int64_t> letters(a.data().rbegin(), a.data().rend());
    for (int64_t& l : letters) l = -l;
    return GroupElement::word(std::move(letters));
}

int64_t word_length(const GroupElement& g) {
    if (g.kind() == GroupKind::free_group) return static_cast<int64_t>(g.data().size());
    int64_t n = 0;
    for (int64_t c : g.data()) n += c < 0 ? -c : c;
    return n;
}

GroupSpec GroupSpec::lattice(int dim) {
    if (dim != 1 && dim != 2) throw UsageError("lattice dimension must be 1 or 2");
    GroupSpec s;
    s.kind_ = GroupKind::lattice;
    s.dimension_ = dim;
    s.id_ = dim == 1 ? "z1" : "z2";
    s.identity_ = GroupElement::lattice(std::vector<int64_t>(dim, 0));
    for (int axis = 0; axis < dim; ++axis) {
        std::vector<int64_t> plus(dim, 0), minus(dim, 0);
        plus[axis] = 1;
        minus[axis] = -1;
        s.generators_.push_back(GroupElement::lattice(plus));
        s.generators_.push_back(GroupElement::lattice(minus));
        s.inverse_index_.push_back(s.generators_.size() - 1);
        s.inverse_index_.push_back(s.generators_.size() - 2);
        s.positive_.push_back(s.generators_.size() - 2);
        s.dir_of_.push_back(axis);
        s.dir_of_.push_back(-1);
    }
    return s;
}

GroupSpec GroupSpec::free_group(int rank) {
    if (rank != 2) throw UsageError("free group rank must be 2");
    GroupSpec s;
    s.kind_ = GroupKind::free_group;
    s.dimension_ = rank;
    s.id_ = "f2";
    s.identity_ = GroupElement::word({});
    for (int i = 1; i <= rank; ++i) {
        s.generators_.push_back(GroupElement::word({i}));
        s.generators_.push_back(GroupElement::word({-i}));
        s.inverse_index_.push_back(s.generators_.size() - 1);
        s.inverse_index_.push_back(s.generators_.size() - 2);
        s.positive_.push_back(s.generators_.size() - 2);
        s.dir_of_.push_back(i - 1);
        s.dir_of_.push_back(-1);
    }
    return s;
}

GroupSpec GroupSpec::from_id(std::string_view id) {
    if (id == "z1") return lattice(1);
    if (id == "z2") return lattice(2);
    if (id == "f2") return free_group(2);
    throw UsageError("unknown group id: " + std::string(id) + " (expected z1, z2 or f2)");
}

bool GroupSpec::compatible(const GroupElement& g) const {
    if (g.kind() != kind_) return false;
    if (kind_ == GroupKind::lattice) return g.data().size() == static_cast<size_t>(dimension_);
    for (int64_t l : g.data()) {
        int64_t a = l < 0 ? -l : l;
        if (a < 1 || a > dimension_) return false;
    }
    return true;
}

void GroupSpec::require_compatible(const GroupElement& g) const {
    if (!compatible(g)) throw UsageError("element does not belong to group " + id_);
}

std::vector<GroupElement> cayley_neighbors(const GroupSpec& spec, const GroupElement& g) {
    spec.require_compatible(g);
    std::vector<GroupElement> out;
    out.reserve(spec.generators().size());
    for (const GroupElement& s : spec.generators()) out.push_back(multiply(s, g));
    return out;
}

uint64_t predicted_ball_size(const GroupSpec& spec, int radius) {
    const uint64_t r = static_cast<uint64_t>(radius);
    if (spec.kind() == GroupKind::lattice) {
        if (spec.dimension() == 1) return 2 * r + 1;
        uint64_t size = 2 * r * r + 2 * r + 1;
        return size;
    }
    // free group: shells of size 2k (2k-1)^(j-1)
    uint64_t size = 1, shell = 2 * static_cast<uint64_t>(spec.dimension());
    for (int j = 1; j <= radius; ++j) {
        size += shell;
        if (size > kMaxBallSize) return kMaxBallSize + 1;
        shell *= 2 * static_cast<uint64_t>(spec.dimension()) - 1;
    }
    return size;
}

BallEnumeration enumerate_ball(const GroupSpec& spec, int radius) {
    if (radius < 0) throw UsageError("ball radius must be nonnegative");
    if (predicted_ball_size(spec, radius) > kMaxBallSize)
        throw ResourceError("word ball exceeds the enumeration guard of 10^7 elements");

    BallEnumeration ball;
    ball.elements.push_back(spec.identity());
    ball.distance.push_back(0);
    std::unordered_map<GroupElement, uint32_t, ElementHash> index;
    index.emplace(spec.identity(), 0);

    for (size_t head = 0; head < ball.elements.size(); ++head) {
        if (ball.distance[head] == radius) continue;
        const int32_t next_dist = ball.distance[head] + 1;
        for (const GroupElement& s : spec.generators()) {
            GroupElement h = multiply(s, ball.elements[head]);
            if (index.contains(h)) continue;
            if (ball.elements.size() >= kMaxBallSize)
                throw ResourceError("word ball exceeds the enumeration guard of 10^7 elements");
            index.emplace(h, static_cast<uint32_t>(ball.elements.size()));
            ball.elements.push_back(std::move(h));
            ball.distance.push_back(next_dist);
        }
    }
    return ball;
}

std::vector<GroupElement> word_ball(const GroupSpec& spec, int radius) {
    return enumerate_ball(spec, radius).elements;
}

std::string format_element(const GroupElement& g) {
    if (g.kind() == GroupKind::lattice) {
        std::string out;
        for (size_t i = 0; i < g.data().size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(g.data()[i]);
        }
        return out;
    }
    if (g.data().empty()) return "1";
    std::string out;
    for (int64_t l : g.data()) {
        const char base = l > 0 ? 'a' : 'A';
        const int64_t idx = (l > 0 ? l : -l) - 1;
        if (idx > 25) throw UsageError("cannot format free-group letter beyond z");
        out += static_cast<char>(base + idx);
    }
    return out;
}

GroupElement parse_element(const GroupSpec& spec, std::string_view text) {
    if (spec.kind() == GroupKind::lattice) {
        std::vector<int64_t> coords;
        std::istringstream in{std::string(text)};
        int64_t v = 0;
        while (in >> v) coords.push_back(v);
        if (!in.eof() || coords.size() != static_cast<size_t>(spec.dimension()))
            throw UsageError("bad lattice element: " + std::string(text));
        return GroupElement::lattice(std::move(coords));
    }
    if (text == "1") return spec.identity();
    std::vector<int64_t> letters;
    for (char c : text) {
        int64_t l = 0;
        if (c >= 'a' && c <= 'z') l = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z') l = -(c - 'A' + 1);
        else throw UsageError(std::string("bad word letter: ") + c);
        letters.push_back(l);
    }
    GroupElement g = GroupElement::word(std::move(letters));
    spec.require_compatible(g);
    return g;
}

}  // namespace percolab

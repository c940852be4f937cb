#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "percolab/errors.hpp"

namespace percolab {

enum class GroupKind { lattice, free_group };

// Element of one of the built-in groups in normal form: an integer coordinate
// vector for Z^d, a freely reduced word for F_k. Word letters are signed
// 1-based generator indices (+1 = a, -1 = a^-1, +2 = b, ...).
class GroupElement {
public:
    GroupElement() = default;

    static GroupElement lattice(std::vector<int64_t> coords);
    // Reduces the word: adjacent inverse pairs cancel until none remain.
    static GroupElement word(std::vector<int64_t> letters);

    GroupKind kind() const { return kind_; }
    const std::vector<int64_t>& data() const { return data_; }
    bool is_identity() const;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

private:
    GroupKind kind_ = GroupKind::lattice;
    std::vector<int64_t> data_;
};

struct ElementHash {
    size_t operator()(const GroupElement& g) const;
};

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);

// Word length with respect to the standard generators of the built-in groups.
int64_t word_length(const GroupElement& g);

// A built-in group together with its symmetric generating set S. The
// generator list is ordered; positive() picks one representative per inverse
// pair (the orientation used for canonical undirected edges).
class GroupSpec {
public:
    static GroupSpec lattice(int dim);     // dim 1 or 2
    static GroupSpec free_group(int rank); // rank 2
    static GroupSpec from_id(std::string_view id); // "z1", "z2", "f2"

    const std::string& id() const { return id_; }
    GroupKind kind() const { return kind_; }
    int dimension() const { return dimension_; } // lattice dim or free rank
    const GroupElement& identity() const { return identity_; }

    const std::vector<GroupElement>& generators() const { return generators_; }
    size_t inverse_index(size_t i) const { return inverse_index_[i]; }
    const std::vector<size_t>& positive() const { return positive_; }
    size_t positive_count() const { return positive_.size(); }
    const GroupElement& positive_generator(size_t dir) const {
        return generators_[positive_[dir]];
    }
    // Maps a generator index to its positive direction, or -1 if the
    // generator is a negative representative.
    int positive_dir_of(size_t gen_index) const { return dir_of_[gen_index]; }

    bool compatible(const GroupElement& g) const;
    void require_compatible(const GroupElement& g) const;

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        return a.kind_ == b.kind_ && a.dimension_ == b.dimension_;
    }

private:
    GroupSpec() = default;

    std::string id_;
    GroupKind kind_ = GroupKind::lattice;
    int dimension_ = 0;
    GroupElement identity_;
    std::vector<GroupElement> generators_;
    std::vector<size_t> inverse_index_;
    std::vector<size_t> positive_;
    std::vector<int> dir_of_;
};

// Left neighbors {s.g : s in S}, in generator order.
std::vector<GroupElement> cayley_neighbors(const GroupSpec& spec, const GroupElement& g);

struct BallEnumeration {
    std::vector<GroupElement> elements;  // BFS discovery order, identity first
    std::vector<int32_t> distance;       // word distance per element
};

// Breadth-first enumeration of the closed word ball of the given radius.
// Guarded: throws ResourceError once the ball would exceed 10^7 elements.
BallEnumeration enumerate_ball(const GroupSpec& spec, int radius);
std::vector<GroupElement> word_ball(const GroupSpec& spec, int radius);

// Predicted ball size for the built-in groups, saturating at the guard.
uint64_t predicted_ball_size(const GroupSpec& spec, int radius);

inline constexpr uint64_t kMaxBallSize = 10'000'000;

// Text form: "x y" for lattice coordinates, words like "abA" for free groups
// ("1" is the identity word).
std::string format_element(const GroupElement& g);
GroupElement parse_element(const GroupSpec& spec, std::string_view text);

}  // namespace percolab

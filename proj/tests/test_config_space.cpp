#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "percolab/config_space.hpp"
#include "percolab/errors.hpp"

using namespace percolab;

namespace {
EdgeId lat_edge(int64_t x, int64_t y, int dir) {
  return EdgeId{GroupElement::lattice({x, y}), dir};
}
}  // namespace

TEST_CASE("canonical edge quotients the orientation") {
  auto e = canonical_edge(GroupElement::lattice({0, 0}), GroupElement::lattice({1, 0}));
  CHECK(e.base == GroupElement::lattice({0, 0}));
  CHECK(e.dir == 0);

  auto f = canonical_edge(GroupElement::lattice({2, 3}), GroupElement::lattice({2, 2}));
  CHECK(f.base == GroupElement::lattice({2, 2}));
  CHECK(f.dir == 1);

  CHECK_THROWS_AS(canonical_edge(GroupElement::lattice({0, 0}), GroupElement::lattice({1, 1})),
                  UsageError);
  CHECK_THROWS_AS(canonical_edge(GroupElement::lattice({0, 0}), GroupElement::lattice({0, 0})),
                  UsageError);
}

TEST_CASE("canonical edge is order independent") {
  for (const auto* id : {"z1", "z2", "f2"}) {
    auto spec = GroupSpec::from_id(id);
    Window win(spec, 2);
    for (int i = 0; i < win.edge_count(); ++i) {
      auto [a, b] = edge_endpoints(win.edge(i));
      CHECK(canonical_edge(a, b) == canonical_edge(b, a));
      CHECK(canonical_edge(a, b) == win.edge(i));
    }
  }
}

TEST_CASE("edge endpoints and translation round-trip") {
  auto z2 = GroupSpec::from_id("z2");
  auto e = lat_edge(3, -2, 1);
  auto [a, b] = edge_endpoints(e);
  CHECK(a == GroupElement::lattice({3, -2}));
  CHECK(b == GroupElement::lattice({3, -1}));
  for (int i = 0; i < 40; ++i) {
    auto t = oracles::random_element(z2, 6);
    auto moved = translate_edge(e, t);
    CHECK(translate_edge(moved, inverse(t)) == e);
    auto [ma, mb] = edge_endpoints(moved);
    CHECK(ma == multiply(a, t));
    CHECK(mb == multiply(b, t));
  }
}

TEST_CASE("window edge counts match a pairwise recount") {
  auto z1 = GroupSpec::from_id("z1");
  auto z2 = GroupSpec::from_id("z2");
  auto f2 = GroupSpec::from_id("f2");
  CHECK(window_edges(z2, 1).edge_count() == 4);
  CHECK(window_edges(z2, 0).edge_count() == 0);
  CHECK(window_edges(z1, 2).edge_count() == 4);
  for (int r = 0; r <= 3; ++r) {
    CHECK(window_edges(z1, r).edge_count() == oracles::pairwise_edge_count(z1, r));
    CHECK(window_edges(z2, r).edge_count() == oracles::pairwise_edge_count(z2, r));
    CHECK(window_edges(f2, r).edge_count() == oracles::pairwise_edge_count(f2, r));
  }
  CHECK(window_edges(z2, 5).edge_count() == oracles::pairwise_edge_count(z2, 5));
}

TEST_CASE("window indexes its own vertices and edges consistently") {
  for (const auto* id : {"z2", "f2"}) {
    auto spec = GroupSpec::from_id(id);
    Window win(spec, 3);
    std::set<EdgeId> seen;
    for (int i = 0; i < win.edge_count(); ++i) {
      auto e = win.edge(i);
      CHECK(win.edge_index(e) == i);
      CHECK(seen.insert(e).second);
      auto [a, b] = edge_endpoints(e);
      CHECK(win.contains_vertex(a));
      CHECK(win.contains_vertex(b));
    }
    for (int v = 0; v < win.vertex_count(); ++v) {
      CHECK(win.vertex_index(win.vertex(v)) == v);
      for (auto inc : win.incident(v)) {
        auto [a, b] = edge_endpoints(win.edge(inc.edge));
        bool touches = a == win.vertex(v) || b == win.vertex(v);
        CHECK(touches);
        bool other = a == win.vertex(inc.neighbor) || b == win.vertex(inc.neighbor);
        CHECK(other);
      }
    }
    CHECK(win.vertex_index(oracles::random_element(spec, 20)) <= win.vertex_count());
    CHECK(!win.contains_edge(EdgeId{win.vertex(0), 99}));
  }
}

TEST_CASE("degree sums count each edge twice") {
  for (const auto* id : {"z1", "z2", "f2"}) {
    Window win(GroupSpec::from_id(id), 3);
    size_t degree_sum = 0;
    for (int v = 0; v < win.vertex_count(); ++v) degree_sum += win.incident(v).size();
    CHECK(degree_sum == 2 * static_cast<size_t>(win.edge_count()));
  }
}

TEST_CASE("shift moves a single open edge the documented way") {
  Window win(GroupSpec::from_id("z2"), 2);
  Configuration w(win);
  w.set_open(win.edge_index(lat_edge(0, 0, 0)), true);
  auto shifted = shift(w, GroupElement::lattice({1, 0}));
  auto open = shifted.open_edges();
  REQUIRE(open.size() == 1);
  CHECK(open[0] == lat_edge(-1, 0, 0));
  CHECK(shifted.open_count() == 1);
}

TEST_CASE("shift by the identity is the identity") {
  Window win(GroupSpec::from_id("z2"), 2);
  for (int i = 0; i < 20; ++i) {
    auto w = oracles::random_config(win, 0.5);
    auto s = shift(w, GroupElement::lattice({0, 0}));
    CHECK(s.window() == w.window());
    CHECK(s.open_edges() == w.open_edges());
  }
}

TEST_CASE("shift satisfies the left action law") {
  for (const auto* id : {"z2", "f2"}) {
    auto spec = GroupSpec::from_id(id);
    Window win(spec, 2);
    for (int i = 0; i < 300; ++i) {
      auto w = oracles::random_config(win, 0.5);
      auto g = oracles::random_element(spec, 3);
      auto h = oracles::random_element(spec, 3);
      auto lhs = shift(shift(w, g), h);
      auto rhs = shift(w, multiply(h, g));
      CHECK(lhs.window() == rhs.window());
      CHECK(lhs.open_edges() == rhs.open_edges());
    }
  }
}

TEST_CASE("shift is a bijection that preserves open counts and adjacency") {
  auto spec = GroupSpec::from_id("z2");
  Window win(spec, 2);
  for (int i = 0; i < 50; ++i) {
    auto w = oracles::random_config(win, 0.4);
    auto g = oracles::random_element(spec, 4);
    auto s = shift(w, g);
    CHECK(s.open_count() == w.open_count());
    auto back = shift(s, inverse(g));
    CHECK(back.window() == w.window());
    CHECK(back.open_edges() == w.open_edges());
    for (const auto& e : w.open_edges()) {
      CHECK(s.open_edge(translate_edge(e, inverse(g))));
    }
  }
}

TEST_CASE("insert opens exactly the requested cylinder") {
  Window win(GroupSpec::from_id("z2"), 2);
  Configuration empty(win);
  std::vector<EdgeId> F{lat_edge(0, 0, 0), lat_edge(0, 1, 1)};
  auto w = insert(empty, F);
  CHECK(w.open_count() == 2);
  CHECK(cylinder_contains(w, F));
  auto again = insert(w, F);
  CHECK(again.open_edges() == w.open_edges());

  for (int i = 0; i < 30; ++i) {
    auto base = oracles::random_config(win, 0.3);
    auto inserted = insert(base, F);
    CHECK(cylinder_contains(inserted, F));
    CHECK(inserted.open_count() >= base.open_count());
    for (const auto& e : base.open_edges()) CHECK(inserted.open_edge(e));
  }
  CHECK_THROWS_AS(insert(empty, {lat_edge(5, 5, 0)}), UsageError);
}

TEST_CASE("cylinder membership") {
  Window win(GroupSpec::from_id("z2"), 1);
  Configuration empty(win);
  CHECK(cylinder_contains(empty, {}));
  CHECK(!cylinder_contains(empty, {lat_edge(0, 0, 0)}));
  Configuration full(win);
  for (int e = 0; e < win.edge_count(); ++e) full.set_open(e, true);
  CHECK(cylinder_contains(full, win.edges()));
  CHECK(cylinder_contains(full, {lat_edge(0, 0, 1)}));
}

TEST_CASE("the full-edge cylinder pins down a unique configuration") {
  Window win(GroupSpec::from_id("z2"), 2);
  auto all = win.edges();
  Configuration full(win);
  for (int e = 0; e < win.edge_count(); ++e) full.set_open(e, true);
  for (size_t n = 0; n <= all.size(); ++n) {
    std::vector<EdgeId> prefix(all.begin(), all.begin() + n);
    CHECK(cylinder_contains(full, prefix));
  }
  for (int i = 0; i < 40; ++i) {
    auto w = oracles::random_config(win, 0.8);
    if (w.open_count() == win.edge_count()) continue;
    CHECK(!cylinder_contains(w, all));
  }
  for (size_t n = 0; n < all.size(); ++n) {
    std::vector<EdgeId> shorter(all.begin(), all.begin() + n);
    std::vector<EdgeId> longer(all.begin(), all.begin() + n + 1);
    auto w = oracles::random_config(win, 0.5);
    if (cylinder_contains(w, longer)) CHECK(cylinder_contains(w, shorter));
  }
}

TEST_CASE("mask round-trips on narrow windows") {
  Window win(GroupSpec::from_id("z2"), 1);
  Configuration w(win);
  w.assign_mask(0b1010);
  CHECK(w.mask() == 0b1010);
  CHECK(w.open_count() == 2);
  CHECK(w.open(1));
  CHECK(w.open(3));
  CHECK(!w.open(0));
  CHECK_THROWS_AS(w.assign_mask(1ull << 10), UsageError);
  CHECK_THROWS_AS(w.set_open(99, true), UsageError);
  CHECK_THROWS_AS(w.set_open(-1, true), UsageError);
}

TEST_CASE("edge lists round-trip through text") {
  for (const auto* id : {"z1", "z2", "f2"}) {
    auto spec = GroupSpec::from_id(id);
    Window win(spec, 2);
    auto edges = win.edges();
    std::ostringstream out;
    write_edge_list(out, edges);
    std::istringstream in(out.str());
    auto parsed = read_edge_list(in, spec);
    CHECK(parsed == edges);
  }
}

TEST_CASE("edge list reader accepts comma separators") {
  auto z2 = GroupSpec::from_id("z2");
  std::istringstream in("0,0,1,0\n0 1 0 2\n\n");
  auto parsed = read_edge_list(in, z2);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0] == lat_edge(0, 0, 0));
  CHECK(parsed[1] == lat_edge(0, 1, 1));
}

TEST_CASE("edge list reader rejects junk") {
  auto z2 = GroupSpec::from_id("z2");
  std::istringstream diag("0 0 1 1\n");
  CHECK_THROWS_AS(read_edge_list(diag, z2), UsageError);
  std::istringstream words("0 0 1\n");
  CHECK_THROWS_AS(read_edge_list(words, z2), UsageError);
  std::istringstream alpha("a b c d\n");
  CHECK_THROWS_AS(read_edge_list(alpha, z2), UsageError);
}

TEST_CASE("free-group edges serialize as words") {
  auto f2 = GroupSpec::from_id("f2");
  std::vector<EdgeId> edges{EdgeId{GroupElement::word({}), 0},
                            EdgeId{GroupElement::word({1, 2}), 1}};
  std::ostringstream out;
  write_edge_list(out, edges);
  CHECK(out.str() == "1 a\nab bab\n");
  std::istringstream in(out.str());
  CHECK(read_edge_list(in, f2) == edges);
}

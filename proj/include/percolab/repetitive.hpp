#pragma once

#include <memory>
#include <string>
#include <vector>

#include "percolab/cluster.hpp"

namespace percolab {

// Edge oracle for an infinite subgraph of the square lattice with full vertex
// set ℤ². dir 0 is the edge (x,y)–(x+1,y), dir 1 the edge (x,y)–(x,y+1).
class SubgraphModel {
  public:
    virtual ~SubgraphModel() = default;
    virtual const std::string& id() const = 0;
    virtual bool has_edge(int64_t x, int64_t y, int dir) const = 0;

    bool is_edge(const EdgeId& e) const;
};

// "full" | "even-rows" | "periodic:<bx1,by1;bx2,by2;motif-file>" | "fib-fence"
std::unique_ptr<SubgraphModel> make_model(const std::string& id);

// Exact ⌊nα⌋ for α = (√5−1)/2, via integer square roots.
int64_t sturmian_floor(int64_t n);
// Letter s(n) = ⌊(n+1)α⌋ − ⌊nα⌋ of the Fibonacci-Sturmian word.
int sturmian_bit(int64_t n);

// B_{g.H}(identity, r): the model's r-ball around g, translated by g⁻¹.
RootedGraph local_ball(const SubgraphModel& model, const GroupElement& g, int r);

// The distinct r-ball patterns seen across a scan window: the finite-stage
// orbit closure. `stable` records that doubling the scan added nothing.
struct PatternLibrary {
    int r = 0;
    int scan_radius = 0;
    bool stable = false;
    std::vector<RootedGraph> patterns;  // first-occurrence scan order
};

PatternLibrary patterns(const SubgraphModel& model, int r, int scan_radius);

struct RepetitivenessReport {
    bool ok = true;
    RootedGraph pattern;   // on failure: a library pattern missing near `center`
    GroupElement center;
};

// Checks that every library pattern occurs within model-graph distance R of
// every test center in the scan window.
RepetitivenessReport is_repetitive(const SubgraphModel& model, int r, int R, int scan_radius);

bool in_closure(const RootedGraph& K, const PatternLibrary& lib);

// True when some edge of the full lattice inside the scan window is absent.
bool is_proper(const SubgraphModel& model, int scan_radius);

// BFS through the model from the origin inside ball(radius + slack) must
// cover every vertex of ball(radius).
bool connected_on_window(const SubgraphModel& model, int radius, int slack);

void save_library(const PatternLibrary& lib, const std::string& model_id,
                  const std::string& dir);
PatternLibrary load_library(const std::string& dir, std::string* model_id = nullptr);

}  // namespace percolab

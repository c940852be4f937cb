#pragma once

#include <functional>
#include <vector>

#include "percolab/repetitive.hpp"

namespace percolab {

// Per-sample stream seed: a 64-bit avalanche of (master seed, sample index),
// so samples are independent tasks with order-free deterministic results.
uint64_t mix_seed(uint64_t master, uint64_t index);

class SampleStream {
  public:
    explicit SampleStream(uint64_t seed) : state_(seed) {}
    uint64_t next();
    double next_unit();  // uniform in [0, 1)

  private:
    uint64_t state_;
};

class BernoulliLaw {
  public:
    BernoulliLaw(double p) : p_(p) {
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must lie in [0, 1]");
    }
    double p() const { return p_; }

  private:
    double p_;
};

struct SampleSpec {
    int radius = 1;
    BernoulliLaw law{0.5};
    uint64_t master_seed = 1;
    int64_t n = 1;
};

struct EstimateRow {
    double parameter = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    int64_t n = 0;
};

// estimate = hits/trials with the binomial normal-approximation standard
// error; NaN fields when trials = 0 (undefined conditional estimate).
EstimateRow make_estimate(double parameter, uint64_t hits, uint64_t trials);

// Each window edge open independently with probability law.p(), read from the
// stream seeded by (master_seed, sample_index).
Configuration sample(const Window& window, BernoulliLaw law, uint64_t sample_index,
                     uint64_t master_seed);

// Product measure of the cylinder U_F: p^|F| over distinct edges.
double cylinder_probability(const std::vector<EdgeId>& F, BernoulliLaw law);

using ConfigEvent = std::function<bool(const Configuration&)>;

// Exact probability by enumerating all 2^|E| window configurations (|E| ≤ 24).
double brute_force_probability(const Window& window, BernoulliLaw law,
                               const ConfigEvent& event);

// Runs body(i, counts) for i in [0, n) sharded over threads; per-thread count
// vectors of width k are merged by addition, so results are shard-invariant.
std::vector<uint64_t> monte_carlo_counts(
    int64_t n, size_t k, int threads,
    const std::function<void(int64_t, std::vector<uint64_t>&)>& body);

// Monte Carlo estimate of an event on sampled window configurations.
EstimateRow estimate_probability(const GroupSpec& spec, const SampleSpec& sample_spec,
                                 const ConfigEvent& event, int threads = 1);

// True when some g in the identity's cluster with word length ≤ R has F·g ⊆ ω.
bool saturation_member(const Configuration& w, const std::vector<EdgeId>& F, int R);
// Least such R, or -1 when no cluster translate fits.
int saturation_min_radius(const Configuration& w, const std::vector<EdgeId>& F);

struct MatchOptions {
    bool condition = false;    // keep only boundary-reaching samples
    int condition_radius = -1; // -1: the largest requested radius
    int scan_radius = 64;
    bool force_unstable = false;
    int threads = 1;
};

// Fraction of samples whose identity-cluster r-ball lies in the model's
// pattern library, one row per radius, all radii evaluated on each sample.
std::vector<EstimateRow> match_probabilities(const SubgraphModel& model,
                                             const std::vector<int>& radii, BernoulliLaw law,
                                             int64_t n, uint64_t master_seed,
                                             const MatchOptions& options = {});
EstimateRow match_probability(const SubgraphModel& model, int r, BernoulliLaw law, int64_t n,
                              uint64_t master_seed, const MatchOptions& options = {});

struct SaturationOptions {
    bool condition = false;
    int condition_radius = -1;  // -1: the largest requested radius
    int threads = 1;
    std::vector<EdgeId> F;      // empty: the origin +x edge
};

// Fraction of samples reaching the cylinder U_F by a cluster translate of
// word length ≤ R, one row per R.
std::vector<EstimateRow> saturation_probabilities(const GroupSpec& spec,
                                                  const std::vector<int>& radii,
                                                  BernoulliLaw law, int64_t n,
                                                  uint64_t master_seed,
                                                  const SaturationOptions& options = {});

// Membership test for the image i_F(B) = {ω ∪ F : ω ∈ B} of an event under
// the insertion map, decidable on ≤ 64-edge windows.
ConfigEvent insertion_image_event(const Window& window, const std::vector<EdgeId>& F,
                                  ConfigEvent base);

}  // namespace percolab

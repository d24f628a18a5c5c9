#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "clusterkit/series.hpp"
#include "clusterkit/weights.hpp"

namespace clusterkit {

// 64-bit random stream. Replication i of a run seeded with s uses
// RandomStream::split(s, i), so results do not depend on scheduling.
class RandomStream {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  static RandomStream split(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  double uniform();  // in [0, 1)

 private:
  std::mt19937_64 engine_;
};

struct SamplerConfig {
  Model model = Model::kSet;
  std::int64_t n = 1;
  // Defaults to z_n (sets) or q_n (multisets).
  std::optional<double> tuning_radius;
  std::int64_t max_rejections = 1'000'000;
  std::uint64_t seed = 0;
};

// Conditioned Boltzmann sampler. Holds the per-size laws for one (w, cfg)
// and can be copied to give each worker its own distribution state.
class BoltzmannSampler {
 public:
  BoltzmannSampler(const WeightSequence& w, const SamplerConfig& cfg);

  // Throws kRejectionBudgetExhausted after cfg.max_rejections failures.
  ClusterStructure sample(RandomStream& rng);

  // One unconditioned draw; returns true and fills `out` iff the total size
  // is exactly n.
  bool attempt(RandomStream& rng, ClusterStructure* out);

  double radius() const { return r_; }
  // 1/sqrt(2 pi b(r)), the predicted probability that an attempt hits n.
  double predicted_acceptance() const { return predicted_acceptance_; }
  std::int64_t attempts() const { return attempts_; }
  std::int64_t accepted() const { return accepted_; }

 private:
  struct SizeLaw {
    std::int64_t k = 0;
    enum class Kind { kGeometricSum, kGammaPoisson } kind;
    std::geometric_distribution<std::int64_t> geometric;
    int copies = 0;
    std::gamma_distribution<double> gamma;
  };

  std::int64_t draw(SizeLaw& law, RandomStream& rng);

  Model model_;
  std::int64_t n_;
  std::int64_t max_rejections_;
  double r_ = 0.0;
  double predicted_acceptance_ = 0.0;
  std::vector<SizeLaw> laws_;  // multisets: one compound law per size
  // Sets: the independent Poisson(c_k r^k) counts, drawn as a Poisson total
  // number of clusters with i.i.d. sizes.
  std::poisson_distribution<std::int64_t> cluster_count_;
  std::discrete_distribution<std::size_t> size_pick_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> counts_;
  std::int64_t attempts_ = 0;
  std::int64_t accepted_ = 0;
};

ClusterStructure boltzmann_sample_set(const WeightSequence& w,
                                      const SamplerConfig& cfg,
                                      RandomStream& rng);
ClusterStructure boltzmann_sample_multiset(const WeightSequence& w,
                                           const SamplerConfig& cfg,
                                           RandomStream& rng);

inline constexpr std::int64_t kDpBudget = 2000;

// Exact sampler by backward sampling through the max-size table: for
// s = n..1 the number of size-s clusters is drawn from its conditional law
// given the remaining size.
class ExactDpSampler {
 public:
  ExactDpSampler(const WeightSequence& w, std::int64_t n, Model model,
                 std::int64_t budget = kDpBudget);

  ClusterStructure sample(RandomStream& rng) const;
  const MaxSizeTable& table() const { return table_; }

 private:
  MaxSizeTable table_;
};

ClusterStructure exact_dp_sampler(const WeightSequence& w, std::int64_t n,
                                  Model model, RandomStream& rng);

struct StructureStats {
  std::int64_t kappa = 0;
  std::int64_t smallest = 0;
  std::int64_t largest = 0;
};

StructureStats statistics(const ClusterStructure& cs);

enum class SamplerChoice { kAuto, kBoltzmann, kExactDp };

// `count` replicates; replicate i draws from RandomStream::split(seed, i).
// kAuto picks the DP sampler when the predicted Boltzmann acceptance is
// below 1e-4.
std::vector<ClusterStructure> sample_many(const WeightSequence& w,
                                          const SamplerConfig& cfg,
                                          std::int64_t count,
                                          SamplerChoice choice = SamplerChoice::kAuto,
                                          int threads = 1);

}  // namespace clusterkit

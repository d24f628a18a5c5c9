#include "clusterkit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"
#include "clusterkit/saddle.hpp"

namespace clusterkit {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kDpSwitchAcceptance = 1e-4;

}  // namespace

RandomStream RandomStream::split(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(~index)));
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

BoltzmannSampler::BoltzmannSampler(const WeightSequence& w,
                                   const SamplerConfig& cfg)
    : model_(cfg.model), n_(cfg.n), max_rejections_(cfg.max_rejections) {
  require(cfg.n >= 1, ErrorCode::kInvalidParameter, "n must be >= 1");
  require(cfg.max_rejections >= 1, ErrorCode::kInvalidParameter,
          "max_rejections must be >= 1");
  const SaddleKind kind =
      model_ == Model::kSet ? SaddleKind::kSet : SaddleKind::kMultiset;
  double log_r = 0.0;
  if (cfg.tuning_radius) {
    require(*cfg.tuning_radius > 0.0, ErrorCode::kInvalidParameter,
            "tuning radius must be positive");
    log_r = std::log(*cfg.tuning_radius);
    require(log_r < log_search_radius(w, kind), ErrorCode::kInvalidParameter,
            "tuning radius must lie inside the radius of convergence");
  } else {
    const double dn = static_cast<double>(n_);
    log_r = (model_ == Model::kSet ? solve_set_saddle(w, dn)
                                   : solve_multiset_saddle(w, dn))
                .log_r;
  }
  r_ = std::exp(log_r);
  const AuxSums sums(w, log_r, model_ == Model::kSet ? -1 : 2);
  const double b = model_ == Model::kSet ? sums.A(2) : sums.A(2, 2);
  predicted_acceptance_ = 1.0 / std::sqrt(2.0 * std::numbers::pi * b);

  std::vector<double> lambdas;
  for (std::int64_t k = 1; k <= n_; ++k) {
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    const double kl = static_cast<double>(k) * log_r;
    if (model_ == Model::kSet) {
      // Sizes above n always overshoot, so dropping them leaves the accepted
      // law unchanged.
      const double lambda = std::exp(lc + kl);
      if (lambda <= 0.0) continue;
      sizes_.push_back(k);
      lambdas.push_back(lambda);
      continue;
    }
    const double c = std::exp(lc);
    const double p = std::exp(kl);
    if (p <= 0.0) continue;
    SizeLaw law;
    law.k = k;
    if (c <= 32.0 && c == std::floor(c)) {
      law.kind = SizeLaw::Kind::kGeometricSum;
      law.copies = static_cast<int>(c);
      law.geometric = std::geometric_distribution<std::int64_t>(-std::expm1(kl));
    } else {
      law.kind = SizeLaw::Kind::kGammaPoisson;
      law.gamma = std::gamma_distribution<double>(c, p / -std::expm1(kl));
    }
    laws_.push_back(law);
  }
  if (!lambdas.empty()) {
    double total = 0.0;
    for (double l : lambdas) total += l;
    cluster_count_ = std::poisson_distribution<std::int64_t>(total);
    size_pick_ = std::discrete_distribution<std::size_t>(lambdas.begin(), lambdas.end());
  }
  counts_.assign(static_cast<std::size_t>(n_), 0);
}

std::int64_t BoltzmannSampler::draw(SizeLaw& law, RandomStream& rng) {
  switch (law.kind) {
    case SizeLaw::Kind::kGeometricSum: {
      std::int64_t total = 0;
      for (int i = 0; i < law.copies; ++i) total += law.geometric(rng);
      return total;
    }
    case SizeLaw::Kind::kGammaPoisson: {
      const double lambda = law.gamma(rng);
      if (!(lambda > 0.0)) return 0;
      return std::poisson_distribution<std::int64_t>(lambda)(rng);
    }
  }
  return 0;
}

bool BoltzmannSampler::attempt(RandomStream& rng, ClusterStructure* out) {
  ++attempts_;
  std::fill(counts_.begin(), counts_.end(), 0);
  std::int64_t total = 0;
  if (model_ == Model::kSet) {
    if (sizes_.empty()) return false;
    const std::int64_t clusters = cluster_count_(rng);
    for (std::int64_t i = 0; i < clusters; ++i) {
      const std::int64_t k = sizes_[size_pick_(rng)];
      total += k;
      if (total > n_) return false;
      ++counts_[static_cast<std::size_t>(k - 1)];
    }
  }
  for (auto& law : laws_) {
    const std::int64_t N = draw(law, rng);
    if (N == 0) continue;
    total += law.k * N;
    if (total > n_) return false;
    counts_[static_cast<std::size_t>(law.k - 1)] = N;
  }
  if (total != n_) return false;
  ++accepted_;
  if (out) *out = ClusterStructure(n_, counts_);
  return true;
}

ClusterStructure BoltzmannSampler::sample(RandomStream& rng) {
  ClusterStructure cs;
  for (std::int64_t i = 0; i < max_rejections_; ++i) {
    if (attempt(rng, &cs)) return cs;
  }
  fail(ErrorCode::kRejectionBudgetExhausted,
       "no structure of size " + std::to_string(n_) + " after " +
           std::to_string(max_rejections_) +
           " attempts; the exact DP sampler avoids rejection");
}

ClusterStructure boltzmann_sample_set(const WeightSequence& w,
                                      const SamplerConfig& cfg,
                                      RandomStream& rng) {
  require(cfg.model == Model::kSet, ErrorCode::kInvalidParameter,
          "config model must be set");
  BoltzmannSampler s(w, cfg);
  return s.sample(rng);
}

ClusterStructure boltzmann_sample_multiset(const WeightSequence& w,
                                           const SamplerConfig& cfg,
                                           RandomStream& rng) {
  require(cfg.model == Model::kMultiset, ErrorCode::kInvalidParameter,
          "config model must be multiset");
  BoltzmannSampler s(w, cfg);
  return s.sample(rng);
}

namespace {

MaxSizeTable checked_table(const WeightSequence& w, std::int64_t n,
                           Model model, std::int64_t budget) {
  require(n >= 1, ErrorCode::kInvalidParameter, "n must be >= 1");
  require(n <= budget, ErrorCode::kBudgetExceeded,
          "n = " + std::to_string(n) + " exceeds the DP budget " +
              std::to_string(budget));
  MaxSizeTable t(w, n, model);
  require(t.log_entry(n, n) != kLogZero, ErrorCode::kInvalidParameter,
          "no structure of size " + std::to_string(n) + " has positive weight");
  return t;
}

}  // namespace

ExactDpSampler::ExactDpSampler(const WeightSequence& w, std::int64_t n,
                               Model model, std::int64_t budget)
    : table_(checked_table(w, n, model, budget)) {}

ClusterStructure ExactDpSampler::sample(RandomStream& rng) const {
  const std::int64_t n = table_.n();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  std::int64_t m = n;
  std::vector<double> logp;
  for (std::int64_t s = n; s >= 1 && m > 0; --s) {
    const auto f = table_.log_factor(s);
    const double total = table_.log_entry(s, m);
    logp.clear();
    for (std::int64_t j = 0; j * s <= m; ++j) {
      const double a = f[static_cast<std::size_t>(j)];
      const double b = table_.log_entry(s - 1, m - j * s);
      logp.push_back(a == kLogZero || b == kLogZero ? kLogZero : a + b - total);
    }
    const double u = rng.uniform();
    double cum = 0.0;
    std::int64_t pick = -1;
    for (std::size_t j = 0; j < logp.size(); ++j) {
      if (logp[j] == kLogZero) continue;
      pick = static_cast<std::int64_t>(j);
      cum += std::exp(logp[j]);
      if (u < cum) break;
    }
    require(pick >= 0, ErrorCode::kContractViolation,
            "DP table has no admissible continuation");
    counts[static_cast<std::size_t>(s - 1)] = pick;
    m -= pick * s;
  }
  return ClusterStructure(n, std::move(counts));
}

ClusterStructure exact_dp_sampler(const WeightSequence& w, std::int64_t n,
                                  Model model, RandomStream& rng) {
  return ExactDpSampler(w, n, model).sample(rng);
}

StructureStats statistics(const ClusterStructure& cs) {
  StructureStats st;
  for (std::int64_t k = 1; k <= cs.n(); ++k) {
    const std::int64_t N = cs.count(k);
    if (N == 0) continue;
    st.kappa += N;
    if (st.smallest == 0) st.smallest = k;
    st.largest = k;
  }
  return st;
}

std::vector<ClusterStructure> sample_many(const WeightSequence& w,
                                          const SamplerConfig& cfg,
                                          std::int64_t count,
                                          SamplerChoice choice, int threads) {
  require(count >= 0, ErrorCode::kInvalidParameter, "count must be >= 0");
  std::vector<ClusterStructure> out(static_cast<std::size_t>(count));
  std::optional<BoltzmannSampler> boltzmann;
  std::optional<ExactDpSampler> dp;
  if (choice != SamplerChoice::kExactDp) {
    boltzmann.emplace(w, cfg);
    if (choice == SamplerChoice::kAuto &&
        boltzmann->predicted_acceptance() < kDpSwitchAcceptance) {
      boltzmann.reset();
    }
  }
  if (!boltzmann) dp.emplace(w, cfg.n, cfg.model);

  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t t) {
    try {
      std::optional<BoltzmannSampler> local = boltzmann;
      for (std::size_t i = t; i < out.size(); i += workers) {
        RandomStream rng = RandomStream::split(cfg.seed, i);
        out[i] = local ? local->sample(rng) : dp->sample(rng);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace clusterkit

#include "clusterkit/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {
namespace {

void check_order(std::int64_t K) {
  require(K >= 0, ErrorCode::kInvalidParameter,
          "series order must be non-negative");
}

// ln sum_{k=lo}^{hi} (a[k] + b[i-k]) for a fixed output index i.
double log_convolve_at(std::span<const double> a, std::span<const double> b,
                       std::int64_t i, std::vector<double>& scratch) {
  scratch.clear();
  const auto na = static_cast<std::int64_t>(a.size());
  const auto nb = static_cast<std::int64_t>(b.size());
  const std::int64_t lo = std::max<std::int64_t>(0, i - (nb - 1));
  const std::int64_t hi = std::min<std::int64_t>(i, na - 1);
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double x = a[static_cast<std::size_t>(k)];
    const double y = b[static_cast<std::size_t>(i - k)];
    if (x == kLogZero || y == kLogZero) continue;
    scratch.push_back(x + y);
  }
  return log_sum_exp(scratch);
}

}  // namespace

LogSeries::LogSeries(std::vector<double> log_coeffs)
    : log_coeffs_(std::move(log_coeffs)) {
  require(!log_coeffs_.empty(), ErrorCode::kContractViolation,
          "a series needs at least the constant term");
  for (double v : log_coeffs_) {
    require(!std::isnan(v) && v != std::numeric_limits<double>::infinity(),
            ErrorCode::kContractViolation, "log-coefficient is not finite");
  }
}

LogSeries LogSeries::from_values(std::span<const double> values) {
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double v : values) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::kContractViolation,
            "LogSeries cannot represent a negative coefficient");
    logs.push_back(v > 0.0 ? std::log(v) : kLogZero);
  }
  return LogSeries(std::move(logs));
}

LogSeries LogSeries::zero(std::int64_t order) {
  check_order(order);
  return LogSeries(std::vector<double>(static_cast<std::size_t>(order + 1),
                                       kLogZero));
}

LogSeries LogSeries::one(std::int64_t order) {
  check_order(order);
  std::vector<double> v(static_cast<std::size_t>(order + 1), kLogZero);
  v[0] = 0.0;
  return LogSeries(std::move(v));
}

double LogSeries::log_coeff(std::int64_t n) const {
  require(n >= 0 && n <= order(), ErrorCode::kOutOfRange,
          "coefficient index " + std::to_string(n) + " outside 0.." +
              std::to_string(order()));
  return log_coeffs_[static_cast<std::size_t>(n)];
}

double LogSeries::value(std::int64_t n) const { return std::exp(log_coeff(n)); }

LogSeries LogSeries::truncated(std::int64_t order) const {
  check_order(order);
  std::vector<double> v(static_cast<std::size_t>(order + 1), kLogZero);
  const auto keep = std::min<std::size_t>(v.size(), log_coeffs_.size());
  std::copy_n(log_coeffs_.begin(), keep, v.begin());
  return LogSeries(std::move(v));
}

LogCoeff coeff(const LogSeries& s, std::int64_t n) {
  const double v = s.log_coeff(n);
  return {v, v != kLogZero};
}

LogSeries truncate_C(const WeightSequence& w, std::int64_t K) {
  require(K >= 1, ErrorCode::kInvalidParameter, "truncation order must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(K + 1), kLogZero);
  for (std::int64_t k = 1; k <= K; ++k) v[static_cast<std::size_t>(k)] = w.log_at(k);
  return LogSeries(std::move(v));
}

LogSeries series_exp(const LogSeries& a) {
  require(a.log_coeff(0) == kLogZero, ErrorCode::kContractViolation,
          "series_exp needs a zero constant term");
  const std::int64_t K = a.order();
  const auto A = a.log_coeffs();
  std::vector<double> B(static_cast<std::size_t>(K + 1), kLogZero);
  B[0] = 0.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(K));
  for (std::int64_t n = 1; n <= K; ++n) {
    terms.clear();
    for (std::int64_t k = 1; k <= n; ++k) {
      const double ak = A[static_cast<std::size_t>(k)];
      const double bk = B[static_cast<std::size_t>(n - k)];
      if (ak == kLogZero || bk == kLogZero) continue;
      terms.push_back(std::log(static_cast<double>(k)) + ak + bk);
    }
    const double s = log_sum_exp(terms);
    B[static_cast<std::size_t>(n)] =
        s == kLogZero ? kLogZero : s - std::log(static_cast<double>(n));
  }
  return LogSeries(std::move(B));
}

LogSeries series_log(const LogSeries& b) {
  require(b.log_coeff(0) == 0.0, ErrorCode::kContractViolation,
          "series_log needs constant term 1");
  const std::int64_t K = b.order();
  const auto logB = b.log_coeffs();

  // Work with x -> x e^{-lambda}; the recurrence is homogeneous in that
  // rescaling and the scaled coefficients stay <= 1.
  double lambda = 0.0;
  for (std::int64_t n = 1; n <= K; ++n) {
    const double v = logB[static_cast<std::size_t>(n)];
    if (v != kLogZero) lambda = std::max(lambda, v / static_cast<double>(n));
  }
  std::vector<double> bs(static_cast<std::size_t>(K + 1), 0.0);
  for (std::int64_t n = 0; n <= K; ++n) {
    const double v = logB[static_cast<std::size_t>(n)];
    bs[static_cast<std::size_t>(n)] =
        v == kLogZero ? 0.0 : std::exp(v - lambda * static_cast<double>(n));
  }
  std::vector<double> as(static_cast<std::size_t>(K + 1), 0.0);
  std::vector<double> out(static_cast<std::size_t>(K + 1), kLogZero);
  for (std::int64_t n = 1; n <= K; ++n) {
    double sub = 0.0;
    for (std::int64_t k = 1; k < n; ++k) {
      sub += static_cast<double>(k) * as[static_cast<std::size_t>(k)] *
             bs[static_cast<std::size_t>(n - k)];
    }
    sub /= static_cast<double>(n);
    const double bn = bs[static_cast<std::size_t>(n)];
    double an = bn - sub;
    const double scale = std::max(bn, sub);
    if (std::abs(an) <= 1e-12 * scale) an = 0.0;
    require(an >= 0.0, ErrorCode::kContractViolation,
            "formal logarithm has a negative coefficient at index " +
                std::to_string(n));
    as[static_cast<std::size_t>(n)] = an;
    if (an > 0.0) {
      out[static_cast<std::size_t>(n)] =
          std::log(an) + lambda * static_cast<double>(n);
    }
  }
  return LogSeries(std::move(out));
}

LogSeries multiply(const LogSeries& a, const LogSeries& b) {
  const std::int64_t K = std::min(a.order(), b.order());
  std::vector<double> out(static_cast<std::size_t>(K + 1), kLogZero);
  std::vector<double> scratch;
  const auto sa = a.log_coeffs().subspan(0, static_cast<std::size_t>(K + 1));
  const auto sb = b.log_coeffs().subspan(0, static_cast<std::size_t>(K + 1));
  for (std::int64_t i = 0; i <= K; ++i) {
    out[static_cast<std::size_t>(i)] = log_convolve_at(sa, sb, i, scratch);
  }
  return LogSeries(std::move(out));
}

LogSeries euler_exponent(const WeightSequence& w, std::int64_t K,
                         std::int64_t min_size, std::int64_t max_size) {
  check_order(K);
  std::vector<LogAccumulator> acc(static_cast<std::size_t>(K + 1));
  const std::int64_t lo = std::max<std::int64_t>(1, min_size);
  std::int64_t hi = std::min(max_size, K);
  if (auto end = w.support_end()) hi = std::min(hi, *end);
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    for (std::int64_t j = 1; j * k <= K; ++j) {
      acc[static_cast<std::size_t>(j * k)].add(lc -
                                               std::log(static_cast<double>(j)));
    }
  }
  std::vector<double> v(static_cast<std::size_t>(K + 1), kLogZero);
  for (std::int64_t i = 1; i <= K; ++i) v[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)].value();
  return LogSeries(std::move(v));
}

LogSeries euler_transform(const WeightSequence& w, std::int64_t K) {
  require(K >= 1, ErrorCode::kInvalidParameter, "truncation order must be >= 1");
  return series_exp(euler_exponent(w, K));
}

LogSeries restricted_series(const WeightSequence& w, std::int64_t K,
                            Model model, SizeRestriction restriction) {
  require(restriction.s >= 0, ErrorCode::kInvalidParameter,
          "size restriction s must be >= 0");
  check_order(K);
  std::int64_t lo = 1;
  std::int64_t hi = K;
  if (restriction.kind == SizeRestriction::Kind::kMaxSizeAtMost) {
    hi = std::min(hi, restriction.s);
  } else {
    lo = restriction.s + 1;
  }
  if (model == Model::kMultiset) return series_exp(euler_exponent(w, K, lo, hi));
  std::vector<double> c(static_cast<std::size_t>(K + 1), kLogZero);
  for (std::int64_t k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k)] = w.log_at(k);
  return series_exp(LogSeries(std::move(c)));
}

std::vector<double> bivariate_set_coeffs(const WeightSequence& w,
                                         std::int64_t n, std::int64_t N_max) {
  require(n >= 0 && N_max >= 0 && N_max <= n, ErrorCode::kInvalidParameter,
          "need 0 <= N_max <= n");
  std::vector<double> out(static_cast<std::size_t>(N_max + 1), kLogZero);
  if (n == 0) {
    out[0] = 0.0;
    return out;
  }
  if (N_max == 0) return out;

  std::vector<double> C(static_cast<std::size_t>(n + 1), kLogZero);
  for (std::int64_t k = 1; k <= n; ++k) C[static_cast<std::size_t>(k)] = w.log_at(k);
  const std::int64_t m = w.first_positive();

  std::vector<double> D = C;
  out[1] = D[static_cast<std::size_t>(n)];
  std::vector<double> next(static_cast<std::size_t>(n + 1));
  std::vector<double> scratch;
  for (std::int64_t N = 2; N <= N_max; ++N) {
    const double log_N = std::log(static_cast<double>(N));
    std::fill(next.begin(), next.end(), kLogZero);
    // D_N has no mass below N*m.
    for (std::int64_t i = N * m; i <= n; ++i) {
      scratch.clear();
      for (std::int64_t k = m; k <= i - (N - 1) * m; ++k) {
        const double c = C[static_cast<std::size_t>(k)];
        const double d = D[static_cast<std::size_t>(i - k)];
        if (c == kLogZero || d == kLogZero) continue;
        scratch.push_back(c + d);
      }
      const double s = log_sum_exp(scratch);
      next[static_cast<std::size_t>(i)] = s == kLogZero ? kLogZero : s - log_N;
    }
    std::swap(D, next);
    out[static_cast<std::size_t>(N)] = D[static_cast<std::size_t>(n)];
    if (N * m > n) break;
  }
  return out;
}

std::vector<double> bivariate_multiset_coeffs(const WeightSequence& w,
                                              std::int64_t n,
                                              std::int64_t N_max) {
  require(n >= 0 && N_max >= 0 && N_max <= n, ErrorCode::kInvalidParameter,
          "need 0 <= N_max <= n");
  // x-direction exp recurrence m G_m(y) = sum_k k Phi_k(y) G_{m-k}(y) where
  // Phi_k(y) = sum_{j | k} c_{k/j} y^j / j. Every G_m(y) is a polynomial in y
  // stored as exp(scale) * v with max(v) = 1, so the inner loops run in
  // linear arithmetic. Entries below ~1e-300 of their row maximum underflow.
  struct SparseTerm {
    std::int64_t j;
    double lin;
  };
  struct Phi {
    double log_scale = kLogZero;
    std::vector<SparseTerm> terms;
  };
  std::vector<Phi> phi(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 1; k <= n; ++k) {
    std::vector<std::pair<std::int64_t, double>> raw;
    for (std::int64_t j = 1; j <= k; ++j) {
      if (k % j != 0 || j > N_max) continue;
      const double lc = w.log_at(k / j);
      if (lc == kLogZero) continue;
      raw.emplace_back(j, lc - std::log(static_cast<double>(j)));
    }
    if (raw.empty()) continue;
    double mx = kLogZero;
    for (const auto& [j, lv] : raw) mx = std::max(mx, lv);
    Phi& p = phi[static_cast<std::size_t>(k)];
    p.log_scale = mx;
    for (const auto& [j, lv] : raw) p.terms.push_back({j, std::exp(lv - mx)});
  }

  struct Row {
    double log_scale = kLogZero;
    std::vector<double> v;
  };
  std::vector<Row> G(static_cast<std::size_t>(n + 1));
  G[0].log_scale = 0.0;
  G[0].v = {1.0};
  std::vector<double> term_scale(static_cast<std::size_t>(n + 1));
  for (std::int64_t m = 1; m <= n; ++m) {
    double top = kLogZero;
    for (std::int64_t k = 1; k <= m; ++k) {
      const Phi& p = phi[static_cast<std::size_t>(k)];
      const Row& g = G[static_cast<std::size_t>(m - k)];
      double t = kLogZero;
      if (p.log_scale != kLogZero && g.log_scale != kLogZero) {
        t = std::log(static_cast<double>(k)) + p.log_scale + g.log_scale;
      }
      term_scale[static_cast<std::size_t>(k)] = t;
      top = std::max(top, t);
    }
    Row& row = G[static_cast<std::size_t>(m)];
    if (top == kLogZero) continue;
    const std::int64_t width = std::min(m, N_max) + 1;
    std::vector<double> acc(static_cast<std::size_t>(width), 0.0);
    for (std::int64_t k = 1; k <= m; ++k) {
      const double t = term_scale[static_cast<std::size_t>(k)];
      if (t == kLogZero) continue;
      const double f = std::exp(t - top);
      if (f == 0.0) continue;
      const Row& g = G[static_cast<std::size_t>(m - k)];
      const auto gw = static_cast<std::int64_t>(g.v.size());
      for (const auto& term : phi[static_cast<std::size_t>(k)].terms) {
        const double coef = f * term.lin;
        const std::int64_t lim = std::min(gw, width - term.j);
        for (std::int64_t N = 0; N < lim; ++N) {
          acc[static_cast<std::size_t>(N + term.j)] +=
              coef * g.v[static_cast<std::size_t>(N)];
        }
      }
    }
    const double mx = *std::max_element(acc.begin(), acc.end());
    if (mx <= 0.0) continue;
    for (double& x : acc) x /= mx;
    row.v = std::move(acc);
    row.log_scale = top + std::log(mx) - std::log(static_cast<double>(m));
  }

  std::vector<double> out(static_cast<std::size_t>(N_max + 1), kLogZero);
  const Row& last = G[static_cast<std::size_t>(n)];
  if (last.log_scale == kLogZero) return out;
  for (std::size_t N = 0; N < last.v.size() && N < out.size(); ++N) {
    if (last.v[N] > 0.0) out[N] = last.log_scale + std::log(last.v[N]);
  }
  return out;
}

ClusterStructure::ClusterStructure(std::int64_t n,
                                   std::vector<std::int64_t> counts)
    : n_(n), counts_(std::move(counts)) {
  require(n >= 0, ErrorCode::kContractViolation, "size must be non-negative");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    require(counts_[i] >= 0, ErrorCode::kContractViolation,
            "cluster counts must be non-negative");
    total += static_cast<std::int64_t>(i + 1) * counts_[i];
  }
  require(total == n, ErrorCode::kContractViolation,
          "sum k N_k = " + std::to_string(total) + " differs from n = " +
              std::to_string(n));
  counts_.resize(static_cast<std::size_t>(n), 0);
}

void for_each_cluster_structure(
    std::int64_t n, const std::function<void(const ClusterStructure&)>& fn) {
  require(n >= 0, ErrorCode::kInvalidParameter, "n must be non-negative");
  if (n == 0) {
    fn(ClusterStructure(0, {}));
    return;
  }
  std::vector<std::int64_t> parts{n};
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  while (true) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::int64_t p : parts) ++counts[static_cast<std::size_t>(p - 1)];
    fn(ClusterStructure(n, counts));

    std::int64_t ones = 0;
    while (!parts.empty() && parts.back() == 1) {
      parts.pop_back();
      ++ones;
    }
    if (parts.empty()) break;
    const std::int64_t v = --parts.back();
    std::int64_t rem = ones + 1;
    while (rem > 0) {
      const std::int64_t take = std::min(v, rem);
      parts.push_back(take);
      rem -= take;
    }
  }
}

double structure_log_weight(const WeightSequence& w, const ClusterStructure& cs,
                            Model model) {
  double total = 0.0;
  for (std::int64_t k = 1; k <= cs.n(); ++k) {
    const std::int64_t N = cs.count(k);
    if (N == 0) continue;
    const double lc = w.log_at(k);
    if (lc == kLogZero) return kLogZero;
    if (model == Model::kSet) {
      total += static_cast<double>(N) * lc - std::lgamma(static_cast<double>(N) + 1.0);
    } else {
      total += log_rising_binomial(lc, static_cast<long>(N));
    }
  }
  return total;
}

PartitionFunction brute_force_omega_sum(const WeightSequence& w,
                                        std::int64_t n, Model model) {
  require(n <= kBruteForceLimit, ErrorCode::kSizeLimitExceeded,
          "brute-force enumeration is capped at n = 30");
  LogAccumulator acc;
  for_each_cluster_structure(
      n, [&](const ClusterStructure& cs) { acc.add(structure_log_weight(w, cs, model)); });
  const double lv = acc.value();
  return {lv, std::exp(lv)};
}

std::vector<double> cluster_factor(const WeightSequence& w, std::int64_t s,
                                   std::int64_t j_max, Model model) {
  std::vector<double> f(static_cast<std::size_t>(j_max + 1), kLogZero);
  f[0] = 0.0;
  const double lc = w.log_at(s);
  if (lc == kLogZero) return f;
  double acc = 0.0;
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const double lj = std::log(static_cast<double>(j));
    if (model == Model::kSet) {
      acc += lc - lj;
    } else {
      const double up =
          j == 1 ? lc : log_add(lc, std::log(static_cast<double>(j - 1)));
      acc += up - lj;
    }
    f[static_cast<std::size_t>(j)] = acc;
  }
  return f;
}

namespace {

// row <- row * (sum_j f[j] x^{s j}), in place, descending in m.
void multiply_cluster_factor(std::vector<double>& row, std::int64_t s,
                             std::span<const double> f,
                             std::vector<double>& scratch) {
  const auto n = static_cast<std::int64_t>(row.size()) - 1;
  for (std::int64_t m = n; m >= 0; --m) {
    scratch.clear();
    for (std::int64_t j = 0; j * s <= m; ++j) {
      const double a = row[static_cast<std::size_t>(m - j * s)];
      const double b = f[static_cast<std::size_t>(j)];
      if (a == kLogZero || b == kLogZero) continue;
      scratch.push_back(a + b);
    }
    row[static_cast<std::size_t>(m)] = log_sum_exp(scratch);
  }
}

}  // namespace

MaxSizeTable::MaxSizeTable(const WeightSequence& w, std::int64_t n,
                           Model model)
    : n_(n), model_(model) {
  require(n >= 0, ErrorCode::kInvalidParameter, "n must be non-negative");
  const auto width = static_cast<std::size_t>(n + 1);
  table_.assign(width * width, kLogZero);
  factors_.resize(width);
  std::vector<double> row(width, kLogZero);
  row[0] = 0.0;
  std::copy(row.begin(), row.end(), table_.begin());
  std::vector<double> scratch;
  for (std::int64_t s = 1; s <= n; ++s) {
    factors_[static_cast<std::size_t>(s)] = cluster_factor(w, s, n / s, model);
    multiply_cluster_factor(row, s, factors_[static_cast<std::size_t>(s)], scratch);
    std::copy(row.begin(), row.end(),
              table_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(s) * width));
  }
}

ProbabilityTable exact_distribution(const WeightSequence& w, std::int64_t n,
                                    Statistic statistic, Model model) {
  require(n >= 1, ErrorCode::kInvalidParameter, "n must be >= 1");
  ProbabilityTable t{statistic, model, n, {}, {}};
  const auto width = static_cast<std::size_t>(n + 1);
  std::vector<double> logs(width, kLogZero);
  double total = kLogZero;
  std::vector<double> scratch;

  switch (statistic) {
    case Statistic::kKappa: {
      logs = model == Model::kSet ? bivariate_set_coeffs(w, n, n)
                                  : bivariate_multiset_coeffs(w, n, n);
      total = log_sum_exp(logs);
      break;
    }
    case Statistic::kLargest: {
      std::vector<double> row(width, kLogZero);
      row[0] = 0.0;
      logs[0] = kLogZero;
      for (std::int64_t s = 1; s <= n; ++s) {
        const auto f = cluster_factor(w, s, n / s, model);
        multiply_cluster_factor(row, s, f, scratch);
        logs[static_cast<std::size_t>(s)] = row[static_cast<std::size_t>(n)];
      }
      total = logs[static_cast<std::size_t>(n)];
      break;
    }
    case Statistic::kSmallest: {
      std::vector<double> row(width, kLogZero);
      row[0] = 0.0;
      logs[static_cast<std::size_t>(n)] = kLogZero;
      for (std::int64_t s = n - 1; s >= 0; --s) {
        const auto f = cluster_factor(w, s + 1, n / (s + 1), model);
        multiply_cluster_factor(row, s + 1, f, scratch);
        logs[static_cast<std::size_t>(s)] = row[static_cast<std::size_t>(n)];
      }
      total = logs[0];
      break;
    }
  }
  require(total != kLogZero, ErrorCode::kInvalidParameter,
          "no structure of size " + std::to_string(n) + " has positive weight");
  t.log_values.resize(width);
  t.values.resize(width);
  for (std::size_t i = 0; i < width; ++i) {
    t.log_values[i] = logs[i] == kLogZero ? kLogZero : logs[i] - total;
    t.values[i] = std::exp(t.log_values[i]);
  }
  // Terminal values are exact by construction.
  if (statistic == Statistic::kLargest) {
    t.values[static_cast<std::size_t>(n)] = 1.0;
    t.log_values[static_cast<std::size_t>(n)] = 0.0;
  } else if (statistic == Statistic::kSmallest) {
    t.values[0] = 1.0;
    t.log_values[0] = 0.0;
  }
  return t;
}

}  // namespace clusterkit

#include "clusterkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "clusterkit/asymptotics.hpp"
#include "clusterkit/error.hpp"
#include "clusterkit/io.hpp"
#include "clusterkit/logmath.hpp"
#include "clusterkit/sampling.hpp"

namespace clusterkit {
namespace {

void check_grid(const std::vector<std::int64_t>& grid, std::size_t min_points) {
  require(grid.size() >= min_points, ErrorCode::kInvalidParameter,
          min_points > 1 ? "n_grid needs at least two points for the trend check"
                         : "n_grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 1, ErrorCode::kInvalidParameter, "grid sizes must be >= 1");
    if (i > 0) {
      require(grid[i] > grid[i - 1], ErrorCode::kInvalidParameter,
              "n_grid must be strictly increasing");
    }
  }
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; results keep
// their index so the output does not depend on scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, int threads, Fn fn) {
  std::vector<T> out(count);
  const auto workers =
      std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

nlohmann::json base_echo(const WeightSequence& w,
                         const std::vector<std::int64_t>& grid,
                         const RunOptions& opt) {
  return {{"weights", weights_to_json(w)},
          {"n_grid", grid},
          {"seed", opt.seed},
          {"threads", opt.threads}};
}

double rel_dev_from_logs(double log_predicted, double log_exact) {
  return std::abs(std::expm1(log_predicted - log_exact));
}

// Largest deviation among metrics at size n.
double max_dev_at(const ExperimentReport& r, std::int64_t n) {
  double d = 0.0;
  for (const auto& m : r.metrics) {
    if (m.n == n) d = std::max(d, m.deviation);
  }
  return d;
}

void trend_verdict(ExperimentReport& r) {
  const double first = max_dev_at(r, r.n_grid.front());
  const double last = max_dev_at(r, r.n_grid.back());
  r.verdict = last < r.tolerance && last < first;
  std::ostringstream why;
  why << "deviation " << last << " at n=" << r.n_grid.back() << " vs tolerance "
      << r.tolerance << " and " << first << " at n=" << r.n_grid.front();
  r.verdict_reason = why.str();
}

// sum_j C(x^j) to order K.
LogSeries euler_power_sum(const WeightSequence& w, std::int64_t K) {
  std::vector<LogAccumulator> acc(static_cast<std::size_t>(K + 1));
  for (std::int64_t k = 1; k <= K; ++k) {
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    for (std::int64_t j = 1; j * k <= K; ++j) acc[static_cast<std::size_t>(j * k)].add(lc);
  }
  std::vector<double> v(static_cast<std::size_t>(K + 1), kLogZero);
  for (std::int64_t i = 1; i <= K; ++i) v[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)].value();
  return LogSeries(std::move(v));
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& r) {
  auto metrics = nlohmann::json::array();
  for (const auto& m : r.metrics) {
    metrics.push_back({{"n", m.n},
                       {"label", m.label},
                       {"exact", m.exact},
                       {"predicted", m.predicted},
                       {"empirical", m.empirical ? nlohmann::json(*m.empirical)
                                                 : nlohmann::json(nullptr)},
                       {"deviation", m.deviation}});
  }
  return {{"experiment", r.experiment},
          {"n_grid", r.n_grid},
          {"metrics", metrics},
          {"tolerance", r.tolerance},
          {"verdict", r.verdict ? "pass" : "fail"},
          {"verdict_reason", r.verdict_reason},
          {"config_echo", r.config_echo}};
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "experiment,n,label,exact,predicted,empirical,deviation\n";
  for (const auto& m : r.metrics) {
    out << r.experiment << ',' << m.n << ',' << m.label << ',' << m.exact << ','
        << m.predicted << ',';
    if (m.empirical) out << *m.empirical;
    out << ',' << m.deviation << '\n';
  }
  return out.str();
}

ExperimentReport verify_coefficients(const WeightSequence& w, Model model,
                                     const std::vector<std::int64_t>& n_grid,
                                     int ell, double tolerance,
                                     const RunOptions& opt) {
  check_grid(n_grid, 2);
  require(ell >= 0, ErrorCode::kInvalidParameter, "ell must be >= 0");
  ExperimentReport r;
  r.experiment = "coefficients";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["model"] = to_string(model);
  r.config_echo["ell"] = ell;
  r.config_echo["tolerance"] = tolerance;

  const std::int64_t K = n_grid.back();
  LogSeries F = model == Model::kSet ? series_exp(truncate_C(w, K))
                                     : euler_transform(w, K);
  if (ell > 0) {
    const LogSeries factor =
        model == Model::kSet ? truncate_C(w, K) : euler_power_sum(w, K);
    for (int i = 0; i < ell; ++i) F = multiply(F, factor);
  }
  const std::vector<int> p(static_cast<std::size_t>(ell), 0);
  const auto estimates = parallel_map<AsymptoticEstimate>(
      n_grid.size(), opt.threads, [&](std::size_t i) {
        return model == Model::kSet ? coeff_estimate_set(w, n_grid[i], ell)
                                    : coeff_estimate_multiset(w, n_grid[i], p);
      });
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    Metric m;
    m.n = n_grid[i];
    m.label = std::string("log-coefficient/") + to_string(estimates[i].source);
    m.exact = F.log_coeff(n_grid[i]);
    m.predicted = estimates[i].log_value;
    m.deviation = rel_dev_from_logs(m.predicted, m.exact);
    r.metrics.push_back(m);
  }
  trend_verdict(r);
  return r;
}

double kolmogorov_distance_step(const std::vector<double>& step_cdf,
                                const std::vector<double>& target) {
  require(step_cdf.size() == target.size(), ErrorCode::kInvalidParameter,
          "CDF arrays differ in length");
  double d = 0.0;
  double prev = 0.0;
  for (std::size_t s = 0; s < step_cdf.size(); ++s) {
    d = std::max({d, std::abs(step_cdf[s] - target[s]), std::abs(prev - target[s])});
    prev = step_cdf[s];
  }
  if (!target.empty()) d = std::max(d, std::abs(prev - target.back()));
  return d;
}

ExperimentReport verify_gumbel(const WeightSequence& w, Model model,
                               const std::vector<std::int64_t>& n_grid,
                               CdfMode mode, std::int64_t samples,
                               double tolerance, const RunOptions& opt) {
  check_grid(n_grid, 2);
  if (mode == CdfMode::kSampled) {
    require(samples >= 1, ErrorCode::kInvalidParameter,
            "sampled mode needs samples >= 1");
  }
  ExperimentReport r;
  r.experiment = "gumbel";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["model"] = to_string(model);
  r.config_echo["mode"] = mode == CdfMode::kExact ? "exact" : "sampled";
  r.config_echo["samples"] = samples;
  r.config_echo["tolerance"] = tolerance;

  struct Cell {
    GumbelScaling g;
    double exact_distance = 0.0;
    std::optional<double> sampled_distance;
  };
  // Sampling runs its own worker pool, so cells go one at a time there.
  const int cell_threads = mode == CdfMode::kSampled ? 1 : opt.threads;
  const auto cells = parallel_map<Cell>(n_grid.size(), cell_threads, [&](std::size_t i) {
    const std::int64_t n = n_grid[i];
    Cell c;
    c.g = gumbel_scaling(w, n, model);
    std::vector<double> target(static_cast<std::size_t>(n + 1));
    for (std::int64_t s = 0; s <= n; ++s) {
      target[static_cast<std::size_t>(s)] = c.g.cdf(static_cast<double>(s));
    }
    const auto table = exact_distribution(w, n, Statistic::kLargest, model);
    c.exact_distance = kolmogorov_distance_step(table.values, target);
    if (mode == CdfMode::kSampled) {
      SamplerConfig cfg;
      cfg.model = model;
      cfg.n = n;
      cfg.seed = opt.seed + static_cast<std::uint64_t>(i);
      const auto draws = sample_many(w, cfg, samples, SamplerChoice::kAuto, opt.threads);
      std::vector<double> emp(static_cast<std::size_t>(n + 1), 0.0);
      for (const auto& cs : draws) emp[static_cast<std::size_t>(statistics(cs).largest)] += 1.0;
      double cum = 0.0;
      for (auto& v : emp) {
        cum += v;
        v = cum / static_cast<double>(samples);
      }
      c.sampled_distance = kolmogorov_distance_step(emp, target);
    }
    return c;
  });

  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const Cell& c = cells[i];
    Metric m;
    m.n = n_grid[i];
    std::ostringstream label;
    label << "beta_n=" << c.g.beta_n;
    m.label = label.str();
    m.exact = c.exact_distance;
    m.predicted = c.g.lnX;
    m.empirical = c.sampled_distance;
    m.deviation = c.sampled_distance ? *c.sampled_distance : c.exact_distance;
    r.metrics.push_back(m);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < r.metrics.size(); ++i) {
    decreasing = decreasing && r.metrics[i].deviation < r.metrics[i - 1].deviation;
  }
  const double last = r.metrics.back().deviation;
  r.verdict = decreasing && last <= tolerance;
  std::ostringstream why;
  why << "Kolmogorov distance " << last << " at n=" << n_grid.back()
      << (decreasing ? ", strictly decreasing" : ", not strictly decreasing");
  r.verdict_reason = why.str();
  return r;
}

ExperimentReport verify_smallest(const WeightSequence& w, Model model,
                                 const std::vector<std::int64_t>& n_grid,
                                 std::int64_t s_max, double tolerance,
                                 const RunOptions& opt) {
  check_grid(n_grid, 1);
  require(s_max >= 0, ErrorCode::kInvalidParameter, "s_max must be >= 0");
  ExperimentReport r;
  r.experiment = "smallest";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["model"] = to_string(model);
  r.config_echo["s_max"] = s_max;
  r.config_echo["tolerance"] = tolerance;

  const auto tables = parallel_map<ProbabilityTable>(
      n_grid.size(), opt.threads, [&](std::size_t i) {
        return exact_distribution(w, n_grid[i], Statistic::kSmallest, model);
      });
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    for (std::int64_t s = 0; s <= s_max; ++s) {
      const SmallestLimit lim = smallest_limit(w, s, model);
      Metric m;
      m.n = n_grid[i];
      m.label = "s=" + std::to_string(s) + (lim.diverged ? " (diverged)" : "");
      m.exact = s <= n_grid[i] ? tables[i].values[static_cast<std::size_t>(s)] : 0.0;
      m.predicted = lim.value;
      m.deviation = std::abs(m.exact - m.predicted);
      r.metrics.push_back(m);
    }
  }
  const double last = max_dev_at(r, n_grid.back());
  r.verdict = last < tolerance;
  r.verdict_reason = "max |P(M>s) - limit| = " + std::to_string(last) +
                     " at n=" + std::to_string(n_grid.back());
  return r;
}

double raw_moment(const ProbabilityTable& kappa, int ell) {
  double m = 0.0;
  for (std::size_t N = 0; N < kappa.values.size(); ++N) {
    m += std::pow(static_cast<double>(N), ell) * kappa.values[N];
  }
  return m;
}

double falling_moment(const ProbabilityTable& kappa, int ell) {
  double m = 0.0;
  for (std::size_t N = 0; N < kappa.values.size(); ++N) {
    double f = 1.0;
    for (int i = 0; i < ell; ++i) f *= static_cast<double>(N) - i;
    m += f * kappa.values[N];
  }
  return m;
}

ExperimentReport verify_moments(const WeightSequence& w, Model model,
                                const std::vector<std::int64_t>& n_grid,
                                int ell_max, double tolerance,
                                const RunOptions& opt) {
  check_grid(n_grid, 1);
  require(ell_max >= 1, ErrorCode::kInvalidParameter, "ell_max must be >= 1");
  ExperimentReport r;
  r.experiment = "moments";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["model"] = to_string(model);
  r.config_echo["ell_max"] = ell_max;
  r.config_echo["tolerance"] = tolerance;

  // Fails early with unsupported-order before any heavy work.
  for (int ell = 1; ell <= ell_max; ++ell) moment_estimate(w, n_grid.front(), ell, model);

  struct Cell {
    ProbabilityTable kappa;
    std::vector<double> estimates;
  };
  const auto cells = parallel_map<Cell>(n_grid.size(), opt.threads, [&](std::size_t i) {
    Cell c{exact_distribution(w, n_grid[i], Statistic::kKappa, model), {}};
    for (int ell = 1; ell <= ell_max; ++ell) {
      c.estimates.push_back(moment_estimate(w, n_grid[i], ell, model).value());
    }
    return c;
  });

  bool identity_ok = true;
  double identity_worst = 0.0;
  std::vector<double> ratio_logs;
  if (model == Model::kSet) {
    const std::int64_t K = n_grid.back();
    const LogSeries C = truncate_C(w, K);
    LogSeries F = series_exp(C);
    const LogSeries S = F;
    for (int ell = 1; ell <= ell_max; ++ell) {
      F = multiply(F, C);
      for (std::int64_t n : n_grid) {
        ratio_logs.push_back(F.log_coeff(n) - S.log_coeff(n));
      }
    }
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    for (int ell = 1; ell <= ell_max; ++ell) {
      Metric m;
      m.n = n_grid[i];
      m.label = "ell=" + std::to_string(ell);
      m.exact = raw_moment(cells[i].kappa, ell);
      m.predicted = cells[i].estimates[static_cast<std::size_t>(ell - 1)];
      m.deviation = std::abs(m.predicted / m.exact - 1.0);
      if (m.n == n_grid.back()) worst = std::max(worst, m.deviation);
      r.metrics.push_back(m);
    }
  }
  if (model == Model::kSet) {
    for (int ell = 1; ell <= ell_max; ++ell) {
      for (std::size_t i = 0; i < n_grid.size(); ++i) {
        Metric m;
        m.n = n_grid[i];
        m.label = "falling-factorial ell=" + std::to_string(ell);
        m.exact = falling_moment(cells[i].kappa, ell);
        m.predicted = std::exp(
            ratio_logs[static_cast<std::size_t>(ell - 1) * n_grid.size() + i]);
        m.deviation = m.exact == 0.0 && m.predicted == 0.0
                          ? 0.0
                          : std::abs(m.predicted / m.exact - 1.0);
        identity_worst = std::max(identity_worst, m.deviation);
        identity_ok = identity_ok && m.deviation <= kIdentityTolerance;
        r.metrics.push_back(m);
      }
    }
  }
  r.verdict = worst < tolerance && identity_ok;
  std::ostringstream why;
  why << "moment deviation " << worst << " at n=" << n_grid.back();
  if (model == Model::kSet) why << ", falling-factorial identity error " << identity_worst;
  r.verdict_reason = why.str();
  return r;
}

ExperimentReport verify_llt(const WeightSequence& w, Model model,
                            const std::vector<std::int64_t>& n_grid,
                            const std::vector<double>& t_grid, double tolerance,
                            const RunOptions& opt) {
  check_grid(n_grid, 2);
  require(!t_grid.empty(), ErrorCode::kInvalidParameter, "t_grid is empty");
  for (double t : t_grid) {
    require(t >= -2.0 && t <= 2.0, ErrorCode::kInvalidParameter,
            "t values must lie in [-2, 2]");
  }
  // Scope check before computing tables.
  llt_pmf_prediction(w, n_grid.front(), 0.0, model);
  ExperimentReport r;
  r.experiment = "llt";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["model"] = to_string(model);
  r.config_echo["t_grid"] = t_grid;
  r.config_echo["tolerance"] = tolerance;

  const auto tables = parallel_map<ProbabilityTable>(
      n_grid.size(), opt.threads, [&](std::size_t i) {
        return exact_distribution(w, n_grid[i], Statistic::kKappa, model);
      });
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    for (double t : t_grid) {
      const LltPrediction p = llt_pmf_prediction(w, n_grid[i], t, model);
      Metric m;
      m.n = n_grid[i];
      std::ostringstream label;
      label << "t=" << t << " N=" << p.N;
      m.label = label.str();
      m.exact = p.N >= 0 && p.N <= n_grid[i]
                    ? tables[i].values[static_cast<std::size_t>(p.N)]
                    : 0.0;
      m.predicted = p.probability;
      m.deviation = std::abs(m.exact / m.predicted - 1.0);
      r.metrics.push_back(m);
    }
  }
  trend_verdict(r);
  return r;
}

std::int64_t NRule::operator()(std::int64_t n) const {
  if (kind == Kind::kConstant) return static_cast<std::int64_t>(value);
  return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), value)));
}

ExperimentReport verify_bivariate(const WeightSequence& w,
                                  const std::vector<std::int64_t>& n_grid,
                                  NRule rule, double tolerance,
                                  const RunOptions& opt) {
  check_grid(n_grid, 2);
  require(rule.kind == NRule::Kind::kFloorPower, ErrorCode::kScope,
          "a constant N does not grow with n");
  require(rule.value > 0.0 && rule.value < 1.0, ErrorCode::kScope,
          "N = floor(n^e) needs 0 < e < 1 so that N and n/N both grow");
  ExperimentReport r;
  r.experiment = "bivariate";
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.config_echo = base_echo(w, n_grid, opt);
  r.config_echo["N_rule"] = {{"kind", "floor_power"}, {"exponent", rule.value}};
  r.config_echo["tolerance"] = tolerance;

  struct Cell {
    std::int64_t N = 0;
    double exact = 0.0;
    double predicted = 0.0;
  };
  const auto cells = parallel_map<Cell>(n_grid.size(), opt.threads, [&](std::size_t i) {
    Cell c;
    c.N = rule(n_grid[i]);
    c.exact = bivariate_set_coeffs(w, n_grid[i], c.N)[static_cast<std::size_t>(c.N)];
    c.predicted = bivariate_set_estimate(w, n_grid[i], c.N).log_value;
    return c;
  });
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    Metric m;
    m.n = n_grid[i];
    m.label = "log-coefficient N=" + std::to_string(cells[i].N);
    m.exact = cells[i].exact;
    m.predicted = cells[i].predicted;
    m.deviation = rel_dev_from_logs(m.predicted, m.exact);
    r.metrics.push_back(m);
  }
  trend_verdict(r);
  return r;
}

}  // namespace clusterkit

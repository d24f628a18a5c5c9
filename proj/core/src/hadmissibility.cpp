#include "clusterkit/hadmissibility.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {
namespace {

using cplx = std::complex<double>;

// The terms of C at radius e^log_r as exp(scale) * sum_k weight_k x^k.
struct TermList {
  double scale = kLogZero;
  std::vector<std::int64_t> k;
  std::vector<double> weight;

  // C(e^{log_r + i theta}) in linear scale.
  cplx at(double theta) const {
    if (scale == kLogZero) return {0.0, 0.0};
    const cplx step = std::polar(1.0, theta);
    cplx acc{0.0, 0.0};
    cplx rot{1.0, 0.0};
    std::int64_t pos = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const std::int64_t target = k[i];
      if (target - pos > 64) {
        rot = std::polar(1.0, theta * static_cast<double>(target));
      } else {
        while (pos < target) {
          rot *= step;
          ++pos;
        }
      }
      pos = target;
      acc += weight[i] * rot;
    }
    return std::exp(scale) * acc;
  }
};

TermList terms_at(const WeightSequence& w, double log_r) {
  const auto end = w.support_end();
  if (!end) {
    require(log_r < w.log_rho(), ErrorCode::kDivergence,
            "radius is on or beyond the radius of convergence");
  }
  std::vector<std::pair<std::int64_t, double>> raw;
  double top = kLogZero;
  double prev = std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (std::int64_t k = 1;; ++k) {
    if (end && k > *end) break;
    require(k <= 100'000'000, ErrorCode::kDivergence,
            "series did not settle within the term budget");
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    const double t = lc + static_cast<double>(k) * log_r;
    raw.emplace_back(k, t);
    top = std::max(top, t);
    if (k >= 10 && t < prev && t < top - std::log(1e16)) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= 5) break;
    prev = t;
  }
  TermList list;
  list.scale = top;
  for (const auto& [k, t] : raw) {
    list.k.push_back(k);
    list.weight.push_back(std::exp(t - top));
  }
  return list;
}

// ln F(z) - ln F(r) at z = r e^{i theta}, the principal branch for the
// logarithmic factors.
class LogRatio {
 public:
  LogRatio(const FunctionSpec& f, const WeightSequence& w, double log_r)
      : f_(f) {
    if (f.model == Model::kSet) {
      lists_.push_back(terms_at(w, log_r));
    } else {
      require(log_r < 0.0, ErrorCode::kDivergence, "multisets need r < 1");
      for (std::int64_t j = 1;; ++j) {
        const double lrj = static_cast<double>(j) * log_r;
        lists_.push_back(terms_at(w, lrj));
        const double s = lists_.back().scale;
        if (j >= 2 && lrj <= -std::log(2.0) &&
            (s == kLogZero ||
             s + 8.0 * std::log(static_cast<double>(j)) <
                 lists_.front().scale - std::log(1e16))) {
          break;
        }
      }
    }
    base_ = eval(0.0);
  }

  cplx operator()(double theta) const { return eval(theta) - base_; }

 private:
  cplx eval(double theta) const {
    if (f_.model == Model::kSet) {
      const cplx c = lists_[0].at(theta);
      cplx v = c;
      if (f_.ell > 0) v += static_cast<double>(f_.ell) * std::log(c);
      return v;
    }
    std::vector<cplx> cj(lists_.size());
    for (std::size_t j = 0; j < lists_.size(); ++j) {
      cj[j] = lists_[j].at(theta * static_cast<double>(j + 1));
    }
    cplx v{0.0, 0.0};
    for (std::size_t j = 0; j < cj.size(); ++j) {
      v += cj[j] / static_cast<double>(j + 1);
    }
    for (int p : f_.p) {
      cplx s{0.0, 0.0};
      for (std::size_t j = 0; j < cj.size(); ++j) {
        s += std::pow(static_cast<double>(j + 1), p) * cj[j];
      }
      v += std::log(s);
    }
    return v;
  }

  FunctionSpec f_;
  std::vector<TermList> lists_;
  cplx base_{0.0, 0.0};
};

template <typename Fn>
void parallel_fill(std::vector<double>& out, int threads, Fn fn) {
  const std::size_t n = out.size();
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += workers) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

HadmReport probe(const FunctionSpec& f, const WeightSequence& w, double log_r,
                 double theta0, int theta_grid, int threads) {
  require(theta_grid >= 2, ErrorCode::kInvalidParameter,
          "theta grid needs at least 2 points");
  require(theta0 > 0.0 && theta0 < std::numbers::pi, ErrorCode::kInvalidParameter,
          "theta0 must lie in (0, pi)");
  const HaymanFunctionals h = hayman_functionals_log(f, w, log_r);
  const LogRatio ratio(f, w, log_r);

  HadmReport rep;
  rep.log_r = log_r;
  rep.theta0 = theta0;
  rep.a = h.a;
  rep.b = h.b;
  rep.grid = theta_grid;

  // Locality: uniform on [0, theta0]. Conjugate symmetry covers theta < 0.
  std::vector<double> inner(static_cast<std::size_t>(theta_grid));
  parallel_fill(inner, threads, [&](std::size_t i) {
    const double th = theta0 * static_cast<double>(i) / (theta_grid - 1);
    const cplx d = ratio(th) - cplx(0.0, th * h.a) + 0.5 * th * th * h.b;
    return std::abs(std::exp(d) - 1.0);
  });
  // Decay: uniform on [theta0, pi] merged with a geometric grid from theta0,
  // where |F| is largest.
  const auto G = static_cast<std::size_t>(theta_grid);
  std::vector<double> outer_theta(2 * G);
  const double span = std::numbers::pi / theta0;
  for (std::size_t i = 0; i < G; ++i) {
    const double u = static_cast<double>(i) / (theta_grid - 1);
    outer_theta[i] = theta0 + (std::numbers::pi - theta0) * u;
    outer_theta[G + i] = theta0 * std::pow(span, u);
  }
  std::vector<double> outer(outer_theta.size());
  const double half_log_b = 0.5 * std::log(h.b);
  parallel_fill(outer, threads, [&](std::size_t i) {
    return std::exp(ratio(outer_theta[i]).real() + half_log_b);
  });

  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] > rep.h2_defect) {
      rep.h2_defect = inner[i];
      rep.h2_argmax = theta0 * static_cast<double>(i) / (theta_grid - 1);
    }
  }
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (outer[i] > rep.h3_max) {
      rep.h3_max = outer[i];
      rep.h3_argmax = outer_theta[i];
    }
  }
  return rep;
}

}  // namespace

HadmReport h_admissibility_diagnostics(const FunctionSpec& f,
                                       const WeightSequence& w, double chi,
                                       std::optional<double> delta,
                                       int theta_grid, int threads) {
  require(chi > 0.0, ErrorCode::kInvalidParameter, "chi must be positive");
  const SaddleKind kind =
      f.model == Model::kSet ? SaddleKind::kSet : SaddleKind::kMultiset;
  const double radius = log_search_radius(w, kind);
  require(std::isfinite(radius), ErrorCode::kInvalidParameter,
          "chi needs a finite radius; probe at an explicit r instead");
  const double d = delta ? *delta : w.require_alpha() / 3.0 + 0.01;
  require(d > 0.0, ErrorCode::kInvalidParameter, "delta must be positive");
  HadmReport rep = probe(f, w, radius - chi, std::pow(chi, 1.0 + d),
                         theta_grid, threads);
  rep.chi = chi;
  rep.delta = d;
  return rep;
}

HadmReport h_admissibility_at_radius(const FunctionSpec& f,
                                     const WeightSequence& w, double r,
                                     std::optional<double> theta0,
                                     int theta_grid, int threads) {
  require(r > 0.0, ErrorCode::kInvalidParameter, "r must be positive");
  const double log_r = std::log(r);
  double th0 = 0.0;
  if (theta0) {
    th0 = *theta0;
  } else {
    th0 = std::pow(hayman_functionals_log(f, w, log_r).b, -0.4);
  }
  HadmReport rep = probe(f, w, log_r, th0, theta_grid, threads);
  const SaddleKind kind =
      f.model == Model::kSet ? SaddleKind::kSet : SaddleKind::kMultiset;
  const double radius = log_search_radius(w, kind);
  rep.chi = std::isfinite(radius) ? radius - log_r
                                  : std::numeric_limits<double>::quiet_NaN();
  rep.delta = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

nlohmann::json to_json(const HadmReport& r) {
  return {
      {"log_r", r.log_r},   {"r", std::exp(r.log_r)},
      {"chi", r.chi},       {"delta", r.delta},
      {"theta0", r.theta0}, {"a", r.a},
      {"b", r.b},           {"h2_defect", r.h2_defect},
      {"h2_argmax", r.h2_argmax}, {"h3_max", r.h3_max},
      {"h3_argmax", r.h3_argmax}, {"grid", r.grid},
  };
}

}  // namespace clusterkit

#include "clusterkit/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {
namespace {

constexpr std::int64_t kMaxTerms = 100'000'000;
const double kInnerCut = std::log(1e16);
const double kOuterCut = std::log(1e14);

// ln A_s(r) for s = 0..3 in one pass. The stopping rule follows the s = 3
// terms, which decay last.
std::array<double, 4> inner_sums(const WeightSequence& w, double log_r) {
  const auto end = w.support_end();
  if (!end) {
    require(log_r < w.log_rho(), ErrorCode::kDivergence,
            "radius is on or beyond the radius of convergence");
  }
  std::array<LogAccumulator, 4> acc;
  double prev = std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (std::int64_t k = 1;; ++k) {
    if (end && k > *end) break;
    require(k <= kMaxTerms, ErrorCode::kDivergence,
            "auxiliary sum did not settle within the term budget");
    const double lc = w.log_at(k);
    if (lc == kLogZero) continue;
    const double lk = std::log(static_cast<double>(k));
    const double base = lc + static_cast<double>(k) * log_r;
    for (int s = 0; s < 4; ++s) acc[static_cast<std::size_t>(s)].add(base + s * lk);
    const double lead = base + 3.0 * lk;
    if (k >= 10 && lead < prev && lead < acc[3].max_term() - kInnerCut) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= 5) break;
    prev = lead;
  }
  return {acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value()};
}

double checked_exp(double log_value) {
  const double v = std::exp(log_value);
  require(std::isfinite(v), ErrorCode::kOutOfRange,
          "auxiliary sum exceeds the double range");
  return v;
}

double log_effective_radius(const WeightSequence& w, SaddleKind kind) {
  if (kind == SaddleKind::kMultiset) return std::min(w.log_rho(), 0.0);
  return w.finite_radius() ? w.log_rho()
                           : std::numeric_limits<double>::infinity();
}

struct Objective {
  std::function<double(double)> value;  // of log r
  std::function<double(double)> slope;  // d value / d log r
};

SaddlePoint solve_monotone(SaddleKind kind, double target, double log_radius,
                           const Objective& f) {
  const bool bounded = std::isfinite(log_radius);
  // x = log r. With a finite radius the search runs over chi = radius - x.
  auto at_chi = [&](double chi) { return log_radius - chi; };

  double lo = 0.0, hi = 0.0, f_lo = 0.0, f_hi = 0.0;
  if (bounded) {
    double chi = 1.0;
    double v = f.value(at_chi(chi));
    if (v < target) {
      lo = at_chi(chi);
      f_lo = v;
      while (true) {
        chi *= 0.5;
        require(chi >= kMinChi, ErrorCode::kUnreachableTarget,
                "target " + std::to_string(target) +
                    " is not reached below the radius of convergence");
        v = f.value(at_chi(chi));
        if (v >= target) {
          hi = at_chi(chi);
          f_hi = v;
          break;
        }
        lo = at_chi(chi);
        f_lo = v;
      }
    } else {
      hi = at_chi(chi);
      f_hi = v;
      for (int i = 0;; ++i) {
        require(i < 1100, ErrorCode::kUnreachableTarget,
                "target " + std::to_string(target) +
                    " lies below the infimum of the saddle objective");
        chi *= 2.0;
        v = f.value(at_chi(chi));
        if (v < target) {
          lo = at_chi(chi);
          f_lo = v;
          break;
        }
        hi = at_chi(chi);
        f_hi = v;
      }
    }
  } else {
    double x = 0.0;
    double step = 1.0;
    double v = f.value(x);
    if (v < target) {
      lo = x;
      f_lo = v;
      for (int i = 0;; ++i) {
        require(i < 2000, ErrorCode::kUnreachableTarget,
                "target " + std::to_string(target) + " is never reached");
        x += step;
        step *= 2.0;
        v = f.value(x);
        if (v >= target) {
          hi = x;
          f_hi = v;
          break;
        }
        lo = x;
        f_lo = v;
      }
    } else {
      hi = x;
      f_hi = v;
      for (int i = 0;; ++i) {
        require(i < 2000 && std::isfinite(x), ErrorCode::kUnreachableTarget,
                "target " + std::to_string(target) +
                    " lies below the infimum of the saddle objective");
        x -= step;
        step *= 2.0;
        v = f.value(x);
        if (v < target) {
          lo = x;
          f_lo = v;
          break;
        }
        hi = x;
        f_hi = v;
      }
    }
  }

  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f.value(mid);
    if (v < target) {
      lo = mid;
      f_lo = v;
    } else {
      hi = mid;
      f_hi = v;
    }
  }

  double x = (target - f_lo) <= (f_hi - target) ? lo : hi;
  double v = x == lo ? f_lo : f_hi;
  for (int step = 0; step < 2; ++step) {
    const double d = f.slope(x);
    if (!(d > 0.0)) break;
    const double next = x - (v - target) / d;
    if (!(next >= lo && next <= hi)) break;
    const double nv = f.value(next);
    if (std::abs(nv - target) >= std::abs(v - target)) break;
    x = next;
    v = nv;
  }

  SaddlePoint sp;
  sp.kind = kind;
  sp.log_r = x;
  sp.r = std::exp(x);
  sp.chi = bounded ? log_radius - x : std::numeric_limits<double>::quiet_NaN();
  sp.target = target;
  sp.residual = v - target;
  sp.bracket_lo = lo;
  sp.bracket_hi = hi;
  sp.objective_lo = f_lo;
  sp.objective_hi = f_hi;
  require(std::abs(sp.residual) <= 1e-9 * std::max(1.0, target),
          ErrorCode::kDivergence,
          "saddle residual " + std::to_string(sp.residual) +
              " above tolerance");
  return sp;
}

}  // namespace

double log_A_s(const WeightSequence& w, double log_r, int s) {
  require(s >= 0 && s <= 3, ErrorCode::kInvalidParameter, "s must be in 0..3");
  return inner_sums(w, log_r)[static_cast<std::size_t>(s)];
}

double eval_A_s(const WeightSequence& w, double r, int s) {
  require(r > 0.0, ErrorCode::kInvalidParameter, "r must be positive");
  return checked_exp(log_A_s(w, std::log(r), s));
}

AuxSums::AuxSums(const WeightSequence& w, double log_r, int t_max)
    : log_r_(log_r), t_max_(t_max), single_(inner_sums(w, log_r)) {
  if (t_max < 0) return;
  require(log_r < 0.0, ErrorCode::kDivergence,
          "sums over j need r < 1");
  const auto T = static_cast<std::size_t>(t_max + 1);
  std::vector<std::array<LogAccumulator, 4>> acc(T);
  for (std::int64_t j = 1;; ++j) {
    require(j <= kMaxTerms, ErrorCode::kDivergence,
            "sum over j did not settle within the term budget");
    const double log_rj = static_cast<double>(j) * log_r;
    const auto inner = j == 1 ? single_ : inner_sums(w, log_rj);
    const double lj = std::log(static_cast<double>(j));
    for (std::size_t t = 0; t < T; ++t) {
      const double pw = (static_cast<double>(t) - 1.0) * lj;
      for (std::size_t s = 0; s < 4; ++s) acc[t][s].add(inner[s] + pw);
    }
    if (j < 2 || log_rj > -std::log(2.0)) continue;
    // A term at t_max bounds every smaller t, and the t = 1 accumulator is
    // the smallest of the positive-power ones.
    const double ref_t = std::min<std::size_t>(1, T - 1);
    bool small = true;
    for (std::size_t s = 0; s < 4 && small; ++s) {
      const double lead = inner[s] + static_cast<double>(t_max - 1) * lj;
      const double base = acc[static_cast<std::size_t>(ref_t)][s].max_term();
      small = inner[s] == kLogZero || lead < base - kOuterCut;
    }
    if (small) break;
  }
  dbl_.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < 4; ++s) dbl_[t][s] = acc[t][s].value();
  }
}

double AuxSums::A(int s) const { return checked_exp(log_A(s)); }

double AuxSums::log_A(int s, int t) const {
  require(t >= 0 && t <= t_max_ && s >= 0 && s <= 3, ErrorCode::kOutOfRange,
          "A_{s,t} index outside the computed table");
  return dbl_[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
}

double AuxSums::A(int s, int t) const { return checked_exp(log_A(s, t)); }

double log_A_st(const WeightSequence& w, double log_r, int s, int t) {
  require(s >= 0 && s <= 3 && t >= 0, ErrorCode::kInvalidParameter,
          "need s in 0..3 and t >= 0");
  return AuxSums(w, log_r, t).log_A(s, t);
}

double eval_A_st(const WeightSequence& w, double r, int s, int t) {
  require(r > 0.0, ErrorCode::kInvalidParameter, "r must be positive");
  return checked_exp(log_A_st(w, std::log(r), s, t));
}

int FunctionSpec::t_max() const {
  if (model == Model::kSet) return -1;
  int t = 3;
  for (int pi : p) t = std::max(t, 4 + pi);
  return t;
}

namespace {

// (D^1, D^2, D^3) of ln P given P, DP, D^2P, D^3P with D = x d/dx.
std::array<double, 3> log_derivatives(double p0, double p1, double p2,
                                      double p3) {
  const double m1 = p1 / p0;
  const double m2 = p2 / p0;
  const double m3 = p3 / p0;
  return {m1, m2 - m1 * m1, m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1};
}

}  // namespace

HaymanFunctionals hayman_functionals(const FunctionSpec& f,
                                     const AuxSums& sums) {
  HaymanFunctionals h;
  if (f.model == Model::kSet) {
    require(f.ell >= 0, ErrorCode::kInvalidParameter, "ell must be >= 0");
    const double A0 = sums.A(0), A1 = sums.A(1), A2 = sums.A(2), A3 = sums.A(3);
    h = {A1, A2, A3};
    if (f.ell > 0) {
      const auto d = log_derivatives(A0, A1, A2, A3);
      h.a += f.ell * d[0];
      h.b += f.ell * d[1];
      h.c += f.ell * d[2];
    }
    return h;
  }
  require(sums.t_max() >= f.t_max(), ErrorCode::kContractViolation,
          "AuxSums table too small for this function");
  h = {sums.A(1, 1), sums.A(2, 2), sums.A(3, 3)};
  for (int pi : f.p) {
    require(pi >= 0, ErrorCode::kInvalidParameter, "p_i must be >= 0");
    const auto d = log_derivatives(sums.A(0, 1 + pi), sums.A(1, 2 + pi),
                                   sums.A(2, 3 + pi), sums.A(3, 4 + pi));
    h.a += d[0];
    h.b += d[1];
    h.c += d[2];
  }
  return h;
}

HaymanFunctionals hayman_functionals_log(const FunctionSpec& f,
                                         const WeightSequence& w,
                                         double log_r) {
  return hayman_functionals(f, AuxSums(w, log_r, f.t_max()));
}

HaymanFunctionals hayman_functionals(const FunctionSpec& f,
                                     const WeightSequence& w, double r) {
  require(r > 0.0, ErrorCode::kInvalidParameter, "r must be positive");
  return hayman_functionals_log(f, w, std::log(r));
}

double log_F(const FunctionSpec& f, const AuxSums& sums) {
  if (f.model == Model::kSet) {
    return std::exp(sums.log_A(0)) + f.ell * sums.log_A(0);
  }
  double v = std::exp(sums.log_A(0, 0));
  for (int pi : f.p) v += sums.log_A(0, 1 + pi);
  return v;
}

double log_search_radius(const WeightSequence& w, SaddleKind kind) {
  return log_effective_radius(w, kind);
}

SaddlePoint solve_set_saddle(const WeightSequence& w, double n) {
  require(n >= 1.0 && std::isfinite(n), ErrorCode::kInvalidParameter,
          "n must be >= 1");
  Objective f{
      [&](double x) { return std::exp(log_A_s(w, x, 1)); },
      [&](double x) { return std::exp(log_A_s(w, x, 2)); },
  };
  SaddlePoint sp = solve_monotone(SaddleKind::kSet, n,
                                  log_effective_radius(w, SaddleKind::kSet), f);
  const AuxSums sums(w, sp.log_r, -1);
  sp.a_val = sums.A(1);
  sp.b_val = sums.A(2);
  return sp;
}

SaddlePoint solve_multiset_saddle(const WeightSequence& w, double n) {
  require(n >= 1.0 && std::isfinite(n), ErrorCode::kInvalidParameter,
          "n must be >= 1");
  Objective f{
      [&](double x) { return std::exp(log_A_st(w, x, 1, 1)); },
      [&](double x) { return std::exp(log_A_st(w, x, 2, 2)); },
  };
  SaddlePoint sp =
      solve_monotone(SaddleKind::kMultiset, n,
                     log_effective_radius(w, SaddleKind::kMultiset), f);
  const AuxSums sums(w, sp.log_r, 2);
  sp.a_val = sums.A(1, 1);
  sp.b_val = sums.A(2, 2);
  return sp;
}

SaddlePoint solve_ratio_saddle(const WeightSequence& w, double n, double N) {
  require(n > 0.0 && N > 0.0, ErrorCode::kInvalidParameter,
          "n and N must be positive");
  const double target = n / N;
  require(target > static_cast<double>(w.first_positive()),
          ErrorCode::kUnreachableTarget,
          "n/N must exceed the first positive index " +
              std::to_string(w.first_positive()));
  if (auto end = w.support_end()) {
    require(target < static_cast<double>(*end),
            ErrorCode::kUnreachableTarget,
            "n/N is at or beyond the largest cluster size");
  }
  auto ratio = [&](double x) {
    const auto s = inner_sums(w, x);
    return std::exp(s[1] - s[0]);
  };
  auto slope = [&](double x) {
    const auto s = inner_sums(w, x);
    const double m1 = std::exp(s[1] - s[0]);
    return std::exp(s[2] - s[0]) - m1 * m1;
  };
  SaddlePoint sp = solve_monotone(SaddleKind::kRatio, target,
                                  log_effective_radius(w, SaddleKind::kRatio),
                                  {ratio, slope});
  sp.a_val = ratio(sp.log_r);
  sp.b_val = slope(sp.log_r);
  return sp;
}

const char* to_string(SaddleKind kind) {
  switch (kind) {
    case SaddleKind::kSet:
      return "set";
    case SaddleKind::kMultiset:
      return "multiset";
    case SaddleKind::kRatio:
      return "ratio";
  }
  return "?";
}

nlohmann::json to_json(const SaddlePoint& sp) {
  return {
      {"kind", to_string(sp.kind)},
      {"r", sp.r},
      {"log_r", sp.log_r},
      {"chi", sp.chi},
      {"target", sp.target},
      {"residual", sp.residual},
      {"a", sp.a_val},
      {"b", sp.b_val},
      {"bracket", {sp.bracket_lo, sp.bracket_hi}},
      {"objective_at_bracket", {sp.objective_lo, sp.objective_hi}},
  };
}

}  // namespace clusterkit

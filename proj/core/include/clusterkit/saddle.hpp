#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "clusterkit/series.hpp"
#include "clusterkit/weights.hpp"

namespace clusterkit {

// Below this chi the cancellation in 1 - r dominates; solvers never go closer
// to the radius.
inline constexpr double kMinChi = 1e-8;

// ln A_s(r), A_s(x) = sum_k k^s c_k x^k, s = 0..3, evaluated at r = e^log_r.
// Throws kDivergence when r is on or beyond the radius of an infinite
// support, or when the terms do not settle within the term budget.
double log_A_s(const WeightSequence& w, double log_r, int s);
double eval_A_s(const WeightSequence& w, double r, int s);

// ln A_{s,t}(r), A_{s,t}(x) = sum_j j^(t-1) A_s(x^j). Needs r < 1.
double log_A_st(const WeightSequence& w, double log_r, int s, int t);
double eval_A_st(const WeightSequence& w, double r, int s, int t);

// All A_s (s = 0..3) and A_{s,t} (s = 0..3, t = 0..t_max) at one radius,
// sharing the inner sums. t_max < 0 skips the double sums.
class AuxSums {
 public:
  AuxSums(const WeightSequence& w, double log_r, int t_max);

  double log_r() const { return log_r_; }
  double log_A(int s) const { return single_[static_cast<std::size_t>(s)]; }
  double A(int s) const;
  double log_A(int s, int t) const;
  double A(int s, int t) const;
  int t_max() const { return t_max_; }

 private:
  double log_r_;
  int t_max_;
  std::array<double, 4> single_{};
  std::vector<std::array<double, 4>> dbl_;  // indexed by t
};

// F = e^C C^ell (set) or G prod_i A_{0,1+p_i} (multiset).
struct FunctionSpec {
  Model model = Model::kSet;
  int ell = 0;           // set model
  std::vector<int> p;    // multiset model, ell = p.size()

  static FunctionSpec set(int ell = 0) { return {Model::kSet, ell, {}}; }
  static FunctionSpec multiset(std::vector<int> p = {}) {
    const int ell = static_cast<int>(p.size());
    return {Model::kMultiset, ell, std::move(p)};
  }
  int t_max() const;
};

struct HaymanFunctionals {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

HaymanFunctionals hayman_functionals(const FunctionSpec& f,
                                     const WeightSequence& w, double r);
HaymanFunctionals hayman_functionals_log(const FunctionSpec& f,
                                         const WeightSequence& w,
                                         double log_r);
HaymanFunctionals hayman_functionals(const FunctionSpec& f,
                                     const AuxSums& sums);

// ln F(r) for the function described by `f`.
double log_F(const FunctionSpec& f, const AuxSums& sums);

enum class SaddleKind { kSet, kMultiset, kRatio };

struct SaddlePoint {
  SaddleKind kind = SaddleKind::kSet;
  double r = 0.0;
  double log_r = 0.0;
  // ln(radius / r) where the radius is rho (set, ratio) or min(rho, 1)
  // (multiset). NaN when that radius is infinite.
  double chi = 0.0;
  double target = 0.0;
  double residual = 0.0;
  double a_val = 0.0;
  double b_val = 0.0;
  // Final bisection bracket in log r with the objective at both ends.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double objective_lo = 0.0;
  double objective_hi = 0.0;
};

// z_n with A_1(z_n) = n.
SaddlePoint solve_set_saddle(const WeightSequence& w, double n);
// q_n with A_{1,1}(q_n) = n.
SaddlePoint solve_multiset_saddle(const WeightSequence& w, double n);
// r_n with A_1(r_n)/A_0(r_n) = n/N.
SaddlePoint solve_ratio_saddle(const WeightSequence& w, double n, double N);

// Search radius used by the solver of each kind (log scale, may be +inf).
double log_search_radius(const WeightSequence& w, SaddleKind kind);

nlohmann::json to_json(const SaddlePoint& sp);
const char* to_string(SaddleKind kind);

}  // namespace clusterkit

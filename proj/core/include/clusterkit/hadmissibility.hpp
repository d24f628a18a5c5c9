#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "clusterkit/saddle.hpp"
#include "clusterkit/weights.hpp"

namespace clusterkit {

struct HadmReport {
  double log_r = 0.0;
  double chi = 0.0;  // NaN for an infinite radius
  double delta = 0.0;
  double theta0 = 0.0;
  // Capture: a(r), b(r).
  double a = 0.0;
  double b = 0.0;
  // Locality: max over |theta| <= theta0 of
  // |F(re^{i theta}) / (F(r) e^{i theta a - theta^2 b / 2}) - 1|.
  double h2_defect = 0.0;
  double h2_argmax = 0.0;
  // Decay: max over theta0 <= |theta| <= pi of |F(re^{i theta})| sqrt(b) / F(r).
  double h3_max = 0.0;
  double h3_argmax = 0.0;
  int grid = 0;
};

nlohmann::json to_json(const HadmReport& r);

// Probe at r = radius * e^{-chi} with theta0 = chi^(1+delta). `delta`
// defaults to alpha/3 + 0.01 and needs alpha when omitted.
HadmReport h_admissibility_diagnostics(const FunctionSpec& f,
                                       const WeightSequence& w, double chi,
                                       std::optional<double> delta,
                                       int theta_grid, int threads = 1);

// Probe at an explicit radius and cut-off angle; used for polynomial C where
// chi is undefined. theta0 defaults to b(r)^(-2/5).
HadmReport h_admissibility_at_radius(const FunctionSpec& f,
                                     const WeightSequence& w, double r,
                                     std::optional<double> theta0,
                                     int theta_grid, int threads = 1);

}  // namespace clusterkit

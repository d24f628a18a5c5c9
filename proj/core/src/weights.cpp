#include "clusterkit/weights.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {

SlowlyVarying SlowlyVarying::constant_value(double c) {
  require(c > 0.0 && std::isfinite(c), ErrorCode::kInvalidParameter,
          "constant slowly varying factor must be positive");
  SlowlyVarying h;
  h.kind = Kind::kConstant;
  h.constant = c;
  return h;
}

SlowlyVarying SlowlyVarying::log_power(double p) {
  require(std::isfinite(p), ErrorCode::kInvalidParameter,
          "log-power exponent must be finite");
  SlowlyVarying h;
  h.kind = Kind::kLogPower;
  h.power = p;
  return h;
}

double SlowlyVarying::log_at(double x) const {
  switch (kind) {
    case Kind::kConstant:
      return std::log(constant);
    case Kind::kLogPower:
      // ln 1 = 0 would kill the weight; freeze at x = 2.
      return power == 0.0 ? 0.0 : power * std::log(std::log(std::max(x, 2.0)));
  }
  return 0.0;
}

double SlowlyVarying::at(double x) const { return std::exp(log_at(x)); }

WeightSequence WeightSequence::power_law(double alpha, double rho,
                                         SlowlyVarying h) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::kInvalidParameter,
          "alpha must be > 0, got " + std::to_string(alpha));
  require(rho > 0.0 && rho <= 1.0, ErrorCode::kInvalidParameter,
          "rho must lie in (0,1], got " + std::to_string(rho));
  if (h.kind == SlowlyVarying::Kind::kConstant) {
    require(h.constant > 0.0, ErrorCode::kInvalidParameter,
            "h must be positive");
  }
  WeightSequence w;
  w.kind_ = Kind::kPowerLaw;
  w.alpha_ = alpha;
  w.rho_ = rho;
  w.log_rho_ = std::log(rho);
  w.h_ = h;
  w.first_positive_ = 1;
  return w;
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values,
                                               std::optional<double> rho,
                                               std::optional<double> alpha) {
  WeightSequence w;
  w.kind_ = Kind::kExplicit;
  w.first_positive_ = 0;
  w.log_values_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    require(v >= 0.0 && std::isfinite(v), ErrorCode::kInvalidParameter,
            "explicit weights must be finite and non-negative");
    w.log_values_.push_back(v > 0.0 ? std::log(v) : kLogZero);
    if (v > 0.0 && w.first_positive_ == 0) {
      w.first_positive_ = static_cast<std::int64_t>(i) + 1;
    }
  }
  require(w.first_positive_ > 0, ErrorCode::kInvalidParameter,
          "explicit weights need at least one positive entry");
  if (rho) {
    require(*rho > 0.0 && *rho <= 1.0, ErrorCode::kInvalidParameter,
            "rho must lie in (0,1]");
    w.rho_ = *rho;
    w.log_rho_ = std::log(*rho);
  } else {
    w.rho_ = std::numeric_limits<double>::infinity();
    w.log_rho_ = std::numeric_limits<double>::infinity();
  }
  if (alpha) {
    require(*alpha > 0.0, ErrorCode::kInvalidParameter, "alpha must be > 0");
    w.alpha_ = alpha;
  }
  w.values_ = std::move(values);
  return w;
}

double WeightSequence::log_at(std::int64_t k) const {
  if (k < 1) return kLogZero;
  if (kind_ == Kind::kExplicit) {
    const auto idx = static_cast<std::size_t>(k - 1);
    return idx < log_values_.size() ? log_values_[idx] : kLogZero;
  }
  const double kd = static_cast<double>(k);
  return h_.log_at(kd) + (*alpha_ - 1.0) * std::log(kd) - kd * log_rho_;
}

double WeightSequence::at(std::int64_t k) const {
  if (kind_ == Kind::kExplicit) {
    if (k < 1) return 0.0;
    const auto idx = static_cast<std::size_t>(k - 1);
    return idx < values_.size() ? values_[idx] : 0.0;
  }
  return k < 1 ? 0.0 : std::exp(log_at(k));
}

std::optional<std::int64_t> WeightSequence::support_end() const {
  if (kind_ == Kind::kPowerLaw) return std::nullopt;
  for (std::size_t i = values_.size(); i > 0; --i) {
    if (values_[i - 1] > 0.0) return static_cast<std::int64_t>(i);
  }
  return std::nullopt;
}

double WeightSequence::require_alpha() const {
  require(alpha_.has_value(), ErrorCode::kInvalidParameter,
          "alpha must be supplied for explicit weight sequences");
  return *alpha_;
}

OscillationReport verify_oscillating_bounds(const WeightSequence& w,
                                            double alpha1, double alpha2,
                                            double A1, double A2,
                                            std::int64_t k_min,
                                            std::int64_t k_max) {
  require(alpha1 > 0.0 && alpha1 <= alpha2, ErrorCode::kInvalidParameter,
          "need 0 < alpha1 <= alpha2");
  require(A1 > 0.0 && A1 <= A2, ErrorCode::kInvalidParameter,
          "need 0 < A1 <= A2");
  require(k_min >= 1 && k_min <= k_max, ErrorCode::kInvalidParameter,
          "need 1 <= k_min <= k_max");
  require(w.finite_radius(), ErrorCode::kInvalidParameter,
          "oscillation bounds need a finite radius rho");

  OscillationReport report;
  const double log_rho = w.log_rho();
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    const double lk = std::log(kd);
    const double lo = std::log(A1) + (alpha1 - 1.0) * lk - kd * log_rho;
    const double hi = std::log(A2) + (alpha2 - 1.0) * lk - kd * log_rho;
    const double v = w.log_at(k);
    OscillationCheck c;
    c.k = k;
    c.lower = std::exp(lo);
    c.value = std::exp(v);
    c.upper = std::exp(hi);
    c.pass = lo <= v && v <= hi;
    if (!c.pass && report.all_pass) {
      report.all_pass = false;
      report.first_failure = k;
    }
    report.checks.push_back(c);
  }
  return report;
}

WeightSequence weights_from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorCode::kInvalidParameter,
          "weight spec must be a JSON object");
  const std::string kind = j.value("kind", std::string("power"));
  if (kind == "power") {
    SlowlyVarying h;
    if (j.contains("h")) {
      const auto& hj = j.at("h");
      const std::string type = hj.value("type", std::string("const"));
      if (type == "const") {
        h = SlowlyVarying::constant_value(hj.value("c", 1.0));
      } else if (type == "logpow" || type == "log") {
        h = SlowlyVarying::log_power(hj.value("p", 1.0));
      } else {
        fail(ErrorCode::kInvalidParameter, "unknown h type '" + type + "'");
      }
    }
    return WeightSequence::power_law(j.value("alpha", 1.0),
                                     j.value("rho", 1.0), h);
  }
  if (kind == "explicit") {
    require(j.contains("values") && j.at("values").is_array(),
            ErrorCode::kInvalidParameter, "explicit weights need 'values'");
    std::optional<double> rho;
    std::optional<double> alpha;
    if (j.contains("rho") && !j.at("rho").is_null()) rho = j.at("rho").get<double>();
    if (j.contains("alpha") && !j.at("alpha").is_null()) {
      alpha = j.at("alpha").get<double>();
    }
    return WeightSequence::explicit_values(
        j.at("values").get<std::vector<double>>(), rho, alpha);
  }
  fail(ErrorCode::kInvalidParameter, "unknown weight kind '" + kind + "'");
}

nlohmann::json weights_to_json(const WeightSequence& w) {
  nlohmann::json j;
  if (w.kind() == WeightSequence::Kind::kPowerLaw) {
    j["kind"] = "power";
    j["alpha"] = *w.alpha();
    j["rho"] = w.rho();
    const auto& h = w.h();
    if (h.kind == SlowlyVarying::Kind::kConstant) {
      j["h"] = {{"type", "const"}, {"c", h.constant}};
    } else {
      j["h"] = {{"type", "logpow"}, {"p", h.power}};
    }
  } else {
    j["kind"] = "explicit";
    j["values"] = w.explicit_list();
    if (w.finite_radius()) j["rho"] = w.rho();
    if (w.alpha()) j["alpha"] = *w.alpha();
  }
  return j;
}

}  // namespace clusterkit

#include "clusterkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "clusterkit/error.hpp"
#include "clusterkit/logmath.hpp"

namespace clusterkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kContractViolation: return "contract-violation";
    case ErrorCode::kSizeLimitExceeded: return "size-limit-exceeded";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kUnreachableTarget: return "unreachable-target";
    case ErrorCode::kUnsupportedOrder: return "unsupported-order";
    case ErrorCode::kScope: return "scope";
    case ErrorCode::kRejectionBudgetExhausted: return "rejection-budget-exhausted";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

const char* to_string(Model model) {
  return model == Model::kSet ? "set" : "multiset";
}

Model model_from_string(std::string_view s) {
  if (s == "set") return Model::kSet;
  if (s == "multiset") return Model::kMultiset;
  fail(ErrorCode::kInvalidParameter,
       "model must be 'set' or 'multiset', got '" + std::string(s) + "'");
}

const char* to_string(Statistic statistic) {
  switch (statistic) {
    case Statistic::kKappa: return "kappa";
    case Statistic::kLargest: return "largest";
    case Statistic::kSmallest: return "smallest";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  if (v == kLogZero) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rows_to_csv(std::span<const double> logs) {
  std::ostringstream out;
  out << "index,value_log,value\n";
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out << i << ',' << fmt(logs[i]) << ',' << fmt(std::exp(logs[i])) << '\n';
  }
  return out.str();
}

nlohmann::json rows_to_json(std::span<const double> logs) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    arr.push_back({{"index", i},
                   {"value_log", logs[i] == kLogZero ? nlohmann::json(nullptr)
                                                     : nlohmann::json(logs[i])},
                   {"value", std::exp(logs[i])}});
  }
  return arr;
}

}  // namespace

std::string series_to_csv(const LogSeries& s) { return rows_to_csv(s.log_coeffs()); }

nlohmann::json series_to_json(const LogSeries& s) {
  return rows_to_json(s.log_coeffs());
}

std::string table_to_csv(const ProbabilityTable& t) {
  return rows_to_csv(t.log_values);
}

nlohmann::json table_to_json(const ProbabilityTable& t) {
  return {{"statistic", to_string(t.statistic)},
          {"model", to_string(t.model)},
          {"n", t.n},
          {"rows", rows_to_json(t.log_values)}};
}

std::string samples_to_csv(const std::vector<ClusterStructure>& samples) {
  std::ostringstream out;
  out << "replicate,kappa,smallest,largest\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto st = statistics(samples[i]);
    out << i << ',' << st.kappa << ',' << st.smallest << ',' << st.largest << '\n';
  }
  return out.str();
}

}  // namespace clusterkit

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "clusterkit/sampling.hpp"
#include "clusterkit/series.hpp"

namespace clusterkit {

const char* to_string(Model model);
Model model_from_string(std::string_view s);
const char* to_string(Statistic statistic);

// Columns: index,value_log,value
std::string series_to_csv(const LogSeries& s);
nlohmann::json series_to_json(const LogSeries& s);

std::string table_to_csv(const ProbabilityTable& t);
nlohmann::json table_to_json(const ProbabilityTable& t);

// Columns: replicate,kappa,smallest,largest
std::string samples_to_csv(const std::vector<ClusterStructure>& samples);

}  // namespace clusterkit

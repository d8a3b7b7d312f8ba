#pragma once

#include <json.hpp>
#include <string>

#include "atrisk/gbt.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/probit.hpp"

namespace atrisk {

/// Self-describing JSON serialization. Doubles are written with shortest
/// round-trip precision, so a reloaded model re-predicts bit-identically.
nlohmann::json to_json(const LogisticModel& model);
nlohmann::json to_json(const GbtModel& model);
nlohmann::json to_json(const ProbitModel& model);

LogisticModel logistic_from_json(const nlohmann::json& j);
GbtModel gbt_from_json(const nlohmann::json& j);
ProbitModel probit_from_json(const nlohmann::json& j);

void save_model(const nlohmann::json& j, const std::string& path);
nlohmann::json load_model(const std::string& path);

}  // namespace atrisk

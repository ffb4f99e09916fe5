#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "aggeq/analysis.hpp"
#include "aggeq/reduction.hpp"
#include "aggeq/scenario.hpp"
#include "aggeq/solver.hpp"

namespace aggeq {

using Json = nlohmann::ordered_json;

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const PriceFunction& pf);
PriceFunction price_from_json(const Json& j);

Json to_json(const GameSpec& game);
/// Throws std::invalid_argument on a malformed document or an invalid game.
GameSpec game_from_json(const Json& j);

Json to_json(const ScenarioConfig& cfg);
/// Missing keys keep their defaults.
ScenarioConfig scenario_config_from_json(const Json& j);

Json to_json(const EquilibriumResult& r);
Json to_json(const ClusterAssignment& a);
Json to_json(const ReductionReport& r);
Json to_json(const BoundCertificate& c);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace aggeq

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aggeq/io.hpp"
#include "aggeq/reduction.hpp"
#include "aggeq/scenario.hpp"
#include "aggeq/solver.hpp"
#include "helpers.hpp"

using namespace aggeq;
using namespace testing_support;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "aggeq_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("game round trip") {
  ScenarioConfig cfg;
  cfg.n_players = 25;
  cfg.horizon = 6;
  cfg.capacity = 200;
  const GameSpec g = generate(cfg);
  const GameSpec back = game_from_json(Json::parse(to_json(g).dump()));
  CHECK(back.players == g.players);
  CHECK(back.horizon == g.horizon);
  CHECK(back.convention == g.convention);
  CHECK(back.coupling->matrix == g.coupling->matrix);
  CHECK(back.coupling->rhs == g.coupling->rhs);
  for (std::size_t t = 0; t < g.horizon; ++t) {
    CHECK(back.prices[t].breakpoints == g.prices[t].breakpoints);
    CHECK(back.prices[t].slopes == g.prices[t].slopes);
    CHECK(back.prices[t].intercepts == g.prices[t].intercepts);
  }
  // serialisation is stable
  CHECK(to_json(back).dump() == to_json(g).dump());

  GameSpec grouped = g;
  grouped.weights.assign(g.n_players(), 3.0);
  grouped.convention = AggregationConvention::Average;
  const GameSpec gb = game_from_json(to_json(grouped));
  CHECK(gb.weights == grouped.weights);
  CHECK(gb.convention == AggregationConvention::Average);
}

TEST_CASE("bundled two-player instance") {
  const GameSpec g = game_from_json(read_json_file(fs::path(AGGEQ_DATA_DIR) / "two_player.json"));
  CHECK(g.n_players() == 2);
  CHECK(g.prices[0].value(0.7) == doctest::Approx(0.7));
  CHECK_FALSE(g.players[0].energy);
  CHECK_FALSE(g.coupling);
}

TEST_CASE("malformed documents") {
  Json j = to_json(two_player_game());
  Json bad = j;
  bad.erase("players");
  CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
  bad = j;
  bad["convention"] = "median";
  CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
  bad = j;
  bad["players"][0]["lower"] = Json::array({2.0});
  CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
  bad = j;
  bad["horizon"] = "one";
  CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
}

TEST_CASE("scenario config") {
  ScenarioConfig cfg;
  cfg.seed = 17;
  cfg.homogeneous_types = 4;
  const ScenarioConfig back = scenario_config_from_json(to_json(cfg));
  CHECK(back.seed == 17);
  CHECK(back.homogeneous_types == 4);
  CHECK(back.price_pieces == cfg.price_pieces);
  CHECK(scenario_config_from_json(Json::object()).n_players == ScenarioConfig{}.n_players);
  CHECK_THROWS_AS(scenario_config_from_json(Json{{"players", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(scenario_config_from_json(Json{{"energy_range", {3.0, 1.0}}}), std::invalid_argument);
}

TEST_CASE("result and report documents") {
  const GameSpec g = two_player_game();
  const EquilibriumResult r = solve_svwe(g, SolverConfig{});
  const Json jr = to_json(r);
  CHECK(jr.at("converged").get<bool>());
  CHECK(jr.at("aggregate").size() == 1);
  CHECK(jr.at("profile").size() == 2);

  ScenarioConfig cfg;
  cfg.n_players = 20;
  cfg.horizon = 6;
  cfg.capacity = 200;
  ReductionOptions o;
  o.n_clusters = 3;
  const ReductionReport rep = reduce(generate(cfg), o);
  const Json j = to_json(rep);
  for (const char* key : {"delta_X", "delta_u", "rho", "L1", "L2_estimate", "R", "K", "rho_condition_ok"})
    CHECK(j.contains(key));
  CHECK(j.at("assignment").at("labels").size() == 20);

  BoundCertificate missing;
  missing.value = std::numeric_limits<double>::infinity();
  CHECK(to_json(missing).at("value").is_null());
}

TEST_CASE("file helpers") {
  const fs::path p = scratch("doc.json");
  write_json_file(p, Json{{"a", 1}});
  CHECK(read_json_file(p).at("a").get<int>() == 1);
  std::ifstream in(p);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == "{\n  \"a\": 1\n}\n");
  CHECK_THROWS_AS(read_json_file(scratch("does_not_exist.json")), IoError);
  write_text_file(scratch("broken.json"), "{ not json");
  CHECK_THROWS_AS(read_json_file(scratch("broken.json")), std::invalid_argument);
  CHECK_THROWS_AS(write_json_file(scratch("no_such_dir") / "x" / "y.json", Json{}), IoError);
}

}  // TEST_SUITE

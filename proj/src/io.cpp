#include "aggeq/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aggeq {

namespace {

// JSON has no infinities; they are written as null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vec(const Vector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json mat(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (double x : m.row(r)) row.push_back(num(x));
    a.push_back(std::move(row));
  }
  return a;
}

Vector vec_from(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array of numbers");
  Vector v;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument(std::string(what) + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

Matrix mat_from(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array of rows");
  if (j.empty()) return {};
  Matrix m(j.size(), j.front().size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vec_from(j[r], what);
    if (row.size() != m.cols()) throw std::invalid_argument(std::string(what) + " has ragged rows");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  return j.at(key);
}

const char* convention_name(AggregationConvention c) {
  return c == AggregationConvention::Sum ? "sum" : "average";
}

AggregationConvention convention_from(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "sum") return AggregationConvention::Sum;
  if (s == "average") return AggregationConvention::Average;
  throw std::invalid_argument("convention must be \"sum\" or \"average\"");
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

Json to_json(const PriceFunction& pf) {
  Json a = Json::array();
  for (std::size_t k = 0; k < pf.n_pieces(); ++k)
    a.push_back(Json::array({k == 0 ? 0.0 : pf.breakpoints[k - 1], pf.intercepts[k], pf.slopes[k]}));
  return a;
}

PriceFunction price_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("price must be a nonempty array of pieces");
    std::vector<std::array<double, 3>> pieces;
    for (const auto& p : j) {
      const Vector v = vec_from(p, "price piece");
      if (v.size() != 3) throw std::invalid_argument("price piece must be [threshold, intercept, slope]");
      pieces.push_back({v[0], v[1], v[2]});
    }
    return PriceFunction::from_pieces(pieces);
  });
}

Json to_json(const GameSpec& game) {
  if (game.custom_cost) throw std::invalid_argument("games with a custom cost model cannot be serialised");
  Json j;
  j["horizon"] = game.horizon;
  j["convention"] = convention_name(game.convention);
  Json prices = Json::array();
  for (const auto& pf : game.prices) prices.push_back(to_json(pf));
  j["prices"] = std::move(prices);
  Json players = Json::array();
  for (const auto& p : game.players) {
    Json q;
    q["omega"] = p.omega;
    q["preferred"] = vec(p.preferred);
    q["energy"] = p.energy ? Json(*p.energy) : Json(nullptr);
    q["lower"] = vec(p.lower);
    q["upper"] = vec(p.upper);
    players.push_back(std::move(q));
  }
  j["players"] = std::move(players);
  j["weights"] = game.weights.empty() ? Json(nullptr) : vec(game.weights);
  if (game.coupling)
    j["coupling"] = Json{{"matrix", mat(game.coupling->matrix)}, {"rhs", vec(game.coupling->rhs)}};
  else
    j["coupling"] = nullptr;
  return j;
}

GameSpec game_from_json(const Json& j) {
  return guarded([&] {
    GameSpec g;
    g.horizon = at(j, "horizon").get<std::size_t>();
    if (j.contains("convention")) g.convention = convention_from(j.at("convention"));
    const Json& prices = at(j, "prices");
    if (!prices.is_array()) throw std::invalid_argument("prices must be an array");
    for (const auto& p : prices) g.prices.push_back(price_from_json(p));
    if (g.prices.size() == 1 && g.horizon > 1) g.prices.assign(g.horizon, g.prices.front());
    for (const auto& q : at(j, "players")) {
      PlayerParams p;
      p.omega = at(q, "omega").get<double>();
      p.preferred = vec_from(at(q, "preferred"), "preferred");
      if (q.contains("energy") && !q.at("energy").is_null()) p.energy = q.at("energy").get<double>();
      p.lower = vec_from(at(q, "lower"), "lower");
      p.upper = vec_from(at(q, "upper"), "upper");
      g.players.push_back(std::move(p));
    }
    if (j.contains("weights") && !j.at("weights").is_null()) g.weights = vec_from(j.at("weights"), "weights");
    if (j.contains("coupling") && !j.at("coupling").is_null()) {
      const Json& c = j.at("coupling");
      g.coupling = CouplingConstraint{mat_from(at(c, "matrix"), "coupling matrix"), vec_from(at(c, "rhs"), "rhs")};
    }
    g.validate();
    return g;
  });
}

Json to_json(const ScenarioConfig& cfg) {
  Json j;
  j["n_players"] = cfg.n_players;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["energy_range"] = {cfg.energy_min, cfg.energy_max};
  j["omega_range"] = {cfg.omega_min, cfg.omega_max};
  j["duration_min"] = cfg.duration_min;
  j["ramp_limit"] = cfg.ramp_limit;
  j["capacity"] = cfg.capacity;
  Json pieces = Json::array();
  for (const auto& p : cfg.price_pieces) pieces.push_back({p[0], p[1], p[2]});
  j["price_pieces"] = std::move(pieces);
  j["convention"] = convention_name(cfg.convention);
  j["coupling"] = cfg.coupling;
  j["homogeneous_types"] = cfg.homogeneous_types;
  return j;
}

ScenarioConfig scenario_config_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object()) throw std::invalid_argument("scenario config must be a JSON object");
    ScenarioConfig c;
    for (const auto& [key, value] : j.items()) {
      if (key == "n_players") c.n_players = value.get<std::size_t>();
      else if (key == "horizon") c.horizon = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "energy_range") {
        const Vector r = vec_from(value, "energy_range");
        if (r.size() != 2) throw std::invalid_argument("energy_range must have two entries");
        c.energy_min = r[0];
        c.energy_max = r[1];
      } else if (key == "omega_range") {
        const Vector r = vec_from(value, "omega_range");
        if (r.size() != 2) throw std::invalid_argument("omega_range must have two entries");
        c.omega_min = r[0];
        c.omega_max = r[1];
      } else if (key == "duration_min") c.duration_min = value.get<std::size_t>();
      else if (key == "ramp_limit") c.ramp_limit = value.get<double>();
      else if (key == "capacity") c.capacity = value.get<double>();
      else if (key == "price_pieces") {
        c.price_pieces.clear();
        for (const auto& p : value) {
          const Vector v = vec_from(p, "price piece");
          if (v.size() != 3) throw std::invalid_argument("price piece must be [threshold, intercept, slope]");
          c.price_pieces.push_back({v[0], v[1], v[2]});
        }
      } else if (key == "convention") c.convention = convention_from(value);
      else if (key == "coupling") c.coupling = value.get<bool>();
      else if (key == "homogeneous_types") c.homogeneous_types = value.get<std::size_t>();
      else throw std::invalid_argument("unknown scenario config key '" + key + "'");
    }
    c.validate();
    return c;
  });
}

Json to_json(const EquilibriumResult& r) {
  Json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["wall_time_s"] = r.wall_time_s;
  j["last_distance"] = num(r.last_distance);
  j["residual"] = num(r.residual);
  j["coupling_violation"] = num(r.coupling_violation);
  j["aggregate"] = vec(r.aggregate);
  j["duals"] = vec(r.duals);
  j["profile"] = mat(r.profile);
  return j;
}

Json to_json(const ClusterAssignment& a) {
  Json j;
  j["n_clusters"] = a.n_clusters;
  j["objective"] = a.objective;
  j["sizes"] = a.sizes;
  j["labels"] = a.labels;
  j["centroids"] = mat(a.centroids);
  return j;
}

Json to_json(const ReductionReport& r) {
  Json j;
  j["n_clusters"] = r.assignment.n_clusters;
  j["delta_X"] = num(r.delta_X);
  j["delta_X_method"] = "sampled support functions (" + std::to_string(r.n_dirs) + " directions)";
  j["delta_u"] = num(r.delta_u);
  j["rho"] = num(r.rho);
  j["L1"] = num(r.L1);
  j["L2_estimate"] = num(r.L2_estimate);
  j["R"] = num(r.R);
  j["K"] = num(r.K);
  j["rho_condition_ok"] = r.rho_condition_ok;
  j["warnings"] = r.warnings;
  j["assignment"] = to_json(r.assignment);
  j["auxiliary_game"] = to_json(r.auxiliary_game);
  return j;
}

Json to_json(const BoundCertificate& c) {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); };
  Json in;
  in["L1"] = opt(c.inputs.L1);
  in["L2"] = opt(c.inputs.L2);
  in["alpha"] = opt(c.inputs.alpha);
  in["beta"] = opt(c.inputs.beta);
  in["N"] = opt(c.inputs.N);
  in["K"] = opt(c.inputs.K);
  in["R"] = opt(c.inputs.R);
  in["T"] = opt(c.inputs.T);
  in["C"] = opt(c.inputs.C);
  Json j;
  j["kind"] = to_string(c.kind);
  j["value"] = num(c.value);
  j["valid"] = c.valid;
  j["inputs"] = std::move(in);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace aggeq

#include "spatial/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "spatial/errors.hpp"

namespace spatial {

using nlohmann::json;

const char* to_string(RateMode mode) {
  switch (mode) {
    case RateMode::MeanExponential: return "mean-exponential";
    case RateMode::ShannonRayleigh: return "shannon-rayleigh";
    case RateMode::Deterministic: return "deterministic";
  }
  return "?";
}

RateMode parse_rate_mode(const std::string& name) {
  if (name == "mean-exponential") return RateMode::MeanExponential;
  if (name == "shannon-rayleigh") return RateMode::ShannonRayleigh;
  if (name == "deterministic") return RateMode::Deterministic;
  throw ConfigError("unknown rate mode: " + name);
}

namespace {

void only_keys(const json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

std::vector<std::vector<double>> distances_from_coordinates(
    const std::vector<std::vector<double>>& xy) {
  const std::size_t L = xy.size();
  std::vector<std::vector<double>> dist(L, std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (xy[i].size() != xy[j].size()) throw ConfigError("coordinates: mixed dimensions");
      double s = 0.0;
      for (std::size_t k = 0; k < xy[i].size(); ++k) {
        const double diff = xy[i][k] - xy[j][k];
        s += diff * diff;
      }
      dist[i][j] = std::sqrt(s);
    }
  }
  return dist;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
  only_keys(j, "scenario",
            {"channels", "users", "locations", "rates", "explicit_edges", "p_min", "p_max"});
  ScenarioConfig c;
  c.p_min = get_or<double>(j, "p_min", c.p_min, "scenario");
  c.p_max = get_or<double>(j, "p_max", c.p_max, "scenario");

  const json channels = get<json>(j, "channels", "scenario");
  if (!channels.is_array()) throw ConfigError("channels: expected an array");
  for (std::size_t m = 0; m < channels.size(); ++m) {
    const std::string where = "channels[" + std::to_string(m) + "]";
    only_keys(channels[m], where, {"epsilon", "xi"});
    ChannelSpec ch;
    ch.epsilon = get<double>(channels[m], "epsilon", where);
    ch.xi = get<double>(channels[m], "xi", where);
    c.channels.push_back(ch);
  }

  const json users = get<json>(j, "users", "scenario");
  if (!users.is_array()) throw ConfigError("users: expected an array");
  for (std::size_t n = 0; n < users.size(); ++n) {
    const std::string where = "users[" + std::to_string(n) + "]";
    const json& u = users[n];
    only_keys(u, where,
              {"p", "zeta", "nu", "travel_radius", "timer_density", "allowed_locations",
               "initial_location", "initial_channel"});
    UserSpec spec;
    spec.p = get<double>(u, "p", where);
    spec.zeta = get_or<double>(u, "zeta", spec.zeta, where);
    spec.nu = get_or<double>(u, "nu", spec.nu, where);
    spec.travel_radius = get_or<double>(u, "travel_radius", spec.travel_radius, where);
    spec.timer_density = get_or<double>(u, "timer_density", spec.timer_density, where);
    spec.allowed_locations =
        get_or<std::vector<std::size_t>>(u, "allowed_locations", {}, where);
    spec.initial_location = get_or<std::size_t>(u, "initial_location", 0, where);
    spec.initial_channel = get_or<std::size_t>(u, "initial_channel", 0, where);
    c.users.push_back(std::move(spec));
  }

  const json loc = get<json>(j, "locations", "scenario");
  only_keys(loc, "locations", {"distances", "coordinates", "scale", "delta"});
  const bool has_dist = loc.contains("distances");
  const bool has_xy = loc.contains("coordinates");
  if (has_dist == has_xy) {
    throw ConfigError("locations: give exactly one of 'distances' or 'coordinates'");
  }
  c.space.distances =
      has_dist ? get<std::vector<std::vector<double>>>(loc, "distances", "locations")
               : distances_from_coordinates(
                     get<std::vector<std::vector<double>>>(loc, "coordinates", "locations"));
  c.space.scale = get_or<std::vector<double>>(loc, "scale", {}, "locations");
  c.space.delta = get<double>(loc, "delta", "locations");

  const json rates = get<json>(j, "rates", "scenario");
  only_keys(rates, "rates",
            {"mode", "means", "user_channel_means", "bandwidth_mhz", "noise_dbm", "mean_gain"});
  c.rates.mode = parse_rate_mode(get_or<std::string>(rates, "mode", "mean-exponential", "rates"));
  if (c.rates.mode == RateMode::ShannonRayleigh) {
    c.rates.shannon.bandwidth_mhz = get<std::vector<double>>(rates, "bandwidth_mhz", "rates");
    c.rates.shannon.noise_dbm = get_or<double>(rates, "noise_dbm", -100.0, "rates");
    c.rates.shannon.mean_gain =
        get<std::vector<std::vector<double>>>(rates, "mean_gain", "rates");
  } else {
    const bool full = rates.contains("means");
    const bool per_user = rates.contains("user_channel_means");
    if (full == per_user) {
      throw ConfigError("rates: give exactly one of 'means' or 'user_channel_means'");
    }
    if (full) {
      c.rates.means =
          get<std::vector<std::vector<std::vector<double>>>>(rates, "means", "rates");
    } else {
      c.rates.user_channel_means =
          get<std::vector<std::vector<double>>>(rates, "user_channel_means", "rates");
    }
  }

  if (j.contains("explicit_edges")) {
    const auto pairs = get<std::vector<std::vector<std::size_t>>>(j, "explicit_edges", "scenario");
    std::vector<Edge> edges;
    for (const auto& e : pairs) {
      if (e.size() != 2) throw ConfigError("explicit_edges: each edge needs two indices");
      edges.emplace_back(e[0], e[1]);
    }
    c.explicit_edges = std::move(edges);
  }
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["p_min"] = c.p_min;
  j["p_max"] = c.p_max;
  j["channels"] = json::array();
  for (const auto& ch : c.channels) j["channels"].push_back({{"epsilon", ch.epsilon}, {"xi", ch.xi}});
  j["users"] = json::array();
  for (const auto& u : c.users) {
    j["users"].push_back({{"p", u.p},
                          {"zeta", u.zeta},
                          {"nu", u.nu},
                          {"travel_radius", u.travel_radius},
                          {"timer_density", u.timer_density},
                          {"allowed_locations", u.allowed_locations},
                          {"initial_location", u.initial_location},
                          {"initial_channel", u.initial_channel}});
  }
  json loc;
  loc["distances"] = c.space.distances;
  if (!c.space.scale.empty()) loc["scale"] = c.space.scale;
  loc["delta"] = c.space.delta;
  j["locations"] = loc;

  json rates;
  rates["mode"] = to_string(c.rates.mode);
  if (c.rates.mode == RateMode::ShannonRayleigh) {
    rates["bandwidth_mhz"] = c.rates.shannon.bandwidth_mhz;
    rates["noise_dbm"] = c.rates.shannon.noise_dbm;
    rates["mean_gain"] = c.rates.shannon.mean_gain;
  } else if (!c.rates.means.empty()) {
    rates["means"] = c.rates.means;
  } else {
    rates["user_channel_means"] = c.rates.user_channel_means;
  }
  j["rates"] = rates;

  if (c.explicit_edges) {
    json edges = json::array();
    for (const auto& [a, b] : *c.explicit_edges) edges.push_back({a, b});
    j["explicit_edges"] = edges;
  }
  return j;
}

ScenarioConfig read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

void write_scenario_file(const std::filesystem::path& path, const ScenarioConfig& c) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file " + path.string());
  out << scenario_to_json(c).dump(2) << '\n';
}

}  // namespace spatial

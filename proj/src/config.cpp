#include "tpi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>

#include "tpi/defaults.hpp"
#include "tpi/errors.hpp"

namespace tpi {

using nlohmann::json;

std::string_view to_string(GammaUnit unit) {
  switch (unit) {
    case GammaUnit::per_second:
      return "per_second";
    case GammaUnit::linewidth_hz:
      return "linewidth_hz";
    case GammaUnit::linewidth_mhz:
      return "linewidth_mhz";
  }
  return "unknown";
}

GammaUnit gamma_unit_from_string(std::string_view name) {
  for (GammaUnit u : {GammaUnit::per_second, GammaUnit::linewidth_hz, GammaUnit::linewidth_mhz}) {
    if (name == to_string(u)) return u;
  }
  throw ConfigError("geometry.gamma_unit", "unknown gamma unit '" + std::string(name) +
                                               "' (per_second, linewidth_hz, linewidth_mhz)");
}

double to_amplitude_decay(double value, GammaUnit unit) {
  switch (unit) {
    case GammaUnit::per_second:
      return value;
    case GammaUnit::linewidth_hz:
      return std::numbers::pi * value;
    case GammaUnit::linewidth_mhz:
      return std::numbers::pi * value * 1e6;
  }
  return value;
}

double AppConfig::shared_transit() const {
  return std::max(detectors[0].transit_time, detectors[1].transit_time);
}

RunConfig AppConfig::run_config() const {
  RunConfig rc(pair, detectors[0], detectors[1]);
  rc.trials = montecarlo.trials;
  rc.seed = montecarlo.seed;
  rc.selection = montecarlo.selection;
  rc.sampler = montecarlo.sampler;
  rc.fringe_points = montecarlo.fringe_points;
  rc.mode = mode;
  return rc;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, path + " must be an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(join(path, key), "unknown field " + join(path, key));
    }
  }
}

double number(const json& j, const std::string& key, const std::string& path) {
  const std::string field = join(path, key);
  if (!j.contains(key)) throw ConfigError(field, "missing required field " + field);
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(field, field + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field, field + " must be finite");
  return d;
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

std::uint64_t unsigned_or(const json& j, const std::string& key, const std::string& path,
                          std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(join(path, key), join(path, key) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string string_or(const json& j, const std::string& key, const std::string& path,
                      const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), join(path, key) + " must be a string");
  return v.get<std::string>();
}

Vec3 vec3(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3 ||
      !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
    throw ConfigError(field, field + " must be an array of three numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

// Re-tags errors from model constructors with the config field they came from.
// Fields the model reports are kept unless `force` narrows them.
template <class F>
auto with_field(const std::string& field, F&& f, bool force = false) {
  try {
    return f();
  } catch (const ConfigError& e) {
    if (!force && !e.field().empty()) throw;
    throw ConfigError(field, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

EmitterPair parse_pair(const json& g) {
  const std::string path = "geometry";
  const GammaUnit unit = gamma_unit_from_string(string_or(g, "gamma_unit", path, "per_second"));

  double gamma_a = 0.0;
  double gamma_b = 0.0;
  if (g.contains("gamma")) {
    if (g.contains("gamma_a") || g.contains("gamma_b")) {
      throw ConfigError("geometry.gamma", "give either gamma or gamma_a/gamma_b, not both");
    }
    gamma_a = gamma_b = number(g, "gamma", path);
  } else {
    gamma_a = number(g, "gamma_a", path);
    gamma_b = number(g, "gamma_b", path);
  }
  gamma_a = to_amplitude_decay(gamma_a, unit);
  gamma_b = to_amplitude_decay(gamma_b, unit);

  FarFieldThresholds thresholds{defaults::min_distance_ratio, defaults::min_separation_ratio};
  if (g.contains("far_field")) {
    const json& ff = g.at("far_field");
    require_object(ff, "geometry.far_field");
    allow_keys(ff, "geometry.far_field", {"min_distance_ratio", "min_separation_ratio"});
    thresholds.min_distance_ratio =
        number_or(ff, "min_distance_ratio", "geometry.far_field", thresholds.min_distance_ratio);
    thresholds.min_separation_ratio =
        number_or(ff, "min_separation_ratio", "geometry.far_field", thresholds.min_separation_ratio);
  }

  const double wavelength = number(g, "wavelength", path);
  if (g.contains("emitters")) {
    if (g.contains("separation")) {
      throw ConfigError("geometry.separation", "give either separation or emitters, not both");
    }
    const json& e = g.at("emitters");
    if (!e.is_array() || e.size() != 2) {
      throw ConfigError("geometry.emitters", "geometry.emitters must list two positions");
    }
    const Vec3 a = vec3(e[0], "geometry.emitters[0]");
    const Vec3 b = vec3(e[1], "geometry.emitters[1]");
    return with_field("geometry.emitters",
                      [&] { return EmitterPair(a, b, wavelength, gamma_a, gamma_b, thresholds); });
  }
  const double separation = number(g, "separation", path);
  return with_field("geometry.separation", [&] {
    return EmitterPair::on_x_axis(separation, wavelength, gamma_a, gamma_b, thresholds);
  });
}

DetectorSetting parse_detector(const EmitterPair& pair, const json& d, const std::string& path) {
  require_object(d, path);
  allow_keys(d, path, {"position", "distance", "xi"});
  if (d.contains("position")) {
    if (d.contains("distance") || d.contains("xi")) {
      throw ConfigError(path, path + ": give either position or distance/xi");
    }
    const Vec3 p = vec3(d.at("position"), join(path, "position"));
    return with_field(path, [&] { return make_detector(pair, p); }, true);
  }
  const double distance = number(d, "distance", path);
  const double xi = number_or(d, "xi", path, 0.0);
  return with_field(path, [&] { return make_detector_at(pair, distance, xi); }, true);
}

std::pair<double, double> time_pair(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(field, field + " must be a pair [t1, t2] of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

void check_detection(double t, double transit, const std::string& field) {
  if (!(t - transit >= 0.0)) {
    std::ostringstream msg;
    msg << field << " = " << t << " s precedes the earliest possible detection at " << transit
        << " s";
    throw ConfigError(field, msg.str());
  }
}

}  // namespace

AppConfig parse_config(const json& doc) {
  require_object(doc, "config");
  allow_keys(doc, "", {"geometry", "mode", "timing", "scan", "bell", "montecarlo"});
  if (!doc.contains("geometry")) throw ConfigError("geometry", "missing required field geometry");

  const json& g = doc.at("geometry");
  require_object(g, "geometry");
  allow_keys(g, "geometry",
             {"wavelength", "separation", "emitters", "gamma", "gamma_a", "gamma_b", "gamma_unit",
              "detectors", "far_field"});
  EmitterPair pair = parse_pair(g);

  if (!g.contains("detectors")) {
    throw ConfigError("geometry.detectors", "missing required field geometry.detectors");
  }
  const json& dets = g.at("detectors");
  if (!dets.is_array() || dets.size() != 2) {
    throw ConfigError("geometry.detectors", "geometry.detectors must list exactly two detectors");
  }
  const DetectorSetting d1 = parse_detector(pair, dets[0], "geometry.detectors[0]");
  const DetectorSetting d2 = parse_detector(pair, dets[1], "geometry.detectors[1]");

  AppConfig cfg{pair, {d1, d2}, G2Mode::paper_literal, {}, {}, {}, {}};
  cfg.mode = g2_mode_from_string(string_or(doc, "mode", "", "paper_literal"));

  // Detection times default to emission at t = 0.
  cfg.timing.t1 = d1.transit_time;
  cfg.timing.t2 = d2.transit_time;
  if (doc.contains("timing")) {
    const json& t = doc.at("timing");
    require_object(t, "timing");
    allow_keys(t, "timing", {"t1", "t2", "delay"});
    cfg.timing.t1 = number_or(t, "t1", "timing", cfg.timing.t1);
    cfg.timing.t2 = number_or(t, "t2", "timing", cfg.timing.t2);
    if (t.contains("delay")) {
      cfg.timing.delay = number(t, "delay", "timing");
      if (*cfg.timing.delay < 0.0) throw ConfigError("timing.delay", "timing.delay must be >= 0");
    }
  }
  check_detection(cfg.timing.t1, d1.transit_time, "timing.t1");
  check_detection(cfg.timing.t2, d2.transit_time, "timing.t2");

  cfg.scan.points = defaults::scan_points;
  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    require_object(s, "scan");
    allow_keys(s, "scan", {"points", "times"});
    cfg.scan.points = unsigned_or(s, "points", "scan", cfg.scan.points);
    if (s.contains("times")) {
      const json& times = s.at("times");
      if (!times.is_array()) throw ConfigError("scan.times", "scan.times must be an array");
      for (std::size_t k = 0; k < times.size(); ++k) {
        const std::string field = "scan.times[" + std::to_string(k) + "]";
        const auto tp = time_pair(times[k], field);
        check_detection(tp.first, d1.transit_time, field);
        check_detection(tp.second, d2.transit_time, field);
        cfg.scan.times.push_back(tp);
      }
    }
  }
  if (cfg.scan.points == 0) throw ConfigError("scan.points", "scan.points must be >= 1");
  if (cfg.scan.times.empty()) cfg.scan.times.push_back({cfg.timing.t1, cfg.timing.t2});

  const double transit = cfg.shared_transit();
  BellSettings bs = bell_angle_settings(pair.gamma_a(), transit, transit, transit);
  cfg.bell.grid_step_deg = defaults::bell_grid_step_deg;
  if (doc.contains("bell")) {
    const json& b = doc.at("bell");
    require_object(b, "bell");
    allow_keys(b, "bell", {"preset", "phases", "t10", "t20", "grid", "raw_times"});
    const std::string preset = string_or(b, "preset", "bell", b.contains("phases") ? "" : "bell_angles");
    if (!preset.empty() && preset != "bell_angles") {
      throw ConfigError("bell.preset", "unknown preset '" + preset + "' (bell_angles)");
    }
    if (b.contains("phases")) {
      if (!preset.empty()) throw ConfigError("bell.phases", "give either preset or phases");
      const json& p = b.at("phases");
      require_object(p, "bell.phases");
      allow_keys(p, "bell.phases", {"phi1", "phi1p", "phi2", "phi2p"});
      bs.phi1 = number(p, "phi1", "bell.phases");
      bs.phi1p = number(p, "phi1p", "bell.phases");
      bs.phi2 = number(p, "phi2", "bell.phases");
      bs.phi2p = number(p, "phi2p", "bell.phases");
    }
    bs.t10 = number_or(b, "t10", "bell", bs.t10);
    bs.t20 = number_or(b, "t20", "bell", bs.t20);
    if (b.contains("grid")) {
      const json& grid = b.at("grid");
      require_object(grid, "bell.grid");
      allow_keys(grid, "bell.grid", {"step_deg"});
      cfg.bell.grid_step_deg = number_or(grid, "step_deg", "bell.grid", cfg.bell.grid_step_deg);
    }
    if (b.contains("raw_times")) {
      const json& r = b.at("raw_times");
      require_object(r, "bell.raw_times");
      allow_keys(r, "bell.raw_times", {"t1", "t1p", "t2", "t2p"});
      cfg.bell.raw_times = RawTimings{number(r, "t1", "bell.raw_times"),
                                      number(r, "t1p", "bell.raw_times"),
                                      number(r, "t2", "bell.raw_times"),
                                      number(r, "t2p", "bell.raw_times")};
    }
  }
  cfg.bell.settings = bs;
  // Validates the step eagerly so errors surface at parse time.
  BellGrid::from_step_degrees(cfg.bell.grid_step_deg);
  if (pair.equal_decay()) cfg.bell.settings.validate();

  cfg.montecarlo.trials = defaults::mc_trials;
  cfg.montecarlo.seed = defaults::mc_seed;
  cfg.montecarlo.fringe_points = defaults::mc_fringe_points;
  if (doc.contains("montecarlo")) {
    const json& m = doc.at("montecarlo");
    require_object(m, "montecarlo");
    allow_keys(m, "montecarlo", {"trials", "seed", "selection", "sampler", "fringe_points"});
    cfg.montecarlo.trials = unsigned_or(m, "trials", "montecarlo", cfg.montecarlo.trials);
    cfg.montecarlo.seed = unsigned_or(m, "seed", "montecarlo", cfg.montecarlo.seed);
    cfg.montecarlo.selection = selection_from_string(string_or(m, "selection", "montecarlo", "all"));
    cfg.montecarlo.sampler = sampler_from_string(string_or(m, "sampler", "montecarlo", "auto"));
    cfg.montecarlo.fringe_points =
        unsigned_or(m, "fringe_points", "montecarlo", cfg.montecarlo.fringe_points);
  }
  cfg.run_config().validate();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const AppConfig& c) {
  const auto& p = c.pair;
  json detectors = json::array();
  for (const auto& d : c.detectors) detectors.push_back({{"position", vec3_json(d.position)}});

  json scan_times = json::array();
  for (const auto& [t1, t2] : c.scan.times) scan_times.push_back({t1, t2});

  json timing = {{"t1", c.timing.t1}, {"t2", c.timing.t2}};
  if (c.timing.delay) timing["delay"] = *c.timing.delay;

  const auto& s = c.bell.settings;
  json bell = {{"phases", {{"phi1", s.phi1}, {"phi1p", s.phi1p}, {"phi2", s.phi2}, {"phi2p", s.phi2p}}},
               {"t10", s.t10},
               {"t20", s.t20},
               {"grid", {{"step_deg", c.bell.grid_step_deg}}}};
  if (c.bell.raw_times) {
    const auto& r = *c.bell.raw_times;
    bell["raw_times"] = {{"t1", r.t1}, {"t1p", r.t1p}, {"t2", r.t2}, {"t2p", r.t2p}};
  }

  return {
      {"geometry",
       {{"wavelength", p.wavelength()},
        {"emitters", json::array({vec3_json(p.position_a()), vec3_json(p.position_b())})},
        {"gamma_a", p.gamma_a()},
        {"gamma_b", p.gamma_b()},
        {"gamma_unit", to_string(GammaUnit::per_second)},
        {"far_field",
         {{"min_distance_ratio", p.thresholds().min_distance_ratio},
          {"min_separation_ratio", p.thresholds().min_separation_ratio}}},
        {"detectors", detectors}}},
      {"mode", to_string(c.mode)},
      {"timing", timing},
      {"scan", {{"points", c.scan.points}, {"times", scan_times}}},
      {"bell", bell},
      {"montecarlo",
       {{"trials", c.montecarlo.trials},
        {"seed", c.montecarlo.seed},
        {"selection", to_string(c.montecarlo.selection)},
        {"sampler", to_string(c.montecarlo.sampler)},
        {"fringe_points", c.montecarlo.fringe_points}}},
  };
}

}  // namespace tpi

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "tpi/cli.hpp"
#include "tpi/config.hpp"
#include "tpi/defaults.hpp"
#include "tpi/errors.hpp"

namespace tpi::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> selection;
  std::optional<double> delay;
  std::string clicks_path;
  bool ch74 = false;
};

// Writes to --out when given, otherwise to the primary stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("out", "cannot open output file " + path);
      stream_ = &file_;
    }
    *stream_ << std::setprecision(17);
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

AppConfig load(const Options& o) {
  AppConfig cfg = load_config(o.config_path);
  if (o.mode) cfg.mode = g2_mode_from_string(*o.mode);
  if (o.seed) cfg.montecarlo.seed = *o.seed;
  if (o.trials) cfg.montecarlo.trials = *o.trials;
  if (o.selection) cfg.montecarlo.selection = selection_from_string(*o.selection);
  if (o.delay) cfg.timing.delay = *o.delay;
  return cfg;
}

json result_json(const Ch74Result& r) {
  return {{"value", r.value},
          {"lower_bound", r.lower_bound},
          {"upper_bound", r.upper_bound},
          {"violated", r.violated},
          {"margin", r.margin}};
}

void g2_scan(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  const auto& d1 = cfg.detectors[0];
  const auto& d2 = cfg.detectors[1];
  Sink sink(o.out_path, out);
  json rows = json::array();
  const bool csv = o.format != "json";
  if (csv) *sink << "phi1,phi2,t1,t2,g2,mode\n";
  for (const auto& [t1, t2] : cfg.scan.times) {
    const TimingRecord timing = TimingRecord::make(t1, t2, d1.transit_time, d2.transit_time);
    for (std::size_t k = 0; k < cfg.scan.points; ++k) {
      const double phi1 = d1.phase_phi;
      const double phi2 = d2.phase_phi + 2.0 * std::numbers::pi * static_cast<double>(k) /
                                             static_cast<double>(cfg.scan.points);
      const double g2 = g2_analytic(cfg.pair, phi1, phi2, timing, cfg.mode);
      if (csv) {
        *sink << phi1 << ',' << phi2 << ',' << t1 << ',' << t2 << ',' << g2 << ','
              << to_string(cfg.mode) << '\n';
      } else {
        rows.push_back({{"phi1", phi1}, {"phi2", phi2}, {"t1", t1}, {"t2", t2}, {"g2", g2},
                        {"mode", to_string(cfg.mode)}});
      }
    }
  }
  if (!csv) *sink << rows.dump(2) << '\n';
}

void visibility_cmd(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  Sink sink(o.out_path, out);
  const json j = {{"t1", cfg.timing.t1},
                  {"t2", cfg.timing.t2},
                  {"gamma_a", cfg.pair.gamma_a()},
                  {"gamma_b", cfg.pair.gamma_b()},
                  {"mode", to_string(cfg.mode)},
                  {"visibility", visibility(cfg.pair, cfg.timing.t1, cfg.timing.t2, cfg.mode)}};
  *sink << j.dump(2) << '\n';
}

void require_equal_decay(const AppConfig& cfg) {
  if (!cfg.pair.equal_decay()) {
    throw ConfigError("geometry.gamma_b", "the CH74 evaluation assumes gamma_a == gamma_b");
  }
}

void bell_test(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  require_equal_decay(cfg);
  const BellSettings& s = cfg.bell.settings;
  json j = {{"settings",
             {{"phi1", s.phi1}, {"phi1p", s.phi1p}, {"phi2", s.phi2}, {"phi2p", s.phi2p}}},
            {"t10", s.t10},
            {"t20", s.t20},
            {"transit", s.transit},
            {"form", "cancelled"}};
  j.update(result_json(ch74_functional(s)));
  j["causality"] = to_string(causality_window_check(s.t10, s.t20, s.transit));
  if (cfg.bell.raw_times) j["raw"] = result_json(ch74_raw(s, *cfg.bell.raw_times));
  Sink sink(o.out_path, out);
  *sink << j.dump(2) << '\n';
}

json point_json(const BellScanPoint& p) {
  json j = {{"d12", p.d12}, {"d12p", p.d12p}, {"d1p2", p.d1p2}, {"d1p2p", p.d1p2p}};
  j.update(result_json(p.result));
  return j;
}

void bell_scan_cmd(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  require_equal_decay(cfg);
  const BellGrid grid = BellGrid::from_step_degrees(cfg.bell.grid_step_deg);
  BellScanOptions opts;
  opts.retain_points = !o.out_path.empty();
  if (opts.retain_points && grid.size() > defaults::bell_scan_csv_limit) {
    throw ConfigError("bell.grid.step_deg", "grid too large to write point by point");
  }
  const BellScanResult r = bell_scan(grid, opts);
  if (opts.retain_points) {
    Sink csv(o.out_path, out);
    *csv << "d12,d12p,d1p2,d1p2p,value,violated\n";
    for (const auto& p : r.points) {
      *csv << p.d12 << ',' << p.d12p << ',' << p.d1p2 << ',' << p.d1p2p << ',' << p.result.value
           << ',' << (p.result.violated ? 1 : 0) << '\n';
    }
  }
  const json j = {{"evaluated", r.evaluated},
                  {"step_deg", cfg.bell.grid_step_deg},
                  {"simd", kernels::to_string(r.simd)},
                  {"maximum", point_json(r.maximum)},
                  {"minimum", point_json(r.minimum)}};
  out << j.dump(2) << '\n';
}

json report_json(const EstimateReport& r) {
  json fringe = json::array();
  for (const auto& f : r.fringe) {
    fringe.push_back({{"delta_phi", f.delta_phi},
                      {"trials", f.trials},
                      {"selected", f.selected},
                      {"accepted", f.accepted},
                      {"rate", f.rate},
                      {"standard_error", f.standard_error}});
  }
  json j = {{"trials", r.trials},
            {"accepted_trials", r.accepted_trials},
            {"g2_estimate", r.g2_estimate},
            {"visibility_estimate", r.visibility_estimate},
            {"standard_error", r.standard_error},
            {"zero_acceptance", r.zero_acceptance},
            {"sampler", to_string(r.sampler)},
            {"coincident", r.coincident},
            {"clamped", r.clamped},
            {"class_counts",
             {{"no_overlap_and_no_signaling", r.class_counts[0]},
              {"no_overlap_only", r.class_counts[1]},
              {"overlapping", r.class_counts[2]}}},
            {"fringe", fringe}};
  j["ch74_estimate"] = r.ch74_estimate ? json(*r.ch74_estimate) : json(nullptr);
  return j;
}

void mc_run(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  const RunConfig rc = cfg.run_config();
  json j;
  if (o.ch74) {
    require_equal_decay(cfg);
    j = report_json(ch74_empirical(rc, cfg.bell.settings));
  } else if (!o.clicks_path.empty()) {
    Sink clicks(o.clicks_path, out);
    *clicks << "trial,detector,detection_time_ns,emission_time_ns,phase_setting_rad,accepted\n";
    auto row = [&](const ClickEvent& e, bool accepted) {
      *clicks << e.trial << ',' << e.detector << ',' << e.detection_time * 1e9 << ','
              << e.emission_time * 1e9 << ',' << e.phase_setting << ',' << (accepted ? 1 : 0)
              << '\n';
    };
    j = report_json(run(rc, [&](std::uint64_t, const CycleOutcome& c) {
      row(c.first, c.accepted());
      row(c.second, c.accepted());
    }));
  } else {
    j = report_json(run(rc));
  }
  j["seed"] = rc.seed;
  j["selection"] = to_string(rc.selection);
  j["mode"] = to_string(rc.mode);
  Sink sink(o.out_path, out);
  *sink << j.dump(2) << '\n';
}

void timing_check(const Options& o, std::ostream& out) {
  const AppConfig cfg = load(o);
  const double transit = cfg.shared_transit();
  json j = {{"lifetime_a_s", 1.0 / (2.0 * cfg.pair.gamma_a())},
            {"lifetime_b_s", 1.0 / (2.0 * cfg.pair.gamma_b())},
            {"transit1_s", cfg.detectors[0].transit_time},
            {"transit2_s", cfg.detectors[1].transit_time},
            {"transit_s", transit},
            {"window_s", {transit, 2.0 * transit}}};
  if (cfg.timing.delay) {
    const double delay = *cfg.timing.delay;
    const CausalityClass c = causality_window_check(0.0, delay, transit);
    j["delay_s"] = delay;
    j["classification"] = to_string(c);
    j["inside_window"] = c == CausalityClass::no_overlap_and_no_signaling;
  }
  Sink sink(o.out_path, out);
  *sink << j.dump(2) << '\n';
}

json error_json(const std::string& kind, const std::string& field, const std::string& message) {
  json j = {{"error", kind}, {"message", message}};
  if (!field.empty()) j["field"] = field;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon interference and CH74 analysis for independent single-photon emitters",
               "tpi"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", o.config_path, "JSON run config")->required();
    sub->add_option("--out,-o", o.out_path, "Write the primary output to this file");
    sub->add_option("--mode", o.mode, "paper_literal or amplitude_oracle");
  };

  auto* g2 = app.add_subcommand("g2-scan", "Tabulate g2 over a phi2 fringe for each time pair");
  add_common(g2);
  g2->add_option("--format", o.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* vis = app.add_subcommand("visibility", "Fringe visibility at the configured times");
  add_common(vis);
  auto* bt = app.add_subcommand("bell-test", "CH74 expression for one set of Bell settings");
  add_common(bt);
  auto* bs = app.add_subcommand("bell-scan", "CH74 expression over a phase-difference grid");
  add_common(bs);
  auto* mc = app.add_subcommand("mc-run", "Monte Carlo fringe scan or CH74 estimate");
  add_common(mc);
  mc->add_option("--seed", o.seed, "RNG seed");
  mc->add_option("--trials", o.trials, "Number of measurement cycles");
  mc->add_option("--selection", o.selection, "Timing-window selection");
  mc->add_option("--clicks", o.clicks_path, "Export click stream CSV");
  mc->add_flag("--ch74", o.ch74, "Estimate CH74 at the configured Bell settings");
  auto* tc = app.add_subcommand("timing-check", "Lifetime, transit time and causality window");
  add_common(tc);
  tc->add_option("--delay", o.delay, "Detection delay t2 - t1 to classify, s");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", "", e.what()).dump() << '\n';
    return config_error;
  }

  try {
    if (*g2) g2_scan(o, out);
    else if (*vis) visibility_cmd(o, out);
    else if (*bt) bell_test(o, out);
    else if (*bs) bell_scan_cmd(o, out);
    else if (*mc) mc_run(o, out);
    else if (*tc) timing_check(o, out);
  } catch (const ConfigError& e) {
    err << error_json("config", e.field(), e.what()).dump() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    err << error_json("config", "", e.what()).dump() << '\n';
    return config_error;
  } catch (const NumericalError& e) {
    err << error_json("numerical", "", e.what()).dump() << '\n';
    return numerical_error;
  }
  return ok;
}

}  // namespace tpi::cli

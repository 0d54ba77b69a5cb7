#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "tpi/config.hpp"
#include "tpi/errors.hpp"

using namespace tpi;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "geometry": {
      "wavelength": 1e-6,
      "separation": 2e-5,
      "gamma": 6.25e7,
      "detectors": [{"distance": 1.0, "xi": 0.02}, {"distance": 1.0, "xi": -0.03}]
    }
  })");
}

std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto cfg = parse_config(minimal());
  CHECK(cfg.pair.gamma_a() == 6.25e7);
  CHECK(cfg.pair.equal_decay());
  CHECK(cfg.mode == G2Mode::paper_literal);
  CHECK(cfg.timing.t1 == cfg.detectors[0].transit_time);
  CHECK(cfg.timing.t2 == cfg.detectors[1].transit_time);
  CHECK(cfg.scan.points == 24);
  REQUIRE(cfg.scan.times.size() == 1);
  CHECK(cfg.bell.grid_step_deg == 5.0);
  CHECK(cfg.bell.settings.t10 == cfg.shared_transit());
  CHECK(cfg.montecarlo.trials == 100000);
  CHECK(cfg.montecarlo.selection == Selection::all);
  CHECK(cfg.montecarlo.sampler == Sampler::automatic);
  CHECK(cfg.detectors[0].transit_time == doctest::Approx(3.3356409519815204e-9).epsilon(1e-12));
}

TEST_CASE("linewidth units convert to the amplitude decay constant") {
  json doc = minimal();
  doc["geometry"]["gamma"] = 20;
  doc["geometry"]["gamma_unit"] = "linewidth_mhz";
  const auto cfg = parse_config(doc);
  CHECK(cfg.pair.gamma_a() == doctest::Approx(std::numbers::pi * 20e6));
  // Lifetime 1 / (2 gamma) equals 1 / (2 pi linewidth).
  CHECK(1.0 / (2.0 * cfg.pair.gamma_a()) == doctest::Approx(7.957747154594767e-9).epsilon(1e-12));

  doc["geometry"]["gamma"] = 20e6;
  doc["geometry"]["gamma_unit"] = "linewidth_hz";
  CHECK(parse_config(doc).pair.gamma_a() == doctest::Approx(cfg.pair.gamma_a()));

  doc["geometry"]["gamma_unit"] = "furlongs";
  CHECK(field_of(doc) == "geometry.gamma_unit");
}

TEST_CASE("canonical form round-trips") {
  json doc = minimal();
  doc["geometry"]["gamma_unit"] = "linewidth_mhz";
  doc["geometry"]["gamma"] = 20;
  doc["mode"] = "amplitude_oracle";
  doc["montecarlo"] = {{"trials", 1000}, {"seed", 3}, {"selection", "no_overlap_only"}};
  const auto first = parse_config(doc);
  const json canonical = to_json(first);
  const auto second = parse_config(canonical);
  CHECK(to_json(second) == canonical);
  CHECK(second.pair.gamma_a() == first.pair.gamma_a());
  CHECK(second.detectors[1].phase_phi == first.detectors[1].phase_phi);
  CHECK(second.mode == G2Mode::amplitude_oracle);
  CHECK(second.montecarlo.selection == Selection::no_overlap_only);
  CHECK(canonical["geometry"]["gamma_unit"] == "per_second");
}

TEST_CASE("validation errors name the field") {
  SUBCASE("separation equal to the wavelength") {
    json doc = minimal();
    doc["geometry"]["separation"] = 1e-6;
    CHECK(field_of(doc) == "geometry.separation");
  }
  SUBCASE("unknown keys") {
    json doc = minimal();
    doc["montecarlo"] = {{"trails", 10}};
    CHECK(field_of(doc) == "montecarlo.trails");
    doc = minimal();
    doc["colour"] = "blue";
    CHECK(field_of(doc) == "colour");
  }
  SUBCASE("missing fields") {
    json doc = minimal();
    doc["geometry"].erase("wavelength");
    CHECK(field_of(doc) == "geometry.wavelength");
    doc = minimal();
    doc["geometry"].erase("gamma");
    CHECK(field_of(doc) == "geometry.gamma_a");
    CHECK(field_of(json::object()) == "geometry");
  }
  SUBCASE("detector count and placement") {
    json doc = minimal();
    doc["geometry"]["detectors"].push_back({{"distance", 2.0}});
    CHECK(field_of(doc) == "geometry.detectors");
    doc = minimal();
    doc["geometry"]["detectors"][0] = {{"distance", 1e-4}};
    CHECK(field_of(doc) == "geometry.detectors[0]");
    doc = minimal();
    doc["geometry"]["detectors"][1] = {{"position", {0.0, 0.0, 0.0}}};
    CHECK(field_of(doc) == "geometry.detectors[1]");
  }
  SUBCASE("detection before arrival") {
    json doc = minimal();
    doc["timing"] = {{"t1", 1e-9}};
    CHECK(field_of(doc) == "timing.t1");
    doc["timing"] = {{"delay", -1e-9}};
    CHECK(field_of(doc) == "timing.delay");
  }
  SUBCASE("bell and montecarlo blocks") {
    json doc = minimal();
    doc["bell"] = {{"grid", {{"step_deg", 7}}}};
    CHECK(field_of(doc) == "bell.grid.step_deg");
    doc["bell"] = {{"preset", "other"}};
    CHECK(field_of(doc) == "bell.preset");
    doc = minimal();
    doc["montecarlo"] = {{"trials", -5}};
    CHECK(field_of(doc) == "montecarlo.trials");
    doc["montecarlo"] = {{"trials", 0}};
    CHECK(field_of(doc) == "montecarlo.trials");
    doc = minimal();
    doc["geometry"].erase("gamma");
    doc["geometry"]["gamma_a"] = 1e8;
    doc["geometry"]["gamma_b"] = 2e8;
    doc["montecarlo"] = {{"sampler", "sequential"}};
    CHECK(field_of(doc) == "montecarlo.sampler");
  }
  SUBCASE("wrong types") {
    json doc = minimal();
    doc["geometry"]["wavelength"] = "red";
    CHECK(field_of(doc) == "geometry.wavelength");
    doc = minimal();
    doc["mode"] = "exact";
    CHECK(field_of(doc) == "mode");
  }
}

TEST_CASE("load_config reports unreadable and malformed files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  try {
    load_config(std::string(TPI_TEST_DATA_DIR) + "/broken.json");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "config");
  }
  const auto cfg = load_config(std::string(TPI_CONFIG_DIR) + "/ca_ion.json");
  CHECK(cfg.timing.delay.value() == 5e-9);
}

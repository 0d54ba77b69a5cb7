#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpi/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tpi::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(TPI_CONFIG_DIR) + "/" + name; }
std::string data(const std::string& name) { return std::string(TPI_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tpi_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  auto r = invoke({});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["error"] == "usage");
  r = invoke({"g2-scan"});
  CHECK(r.code == 2);
  r = invoke({"no-such-command", "--config", config("minimal.json")});
  CHECK(r.code == 2);
  r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("timing-check") != std::string::npos);
}

TEST_CASE("configuration errors report the field on stderr") {
  auto r = invoke({"visibility", "--config", data("too_close.json")});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  auto e = json::parse(r.err);
  CHECK(e["error"] == "config");
  CHECK(e["field"] == "geometry.separation");

  r = invoke({"timing-check", "--config", data("at_emitter.json")});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["field"] == "geometry.detectors[0]");

  r = invoke({"visibility", "--config", data("unknown_field.json")});
  CHECK(json::parse(r.err)["field"] == "montecarlo.trails");

  r = invoke({"visibility", "--config", data("broken.json")});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["field"] == "config");

  r = invoke({"visibility", "--config", config("minimal.json"), "--mode", "exact"});
  CHECK(json::parse(r.err)["field"] == "mode");
}

TEST_CASE("g2-scan") {
  auto r = invoke({"g2-scan", "--config", config("minimal.json")});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "phi1,phi2,t1,t2,g2,mode");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.ends_with(",paper_literal"));
  }
  CHECK(rows == 24);

  r = invoke({"g2-scan", "--config", config("unequal_decay.json"), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.dump().find("amplitude_oracle") != std::string::npos);
}

TEST_CASE("visibility") {
  auto r = invoke({"visibility", "--config", config("minimal.json")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["visibility"].get<double>() == 1.0);
}

TEST_CASE("timing-check for a calcium ion") {
  auto r = invoke({"timing-check", "--config", config("ca_ion.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["lifetime_a_s"].get<double>() == doctest::Approx(7.957747154594767e-9).epsilon(1e-9));
  CHECK(j["transit_s"].get<double>() == doctest::Approx(3.3356409519815204e-9).epsilon(1e-6));
  CHECK(j["delay_s"].get<double>() == 5e-9);
  CHECK(j["classification"] == "no_overlap_and_no_signaling");
  CHECK(j["inside_window"] == true);

  r = invoke({"timing-check", "--config", config("ca_ion.json"), "--delay", "2e-9"});
  CHECK(json::parse(r.out)["inside_window"] == false);
}

TEST_CASE("bell-test and bell-scan") {
  auto r = invoke({"bell-test", "--config", config("ca_ion.json")});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.41421356237309515).epsilon(1e-12));
  CHECK(j["violated"] == true);
  CHECK(j["upper_bound"].get<double>() == 0.0);

  r = invoke({"bell-test", "--config", config("unequal_decay.json")});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["field"] == "geometry.gamma_b");

  const auto csv = scratch("scan.csv");
  r = invoke({"bell-scan", "--config", config("ca_ion.json"), "--out", csv.string()});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["evaluated"] == 72 * 72 * 72);
  CHECK(j["maximum"]["value"].get<double>() == doctest::Approx(0.41421356237309515).epsilon(1e-3));
  const std::string text = slurp(csv);
  CHECK(text.starts_with("d12,d12p,d1p2,d1p2p,value,violated\n"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 72 * 72 * 72 + 1);
}

TEST_CASE("mc-run is byte-reproducible") {
  const std::vector<std::string> args = {"mc-run", "--config", config("minimal.json"), "--trials",
                                         "24000", "--seed", "11"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["trials"] == 24000);
  CHECK(j["seed"] == 11);
  CHECK(j["fringe"].size() == 24);

  auto other = args;
  other.back() = "12";
  CHECK(invoke(other).out != a.out);

  const auto clicks = scratch("clicks.csv");
  const auto c = invoke({"mc-run", "--config", config("minimal.json"), "--trials", "100",
                          "--clicks", clicks.string()});
  REQUIRE(c.code == 0);
  const std::string text = slurp(clicks);
  CHECK(text.starts_with("trial,detector,detection_time_ns,emission_time_ns,phase_setting_rad,accepted\n"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 201);

  const auto ch = invoke({"mc-run", "--config", config("minimal.json"), "--trials", "4000", "--ch74"});
  REQUIRE(ch.code == 0);
  CHECK(json::parse(ch.out)["ch74_estimate"].is_number());

  const auto bad = invoke({"mc-run", "--config", config("minimal.json"), "--selection", "most"});
  CHECK(bad.code == 2);
  CHECK(json::parse(bad.err)["field"] == "montecarlo.selection");
}

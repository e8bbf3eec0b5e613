#include "acthull/geometry.hpp"
#include "acthull/io.hpp"
#include "acthull/report.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace acthull;

namespace {

std::string tmp(const std::string& name) {
  const auto dir = std::filesystem::path(ACTHULL_TEST_TMP) / "cli";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

int run(const std::string& args, const std::string& stderr_path = "/dev/null") {
  const std::string cmd = std::string(ACTHULL_CLI_PATH) + " " + args + " > /dev/null 2> " + stderr_path;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string without_wall_time(const std::string& hull_json) {
  auto j = nlohmann::ordered_json::parse(hull_json);
  j["telemetry"].erase("wall_time");
  return j.dump();
}

}  // namespace

TEST_CASE("moons hull through the command line matches the 2D oracle") {
  REQUIRE(run("gen-toy --kind moons --n 200 --noise 0.1 --seed 7 --out " + tmp("moons.csv")) == 0);
  REQUIRE(run("hull build --input " + tmp("moons.csv") + " --algo revised-ge --epsilon-rel 1e-9 --out " +
              tmp("moons.hull.json") + " --svg " + tmp("moons.svg")) == 0);
  const auto hull = hull_from_json(read_text(tmp("moons.hull.json")));
  const auto data = load_csv(tmp("moons.csv"));
  CHECK(hull.vertex_indices == exact_extremes_2d(data.vectors));
  CHECK(std::filesystem::exists(tmp("moons.hull.json.manifest.json")));
  CHECK(std::filesystem::exists(tmp("moons.svg")));

  const auto manifest = nlohmann::json::parse(read_text(tmp("moons.hull.json.manifest.json")));
  CHECK(manifest.at("seed").is_number());
  CHECK(manifest.at("inputs").size() == 1);
}

TEST_CASE("reruns are byte-identical") {
  REQUIRE(run("gen-toy --kind circles --n 120 --noise 0.05 --seed 3 --out " + tmp("c1.avec")) == 0);
  REQUIRE(run("gen-toy --kind circles --n 120 --noise 0.05 --seed 3 --out " + tmp("c2.avec")) == 0);
  CHECK(read_text(tmp("c1.avec")) == read_text(tmp("c2.avec")));

  for (const char* out : {"r1", "r2"}) {
    REQUIRE(run("hull build --input " + tmp("c1.avec") + " --out " + tmp(std::string(out) + ".json")) == 0);
    REQUIRE(run("analyze inter-matrix --acts " + tmp("c1.avec") + " --out " + tmp(std::string(out) + ".m.json")) == 0);
  }
  CHECK(without_wall_time(read_text(tmp("r1.json"))) == without_wall_time(read_text(tmp("r2.json"))));
  CHECK(read_text(tmp("r1.m.json")) == read_text(tmp("r2.m.json")));
}

TEST_CASE("errors exit nonzero with a message") {
  const auto missing = tmp("no-such-input.csv");
  const auto err = tmp("err.txt");
  CHECK(run("hull build --input " + missing + " --out " + tmp("x.json"), err) != 0);
  CHECK(read_text(err).find(missing) != std::string::npos);
  CHECK(run("hull build --bogus-flag", err) != 0);
  CHECK(run("gen-toy --kind spirals --out " + tmp("s.csv"), err) != 0);

  write_text(tmp("notjson.json"), "{\"schema\": \"acthull.hull\", \"version\": 99}");
  CHECK(run("classify fit --acts-train " + tmp("notjson.json") + " --out " + tmp("m.json"), err) != 0);
}

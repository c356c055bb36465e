#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "topowalk/cli.hpp"
#include "topowalk/hilbert.hpp"
#include "topowalk/io.hpp"

namespace fs = std::filesystem;
using namespace topowalk;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("topowalk_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "topowalk");
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("angle parsing") {
  CHECK(io::parse_angle("pi") == kPi);
  CHECK(io::parse_angle("-pi/16") == -kPi / 16);
  CHECK(io::parse_angle("3pi/8") == 3 * kPi / 8);
  CHECK(io::parse_angle("2*pi/9") == 2 * kPi / 9);
  CHECK(io::parse_angle("9PI/16") == 9 * kPi / 16);
  CHECK(io::parse_angle("0.25") == 0.25);
  CHECK(io::parse_angle("-1e-3") == -1e-3);
  CHECK(io::parse_angle("-0.19634954084936207") == -kPi / 16);
  CHECK_THROWS_AS(io::parse_angle("pie"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_angle(""), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_angle("pi/0"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_angle("inf"), std::invalid_argument);
}

TEST_CASE("doubles round-trip through the CSV format") {
  for (double v : {kPi, -kPi / 16, 1e-300, 0.1, 123456789.125, 0.0}) {
    CHECK(io::parse_angle(io::format_double(v)) == v);
  }
  io::CsvTable t{"a", "b"};
  t.add(1).add(0.5).end_row();
  t.add(std::string_view("x")).add(-2LL).end_row();
  CHECK(t.text() == "a,b\n1,0.5\nx,-2\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.add(1).end_row(), std::logic_error);
}

TEST_CASE("SHA-256 of a known message") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("argument errors exit with status 2") {
  const auto dir = scratch_dir("args");
  CHECK(run({}) == cli::kBadArguments);
  CHECK(run({"evolve", "--steps", "3"}) == cli::kBadArguments);
  CHECK(run({"evolve", "--steps", "3", "--out", dir.string(), "--code", "0000", "--phi", "1"}) ==
        cli::kBadArguments);
  CHECK(run({"evolve", "--steps", "3", "--out", dir.string(), "--code", "9999"}) == cli::kBadArguments);
  CHECK(run({"evolve", "--steps", "3", "--out", dir.string(), "--code", "0000", "--theta-minus", "0.1"}) ==
        cli::kBadArguments);
  CHECK(run({"evolve", "--steps", "10", "--size", "11", "--out", dir.string()}) == cli::kBadArguments);
  CHECK(run({"bands", "--theta-plus", "nope", "--theta-minus", "0", "--out", dir.string()}) ==
        cli::kBadArguments);
  CHECK(run({"fit", "--input", (dir / "missing.csv").string(), "--out", dir.string()}) ==
        cli::kBadArguments);
  CHECK(run({"--help"}) == cli::kOk);
}

TEST_CASE("budget refusal exits with status 3 unless forced") {
  const auto dir = scratch_dir("budget");
  CHECK(run({"locmap", "--grid", "2", "--steps", "3", "--budget", "10", "--out", dir.string()}) ==
        cli::kBudgetExceeded);
  CHECK_FALSE(fs::exists(dir / "locmap.csv"));
  CHECK(run({"locmap", "--grid", "2", "--steps", "3", "--budget", "10", "--force", "--out", dir.string()}) ==
        cli::kOk);
  CHECK(fs::exists(dir / "locmap.csv"));
}

TEST_CASE("evolve writes checksummed outputs") {
  const auto dir = scratch_dir("evolve");
  REQUIRE(run({"evolve", "--code", "0011", "--steps", "12", "--out", dir.string()}) == cli::kOk);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "evolve");
  CHECK(manifest["config"]["L"] == 29);
  CHECK(manifest["outputs"].size() == 3);
  for (const auto& o : manifest["outputs"]) {
    const std::string content = slurp(dir / o["path"].get<std::string>());
    CHECK(o["bytes"] == content.size());
    CHECK(o["sha256"] == io::sha256_hex(content));
  }
  const io::CsvData joint = io::read_csv(dir / "joint_probability.csv");
  CHECK(joint.header == std::vector<std::string>{"x1", "x2", "P"});
  CHECK(joint.rows.size() == 29 * 29);
  double total = 0.0;
  for (double p : joint.numbers("P")) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(io::read_csv(dir / "return_series.csv").rows.size() == 13);

  const auto fitdir = scratch_dir("fit");
  REQUIRE(run({"fit", "--input", (dir / "entropy_series.csv").string(), "--t-min", "2", "--out",
               fitdir.string()}) == cli::kOk);
  const auto log_fit = nlohmann::json::parse(slurp(fitdir / "fit_log.json"));
  CHECK(log_fit["points"] == 11);
  CHECK(fs::exists(fitdir / "fit_loglog.json"));
}

TEST_CASE("code and explicit angles give identical results") {
  const auto a = scratch_dir("code"), b = scratch_dir("explicit");
  REQUIRE(run({"evolve", "--code", "1321", "--steps", "8", "--out", a.string()}) == cli::kOk);
  REQUIRE(run({"evolve", "--theta-left", "9pi/16", "--theta-right", "pi/16", "--phi", "pi/2", "--bell", "3",
               "--steps", "8", "--out", b.string()}) == cli::kOk);
  for (const char* f : {"joint_probability.csv", "return_series.csv", "entropy_series.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("repeated runs are byte-identical whatever the thread count") {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  REQUIRE(run({"locmap", "--grid", "3", "--steps", "6", "--threads", "1", "--out", a.string()}) == cli::kOk);
  REQUIRE(run({"locmap", "--grid", "3", "--steps", "6", "--threads", "3", "--out", b.string()}) == cli::kOk);
  CHECK(slurp(a / "locmap.csv") == slurp(b / "locmap.csv"));

  REQUIRE(run({"chargemap", "--grid", "6", "--k-points", "256", "--out", a.string()}) == cli::kOk);
  REQUIRE(run({"chargemap", "--grid", "6", "--k-points", "256", "--out", b.string()}) == cli::kOk);
  CHECK(slurp(a / "chargemap.csv") == slurp(b / "chargemap.csv"));

  REQUIRE(run({"lambdamap", "--grid", "8", "--energy", "pi", "--out", a.string()}) == cli::kOk);
  const io::CsvData lam = io::read_csv(a / "lambdamap.csv");
  CHECK(lam.header.back() == "defined_flag");
  CHECK(lam.rows.size() == 64);
}

TEST_CASE("bands flags in-gap heavy states") {
  const auto dir = scratch_dir("bands");
  REQUIRE(run({"bands", "--theta-plus", "3pi/7", "--theta-minus", "2pi/9", "--phi", "pi/3", "--size", "9",
               "--out", dir.string()}) == cli::kOk);
  const io::CsvData bands = io::read_csv(dir / "bands.csv");
  CHECK(bands.header == std::vector<std::string>{"n", "p_n", "E", "w", "bound"});
  CHECK(bands.rows.size() == 9 * 36);

  REQUIRE(run({"bands", "--theta-plus", "3pi/7", "--theta-minus", "2pi/9", "--size", "21", "--out", dir.string()}) ==
          cli::kOk);
  const io::CsvData free = io::read_csv(dir / "bands.csv");
  CHECK(free.rows.size() == 1764);
  for (const auto& row : free.rows) CHECK(row.back() == "0");
}

TEST_CASE("thread count resolution") {
  CHECK(cli::resolve_threads(3) == 3);
  setenv("TOPOWALK_THREADS", "5", 1);
  CHECK(cli::resolve_threads(0) == 5);
  setenv("TOPOWALK_THREADS", "junk", 1);
  CHECK(cli::resolve_threads(0) >= 1);
  unsetenv("TOPOWALK_THREADS");
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <intersective/cli.hpp>

using namespace intersective;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Configs land in fresh temp files; the driver only ever sees a path.
std::string write_config(const OJson& cfg) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() /
              ("intersective_cli_cfg_" + std::to_string(++counter) + ".json");
  std::ofstream f(path);
  f << cfg.dump(2) << "\n";
  return path.string();
}

OJson golden_rotation_config() {
  OJson cfg;
  cfg["kronecker"]["alpha"] = {{0.6180339887498949}};
  cfg["kronecker"]["B"]["corner"] = {0.0};
  cfg["kronecker"]["B"]["sides"] = {0.5};
  return cfg;
}

struct BinResult {
  int code;
  std::string out;
};

// Runs the built binary when the harness exported its location.
std::optional<BinResult> run_binary(const std::string& args) {
  const char* bin = std::getenv("INTERSECTIVE_BIN");
  if (!bin) return std::nullopt;
  std::string cmd = std::string("\"") + bin + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return BinResult{WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST_CASE("version flag prints the interface tag") {
  RunResult r = run_cli({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(cli::version_string) + "\n");
}

TEST_CASE("running without a subcommand is an error") {
  RunResult r = run_cli({});
  CHECK(r.code == 1);
  CHECK(r.err.find("no subcommand") != std::string::npos);
}

TEST_CASE("check reports verdicts and signals them through the exit code") {
  RunResult neg = run_cli({"check", "x^2-2", "--bound", "100"});
  CHECK(neg.code == 2);
  OJson j = OJson::parse(neg.out);
  CHECK(j["status"] == "NOT_INTERSECTIVE");
  CHECK(j["witness"] == "[[3,0]]");
  CHECK(j["witness_level"] == 1);
  CHECK(neg.err.find("NOT_INTERSECTIVE") != std::string::npos);
  CHECK(neg.err.find("[[3,0]]") != std::string::npos);

  CHECK(OJson::parse(run_cli({"check", "x^2+2", "--bound", "100"}).out)["witness"] == "[[5,0]]");

  RunResult pos = run_cli({"check", "x^2+1", "--field", "Q(sqrt -1)", "--bound", "60"});
  CHECK(pos.code == 0);
  OJson k = OJson::parse(pos.out);
  CHECK(k["status"] == "INTERSECTIVE_UP_TO");
  CHECK(k["exact_root"] == "0+1*w");
  REQUIRE(k["scan"].is_array());
  bool seen_two = false;
  for (const auto& rec : k["scan"]) {
    REQUIRE(rec.contains("ideal"));
    REQUIRE(rec.contains("levels"));
    REQUIRE(rec.contains("stop"));
    if (rec["rational_prime"] == "2") {
      seen_two = true;
      CHECK(rec["disc_valuation"] == 4);
      CHECK(rec["depth_target"] == 9);
    }
  }
  CHECK(seen_two);
}

TEST_CASE("joint scans across several polynomials") {
  RunResult neg = run_cli({"joint", "x", "x+1", "--bound", "50"});
  CHECK(neg.code == 2);
  OJson j = OJson::parse(neg.out);
  CHECK(j["status"] == "NOT_INTERSECTIVE");
  CHECK(j["witness"] == "[[2,0]]");
  CHECK(j["witness_level"] == 1);

  RunResult pos = run_cli({"joint", "x^2", "x^2+x", "--bound", "50"});
  CHECK(pos.code == 0);
  CHECK(OJson::parse(pos.out)["status"] == "INTERSECTIVE_UP_TO");
}

TEST_CASE("decompose prints the integer component polynomials") {
  RunResult r = run_cli({"decompose", "x^2+1", "--field", "Q(sqrt -1)"});
  CHECK(r.code == 0);
  OJson j = OJson::parse(r.out);
  CHECK(j["field"] == "Q(sqrt -1)");
  CHECK(j["poly"] == "x^2+1");
  REQUIRE(j["components"].size() == 2);
  CHECK(j["components"][0] == "a^2-b^2+1");
  CHECK(j["components"][1] == "2*a*b");
}

TEST_CASE("quad-const certificates through the driver") {
  RunResult neg = run_cli({"certify", "quad-const", "--c", "2"});
  CHECK(neg.code == 2);
  OJson j = OJson::parse(neg.out);
  CHECK(j["status"] == "NOT_INTERSECTIVE");
  CHECK(j["witness"] == "[[5,0]]");

  RunResult pos = run_cli({"certify", "quad-const", "--c", "1", "--field", "Q(sqrt -1)"});
  CHECK(pos.code == 0);
  OJson k = OJson::parse(pos.out);
  CHECK(k["status"] == "CERTIFIED_INTERSECTIVE");
  CHECK(k["exact_root"] == "0+1*w");
}

TEST_CASE("three-quadratics certificates through the driver") {
  RunResult ok = run_cli({"certify", "three-quadratics", "--alpha", "3", "--beta", "7"});
  CHECK(ok.code == 0);
  OJson j = OJson::parse(ok.out);
  CHECK(j["status"] == "CERTIFIED_INTERSECTIVE");
  CHECK(j["certificate"]["which_square"] == "beta");
  FieldDesc gi = FieldDesc::quadratic(BigInt(-1));
  CHECK(j["poly"] == to_string(three_quadratics_poly(gi, AlgInt(3), AlgInt(7))));

  // Conjugate split primes violate the hypotheses; the driver reports, not throws.
  RunResult bad =
      run_cli({"certify", "three-quadratics", "--alpha", "2+1*w", "--beta", "2-1*w"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("scan-returns reproduces the golden rotation scan") {
  OJson cfg = golden_rotation_config();
  cfg["window"]["lo"] = {1};
  cfg["window"]["hi"] = {100};
  cfg["polys"] = {"x"};
  cfg["threshold"] = "49/100";
  std::string path = write_config(cfg);

  RunResult r = run_cli({"scan-returns", "--config", path});
  CHECK(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 101);
  OJson first = OJson::parse(lines[0]);
  CHECK(first["u"] == OJson::array({1}));
  CHECK(first["method"] == "EXACT");
  OJson summary = OJson::parse(lines.back());
  CHECK(summary["threshold"] == "49/100");
  CHECK(summary["hit_count"] == 2);
  CHECK(summary["hits"] == OJson::parse("[[55],[89]]"));
  CHECK(summary["hit_density"] == "1/50");
  CHECK(summary["syndeticity"]["gap"] == 54);

  // More workers must not change a single output byte.
  RunResult par = run_cli({"scan-returns", "--config", path, "--threads", "4"});
  CHECK(par.code == r.code);
  CHECK(par.out == r.out);

  // --out routes the same bytes into a file instead of the stream.
  auto out_path = std::filesystem::temp_directory_path() / "intersective_cli_scan.json";
  RunResult filed = run_cli({"scan-returns", "--config", path, "--out", out_path.string()});
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream f(out_path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == r.out);
}

TEST_CASE("simulate emits one correlation per window point") {
  OJson cfg = golden_rotation_config();
  cfg["window"]["lo"] = {1};
  cfg["window"]["hi"] = {12};
  cfg["polys"] = {"x"};
  std::string path = write_config(cfg);

  RunResult r = run_cli({"simulate", "--config", path});
  CHECK(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 12);
  for (int i = 0; i < 12; ++i) {
    OJson j = OJson::parse(lines[i]);
    CHECK(j["u"] == OJson::array({i + 1}));
    CHECK(j["method"] == "EXACT");
    CHECK(j.contains("exact_value"));
  }
}

TEST_CASE("ghk runs from a config and is deterministic") {
  OJson cfg = golden_rotation_config();
  cfg["window"]["lo"] = {-1000};
  cfg["window"]["hi"] = {1000};
  cfg["seed"] = 11;
  cfg["samples"] = 2000;
  cfg["f"] = "one";
  std::string path = write_config(cfg);

  RunResult r = run_cli({"ghk", "--config", path, "--k", "1"});
  CHECK(r.code == 0);
  OJson j = OJson::parse(r.out);
  CHECK(j["f"] == "one");
  CHECK(j["k"] == 1);
  CHECK(std::abs(j["value"].get<double>() - 1.0) < 1e-9);
  CHECK(j["samples"] == 2000);
  CHECK(j["leaves"] == j["u_per_level"]);

  RunResult again = run_cli({"ghk", "--config", path, "--k", "1"});
  CHECK(again.out == r.out);

  // k beyond the supported range never reaches the estimator.
  RunResult bad = run_cli({"ghk", "--config", path, "--k", "5"});
  CHECK(bad.code != 0);
}

TEST_CASE("density scan config reproduces the checkerboard cells") {
  OJson cfg;
  cfg["mode"] = "scan";
  cfg["field"] = "Q(sqrt -1)";
  cfg["set"]["ideal"]["field"] = "Q(sqrt -1)";
  cfg["set"]["ideal"]["gens"] = {"1+1*w"};
  cfg["polys"] = {"x^2"};
  cfg["threshold"] = "1/4";
  cfg["window_set"]["lo"] = {-20, -20};
  cfg["window_set"]["hi"] = {19, 19};
  cfg["window_u"]["lo"] = {-3, -3};
  cfg["window_u"]["hi"] = {3, 3};
  std::string path = write_config(cfg);

  RunResult r = run_cli({"density", "--config", path});
  CHECK(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 50);
  OJson summary = OJson::parse(lines.back());
  CHECK(summary["good_count"] == 25);
  CHECK(summary["density_of_good"] == "25/49");
  CHECK(summary["syndeticity_gap"]["gap"] == 1);
  CHECK(summary["boundary_error"] == "1/10");
  CHECK(r.err.find("25 good of 49") != std::string::npos);
}

TEST_CASE("density partition config picks the densest cell") {
  OJson lattice;
  lattice["ideal"]["field"] = "Q(sqrt -1)";
  lattice["ideal"]["gens"] = {"1+1*w"};
  OJson rest;
  rest["complement"] = lattice;

  OJson cfg;
  cfg["mode"] = "partition";
  cfg["field"] = "Q(sqrt -1)";
  cfg["parts"] = {lattice, rest};
  cfg["polys"] = {"x^2"};
  cfg["window_set"]["lo"] = {-20, -20};
  cfg["window_set"]["hi"] = {19, 19};
  cfg["window_u"]["lo"] = {-3, -3};
  cfg["window_u"]["hi"] = {3, 3};
  std::string path = write_config(cfg);

  RunResult r = run_cli({"density", "--config", path});
  CHECK(r.code == 0);
  OJson summary = OJson::parse(lines_of(r.out).back());
  CHECK(summary["cell"] == 0);
  CHECK(summary["cell_density"] == "1/2");
  CHECK(summary["threshold"] == "1/5");
  CHECK(summary["scan"]["good_count"] == 25);
}

TEST_CASE("density demo config walks the even sublattice") {
  OJson cfg;
  cfg["mode"] = "demo";
  cfg["set"]["congruence"]["modulus"] = {2, 2};
  cfg["window_set"]["lo"] = {-20, -20};
  cfg["window_set"]["hi"] = {19, 19};
  cfg["window_u"]["lo"] = {-3, -3};
  cfg["window_u"]["hi"] = {3, 3};
  std::string path = write_config(cfg);

  RunResult r = run_cli({"density", "--config", path});
  CHECK(r.code == 0);
  OJson summary = OJson::parse(lines_of(r.out).back());
  CHECK(summary["mapping"] == OJson::array({"a^2-b^2+1", "2*a*b"}));
  CHECK(summary["base_density"] == "1/4");
  CHECK(summary["threshold"] == "1/80");
  CHECK(summary["scan"]["good_count"] == 24);
}

TEST_CASE("sampling configs must carry a seed") {
  OJson cfg = golden_rotation_config();
  cfg["window"]["lo"] = {1};
  cfg["window"]["hi"] = {20};
  cfg["polys"] = {"x", "x+1"};  // two polynomials force the sampler
  cfg["threshold"] = "1/10";
  std::string path = write_config(cfg);

  RunResult r = run_cli({"scan-returns", "--config", path});
  CHECK(r.code == 1);
  CHECK(r.err.find("provide mc") != std::string::npos);

  cfg["mc"]["seed"] = 5;
  cfg["mc"]["samples"] = 512;
  RunResult ok = run_cli({"scan-returns", "--config", write_config(cfg)});
  CHECK(ok.code == 0);
  OJson first = OJson::parse(lines_of(ok.out)[0]);
  CHECK(first["method"] == "MONTE_CARLO");
  CHECK(first["samples"] == 512);
  CHECK(first["seed"] == 5);
}

TEST_CASE("config mistakes come back as errors, not crashes") {
  RunResult missing = run_cli({"scan-returns", "--config", "/nonexistent/cfg.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open config file") != std::string::npos);

  OJson no_window = golden_rotation_config();
  no_window["polys"] = {"x"};
  no_window["threshold"] = "1/2";
  RunResult r = run_cli({"scan-returns", "--config", write_config(no_window)});
  CHECK(r.code == 1);
  CHECK(r.err.find("missing \"window\"") != std::string::npos);

  OJson bad_mode;
  bad_mode["mode"] = "paint";
  bad_mode["window_set"]["lo"] = {0};
  bad_mode["window_set"]["hi"] = {9};
  bad_mode["window_u"]["lo"] = {0};
  bad_mode["window_u"]["hi"] = {4};
  RunResult m = run_cli({"density", "--config", write_config(bad_mode)});
  CHECK(m.code == 1);
  CHECK(m.err.find("unknown mode") != std::string::npos);

  RunResult field = run_cli({"check", "x^2-2", "--field", "Q(sqrt 8)"});
  CHECK(field.code == 1);
  CHECK(field.err.find("error:") != std::string::npos);
}

TEST_CASE("the built binary matches the in-process driver") {
  auto ver = run_binary("--version");
  if (!ver) {
    WARN("INTERSECTIVE_BIN not set; binary checks skipped");
    return;
  }
  CHECK(ver->code == 0);
  CHECK(ver->out == std::string(cli::version_string) + "\n");

  auto neg = run_binary("check x^2-2 --bound 50");
  REQUIRE(neg.has_value());
  CHECK(neg->code == 2);
  CHECK(OJson::parse(neg->out)["status"] == "NOT_INTERSECTIVE");
}

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <susylat/model.hpp>

#include "model_fixtures.hpp"

using namespace susylat;
using json = nlohmann::json;

namespace {

std::string model_path(const char* file) {
  return std::string(SUSYLAT_MODEL_DIR) + "/" + file;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct cli_result {
  int exit_code = -1;
  std::string out;
};

cli_result run_cli(const std::string& args) {
  cli_result r;
  std::string cmd = std::string(SUSYLAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

int error_line(const std::string& text) {
  try {
    parse_model(text);
  } catch (const parse_error& e) {
    return e.line;
  }
  return -1;
}

const char* minimal =
    "name t\n"
    "dimension 1\n"
    "period 2\n"
    "range 3\n"
    "pattern { sites = [-1, 0, 1] polynomial = \"a(1) * a+(0) * a(-1)\" }\n";

}  // namespace

TEST_CASE("parsed chain file matches the hand-built assignment") {
  model_data m = parse_model(slurp(model_path("nicolai.model")));
  charge_assignment ref = chain_assignment();
  CHECK(m.assignment.dimension == 1);
  CHECK(m.assignment.period == std::vector<int>{2});
  CHECK(m.assignment.range == 3);
  REQUIRE(m.assignment.patterns.size() == 1);
  CHECK((m.assignment.patterns[0].value - ref.patterns[0].value).is_zero());
  CHECK(m.assignment.patterns[0].supp == interval(-1, 1));
  CHECK(m.suites.size() == 8);
  CHECK(m.params.region_lo == -1);
  CHECK(m.params.region_hi == 1);
  CHECK(m.params.seed == 1234);
  CHECK(m.params.ensembles == 25);
  CHECK(m.params.time == doctest::Approx(0.1));
}

TEST_CASE("serialization round-trips through the parser") {
  model_data m1 = parse_model(slurp(model_path("nicolai.model")));
  model_data m2 = parse_model(serialize(m1));
  CHECK(m2.assignment.period == m1.assignment.period);
  CHECK(m2.assignment.range == m1.assignment.range);
  REQUIRE(m2.assignment.patterns.size() == m1.assignment.patterns.size());
  for (std::size_t i = 0; i < m1.assignment.patterns.size(); ++i) {
    CHECK((m2.assignment.patterns[i].value - m1.assignment.patterns[i].value).is_zero());
    CHECK(m2.assignment.patterns[i].supp == m1.assignment.patterns[i].supp);
  }
  CHECK(m2.suites == m1.suites);
  CHECK(m2.params.seed == m1.params.seed);
  CHECK(serialize(m2) == serialize(m1));
}

TEST_CASE("all shipped model files parse") {
  CHECK(parse_model(slurp(model_path("majorana.model"))).assignment.range == 1);
  CHECK(parse_model(slurp(model_path("broken.model"))).assignment.patterns[0].value.size() == 2);
  CHECK(parse_model(slurp(model_path("zero.model"))).assignment.patterns.empty());
  model_data f = parse_model(slurp(model_path("free.model")));
  CHECK(f.params.modes == 2);
  CHECK(f.params.cutoff == 4);
  CHECK(f.params.grid == 4096);
  CHECK(f.params.momentum == doctest::Approx(0.8));
  CHECK(f.suites == std::vector<std::string>{"case2"});
}

TEST_CASE("coefficients parse as exact rationals") {
  std::string text =
      "name t\ndimension 1\nperiod 1\nrange 2\n"
      "pattern { sites = [0, 1] polynomial = \"(1/2,-3) * a(0) + (0.25,0) * a+(1)\" }\n";
  model_data m = parse_model(text);
  charge_poly expect =
      charge_poly::scalar(gaussian_rational(rational(1, 2), rational(-3))) *
          charge_poly::annihilator(site{{0}}) +
      charge_poly::scalar(gaussian_rational(rational(1, 4), rational(0))) *
          charge_poly::creator(site{{1}});
  CHECK((m.assignment.patterns[0].value - expect).is_zero());
}

TEST_CASE("comments and flexible whitespace are accepted") {
  std::string text =
      "# chain with remarks\nname t # trailing\n  dimension 1\nperiod 2\nrange 3\n"
      "pattern {\n  sites = [ -1, 0, 1 ]  # the cell\n"
      "  polynomial = \"a(1) * a+(0) * a(-1)\"\n}\n";
  CHECK(parse_model(text).assignment.patterns.size() == 1);
}

TEST_CASE("semantic errors carry source positions") {
  std::string even =
      "name t\ndimension 1\nperiod 1\nrange 1\n"
      "pattern { sites = [0] polynomial = \"a(0) * a+(0)\" }\n";
  CHECK(error_line(even) == 5);

  std::string escape =
      "name t\ndimension 1\nperiod 1\nrange 3\n"
      "pattern { sites = [0] polynomial = \"a(2)\" }\n";
  CHECK(error_line(escape) == 5);

  std::string wide =
      "name t\ndimension 1\nperiod 1\nrange 1\n"
      "pattern { sites = [0, 3] polynomial = \"a(0) * a+(0) * a(3)\" }\n";
  CHECK(error_line(wide) == 5);

  CHECK(error_line("name t\ndimension 1\nbogus 4\n") == 3);
  CHECK(error_line(std::string(minimal) + "suite nilpotent warp\n") == 6);
  CHECK(error_line("name t\ndimension 1\nperiod 1\nrange 1\n"
                   "pattern { sites = [0] polynomial = \"(1/0,0) * a(0)\" }\n") == 5);
  CHECK_THROWS_AS(parse_model("dimension 0\n"), parse_error);
}

TEST_CASE("period must match the declared dimension") {
  CHECK_THROWS_AS(parse_model("name t\ndimension 2\nperiod 1\nrange 1\n"), parse_error);
  model_data m2 = parse_model(
      "name t\ndimension 2\nperiod 1 1\nrange 1\n"
      "pattern { sites = [(0,0)] polynomial = \"a(0,0)\" }\n");
  CHECK(m2.assignment.dimension == 2);
  CHECK(m2.assignment.period == std::vector<int>{1, 1});
}

TEST_CASE("cli validate reports the model and exits zero") {
  cli_result r = run_cli("validate " + model_path("nicolai.model"));
  CHECK(r.exit_code == 0);
  json d = json::parse(r.out);
  CHECK(d["schema"] == "susylat-report/1");
  CHECK(d["model"] == "nicolai");
  CHECK(d["seed"] == 1234);
  CHECK(d["pass"] == true);
  CHECK(d["results"]["round_trip"] == true);
}

TEST_CASE("cli exit codes separate check failures from config errors") {
  CHECK(run_cli("nilpotent " + model_path("nicolai.model")).exit_code == 0);
  cli_result broken = run_cli("nilpotent " + model_path("broken.model"));
  CHECK(broken.exit_code == 1);
  json d = json::parse(broken.out);
  CHECK(d["results"]["nilpotent"] == false);
  CHECK(d["results"]["counterexample"]["square_norm"].get<double>() ==
        doctest::Approx(std::sqrt(2.0)));

  cli_result missing = run_cli("validate /nonexistent/x.model");
  CHECK(missing.exit_code == 2);
  CHECK(json::parse(missing.out).contains("error"));
}

TEST_CASE("cli parse failures report position and exit two") {
  std::string path = "/tmp/susylat_bad_model.model";
  {
    std::ofstream out(path);
    out << "name t\ndimension 1\nperiod 1\nrange 1\n"
        << "pattern { sites = [0] polynomial = \"a(0) * a+(0)\" }\n";
  }
  cli_result r = run_cli("validate " + path);
  CHECK(r.exit_code == 2);
  json d = json::parse(r.out);
  CHECK(d["error"]["line"] == 5);
  CHECK(d["error"]["column"].get<int>() > 0);
  std::remove(path.c_str());
}

TEST_CASE("cli spectrum matches the small-chain reference spectrum") {
  cli_result r = run_cli("spectrum " + model_path("nicolai.model"));
  CHECK(r.exit_code == 0);
  json d = json::parse(r.out)["results"];
  CHECK(d["kernel_dim_even"] == 3);
  CHECK(d["kernel_dim_odd"] == 3);
  CHECK(d["witten_index"] == 0);
  CHECK(d["all_paired"] == true);
  std::vector<double> evs = d["eigenvalues"].get<std::vector<double>>();
  REQUIRE(evs.size() == 8);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(evs[i]) < 1e-12);
  CHECK(evs[6] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evs[7] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli evolve certifies inside and beyond the analytic radius") {
  cli_result inside = run_cli("evolve " + model_path("nicolai.model") +
                              " --time 1e-63 --tol 1e-8");
  CHECK(inside.exit_code == 0);
  json di = json::parse(inside.out)["results"];
  CHECK(di["certificate"] == "analytic-radius");
  CHECK(di["substeps"] == 1);
  CHECK(di["error_bound"].get<double>() <= 1e-8);
  CHECK(di["within_bound"] == true);

  cli_result beyond = run_cli("evolve " + model_path("nicolai.model") +
                              " --time 0.1 --tol 1e-8");
  CHECK(beyond.exit_code == 0);
  json db = json::parse(beyond.out)["results"];
  CHECK(db["certificate"] == "volume-norm");
  CHECK(db["error_bound"].get<double>() <= 1e-8);
  CHECK(db["converged"] == true);
  CHECK(db["within_bound"] == true);
}

TEST_CASE("cli suite runs are deterministic across job counts") {
  std::string base = "suite " + model_path("nicolai.model");
  cli_result a = run_cli(base + " --jobs 1");
  cli_result b = run_cli(base + " --jobs 4");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  json da = json::parse(a.out), db = json::parse(b.out);
  da.erase("timing_ms");
  db.erase("timing_ms");
  da.erase("jobs");
  db.erase("jobs");
  CHECK(da.dump() == db.dump());
  CHECK(da["checks"].size() == 8);
  for (const auto& c : da["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("cli suite honours check overrides and the jobs variable") {
  cli_result r = run_cli("suite " + model_path("majorana.model") +
                         " --checks nilpotent spectrum");
  CHECK(r.exit_code == 0);
  json d = json::parse(r.out);
  CHECK(d["checks"].size() == 2);
  CHECK(d["checks"][0]["check"] == "nilpotent");
  CHECK(d["checks"][0]["nilpotent"] == true);

  cli_result env = run_cli("suite " + model_path("zero.model"));
  CHECK(env.exit_code == 0);
  CHECK(run_cli("suite " + model_path("broken.model")).exit_code == 1);
}

TEST_CASE("cli case2 verifies the continuum pair on the shipped model") {
  cli_result r = run_cli("case2 " + model_path("free.model"));
  CHECK(r.exit_code == 0);
  json d = json::parse(r.out)["results"];
  CHECK(d["dim"] == 100);
  CHECK(d["resolvent"]["pass"] == true);
  CHECK(d["superderivation"]["phi_minus"].get<double>() <= 1e-4);
  CHECK(d["wick"]["residual"].get<double>() <= 1e-8);
  CHECK(d["mollifier"]["identity_decreasing"] == true);
  for (const auto& s : d["mollifier"]["derivation_slacks"]) CHECK(s.get<double>() == 0.0);
}

TEST_CASE("cli hamiltonian exports a readable matrix market file") {
  std::string mtx = "/tmp/susylat_h_test.mtx";
  cli_result r = run_cli("hamiltonian " + model_path("nicolai.model") +
                         " --region -3 3 --export-mtx " + mtx);
  CHECK(r.exit_code == 0);
  json d = json::parse(r.out)["results"];
  CHECK(d["dim"] == 128);
  CHECK(d["norm"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  std::string header;
  {
    std::ifstream in(mtx);
    REQUIRE(bool(in));
    std::getline(in, header);
  }
  CHECK(header.rfind("%%MatrixMarket", 0) == 0);
  std::remove(mtx.c_str());
}

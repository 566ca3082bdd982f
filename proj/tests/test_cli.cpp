// End-to-end checks of the gllb executable. The binary path comes from the
// build (GLLB_CLI_PATH).

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / ("gllb_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code = -1;
  std::string out, err;
};

// Runs `gllb <cmd> <config> --out <dir>` and captures both streams.
Run gllb(const std::string& cmd, const fs::path& config, const fs::path& out) {
  const fs::path so = out.string() + ".stdout", se = out.string() + ".stderr";
  const std::string line = std::string(GLLB_CLI_PATH) + " " + cmd + " '" + config.string() +
                           "' --out '" + out.string() + "' >'" + so.string() + "' 2>'" +
                           se.string() + "'";
  const int status = std::system(line.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

json base() {
  return json::parse(R"({
    "domain": { "lengths": [3.141592653589793] },
    "params": { "kappa": { "kappa1": 1.0, "kappa2": 1.0, "gamma": 1.0, "mu": 1.0 } },
    "potential": { "kind": "quadratic", "alpha": 1.0 },
    "solver": { "trunc": 8, "dt": 0.001, "t_end": 0.05, "record_every": 5, "t_max": 1.0 },
    "initial": { "kind": "random", "modes": 8, "amplitude": 0.3, "decay": 2.0 }
  })");
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch() / (name + ".json");
  std::ofstream(p) << j.dump(2);
  return p;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

json report(const fs::path& dir) { return json::parse(slurp(dir / "report.json")); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("zero initial data stays zero") {
  json j = base();
  j["initial"] = {{"kind", "zero"}};
  const fs::path out = scratch() / "zero";
  const Run r = gllb("simulate", write_config("zero", j), out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("outcome: completed at t=0.05") != std::string::npos);
  const auto rows = read_csv(out / "energy.csv");
  CHECK(rows.size() == 11);
  for (const auto& row : rows) {
    for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
  }
  CHECK(fs::exists(out / "final.bin"));
}

TEST_CASE("infeasible temperature is a parameter error") {
  json j = base();
  j["params"] = {{"physical",
                  {{"gamma", 1.0}, {"kappa1", 1.0}, {"chi_par", 1.0}, {"temperature", 1.0},
                   {"curie_temperature", 1.0}}}};
  const Run r = gllb("simulate", write_config("cold", j), scratch() / "cold");
  CHECK(r.code == 2);
  CHECK(r.err.find("T > T_c") != std::string::npos);
}

TEST_CASE("blow-up is a normal outcome") {
  json j = base();
  j["params"]["kappa"] = {{"kappa1", 1.0}, {"kappa2", -5.0}, {"gamma", 2.0}, {"mu", 1.0}};
  j["potential"] = {{"kind", "polynomial"},
                    {"terms",
                     {{{"powers", {4, 0, 0}}, {"coefficient", 0.25}},
                      {{"powers", {0, 4, 0}}, {"coefficient", 0.25}},
                      {{"powers", {0, 0, 4}}, {"coefficient", 0.25}}}}};
  j["solver"]["t_end"] = 2.0;
  j["solver"]["blowup_threshold"] = 1e6;
  j["initial"] = {{"kind", "single_mode"}, {"component", 0}, {"k", {0}}, {"amplitude", 3.5}};
  const fs::path out = scratch() / "blowup";
  const Run r = gllb("simulate", write_config("blowup", j), out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("outcome: blowup") != std::string::npos);
  const json rep = report(out);
  CHECK(rep["outcome"] == "blowup");
  const double tb = rep["blowup"]["time"].get<double>();
  CHECK(tb < 2.0);
  const auto rows = read_csv(out / "energy.csv");
  REQUIRE_FALSE(rows.empty());
  CHECK(rows.back()[0] < tb);
}

TEST_CASE("tstar without nonlinearity or without data is t_max") {
  json j = base();
  j["params"]["kappa"]["gamma"] = 0.0;
  j["params"]["kappa"]["kappa2"] = 0.0;
  j["solver"]["t_max"] = 2.5;
  fs::path out = scratch() / "tstar_linear";
  Run r = gllb("tstar", write_config("tstar_linear", j), out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("tstar: 2.5\n") != std::string::npos);

  j = base();
  j["initial"] = {{"kind", "zero"}};
  j["solver"]["t_max"] = 0.75;
  out = scratch() / "tstar_zero";
  r = gllb("tstar", write_config("tstar_zero", j), out);
  REQUIRE(r.code == 0);
  CHECK(report(out)["majorant"]["tstar"].get<double>() == 0.75);
  CHECK(fs::exists(out / "majorant.csv"));
}

TEST_CASE("tstar matches an independent doubling-time computation") {
  // Unit coefficients, alpha = 1 and y0 = |u0|^2 = 1 from the constant mode.
  json j = base();
  j["initial"] = {{"kind", "single_mode"}, {"component", 0}, {"k", {0}}, {"amplitude", 1.0}};
  j["solver"]["t_max"] = 100.0;
  const fs::path out = scratch() / "tstar_unit";
  const Run r = gllb("tstar", write_config("tstar_unit", j), out);
  REQUIRE(r.code == 0);
  const json rep = report(out);
  const double c = rep["calibration"]["c_inf"].get<double>();
  const double k6 = rep["calibration"]["k6"].get<double>();
  const double k3 = rep["calibration"]["k3"].get<double>();
  const double vol = 3.141592653589793;
  // y' = B(y) for F = |z|^2/2: H = l^2/2, J = l, I = 1 with l = c sqrt(y).
  auto b = [&](double y) {
    const double l = c * std::sqrt(y), h = l * l / 2, c1sq = std::pow(vol, 2.0 / 3.0);
    const double v = 2 * (l * l * std::sqrt(vol * y) + (1 + h) * l * l * vol);
    const double q = 3 * (k6 * k6 * k3 * k3 * y * y + c1sq * std::pow(l, 4) * k6 * k6 * y +
                          std::pow(1 + h, 2) * c1sq * k6 * k6 * y);
    return v + q;
  };
  // Time to go from 1 to 2 is the integral of dy / B(y); Simpson on 2e5 panels.
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = 1.0 + static_cast<double>(i) / n;
    sum += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) / b(y);
  }
  const double expected = sum / (3.0 * n);
  CHECK(rep["majorant"]["y0"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep["majorant"]["tstar"].get<double>() == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("converge on pure diffusion has no differences") {
  json j = base();
  j["params"]["kappa"] = {{"kappa1", 1.0}, {"kappa2", 0.0}, {"gamma", 0.0}, {"mu", 0.0}};
  j["initial"]["modes"] = 4;
  j["study"] = {{"n_list", {4, 8, 16}}};
  const fs::path out = scratch() / "converge";
  const Run r = gllb("converge", write_config("converge", j), out);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(out / "convergence.csv");
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    REQUIRE(row.size() >= 5);
    for (std::size_t c = 2; c < 5; ++c) CHECK(std::fabs(row[c]) < 1e-14);
  }
  CHECK(fs::exists(out / "rates.csv"));
}

TEST_CASE("validate passes on the default configuration") {
  const Run r = gllb("validate", fs::path(GLLB_CONFIG_DIR) / "default.json", scratch() / "validate");
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(scratch() / "validate" / "validation.csv"));
}

TEST_CASE("oracle rejects three-dimensional boxes") {
  json j = base();
  j["domain"]["lengths"] = {1.0, 1.0, 1.0};
  j["solver"]["trunc"] = 4;
  j["study"] = {{"grid_list", {16, 32}}};
  const Run r = gllb("oracle", write_config("oracle3d", j), scratch() / "oracle3d");
  CHECK(r.code == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path cfg = write_config("repeat", base());
  REQUIRE(gllb("simulate", cfg, scratch() / "repeat_a").code == 0);
  REQUIRE(gllb("simulate", cfg, scratch() / "repeat_b").code == 0);
  for (const char* f : {"energy.csv", "final.bin", "report.json"}) {
    CAPTURE(f);
    CHECK(slurp(scratch() / "repeat_a" / f) == slurp(scratch() / "repeat_b" / f));
  }
}

TEST_CASE("missing files and bad arguments") {
  CHECK(gllb("simulate", scratch() / "does_not_exist.json", scratch() / "missing").code == 3);
  const fs::path bad = scratch() / "bad.json";
  std::ofstream(bad) << "{ \"domain\": ";
  CHECK(gllb("simulate", bad, scratch() / "bad").code == 2);
  CHECK(gllb("explode", bad, scratch() / "bad").code == 2);
}

}

// gllb: command-line front end.
//
// Exit codes: 0 success (including a recorded blow-up), 1 validation failure
// or internal error, 2 configuration or parameter-domain error, 3 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "gllb/app.hpp"
#include "gllb/errors.hpp"

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kIo = 3 };

std::filesystem::path output_dir(const gllb::RunConfig& cfg, const std::string& override_dir) {
  return override_dir.empty() ? cfg.outputs.dir : std::filesystem::path(override_dir);
}

int cmd_simulate(const gllb::RunConfig& cfg, const std::filesystem::path& out) {
  const auto res = gllb::run_simulate(cfg, out);
  const auto& traj = res.trajectory;
  if (traj.outcome == gllb::Outcome::kCompleted) {
    std::cout << "outcome: completed at t=" << gllb::format_number(traj.times.back()) << '\n';
  } else {
    std::cout << "outcome: blowup at t=" << gllb::format_number(traj.blowup->time) << " ("
              << traj.blowup->reason << ")\n";
  }
  if (res.report.majorant) {
    std::cout << "tstar: " << gllb::format_number(res.report.majorant->tstar()) << '\n';
  }
  if (res.report.dominance) {
    std::cout << "dominated: " << (res.report.dominance->dominated ? "yes" : "no") << '\n';
  }
  std::cout << "records: " << traj.energy.size() << '\n' << "output: " << out.string() << '\n';
  return kOk;
}

int cmd_tstar(const gllb::RunConfig& cfg, const std::filesystem::path& out) {
  const auto setup = gllb::run_tstar(cfg, out);
  std::cout << "tstar: " << gllb::format_number(setup.majorant.tstar()) << '\n';
  if (setup.majorant.blowup_time()) {
    std::cout << "majorant blowup: " << gllb::format_number(*setup.majorant.blowup_time())
              << '\n';
  }
  std::cout << "table: " << (out / "majorant.csv").string() << '\n';
  return kOk;
}

int cmd_converge(const gllb::RunConfig& cfg, const std::filesystem::path& out) {
  const auto rep = gllb::run_converge(cfg, out);
  gllb::write_convergence_csv(std::cout, rep);
  return kOk;
}

int cmd_oracle(const gllb::RunConfig& cfg, const std::filesystem::path& out) {
  const auto rows = gllb::run_oracle(cfg, out);
  gllb::write_oracle_csv(std::cout, cfg.study->grid_list, rows);
  return kOk;
}

int cmd_validate(const gllb::RunConfig& cfg, const std::filesystem::path& out) {
  const auto results = gllb::run_validate(cfg, out);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin solver for the generalized Landau-Lifshitz-Bloch equation"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
  };
  Args args;
  using Handler = int (*)(const gllb::RunConfig&, const std::filesystem::path&);
  Handler handler = nullptr;

  const auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", args.config, "run configuration (JSON)")->required();
    sub->add_option("--out", args.out, "output directory (overrides outputs.dir)");
    sub->callback([&handler, h] { handler = h; });
  };
  add("simulate", "integrate the Galerkin system and write energy.csv, report.json",
      cmd_simulate);
  add("tstar", "build the comparison majorant and print T*", cmd_tstar);
  add("converge", "Cauchy convergence study over study.n_list", cmd_converge);
  add("oracle", "cross-validate against the finite-difference solver", cmd_oracle);
  add("validate", "run the invariant suite on a configuration", cmd_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const gllb::RunConfig cfg = gllb::load_config(args.config);
    return handler(cfg, output_dir(cfg, args.out));
  } catch (const gllb::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const gllb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const gllb::DomainError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kConfig;
  } catch (const gllb::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailed;
  }
}

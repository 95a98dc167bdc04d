#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "dicke/sweep.hpp"
#include "dicke/verify.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct SweepFlags {
  std::string config;
  std::vector<int> n, na, nr;
  double omega_min = 0, omega_max = 0, diag_tol = 0;
  int steps = 0, workers = 0;
  bool log = false, linear = false, no_densify = false, densify = false, no_timing = false;
  std::string measures_csv, angles, out, format, cache;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

dicke::SweepConfig build_config(const SweepFlags& f, const CLI::App& cmd) {
  dicke::SweepConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot open config '" + f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config '" + f.config + "': " + e.what());
    }
    c = dicke::config_from_json(j);
  }
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--n")) c.n_list = f.n;
  if (given("--omega-min")) c.omega_min = f.omega_min;
  if (given("--omega-max")) c.omega_max = f.omega_max;
  if (given("--steps")) c.steps = f.steps;
  if (f.log) c.scale = dicke::GridScale::Log;
  if (f.linear) c.scale = dicke::GridScale::Linear;
  if (f.no_densify) c.densify = false;
  if (f.densify) c.densify = true;
  if (given("--measures")) c.measures = split_list(f.measures_csv);
  if (given("--na")) c.n_a = f.na;
  if (given("--nr")) c.n_r = f.nr;
  if (given("--angles")) c.mid_axis = f.angles == "z" ? dicke::FixedAxis::Z : dicke::FixedAxis::X;
  if (given("--diag-tol")) c.diag_tol = f.diag_tol;
  if (given("--workers")) c.workers = f.workers;
  if (given("--out")) c.output = f.out;
  if (given("--format")) c.format = f.format == "csv" ? dicke::OutputFormat::Csv : dicke::OutputFormat::Jsonl;
  if (given("--cache")) c.cache_dir = f.cache;
  if (f.no_timing) c.timing = false;
  return c;
}

int run_sweep_command(const SweepFlags& f, const CLI::App& cmd) {
  dicke::SweepConfig cfg;
  try {
    cfg = build_config(f, cmd);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    const auto records = dicke::run_sweep(cfg);
    int errors = 0;
    for (const auto& r : records) errors += r.failed();
    if (cfg.output.empty()) {
      dicke::write_records(std::cout, records, cfg.format);
    } else {
      std::ofstream out(cfg.output);
      if (!out) throw std::runtime_error("cannot open '" + cfg.output + "' for writing");
      dicke::write_records(out, records, cfg.format);
      if (!out) throw std::runtime_error("write to '" + cfg.output + "' failed");
    }
    std::cerr << "sweep: " << records.size() << " records, " << errors << " errors\n";
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state correlations of the driven collective-decay Dicke model"};
  app.require_subcommand(1);

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Evaluate measures over a grid of (N, drive) points");
  sweep->add_option("--config", sf.config, "JSON config file; flags override its fields");
  sweep->add_option("--n", sf.n, "Particle numbers")->delimiter(',');
  sweep->add_option("--omega-min", sf.omega_min, "Smallest drive");
  sweep->add_option("--omega-max", sf.omega_max, "Largest drive");
  sweep->add_option("--steps", sf.steps, "Grid points before densification");
  auto* log_flag = sweep->add_flag("--log", sf.log, "Log-spaced grid (default)");
  sweep->add_flag("--linear", sf.linear, "Linearly spaced grid")->excludes(log_flag);
  auto* nd = sweep->add_flag("--no-densify", sf.no_densify, "Never add the fine transition grid");
  sweep->add_flag("--densify", sf.densify, "Always add the fine transition grid")->excludes(nd);
  sweep->add_option("--measures", sf.measures_csv, "Comma-separated measure names");
  sweep->add_option("--na", sf.na, "Subsystem sizes for negativity and discord_bip")->delimiter(',');
  sweep->add_option("--nr", sf.nr, "Reduced register sizes for gmn, gqd and mid")->delimiter(',');
  sweep->add_option("--angles", sf.angles, "Fixed local basis for mid")->check(CLI::IsMember({"z", "x"}));
  sweep->add_option("--diag-tol", sf.diag_tol, "Off-diagonal mass accepted by the hankel measure");
  sweep->add_option("--workers", sf.workers, "Worker threads");
  sweep->add_option("--out", sf.out, "Output file (default stdout)");
  sweep->add_option("--format", sf.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  sweep->add_option("--cache", sf.cache, "Directory for cached steady states");
  sweep->add_flag("--no-timing", sf.no_timing, "Write zero wall times for reproducible output");

  int state_n = 0;
  double state_omega = 0;
  std::string state_path;
  auto* state = app.add_subcommand("state", "Write the steady state for (N, drive) as JSON");
  state->add_option("n", state_n, "Particle number")->required();
  state->add_option("omega", state_omega, "Drive strength")->required();
  state->add_option("path", state_path, "Output file")->required();

  std::string level = "quick";
  bool tamper = false;
  auto* verify = app.add_subcommand("verify", "Run the numerical self-checks");
  verify->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--tamper-cg", tamper, "Corrupt a private Clebsch-Gordan table (fault injection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (sweep->parsed()) return run_sweep_command(sf, *sweep);

  if (state->parsed()) {
    try {
      const auto rho = dicke::dump_state(state_n, state_omega, state_path);
      std::cerr << "state: wrote " << rho.dim() << "x" << rho.dim() << " matrix to " << state_path << '\n';
    } catch (const std::invalid_argument& e) {
      std::cerr << "state: " << e.what() << '\n';
      return kExitValidation;
    } catch (const std::exception& e) {
      std::cerr << "state: " << e.what() << '\n';
      return kExitRuntime;
    }
    return 0;
  }

  const auto report =
      dicke::verify({level == "full" ? dicke::VerifyLevel::Full : dicke::VerifyLevel::Quick, tamper});
  dicke::print_report(std::cout, report);
  return report.passed() ? 0 : kExitRuntime;
}

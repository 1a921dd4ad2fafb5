// rabi-relax <dynamics|spectrum|steady|verify> --config FILE [--out FILE] [--jobs N] [--format csv|json]
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 verification failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rabi/commands.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kVerifyFailed = 4;

int emit(const rabi::Table& table, const rabi::RunConfig& cfg) {
  if (cfg.out.empty()) {
    rabi::write_table(std::cout, table, cfg);
    return 0;
  }
  std::ofstream file(cfg.out);
  if (!file) {
    std::cerr << "error: cannot write " << cfg.out << '\n';
    return kConfigError;
  }
  rabi::write_table(file, table, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Rabi model with two-photon relaxation"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  unsigned jobs = 0;
  bool jobs_given = false;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option_function<unsigned>("--jobs", [&](const unsigned& n) { jobs = n; jobs_given = true; },
                                       "parallel workers for sweeps (0: all processors)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* dynamics = app.add_subcommand("dynamics", "time evolution or transient snapshot sweep");
  auto* spectrum = app.add_subcommand("spectrum", "complex spectrum of H_eff along a sweep");
  auto* steady = app.add_subcommand("steady", "steady-state observables over a coupling grid");
  auto* verify = app.add_subcommand("verify", "analytic-vs-numeric oracle suite");
  add_common(dynamics, true);
  add_common(spectrum, true);
  add_common(steady, true);
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    rabi::RunConfig cfg = config_path.empty() ? rabi::RunConfig{} : rabi::load_config(config_path);
    if (!out_path.empty()) cfg.out = out_path;
    if (jobs_given) cfg.jobs = jobs;
    if (!format.empty()) cfg.format = format == "json" ? rabi::OutputFormat::json : rabi::OutputFormat::csv;

    if (*verify) {
      const auto checks = rabi::cmd_verify(cfg);
      bool all = true;
      for (const auto& c : checks) {
        std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
      }
      const int code = emit(rabi::verify_table(checks), cfg);
      if (code != 0) return code;
      return all ? 0 : kVerifyFailed;
    }
    if (*dynamics) return emit(rabi::cmd_dynamics(cfg), cfg);
    if (*spectrum) return emit(rabi::cmd_spectrum(cfg), cfg);
    return emit(rabi::cmd_steady(cfg), cfg);
  } catch (const rabi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  }
}

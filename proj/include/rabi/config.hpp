#pragma once

// Run configuration: flat `key = value` text, `#` starts a comment.  All
// frequencies and rates are in units of omega, times in units of T_c.
// Defaults reproduce the reference parameter set (Delta = 0.8, kappa = 0.02,
// g1 = 0.1, lambda = 0.5, |2,g>, 60 T_c).

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabi/dynamics.hpp"
#include "rabi/spectra.hpp"

namespace rabi {

/// Bad configuration; `line` is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

enum class Solver { master, effective };
enum class OutputFormat { csv, json };
enum class SpectrumOutput { levels, weights };

struct InitialComponent {
  BareState state;
  cplx amplitude{1.0, 0.0};
};

struct AxisSpec {
  SweepAxis axis = SweepAxis::g1;
  std::vector<double> values;  // strictly increasing
};

struct RunConfig {
  ModelParams params{1.0, 0.8, 0.1, 0.05, 0.02, FockCutoff{20}};
  /// When set, g2 = lambda * g1 at every point and params.g2 is derived.
  std::optional<double> lambda = 0.5;

  std::vector<Parity> parities{Parity::even};
  BasisKind basis = BasisKind::chain;
  /// Empty: canonical initial state of the parity.  Amplitudes are
  /// normalized when the state is built.
  std::vector<InitialComponent> initial;

  double t_max_tc = 60;
  int samples_per_tc = 10;
  Solver solver = Solver::master;
  bool renormalize = true;
  double max_step = 0.01;
  /// Sampling times of a dynamics sweep; empty means {t_max}.
  std::vector<double> snapshot_tc;

  std::optional<AxisSpec> sweep;
  std::optional<AxisSpec> sweep2;

  SteadyMethod steady_method = SteadyMethod::long_time;
  double steady_tolerance = 1e-6;
  double steady_window_tc = 20;
  double steady_cap_tc = 1000;
  double residual_tolerance = 1e-6;

  std::optional<int> ep_scan;
  double ep_g1_max = 1.0;
  SpectrumOutput spectrum_output = SpectrumOutput::levels;

  unsigned jobs = 0;  // 0: all available processors
  OutputFormat format = OutputFormat::csv;
  std::string out;

  /// Model parameters at one coupling point, applying lambda.
  [[nodiscard]] ModelParams point(double g1, std::optional<double> g2 = std::nullopt) const;
  /// Every key with its resolved value, in a fixed order.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> resolved() const;
  [[nodiscard]] Basis basis_for(Parity p) const {
    return basis == BasisKind::full ? Basis::full() : Basis::chain(p);
  }
};

[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// "%.12g"
[[nodiscard]] std::string format_number(double x);

[[nodiscard]] StateVector initial_state(const RunConfig& config, Parity parity);

}  // namespace rabi

#include "rabi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace rabi {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Line {
  std::string_view key;
  std::string_view value;
  int number;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(number) + ": " + std::string(key) + ": " + what, number);
  }

  double number_value() const { return parse_number(value); }

  double parse_number(std::string_view text) const {
    double x = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(x))
      fail("expected a number, got '" + std::string(text) + "'");
    return x;
  }

  long integer(long lo) const {
    long x = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (value.empty() || ec != std::errc{} || ptr != end) fail("expected an integer, got '" + std::string(value) + "'");
    if (x < lo) fail("must be >= " + std::to_string(lo));
    return x;
  }

  std::vector<double> list() const {
    std::vector<double> xs;
    for (auto part : split(value, ',')) xs.push_back(parse_number(part));
    return xs;
  }

  bool boolean() const {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    fail("expected true or false, got '" + std::string(value) + "'");
  }

  template <class T>
  T choice(std::initializer_list<std::pair<std::string_view, T>> options) const {
    std::string names;
    for (const auto& [name, v] : options) {
      if (value == name) return v;
      names += (names.empty() ? "" : ", ") + std::string(name);
    }
    fail("expected one of " + names + ", got '" + std::string(value) + "'");
  }
};

cplx parse_amplitude(const Line& line, std::string_view text) {
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') line.fail("malformed complex amplitude '" + std::string(text) + "'");
    const auto parts = split(text.substr(1, text.size() - 2), ',');
    if (parts.size() != 2) line.fail("malformed complex amplitude '" + std::string(text) + "'");
    return {line.parse_number(parts[0]), line.parse_number(parts[1])};
  }
  return {line.parse_number(text), 0.0};
}

std::vector<InitialComponent> parse_initial(const Line& line) {
  std::vector<InitialComponent> out;
  if (line.value == "canonical") return out;
  for (auto item : split(line.value, ';')) {
    if (item.empty()) continue;
    const auto close = item.find('>');
    const auto colon = item.find(':', close == std::string_view::npos ? 0 : close);
    const auto state_text = trim(item.substr(0, colon));
    const auto state = parse_bare_state(state_text);
    if (!state) line.fail("cannot parse bare state '" + std::string(state_text) + "'");
    InitialComponent c{*state, {1.0, 0.0}};
    if (colon != std::string_view::npos) c.amplitude = parse_amplitude(line, trim(item.substr(colon + 1)));
    out.push_back(c);
  }
  if (out.empty()) line.fail("no initial state given");
  return out;
}

struct AxisKeys {
  std::optional<SweepAxis> axis;
  std::optional<double> start, stop;
  std::optional<long> points;
  std::optional<std::vector<double>> values;
  int line = 0;
};

std::optional<AxisSpec> build_axis(const AxisKeys& k, const char* prefix, SweepAxis default_axis) {
  const bool ranged = k.start || k.stop || k.points;
  if (!ranged && !k.values) {
    if (k.axis) throw ConfigError(std::string(prefix) + "_axis given without values or a range", k.line);
    return std::nullopt;
  }
  if (ranged && k.values) throw ConfigError(std::string(prefix) + "_values conflicts with a start/stop/points range", k.line);
  AxisSpec spec{k.axis.value_or(default_axis), {}};
  if (k.values) {
    spec.values = *k.values;
  } else {
    if (!(k.start && k.stop && k.points))
      throw ConfigError(std::string(prefix) + " needs all of _start, _stop and _points", k.line);
    const long n = *k.points;
    if (n == 1) {
      spec.values = {*k.start};
    } else {
      for (long i = 0; i < n; ++i) spec.values.push_back(*k.start + (*k.stop - *k.start) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1]))
      throw ConfigError(std::string(prefix) + " values must be strictly increasing", k.line);
  for (double v : spec.values)
    if (v < 0) throw ConfigError(std::string(prefix) + " values must be non-negative", k.line);
  return spec;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ",") + format_number(x);
  return s;
}

const char* axis_name(SweepAxis a) { return a == SweepAxis::g1 ? "g1" : "g2"; }

}  // namespace

ConfigError::ConfigError(const std::string& message, int line) : std::runtime_error(message), line_(line) {}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::optional<double> g2, lambda;
  AxisKeys sweep, sweep2;
  std::set<std::string, std::less<>> seen;

  using Handler = std::function<void(const Line&)>;
  const std::map<std::string_view, Handler> handlers = {
      {"omega", [&](const Line& l) { cfg.params.omega = l.number_value(); }},
      {"delta", [&](const Line& l) { cfg.params.delta = l.number_value(); }},
      {"g1", [&](const Line& l) { cfg.params.g1 = l.number_value(); }},
      {"g2", [&](const Line& l) { g2 = l.number_value(); }},
      {"lambda", [&](const Line& l) { lambda = l.number_value(); }},
      {"kappa", [&](const Line& l) { cfg.params.kappa = l.number_value(); }},
      {"n_max", [&](const Line& l) { cfg.params.cutoff = FockCutoff(static_cast<int>(l.integer(kMinimumModelCutoff))); }},
      {"parity",
       [&](const Line& l) {
         cfg.parities = l.choice<std::vector<Parity>>({{"even", {Parity::even}},
                                                       {"+1", {Parity::even}},
                                                       {"odd", {Parity::odd}},
                                                       {"-1", {Parity::odd}},
                                                       {"both", {Parity::even, Parity::odd}}});
       }},
      {"basis", [&](const Line& l) { cfg.basis = l.choice<BasisKind>({{"chain", BasisKind::chain}, {"full", BasisKind::full}}); }},
      {"initial", [&](const Line& l) { cfg.initial = parse_initial(l); }},
      {"t_max",
       [&](const Line& l) {
         cfg.t_max_tc = l.number_value();
         if (cfg.t_max_tc < 0) l.fail("must be >= 0");
       }},
      {"samples_per_Tc", [&](const Line& l) { cfg.samples_per_tc = static_cast<int>(l.integer(1)); }},
      {"solver", [&](const Line& l) { cfg.solver = l.choice<Solver>({{"master", Solver::master}, {"effective", Solver::effective}}); }},
      {"renormalize", [&](const Line& l) { cfg.renormalize = l.boolean(); }},
      {"max_step",
       [&](const Line& l) {
         cfg.max_step = l.number_value();
         if (!(cfg.max_step > 0)) l.fail("must be > 0");
       }},
      {"t_snap",
       [&](const Line& l) {
         cfg.snapshot_tc = l.list();
         for (double t : cfg.snapshot_tc)
           if (t < 0) l.fail("times must be >= 0");
       }},
      {"sweep_axis", [&](const Line& l) { sweep.axis = l.choice<SweepAxis>({{"g1", SweepAxis::g1}, {"g2", SweepAxis::g2}}); sweep.line = l.number; }},
      {"sweep_start", [&](const Line& l) { sweep.start = l.number_value(); sweep.line = l.number; }},
      {"sweep_stop", [&](const Line& l) { sweep.stop = l.number_value(); sweep.line = l.number; }},
      {"sweep_points", [&](const Line& l) { sweep.points = l.integer(1); sweep.line = l.number; }},
      {"sweep_values", [&](const Line& l) { sweep.values = l.list(); sweep.line = l.number; }},
      {"sweep2_axis", [&](const Line& l) { sweep2.axis = l.choice<SweepAxis>({{"g1", SweepAxis::g1}, {"g2", SweepAxis::g2}}); sweep2.line = l.number; }},
      {"sweep2_start", [&](const Line& l) { sweep2.start = l.number_value(); sweep2.line = l.number; }},
      {"sweep2_stop", [&](const Line& l) { sweep2.stop = l.number_value(); sweep2.line = l.number; }},
      {"sweep2_points", [&](const Line& l) { sweep2.points = l.integer(1); sweep2.line = l.number; }},
      {"sweep2_values", [&](const Line& l) { sweep2.values = l.list(); sweep2.line = l.number; }},
      {"steady_method",
       [&](const Line& l) {
         cfg.steady_method = l.choice<SteadyMethod>(
             {{"long_time", SteadyMethod::long_time}, {"null_space", SteadyMethod::null_space}, {"auto", SteadyMethod::automatic}});
       }},
      {"steady_tolerance", [&](const Line& l) { cfg.steady_tolerance = l.number_value(); }},
      {"steady_window_Tc", [&](const Line& l) { cfg.steady_window_tc = l.number_value(); if (!(cfg.steady_window_tc > 0)) l.fail("must be > 0"); }},
      {"steady_cap_Tc", [&](const Line& l) { cfg.steady_cap_tc = l.number_value(); if (!(cfg.steady_cap_tc > 0)) l.fail("must be > 0"); }},
      {"residual_tolerance", [&](const Line& l) { cfg.residual_tolerance = l.number_value(); }},
      {"ep_scan", [&](const Line& l) { cfg.ep_scan = static_cast<int>(l.integer(0)); }},
      {"ep_g1_max", [&](const Line& l) { cfg.ep_g1_max = l.number_value(); if (!(cfg.ep_g1_max > 0)) l.fail("must be > 0"); }},
      {"spectrum_output",
       [&](const Line& l) {
         cfg.spectrum_output = l.choice<SpectrumOutput>({{"levels", SpectrumOutput::levels}, {"weights", SpectrumOutput::weights}});
       }},
      {"jobs", [&](const Line& l) { cfg.jobs = static_cast<unsigned>(l.integer(0)); }},
      {"format", [&](const Line& l) { cfg.format = l.choice<OutputFormat>({{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}); }},
      {"out", [&](const Line& l) { cfg.out = std::string(l.value); }},
  };

  int number = 0;
  for (auto raw : split(text, '\n')) {
    ++number;
    const auto hash = raw.find('#');
    const auto content = trim(raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value", number);
    const Line line{trim(content.substr(0, eq)), trim(content.substr(eq + 1)), number};
    const auto it = handlers.find(line.key);
    if (it == handlers.end()) line.fail("unknown key");
    if (!seen.insert(std::string(line.key)).second) line.fail("given more than once");
    it->second(line);
  }

  cfg.sweep = build_axis(sweep, "sweep", SweepAxis::g1);
  cfg.sweep2 = build_axis(sweep2, "sweep2", SweepAxis::g2);
  if (cfg.sweep2 && !cfg.sweep) throw ConfigError("sweep2 needs a first sweep axis", sweep2.line);
  if (cfg.sweep2 && cfg.sweep2->axis == cfg.sweep->axis) throw ConfigError("sweep and sweep2 must use different axes", sweep2.line);

  if (g2 && lambda) throw ConfigError("give either g2 or lambda, not both");
  const bool g2_swept = (cfg.sweep && cfg.sweep->axis == SweepAxis::g2) || (cfg.sweep2 && cfg.sweep2->axis == SweepAxis::g2);
  if (lambda && g2_swept) throw ConfigError("lambda cannot be combined with a g2 sweep");
  if (g2) {
    cfg.lambda.reset();
    cfg.params.g2 = *g2;
  } else if (lambda) {
    cfg.lambda = *lambda;
  } else if (g2_swept) {
    cfg.lambda.reset();
    cfg.params.g2 = 0.0;
  }
  if (cfg.lambda) {
    if (*cfg.lambda < 0) throw ConfigError("lambda must be >= 0");
    cfg.params.g2 = *cfg.lambda * cfg.params.g1;
  }

  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.ep_scan) {
    if (std::abs(cfg.params.delta - cfg.params.omega) > 1e-12 * cfg.params.omega || cfg.lambda || cfg.params.g2 != 0.0)
      throw ConfigError("ep_scan needs delta = omega and g2 = 0");
    if (*cfg.ep_scan + 1 > cfg.params.cutoff.n_max) throw ConfigError("ep_scan doublet lies above n_max");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ModelParams RunConfig::point(double g1, std::optional<double> g2) const {
  ModelParams p = params;
  p.g1 = g1;
  if (g2)
    p.g2 = *g2;
  else if (lambda)
    p.g2 = *lambda * g1;
  return p;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("omega", format_number(params.omega));
  kv.emplace_back("delta", format_number(params.delta));
  kv.emplace_back("g1", format_number(params.g1));
  if (lambda)
    kv.emplace_back("lambda", format_number(*lambda));
  else
    kv.emplace_back("g2", format_number(params.g2));
  kv.emplace_back("kappa", format_number(params.kappa));
  kv.emplace_back("n_max", std::to_string(params.cutoff.n_max));
  kv.emplace_back("parity", parities.size() == 2 ? "both" : to_string(parities.front()));
  kv.emplace_back("basis", basis == BasisKind::full ? "full" : "chain");
  std::string init;
  for (const auto& c : initial) {
    if (!init.empty()) init += "; ";
    init += to_string(c.state) + ":(" + format_number(c.amplitude.real()) + "," + format_number(c.amplitude.imag()) + ")";
  }
  kv.emplace_back("initial", init.empty() ? "canonical" : init);
  kv.emplace_back("t_max", format_number(t_max_tc));
  kv.emplace_back("samples_per_Tc", std::to_string(samples_per_tc));
  kv.emplace_back("solver", solver == Solver::master ? "master" : "effective");
  kv.emplace_back("renormalize", renormalize ? "true" : "false");
  kv.emplace_back("max_step", format_number(max_step));
  if (!snapshot_tc.empty()) kv.emplace_back("t_snap", join(snapshot_tc));
  if (sweep) {
    kv.emplace_back("sweep_axis", axis_name(sweep->axis));
    kv.emplace_back("sweep_values", join(sweep->values));
  }
  if (sweep2) {
    kv.emplace_back("sweep2_axis", axis_name(sweep2->axis));
    kv.emplace_back("sweep2_values", join(sweep2->values));
  }
  kv.emplace_back("steady_method", to_string(steady_method));
  kv.emplace_back("steady_tolerance", format_number(steady_tolerance));
  kv.emplace_back("steady_window_Tc", format_number(steady_window_tc));
  kv.emplace_back("steady_cap_Tc", format_number(steady_cap_tc));
  kv.emplace_back("residual_tolerance", format_number(residual_tolerance));
  if (ep_scan) {
    kv.emplace_back("ep_scan", std::to_string(*ep_scan));
    kv.emplace_back("ep_g1_max", format_number(ep_g1_max));
  }
  kv.emplace_back("spectrum_output", spectrum_output == SpectrumOutput::levels ? "levels" : "weights");
  kv.emplace_back("format", format == OutputFormat::csv ? "csv" : "json");
  return kv;
}

StateVector initial_state(const RunConfig& config, Parity parity) {
  const Basis basis = config.basis_for(parity);
  const FockCutoff cutoff = config.params.cutoff;
  std::vector<InitialComponent> parts = config.initial;
  if (parts.empty()) parts.push_back({canonical_initial_state(parity), {1.0, 0.0}});
  Vector amplitudes = Vector::Zero(basis.dim(cutoff));
  const auto states = basis.states(cutoff);
  for (const auto& c : parts) {
    const auto it = std::find(states.begin(), states.end(), c.state);
    if (it == states.end())
      throw ConfigError("initial state " + to_string(c.state) + " is not in the " + basis.name() + " basis with n_max=" +
                        std::to_string(cutoff.n_max));
    amplitudes(it - states.begin()) += c.amplitude;
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0)) throw ConfigError("initial state has zero norm");
  return {basis, amplitudes / norm, true};
}

}  // namespace rabi

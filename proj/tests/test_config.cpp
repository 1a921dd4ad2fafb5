#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "rabi/commands.hpp"

using namespace rabi;

namespace {

int error_line(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string render(const Table& t, const RunConfig& cfg) {
  std::ostringstream os;
  write_table(os, t, cfg);
  return os.str();
}

}  // namespace

TEST_CASE("defaults are the reference parameter set") {
  const RunConfig c = parse_config("");
  CHECK(c.params.omega == 1.0);
  CHECK(c.params.delta == 0.8);
  CHECK(c.params.g1 == 0.1);
  CHECK(c.params.g2 == doctest::Approx(0.05));
  CHECK(c.params.kappa == 0.02);
  CHECK(c.params.cutoff.n_max == 20);
  CHECK(c.lambda == 0.5);
  CHECK(c.t_max_tc == 60);
  CHECK(c.samples_per_tc == 10);
  CHECK(initial_state(c, Parity::even).amplitudes(2) == cplx(1.0));  // |2,g>
}

TEST_CASE("parsing keys, comments and values") {
  const RunConfig c = parse_config(R"(
# model
delta = 0.6   # detuning
g1 = 0.3
g2 = 0.2
kappa = 0.01
n_max = 12
parity = odd
initial = |1,g>:0.6; |0,e>:(0,0.8)
t_max = 5
samples_per_Tc = 4
solver = effective
renormalize = false
sweep_axis = g1
sweep_start = 0.1
sweep_stop = 0.5
sweep_points = 5
steady_method = auto
jobs = 2
format = json
)");
  CHECK(c.params.delta == 0.6);
  CHECK(c.params.g2 == 0.2);
  CHECK_FALSE(c.lambda);
  CHECK(c.params.cutoff.n_max == 12);
  CHECK(c.parities == std::vector<Parity>{Parity::odd});
  REQUIRE(c.initial.size() == 2);
  CHECK(c.initial[1].amplitude == cplx(0, 0.8));
  CHECK(c.solver == Solver::effective);
  CHECK_FALSE(c.renormalize);
  REQUIRE(c.sweep);
  CHECK(c.sweep->values.size() == 5);
  CHECK(c.sweep->values.back() == doctest::Approx(0.5));
  CHECK(c.steady_method == SteadyMethod::automatic);
  CHECK(c.jobs == 2);
  CHECK(c.format == OutputFormat::json);
  const StateVector psi = initial_state(c, Parity::odd);
  CHECK(psi.amplitudes.norm() == doctest::Approx(1.0));
  CHECK(parse_config("parity = both").parities.size() == 2);
  CHECK(parse_config("parity = -1").parities.front() == Parity::odd);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("g1 = 0.1\nbogus = 3\n") == 2);
  CHECK(error_line("g1 = 0.1\n\ng1 = 0.2\n") == 3);
  CHECK(error_line("# c\nkappa = fast\n") == 2);
  CHECK(error_line("kappa\n") == 1);
  CHECK(error_line("n_max = 2\n") == 1);
  CHECK(error_line("parity = sideways\n") == 1);
  CHECK(error_line("initial = |2,x>\n") == 1);
  CHECK(error_line("t_max = -1\n") == 1);
  CHECK(error_line("sweep_values = 0.3, 0.2\n") == 1);
  CHECK(error_line("sweep_values = -0.1, 0.2\n") == 1);
  CHECK(error_line("sweep_start = 0\nsweep_stop = 1\n") == 2);
  CHECK(error_line("g1 = 0.1\n") == -1);
}

TEST_CASE("coupling rules") {
  CHECK_THROWS_AS((void)parse_config("g2 = 0.1\nlambda = 0.5\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("lambda = 0.5\nsweep_axis = g2\nsweep_values = 0.1, 0.2\n"), ConfigError);
  const RunConfig swept = parse_config("sweep_axis = g2\nsweep_values = 0.1, 0.2\n");
  CHECK_FALSE(swept.lambda);
  const RunConfig tied = parse_config("g1 = 0.4\nlambda = 0.25\n");
  CHECK(tied.params.g2 == doctest::Approx(0.1));
  CHECK(tied.point(0.8).g2 == doctest::Approx(0.2));
  CHECK_THROWS_AS((void)parse_config("kappa = -0.1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("ep_scan = 1\n"), ConfigError);
  CHECK_NOTHROW((void)parse_config("ep_scan = 1\ndelta = 1\ng2 = 0\n"));
  CHECK_THROWS_AS((void)parse_config("sweep2_values = 0.1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("sweep_axis = g1\nsweep_values = 0.1\nsweep2_axis = g1\nsweep2_values = 0.2\n"), ConfigError);
  CHECK_THROWS_AS((void)initial_state(parse_config("initial = |1,g>\n"), Parity::even), ConfigError);
  CHECK_THROWS_AS((void)initial_state(parse_config("initial = |19,g>\nn_max = 12\n"), Parity::odd), ConfigError);
}

TEST_CASE("resolved configuration parses back to itself") {
  for (const char* text : {"", "g2 = 0.3\nsweep_axis = g1\nsweep_values = 0.1, 0.2\nparity = both\n",
                           "initial = |3,g>:(0.6,0); |1,g>:(0,0.8)\nparity = odd\nt_snap = 5, 10\n",
                           "delta = 1\ng2 = 0\nep_scan = 2\n"}) {
    const RunConfig a = parse_config(text);
    std::string round;
    for (const auto& [k, v] : a.resolved()) round += k + " = " + v + "\n";
    CHECK(parse_config(round).resolved() == a.resolved());
  }
}

TEST_CASE("dynamics command output") {
  RunConfig c = parse_config("t_max = 0\n");
  const Table zero = cmd_dynamics(c);
  REQUIRE(zero.rows.size() == 1);
  CHECK(std::get<double>(zero.rows[0][1]) == 2.0);

  c = parse_config("t_max = 3\nsamples_per_Tc = 4\nn_max = 10\n");
  const Table t = cmd_dynamics(c);
  CHECK(t.rows.size() == 13);
  CHECK(t.columns == std::vector<std::string>{"t_over_Tc", "mean_photon", "qubit_excitation", "trace", "purity"});
  CHECK(render(t, c) == render(cmd_dynamics(c), c));

  const RunConfig closed = parse_config("t_max = 5\nkappa = 0\nn_max = 12\ng1 = 0.3\n");
  RunConfig eff = closed;
  eff.solver = Solver::effective;
  const Table a = cmd_dynamics(closed), b = cmd_dynamics(eff);
  for (std::size_t k = 0; k < a.rows.size(); ++k)
    for (std::size_t col : {1u, 2u}) CHECK(std::abs(std::get<double>(a.rows[k][col]) - std::get<double>(b.rows[k][col])) < 1e-8);

  const RunConfig sweep = parse_config("sweep_axis = g1\nsweep_values = 0.05, 0.1\nt_snap = 4, 2\nn_max = 10\njobs = 2\n");
  const Table s = cmd_dynamics(sweep);
  REQUIRE(s.rows.size() == 4);
  CHECK(std::get<double>(s.rows[0][0]) == 2.0);
  CHECK(std::get<double>(s.rows[1][0]) == 4.0);
  CHECK(std::get<double>(s.rows[2][1]) == 0.1);
  CHECK(std::get<double>(s.rows[2][2]) == doctest::Approx(0.05));

  CHECK_THROWS_AS((void)cmd_dynamics(parse_config("parity = both\n")), ConfigError);
  CHECK_THROWS_AS((void)cmd_dynamics(parse_config("initial = |20,g>\n")), SolverError);
}

TEST_CASE("spectrum command output") {
  const RunConfig c = parse_config("g2 = 0.15\nparity = both\nsweep_axis = g1\nsweep_values = 0.5, 1.0, 1.5\nn_max = 8\n");
  const Table t = cmd_spectrum(c);
  CHECK(t.rows.size() == 2 * 3 * 9);
  const Spectrum direct = complex_spectrum(c.point(1.0), Parity::odd);
  std::vector<double> re;
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[1]) == "odd" && std::get<double>(row[0]) == 1.0) re.push_back(std::get<double>(row[3]));
  std::sort(re.begin(), re.end());
  REQUIRE(re.size() == direct.values.size());
  for (std::size_t k = 0; k < re.size(); ++k) CHECK(re[k] == direct.values[k].real());

  const Table ep = cmd_spectrum(parse_config("delta = 1\ng2 = 0\nep_scan = 1\n"));
  REQUIRE(ep.notes.size() == 1);
  CHECK(ep.notes[0].second.find("g1_over_omega=0.0141421356") != std::string::npos);

  const Table w = cmd_spectrum(parse_config("spectrum_output = weights\ng1 = 0.6\ng2 = 0.3\n"));
  double sum = 0;
  for (const auto& row : w.rows) sum += std::get<double>(row[5]);
  CHECK(sum == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)cmd_spectrum(parse_config("basis = full\n")), ConfigError);
}

TEST_CASE("steady command output") {
  const RunConfig c = parse_config(
      "g2 = 0\nparity = both\nsweep_axis = g1\nsweep_values = 0, 0.1\nsteady_cap_Tc = 200\nsteady_method = auto\n");
  const Table t = cmd_steady(c);
  REQUIRE(t.rows.size() == 4);
  // even g1 = 0: empty cavity
  CHECK(std::get<double>(t.rows[0][3]) == doctest::Approx(0).epsilon(1e-6));
  CHECK(std::get<bool>(t.rows[0][5]));
  // odd g1 = 0.1, g2 = 0: perpetual doublet oscillation
  CHECK_FALSE(std::get<bool>(t.rows[3][5]));
  CHECK(std::get<double>(t.rows[3][3]) + std::get<double>(t.rows[3][4]) == doctest::Approx(1.0).epsilon(1e-3));

  const RunConfig grid = parse_config("sweep_axis = g1\nsweep_values = 0.2, 0.4\nsweep2_axis = g2\nsweep2_values = 0.1, 0.3, 0.5\nsteady_method = null_space\n");
  const Table g = cmd_steady(grid);
  REQUIRE(g.rows.size() == 6);
  CHECK(std::get<double>(g.rows[4][0]) == 0.4);
  CHECK(std::get<double>(g.rows[4][1]) == 0.3);
}

TEST_CASE("CSV and JSON carry the same fields") {
  RunConfig c = parse_config("t_max = 1\nsamples_per_Tc = 2\nn_max = 8\n");
  const Table t = cmd_dynamics(c);
  const std::string csv = render(t, c);
  c.format = OutputFormat::json;
  const auto doc = nlohmann::json::parse(render(t, c));
  CHECK(doc["command"] == "dynamics");
  CHECK(doc["rows"].size() == t.rows.size());
  std::istringstream in(csv);
  std::string line, header;
  std::vector<std::string> data;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (header.empty()) header = line;
    else data.push_back(line);
  }
  std::string joined;
  for (const auto& col : doc["columns"]) joined += (joined.empty() ? "" : ",") + col.get<std::string>();
  CHECK(joined == header);
  for (std::size_t r = 0; r < data.size(); ++r) {
    std::string row;
    for (const auto& col : doc["columns"]) {
      const double v = doc["rows"][r][col.get<std::string>()].get<double>();
      row += (row.empty() ? "" : ",") + format_number(v);
    }
    CHECK(row == data[r]);
  }
  for (const auto& [k, v] : c.resolved())
    if (k != "format") CHECK(doc["config"][k] == v);
}

TEST_CASE("verify suite passes on the default configuration") {
  const auto checks = cmd_verify(parse_config(""));
  CHECK(checks.size() == 9);
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
  }
  const auto bad = cmd_verify(parse_config("n_max = 4\ninitial = |3,g>\nparity = odd\n"));
  CHECK_FALSE(bad.back().passed);
}

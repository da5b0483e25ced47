// Command-line front end: evaluate the closed-form effective temperature,
// run the channel-simulation oracle, optimize measurement angles, and emit
// sweep tables for plotting.
//
// Exit codes: 0 success, 1 oracle/closed-form mismatch, 2 usage or parameter
// validation, 3 physical degeneracy (zero-probability postselection,
// degenerate denominator, no feasible point).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ico/ico.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;
constexpr int exit_degenerate = 3;

struct ScalarParams {
  double beta_t1 = 0.0;
  double beta_t2 = 0.0;
  double n = 1.0;
  double beta_i = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double Theta = 0.0;
  double Phi = 0.0;
  double delta = 1.0;
  bool degrees = false;
  std::string output;
  std::string config;

  CLI::Option* opt_beta_t2 = nullptr;
  CLI::Option* opt_n = nullptr;

  // Dimensionless bath parameters (inputs scaled by delta).
  ico::BathConfig baths() const {
    const double b1 = beta_t1 * delta;
    const double b2 = opt_beta_t2->count() ? beta_t2 * delta : n * b1;
    return {b1, b2, beta_i * delta};
  }

  double rad(double angle) const { return degrees ? angle * ico::pi / 180.0 : angle; }
};

void add_common_flags(CLI::App* cmd, ScalarParams& p) {
  cmd->add_option("--config", p.config, "flat key=value file; explicit flags take precedence");
  cmd->add_option("--delta", p.delta, "level spacing Delta; beta flags are multiplied by it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--degrees", p.degrees, "interpret angle flags in degrees");
  cmd->add_option("-o,--output", p.output, "write the report to this file instead of stdout");
}

void add_bath_flags(CLI::App* cmd, ScalarParams& p) {
  cmd->add_option("--beta-t1", p.beta_t1, "inverse temperature of bath 1")->required();
  cmd->add_option("--beta-i", p.beta_i, "inverse temperature of the initial system state")
      ->required();
  CLI::Option_group* second = cmd->add_option_group("second bath", "one of --beta-t2 / --n");
  p.opt_beta_t2 = second->add_option("--beta-t2", p.beta_t2, "inverse temperature of bath 2");
  p.opt_n = second->add_option("--n", p.n, "asymmetry ratio: beta_t2 = n * beta_t1");
  second->require_option(1);
}

void add_angle_flags(CLI::App* cmd, ScalarParams& p) {
  cmd->add_option("--r", p.r, "control-qubit Bloch radius")->required();
  cmd->add_option("--theta", p.theta, "control polar angle")->required();
  cmd->add_option("--phi", p.phi, "control azimuthal angle")->required();
  cmd->add_option("--Theta", p.Theta, "measurement polar angle")->required();
  cmd->add_option("--Phi", p.Phi, "measurement azimuthal angle")->required();
}

int emit(const nlohmann::json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump() << "\n";
    return exit_ok;
  }
  std::ofstream os(output, std::ios::binary | std::ios::trunc);
  os << j.dump() << "\n";
  if (!os) {
    std::cerr << "error: cannot write '" << output << "'\n";
    return exit_usage;
  }
  return exit_ok;
}

int run_betaf(const ScalarParams& p) {
  const ico::BathConfig b = p.baths();
  const ico::ControlSpec c{p.r, p.rad(p.theta), p.rad(p.phi)};
  const ico::MeasureSpec m{p.rad(p.Theta), p.rad(p.Phi)};
  const double beta_f = ico::beta_f_general(b, c, m);
  const double prob = ico::success_prob_general(b, c, m);
  if (beta_f < 0.0)
    std::cerr << "note: beta_f < 0, the postselected state is population-inverted\n";
  return emit({{"beta_f", beta_f / p.delta}, {"p_success", prob}, {"cooling", beta_f > b.beta_t1}},
              p.output);
}

int run_oracle(const ScalarParams& p) {
  const ico::BathConfig b = p.baths();
  const ico::ControlSpec c{p.r, p.rad(p.theta), p.rad(p.phi)};
  const ico::MeasureSpec m{p.rad(p.Theta), p.rad(p.Phi)};
  const ico::PostselectResult res = ico::oracle_beta_f(b, c, m);
  const double closed = ico::beta_f_general(b, c, m);
  const double diff = std::abs(res.beta_f - closed);
  const int rc = emit({{"beta_f", res.beta_f / p.delta},
                       {"p_success", res.prob},
                       {"max_offdiag", res.max_offdiag},
                       {"delta_vs_closed_form", diff}},
                      p.output);
  if (rc != exit_ok) return rc;
  if (diff > 1e-9) {
    std::cerr << "error: oracle and closed form disagree by " << diff << "\n";
    return exit_mismatch;
  }
  return exit_ok;
}

struct OptimizeParams : ScalarParams {
  std::size_t grid_theta = 181;
  std::size_t grid_phi = 73;
  bool unconstrained = false;
};

int run_optimize(const OptimizeParams& p) {
  const ico::BathConfig b = p.baths();
  const ico::ControlSpec c{p.r, p.rad(p.theta), p.rad(p.phi)};
  ico::ExtremaOptions opts;
  opts.theta_points = p.grid_theta;
  opts.phi_points = p.grid_phi;
  opts.feasible_only = !p.unconstrained;
  const ico::ExtremaResult er = ico::find_extrema(b, c, opts);
  return emit({{"beta_f_max", er.beta_f_max / p.delta},
               {"Theta_max", er.angles_max.Theta},
               {"Phi_max", er.angles_max.Phi},
               {"prob_max", er.prob_max},
               {"beta_f_min", er.beta_f_min / p.delta},
               {"Theta_min", er.angles_min.Theta},
               {"Phi_min", er.angles_min.Phi},
               {"prob_min", er.prob_min}},
              p.output);
}

struct SweepParams : ScalarParams {
  std::string kind;
  std::string format = "csv";
  std::vector<double> r_values{1.0};
  double delta_phi = 0.0;
  std::size_t theta_steps = 181;
  std::size_t Theta_steps = 181;
  std::size_t Phi_steps = 73;
  double n_min = 0.25;
  double n_max = 4.0;
  std::size_t n_steps = 16;
};

void rescale_column(ico::SweepTable& table, const std::string& name, double delta) {
  if (delta == 1.0) return;
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (cols[c] == name)
      for (std::size_t row = 0; row < table.rows(); ++row) table.value(row, c) /= delta;
}

int run_sweep(SweepParams& p) {
  if (p.output.empty()) {
    std::cerr << "error: sweep requires --output\n";
    return exit_usage;
  }
  ico::ExtremaOptions opts;
  opts.theta_points = p.Theta_steps;
  opts.phi_points = p.Phi_steps;

  std::optional<ico::SweepTable> table;
  if (p.kind == "theta-curve") {
    if (p.r_values.size() != 1) {
      std::cerr << "error: theta-curve takes a single --r value\n";
      return exit_usage;
    }
    table = ico::optimal_theta_curve(p.baths(), p.r_values[0],
                                     ico::midpoint_grid(0.0, ico::pi, p.theta_steps), opts);
    rescale_column(*table, "beta_f", p.delta);
  } else if (p.kind == "heatmap") {
    if (p.r_values.size() != 1) {
      std::cerr << "error: heatmap takes a single --r value\n";
      return exit_usage;
    }
    table = ico::heatmap(p.baths(), p.r_values[0], p.rad(p.delta_phi),
                         ico::linspace(0.0, ico::pi, p.theta_steps),
                         ico::linspace(0.0, ico::pi, p.Theta_steps));
    rescale_column(*table, "delta_beta", p.delta);
  } else if (p.kind == "extrema-vs-n") {
    table = ico::extrema_vs_n(p.beta_t1 * p.delta, p.beta_i * p.delta,
                              ico::linspace(p.n_min, p.n_max, p.n_steps), p.r_values,
                              p.theta_steps, opts);
  } else {
    std::cerr << "error: unknown sweep kind '" << p.kind << "'\n";
    return exit_usage;
  }

  table->write_file(p.output,
                    p.format == "json" ? ico::SweepFormat::json : ico::SweepFormat::csv);
  std::cerr << "wrote " << p.output << " (" << table->rows() << " rows)\n";
  return exit_ok;
}

// Flat key=value config loader. Keys mirror the long flag names; '#' starts a
// comment. Values for keys already present on the command line are dropped so
// explicit flags take precedence.
std::vector<std::pair<std::string, std::string>> load_flat_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ico::Error("cannot read config file '" + path + "'");
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : trim(line.substr(0, eq));
    if (key.empty())
      throw ico::Error("config file '" + path + "' line " + std::to_string(lineno) +
                       " is not key=value");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

// Splice config-file values into the argument list, right after the
// subcommand token and only for flags the user did not pass explicitly.
int apply_config_file(std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.empty() || args[0].empty() || args[0][0] == '-') return exit_ok;
  try {
    std::vector<std::string> inject;
    for (const auto& [key, value] : load_flat_config(config_path)) {
      const std::string flag = "--" + key;
      bool given = false;
      for (std::size_t i = 1; i < args.size() && !given; ++i)
        given = args[i] == flag || args[i].rfind(flag + "=", 0) == 0;
      if (!given) inject.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + 1, inject.begin(), inject.end());
  } catch (const ico::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_ok;
}

template <class Fn>
int guarded(const Fn& fn, const ScalarParams& p) {
  try {
    return fn();
  } catch (const ico::ZeroProbabilityPostselection& e) {
    std::cerr << "error: " << e.what() << " [Theta=" << p.rad(p.Theta) << " Phi=" << p.rad(p.Phi)
              << "]\n";
    return exit_degenerate;
  } catch (const ico::DegenerateDenominator& e) {
    std::cerr << "error: " << e.what() << " [theta=" << p.rad(p.theta) << " phi=" << p.rad(p.phi)
              << " Theta=" << p.rad(p.Theta) << " Phi=" << p.rad(p.Phi) << "]\n";
    return exit_degenerate;
  } catch (const ico::NoFeasiblePoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const ico::DegeneratePopulation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const ico::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermalization of a two-level system under a quantum SWITCH of two thermal baths"};
  app.set_version_flag("--version", ico::tool_version);
  app.require_subcommand(1);

  ScalarParams betaf_p;
  CLI::App* betaf = app.add_subcommand("betaf", "closed-form beta_f and success probability");
  add_bath_flags(betaf, betaf_p);
  add_angle_flags(betaf, betaf_p);
  add_common_flags(betaf, betaf_p);

  ScalarParams oracle_p;
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force Kraus simulation, checked against the closed form");
  add_bath_flags(oracle, oracle_p);
  add_angle_flags(oracle, oracle_p);
  add_common_flags(oracle, oracle_p);

  OptimizeParams opt_p;
  CLI::App* optimize = app.add_subcommand("optimize", "extremize beta_f over the measurement angles");
  add_bath_flags(optimize, opt_p);
  optimize->add_option("--r", opt_p.r, "control-qubit Bloch radius")->required();
  optimize->add_option("--theta", opt_p.theta, "control polar angle")->required();
  optimize->add_option("--phi", opt_p.phi, "control azimuthal angle")->capture_default_str();
  optimize->add_option("--grid-theta", opt_p.grid_theta, "coarse Theta grid points")
      ->capture_default_str();
  optimize->add_option("--grid-phi", opt_p.grid_phi, "coarse Phi grid points")
      ->capture_default_str();
  optimize->add_flag("--unconstrained", opt_p.unconstrained,
                     "report extrema without the success-probability filter");
  add_common_flags(optimize, opt_p);

  SweepParams sweep_p;
  CLI::App* sweep = app.add_subcommand("sweep", "generate a CSV/JSON table over a parameter grid");
  sweep->add_option("--kind", sweep_p.kind, "theta-curve | heatmap | extrema-vs-n")
      ->required()
      ->check(CLI::IsMember({"theta-curve", "heatmap", "extrema-vs-n"}));
  sweep->add_option("--beta-t1", sweep_p.beta_t1, "inverse temperature of bath 1")->required();
  sweep->add_option("--beta-i", sweep_p.beta_i, "inverse temperature of the initial system state")
      ->required();
  {
    CLI::Option_group* second = sweep->add_option_group("second bath", "one of --beta-t2 / --n (theta-curve, heatmap)");
    sweep_p.opt_beta_t2 = second->add_option("--beta-t2", sweep_p.beta_t2, "inverse temperature of bath 2");
    sweep_p.opt_n = second->add_option("--n", sweep_p.n, "asymmetry ratio: beta_t2 = n * beta_t1");
    second->require_option(-1);
  }
  sweep->add_option("--r", sweep_p.r_values, "Bloch radius (list allowed for extrema-vs-n)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--delta-phi", sweep_p.delta_phi, "phase offset Phi - phi, 0 or pi (heatmap)")
      ->capture_default_str();
  sweep->add_option("--theta-steps", sweep_p.theta_steps, "control-angle grid points")
      ->capture_default_str();
  sweep->add_option("--Theta-steps", sweep_p.Theta_steps, "measurement-angle grid points")
      ->capture_default_str();
  sweep->add_option("--Phi-steps", sweep_p.Phi_steps, "measurement-phase grid points (extrema-vs-n)")
      ->capture_default_str();
  sweep->add_option("--n-min", sweep_p.n_min, "smallest asymmetry ratio (extrema-vs-n)")
      ->capture_default_str();
  sweep->add_option("--n-max", sweep_p.n_max, "largest asymmetry ratio (extrema-vs-n)")
      ->capture_default_str();
  sweep->add_option("--n-steps", sweep_p.n_steps, "asymmetry grid points (extrema-vs-n)")
      ->capture_default_str();
  sweep->add_option("--format", sweep_p.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_common_flags(sweep, sweep_p);

  std::vector<std::string> args(argv + 1, argv + argc);
  if (const int rc = apply_config_file(args); rc != exit_ok) return rc;
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector

  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  if (app.got_subcommand(betaf)) return guarded([&] { return run_betaf(betaf_p); }, betaf_p);
  if (app.got_subcommand(oracle)) return guarded([&] { return run_oracle(oracle_p); }, oracle_p);
  if (app.got_subcommand(optimize)) return guarded([&] { return run_optimize(opt_p); }, opt_p);
  if (app.got_subcommand(sweep)) {
    if (sweep_p.kind != "extrema-vs-n" && !sweep_p.opt_beta_t2->count() && !sweep_p.opt_n->count()) {
      std::cerr << "error: " << sweep_p.kind << " needs --beta-t2 or --n\n";
      return exit_usage;
    }
    return guarded([&] { return run_sweep(sweep_p); }, sweep_p);
  }
  return exit_usage;
}

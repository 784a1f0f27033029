#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "dicke/energy_surface.hpp"
#include "dicke/exact_oracle.hpp"
#include "dicke/hp_series.hpp"
#include "dicke/sweep_io.hpp"
#include "dicke/variational_solver.hpp"

namespace dicke::cli {

namespace {

struct Config {
  std::string config_file;
  std::string format = "csv";
  std::string out_path;
  int workers = 1;
  bool verbose = false;

  // Numeric inputs are kept as text so "1/2" works everywhere.
  std::string omega_a = "1";
  std::string gamma = "0";
  std::string j = "10";

  // fseries
  std::string j_list = "10,100,1000";
  int grid = 1001;

  // surface
  std::string form = "both";
  int points = 21;
  std::string rho_a_max;
  std::string rho_b_max;
  std::string phi_a = "0";
  std::string phi_b = "pi";

  // minimize / phase-diagram
  bool finite_j = false;
  int grid_points = 512;
  double min_tol = 1e-8;
  int max_iter = 200;
  std::vector<std::string> axes;

  // compare
  double ed_tol = 1e-8;
  std::int64_t n_max_ceiling = 4096;
  std::size_t max_nonzeros = kDefaultMaxNonzeros;
  std::string dump_state;
};

int default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--config", c.config_file, "key=value file; command-line flags override it");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", c.out_path, "Write the table to PATH instead of stdout");
  sub->add_option("--workers", c.workers, "Worker threads (default from $DICKE_WORKERS)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("-v,--verbose", c.verbose, "Print progress to stderr");
}

void add_model(CLI::App* sub, Config& c, bool lists) {
  const std::string suffix = lists ? " (comma-separated list allowed)" : "";
  sub->add_option("--omega-a", c.omega_a, "Atomic splitting / field frequency" + suffix)
      ->capture_default_str();
  sub->add_option("--gamma", c.gamma, "Coupling / field frequency" + suffix)
      ->capture_default_str();
  sub->add_option("--j", c.j, "Half the atom count, e.g. 10 or 1/2" + suffix)
      ->capture_default_str();
}

void add_minimizer(CLI::App* sub, Config& c) {
  sub->add_option("--grid-points", c.grid_points, "Coarse rho_b scan points (finite j)")
      ->capture_default_str();
  sub->add_option("--min-tol", c.min_tol, "Relative rho_b tolerance of the refinement")
      ->capture_default_str();
  sub->add_option("--max-iter", c.max_iter, "Refinement iteration cap")->capture_default_str();
}

std::unique_ptr<CLI::App> build_app(Config& c) {
  auto app = std::make_unique<CLI::App>(
      "Mean-field and exact treatment of the Dicke model", "dicke");
  app->require_subcommand(1, 1);
  app->set_help_all_flag("--help-all", "Help for every subcommand");
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* fseries = app->add_subcommand("fseries", "F(rho, j) against its large-j limit");
  add_common(fseries, c);
  fseries->add_option("--j", c.j_list, "Comma-separated j values")->capture_default_str();
  fseries->add_option("--grid", c.grid, "Points on rho/sqrt(2j) in [0, 1]")
      ->capture_default_str();

  auto* surface = app->add_subcommand("surface", "Energy surface on a (rho_a, rho_b) grid");
  add_common(surface, c);
  add_model(surface, c, false);
  surface->add_option("--form", c.form, "Surface form")
      ->check(CLI::IsMember({"finite", "thermo", "both"}))
      ->capture_default_str();
  surface->add_option("--points", c.points, "Grid points per modulus")->capture_default_str();
  surface->add_option("--rho-a-max", c.rho_a_max, "Largest rho_a (default 2 gamma sqrt(2j), >= 1)");
  surface->add_option("--rho-b-max", c.rho_b_max, "Largest rho_b (default sqrt(2j))");
  surface->add_option("--phi-a", c.phi_a, "Photon phase (number or 'pi')")->capture_default_str();
  surface->add_option("--phi-b", c.phi_b, "Atomic phase (number or 'pi')")->capture_default_str();

  auto* minimize = app->add_subcommand("minimize", "Mean-field ground state");
  add_common(minimize, c);
  add_model(minimize, c, false);
  minimize->add_flag("--finite-j", c.finite_j, "Minimize the finite-j surface numerically");
  add_minimizer(minimize, c);

  auto* phase = app->add_subcommand("phase-diagram", "Mean-field sweep over parameter axes");
  add_common(phase, c);
  add_model(phase, c, false);
  phase->add_option("--axis", c.axes,
                    "NAME=MIN:MAX:COUNT[:log] or NAME=V1,V2,...; NAME in gamma, omega_a, j")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  phase->add_flag("--finite-j", c.finite_j, "Use the finite-j numeric minimizer");
  add_minimizer(phase, c);

  auto* compare = app->add_subcommand("compare", "Mean field against exact diagonalization");
  add_common(compare, c);
  add_model(compare, c, true);
  compare->add_option("--tol", c.ed_tol, "Photon-cutoff convergence tolerance")
      ->capture_default_str();
  compare->add_option("--n-max-ceiling", c.n_max_ceiling, "Largest photon cutoff tried")
      ->capture_default_str();
  compare->add_option("--max-nonzeros", c.max_nonzeros, "Hamiltonian size cap")
      ->capture_default_str();
  compare->add_option("--dump-state", c.dump_state,
                      "Write the ground vector as JSON (single grid point only)");
  add_minimizer(compare, c);
  return app;
}

double number(const std::string& text) {
  if (text == "pi") return std::numbers::pi;
  return parse_number(text);
}

std::vector<double> number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) throw DomainError("empty list '" + text + "'");
  return out;
}

ModelParams model(const Config& c) {
  ModelParams p{number(c.omega_a), number(c.gamma), HalfInteger::from_double(number(c.j))};
  p.validate();
  return p;
}

MinimizerOptions minimizer(const Config& c) {
  MinimizerOptions m;
  m.grid_points = c.grid_points;
  m.convergence_tolerance = c.min_tol;
  m.max_iterations = c.max_iter;
  m.validate();
  return m;
}

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw DomainError("axis '" + text + "' lacks NAME=");
  Axis axis;
  axis.param = parse_axis_param(text.substr(0, eq));
  const std::string body = text.substr(eq + 1);
  if (body.find(':') == std::string::npos) {
    axis.explicit_values = number_list(body);
    axis.count = static_cast<int>(axis.explicit_values.size());
  } else {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 4) {
      throw DomainError("axis '" + text + "' must be NAME=MIN:MAX:COUNT[:log|lin]");
    }
    axis.min = number(parts[0]);
    axis.max = number(parts[1]);
    axis.count = static_cast<int>(number(parts[2]));
    if (parts.size() == 4) {
      if (parts[3] == "log") axis.spacing = Spacing::Log;
      else if (parts[3] != "lin") throw DomainError("axis spacing must be 'lin' or 'log'");
    }
  }
  axis.validate();
  return axis;
}

// Emits a table to --out or `out`.
void emit(const Config& c, const std::function<void(std::ostream&)>& write, std::ostream& out) {
  if (c.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + c.out_path + "' for writing");
  write(file);
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + c.out_path + "'");
}

int cmd_fseries(const Config& c, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.task = TaskKind::SeriesConvergence;
  spec.axes.push_back(Axis::list(AxisParam::J, number_list(c.j_list)));
  spec.series_grid = c.grid;
  spec.workers = c.workers;
  const std::vector<SweepRow> rows = run_sweep(spec);
  const auto format = parse_output_format(c.format);
  emit(c, [&](std::ostream& o) { write_table(rows, spec.task, format, o); }, out);

  for (double jv : spec.axes.front().values()) {
    err << "sup_deviation j=" << format_double(jv) << " grid=" << c.grid << ": "
        << format_double(sup_deviation(HalfInteger::from_double(jv), c.grid)) << '\n';
  }
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) return kExitNumerical;
  }
  return kExitOk;
}

int cmd_surface(const Config& c, std::ostream& out) {
  const ModelParams p = model(c);
  if (c.points < 1) throw DomainError("--points must be >= 1");
  const double sqrt2j = std::sqrt(p.j.atoms());
  const double rho_a_max = c.rho_a_max.empty() ? std::max(1.0, 2.0 * p.gamma * sqrt2j)
                                               : number(c.rho_a_max);
  const double rho_b_max = c.rho_b_max.empty() ? sqrt2j : number(c.rho_b_max);
  if (!(rho_a_max >= 0.0) || !(rho_b_max >= 0.0)) throw DomainError("negative grid bound");
  const double phi_a = number(c.phi_a), phi_b = number(c.phi_b);
  const bool finite = c.form != "thermo", thermo = c.form != "finite";

  std::vector<std::string> columns = {"omega_a", "gamma", "j", "rho_a", "phi_a", "rho_b", "phi_b"};
  if (finite) columns.push_back("energy_finite_j");
  if (thermo) columns.push_back("energy_thermo");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto step = [&](double max, int i) {
    return c.points == 1 ? 0.0 : max * static_cast<double>(i) / static_cast<double>(c.points - 1);
  };
  std::vector<std::vector<Cell>> rows;
  for (int ia = 0; ia < c.points; ++ia) {
    for (int ib = 0; ib < c.points; ++ib) {
      const VariationalPoint pt = VariationalPoint::make(step(rho_a_max, ia), phi_a,
                                                         step(rho_b_max, ib), phi_b);
      std::vector<Cell> row = {p.omega_a, p.gamma, p.j.value(), pt.rho_a,
                               pt.phi_a,  pt.rho_b, pt.phi_b};
      if (finite) row.emplace_back(energy_finite_j(p, pt));
      if (thermo) {
        row.emplace_back(pt.rho_b * pt.rho_b <= p.j.atoms() ? energy_thermo(p, pt) : nan);
      }
      rows.push_back(std::move(row));
    }
  }
  const auto format = parse_output_format(c.format);
  emit(c, [&](std::ostream& o) { write_cells(columns, rows, format, o); }, out);
  return kExitOk;
}

int cmd_minimize(const Config& c, std::ostream& out) {
  const ModelParams p = model(c);
  SweepRow row;
  row.omega_a = p.omega_a;
  row.gamma = p.gamma;
  row.j = p.j.value();
  row.mean_field = c.finite_j ? numeric_minimum(p, minimizer(c)) : analytic_minimum(p);
  const TaskKind kind = c.finite_j ? TaskKind::MeanFieldFiniteJ : TaskKind::MeanFieldAnalytic;
  const auto format = parse_output_format(c.format);
  const std::vector<SweepRow> rows{row};
  emit(c, [&](std::ostream& o) { write_table(rows, kind, format, o); }, out);
  return kExitOk;
}

int report_rows(const std::vector<SweepRow>& rows, std::ostream& err) {
  int status = kExitOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) {
      err << "row " << i << ": " << rows[i].error << '\n';
      status = kExitNumerical;
    }
  }
  return status;
}

int cmd_phase_diagram(const Config& c, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.task = c.finite_j ? TaskKind::MeanFieldFiniteJ : TaskKind::MeanFieldAnalytic;
  spec.omega_a = number(c.omega_a);
  spec.gamma = number(c.gamma);
  spec.j = number(c.j);
  for (const std::string& a : c.axes) spec.axes.push_back(parse_axis(a));
  spec.minimizer = minimizer(c);
  spec.workers = c.workers;
  spec.validate();
  if (c.verbose) err << "phase-diagram: " << spec.row_count() << " grid points\n";
  const std::vector<SweepRow> rows = run_sweep(spec);
  const auto format = parse_output_format(c.format);
  emit(c, [&](std::ostream& o) { write_table(rows, spec.task, format, o); }, out);
  return report_rows(rows, err);
}

int cmd_compare(const Config& c, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.task = TaskKind::ExactCompare;
  const auto omegas = number_list(c.omega_a);
  const auto gammas = number_list(c.gamma);
  const auto js = number_list(c.j);
  spec.axes = {Axis::list(AxisParam::OmegaA, omegas), Axis::list(AxisParam::Gamma, gammas),
               Axis::list(AxisParam::J, js)};
  spec.minimizer = minimizer(c);
  spec.ed_tolerance = c.ed_tol;
  spec.cutoff.n_max_ceiling = c.n_max_ceiling;
  spec.cutoff.max_nonzeros = c.max_nonzeros;
  spec.workers = c.workers;
  spec.validate();
  if (!c.dump_state.empty() && spec.row_count() != 1) {
    throw DomainError("--dump-state needs a single (omega_a, gamma, j) point");
  }
  const std::vector<SweepRow> rows = run_sweep(spec);
  const auto format = parse_output_format(c.format);
  emit(c, [&](std::ostream& o) { write_table(rows, spec.task, format, o); }, out);

  int status = report_rows(rows, err);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error.empty() && !rows[i].variational_bound) {
      err << "row " << i << ": variational bound violated\n";
      status = kExitNumerical;
    }
  }
  if (!c.dump_state.empty() && status == kExitOk) {
    const ModelParams p{omegas[0], gammas[0], HalfInteger::from_double(js[0])};
    const ExactSolution exact = converge_cutoff(p, c.ed_tol, spec.cutoff);
    std::ofstream file(c.dump_state);
    if (!file) throw std::runtime_error("cannot open '" + c.dump_state + "' for writing");
    write_ground_state_json(exact, file);
  }
  return status;
}

// key=value lines, '#' comments.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Config-file entries for options absent from the command line, as extra args.
std::vector<std::string> config_args(CLI::App& sub, const std::string& path) {
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config") throw DomainError("config files cannot nest 'config'");
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw DomainError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") extra.push_back("--" + key);
      else if (value != "false" && value != "0") {
        throw DomainError("flag '" + key + "' expects true or false");
      }
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  return extra;
}

std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config config;
  config.workers = default_workers();
  auto app = build_app(config);
  try {
    app->parse(reversed(args));
    if (!config.config_file.empty()) {
      CLI::App* sub = app->get_subcommands().front();
      std::vector<std::string> full = args;
      for (auto& a : config_args(*sub, config.config_file)) full.push_back(std::move(a));
      config = Config{};
      config.workers = default_workers();
      app = build_app(config);
      app->parse(reversed(full));
    }
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  const std::string name = app->get_subcommands().front()->get_name();
  try {
    if (name == "fseries") return cmd_fseries(config, out, err);
    if (name == "surface") return cmd_surface(config, out);
    if (name == "minimize") return cmd_minimize(config, out);
    if (name == "phase-diagram") return cmd_phase_diagram(config, out, err);
    if (name == "compare") return cmd_compare(config, out, err);
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace dicke::cli

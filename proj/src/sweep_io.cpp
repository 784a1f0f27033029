#include "dicke/sweep_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dicke/hp_series.hpp"

namespace dicke {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::MeanFieldAnalytic: return "MeanFieldAnalytic";
    case TaskKind::MeanFieldFiniteJ: return "MeanFieldFiniteJ";
    case TaskKind::ExactCompare: return "ExactCompare";
    case TaskKind::SeriesConvergence: return "SeriesConvergence";
  }
  return "?";
}

std::string_view to_string(AxisParam param) {
  switch (param) {
    case AxisParam::Gamma: return "gamma";
    case AxisParam::OmegaA: return "omega_a";
    case AxisParam::J: return "j";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view text) {
  for (auto k : {TaskKind::MeanFieldAnalytic, TaskKind::MeanFieldFiniteJ, TaskKind::ExactCompare,
                 TaskKind::SeriesConvergence}) {
    if (text == to_string(k)) return k;
  }
  throw DomainError("unknown task kind '" + std::string(text) + "'");
}

AxisParam parse_axis_param(std::string_view text) {
  if (text == "gamma") return AxisParam::Gamma;
  if (text == "omega_a" || text == "omega-a") return AxisParam::OmegaA;
  if (text == "j") return AxisParam::J;
  throw DomainError("unknown sweep parameter '" + std::string(text) + "'");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw DomainError("unknown output format '" + std::string(text) + "'");
}

Axis Axis::list(AxisParam param, std::vector<double> values) {
  Axis a;
  a.param = param;
  a.explicit_values = std::move(values);
  a.count = static_cast<int>(a.explicit_values.size());
  return a;
}

std::size_t Axis::size() const {
  return explicit_values.empty() ? static_cast<std::size_t>(count) : explicit_values.size();
}

void Axis::validate() const {
  if (!explicit_values.empty()) {
    for (double v : explicit_values) {
      if (!std::isfinite(v)) throw DomainError("non-finite axis value");
    }
  } else {
    if (count < 1) throw DomainError("axis count must be >= 1");
    if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
      throw DomainError("axis requires finite min <= max");
    }
    if (spacing == Spacing::Log && !(min > 0.0)) throw DomainError("log axis requires min > 0");
  }
  if (param == AxisParam::J) {
    for (double v : values()) HalfInteger::from_double(v);
  }
}

std::vector<double> Axis::values() const {
  std::vector<double> out = explicit_values;
  if (out.empty()) {
    out.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out[static_cast<std::size_t>(i)] =
          spacing == Spacing::Linear ? min + t * (max - min) : min * std::pow(max / min, t);
    }
    if (count > 1) out.back() = max;
  }
  if (param == AxisParam::J) {
    for (double& v : out) v = std::round(2.0 * v) / 2.0;
  }
  return out;
}

void SweepSpec::validate() const {
  bool seen[3] = {false, false, false};
  for (const Axis& a : axes) {
    a.validate();
    auto& flag = seen[static_cast<int>(a.param)];
    if (flag) throw DomainError("duplicate sweep axis '" + std::string(to_string(a.param)) + "'");
    flag = true;
  }
  if (task == TaskKind::SeriesConvergence) {
    if (seen[static_cast<int>(AxisParam::Gamma)] || seen[static_cast<int>(AxisParam::OmegaA)]) {
      throw DomainError("SeriesConvergence sweeps accept only a j axis");
    }
    if (series_grid < 2) throw DomainError("series grid needs >= 2 points");
  }
  if (!seen[static_cast<int>(AxisParam::J)]) HalfInteger::from_double(j);
  ModelParams{omega_a, gamma, HalfInteger{}}.validate();
  if (task == TaskKind::MeanFieldFiniteJ || task == TaskKind::ExactCompare) minimizer.validate();
  if (task == TaskKind::ExactCompare && !(ed_tolerance > 0.0)) {
    throw DomainError("ed_tolerance must be > 0");
  }
  if (workers < 1) throw DomainError("worker count must be >= 1");
}

std::size_t SweepSpec::row_count() const {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= a.size();
  if (task == TaskKind::SeriesConvergence) n *= static_cast<std::size_t>(series_grid);
  return n;
}

namespace {

struct GridPoint {
  double omega_a;
  double gamma;
  double j;
  int series_index;
};

GridPoint locate(const SweepSpec& spec, std::size_t flat) {
  GridPoint p{spec.omega_a, spec.gamma, spec.j, 0};
  if (spec.task == TaskKind::SeriesConvergence) {
    const auto g = static_cast<std::size_t>(spec.series_grid);
    p.series_index = static_cast<int>(flat % g);
    flat /= g;
  }
  for (auto it = spec.axes.rbegin(); it != spec.axes.rend(); ++it) {
    const std::size_t n = it->size();
    const double v = it->values()[flat % n];
    flat /= n;
    switch (it->param) {
      case AxisParam::Gamma: p.gamma = v; break;
      case AxisParam::OmegaA: p.omega_a = v; break;
      case AxisParam::J: p.j = v; break;
    }
  }
  return p;
}

void fill_series(SweepRow& row, const SweepSpec& spec, const GridPoint& p) {
  const HalfInteger j = HalfInteger::from_double(p.j);
  const double x = static_cast<double>(p.series_index) / static_cast<double>(spec.series_grid - 1);
  row.rho_over_sqrt2j = x;
  row.f_value = eval_F(x * std::sqrt(j.atoms()), j);
  row.f_limit = std::sqrt(std::max(0.0, 1.0 - x * x));
  row.abs_dev = std::abs(row.f_value - row.f_limit);
}

void fill_compare(SweepRow& row, const SweepSpec& spec, const ModelParams& params) {
  row.mean_field = analytic_minimum(params);
  const MeanFieldSolution finite = numeric_minimum(params, spec.minimizer);
  const ExactSolution exact = converge_cutoff(params, spec.ed_tolerance, spec.cutoff);
  const double atoms = params.j.atoms();
  row.finite_j_energy_per_atom = finite.energy_per_atom;
  row.exact_energy_per_atom = exact.ground_energy / atoms;
  row.exact_photons_per_atom = exact.photons_per_atom;
  row.exact_jz_per_j = exact.jz_per_j;
  row.exact_excited_fraction = (exact.jz_per_j + 1.0) / 2.0;
  row.gap_per_atom = std::abs(row.mean_field.energy - exact.ground_energy) / atoms;
  row.finite_j_gap_per_atom = std::abs(finite.energy - exact.ground_energy) / atoms;
  const double slack = spec.ed_tolerance;
  row.variational_bound = row.mean_field.energy >= exact.ground_energy - slack &&
                          finite.energy >= exact.ground_energy - slack;
  row.n_max_used = exact.n_max_used;
  row.cutoff_gap = exact.cutoff_gap;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void poison(SweepRow& row) {
  MeanFieldSolution& mf = row.mean_field;
  mf.point = {kNaN, kNaN, kNaN, kNaN};
  mf.energy = mf.energy_per_atom = mf.photons_per_atom = mf.excited_fraction = kNaN;
  row.finite_j_energy_per_atom = row.exact_energy_per_atom = row.exact_photons_per_atom = kNaN;
  row.exact_excited_fraction = row.exact_jz_per_j = row.gap_per_atom = kNaN;
  row.finite_j_gap_per_atom = row.cutoff_gap = kNaN;
  row.f_value = row.f_limit = row.abs_dev = kNaN;
}

}  // namespace

SweepRow evaluate_point(const SweepSpec& spec, std::size_t flat_index) {
  SweepRow row;
  try {
    const GridPoint p = locate(spec, flat_index);
    row.omega_a = p.omega_a;
    row.gamma = p.gamma;
    row.j = p.j;
    if (spec.task == TaskKind::SeriesConvergence) {
      fill_series(row, spec, p);
      return row;
    }
    const ModelParams params{p.omega_a, p.gamma, HalfInteger::from_double(p.j)};
    switch (spec.task) {
      case TaskKind::MeanFieldAnalytic: row.mean_field = analytic_minimum(params); break;
      case TaskKind::MeanFieldFiniteJ:
        row.mean_field = numeric_minimum(params, spec.minimizer);
        break;
      case TaskKind::ExactCompare: fill_compare(row, spec, params); break;
      case TaskKind::SeriesConvergence: break;
    }
  } catch (const std::exception& e) {
    poison(row);
    row.error = e.what();
    if (row.error.empty()) row.error = "unknown error";
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.workers == 1) return run_sweep_serial(spec);
  const auto n = static_cast<std::int64_t>(spec.row_count());
  std::vector<SweepRow> rows(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1) num_threads(spec.workers)
  for (std::int64_t i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)] = evaluate_point(spec, static_cast<std::size_t>(i));
  }
  return rows;
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(spec.row_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = evaluate_point(spec, i);
  return rows;
}

std::vector<std::string> table_columns(TaskKind kind) {
  switch (kind) {
    case TaskKind::MeanFieldAnalytic:
    case TaskKind::MeanFieldFiniteJ:
      return {"omega_a", "gamma", "j", "atoms", "method", "phase", "rho_a", "phi_a", "rho_b",
              "phi_b", "energy", "energy_per_atom", "photons_per_atom", "excited_fraction",
              "error"};
    case TaskKind::ExactCompare:
      return {"omega_a", "gamma", "j", "atoms", "phase", "mf_energy_per_atom",
              "mf_photons_per_atom", "mf_excited_fraction", "mf_finite_j_energy_per_atom",
              "exact_energy_per_atom", "exact_photons_per_atom", "exact_excited_fraction",
              "exact_jz_per_j", "gap_per_atom", "finite_j_gap_per_atom", "variational_bound",
              "n_max_used", "cutoff_gap", "error"};
    case TaskKind::SeriesConvergence:
      return {"j", "rho_over_sqrt2j", "F", "F_limit", "abs_dev", "error"};
  }
  return {};
}

std::vector<Cell> table_cells(const SweepRow& row, TaskKind kind) {
  const MeanFieldSolution& mf = row.mean_field;
  const double atoms = 2.0 * row.j;
  const std::string phase = row.error.empty() ? std::string(to_string(mf.phase)) : "";
  switch (kind) {
    case TaskKind::MeanFieldAnalytic:
    case TaskKind::MeanFieldFiniteJ:
      return {row.omega_a, row.gamma, row.j, atoms,
              std::string(to_string(kind == TaskKind::MeanFieldAnalytic
                                        ? SolveMethod::AnalyticThermo
                                        : SolveMethod::NumericFiniteJ)),
              phase, mf.point.rho_a, mf.point.phi_a, mf.point.rho_b, mf.point.phi_b, mf.energy,
              mf.energy_per_atom, mf.photons_per_atom, mf.excited_fraction, row.error};
    case TaskKind::ExactCompare:
      return {row.omega_a, row.gamma, row.j, atoms, phase, mf.energy_per_atom,
              mf.photons_per_atom, mf.excited_fraction, row.finite_j_energy_per_atom,
              row.exact_energy_per_atom, row.exact_photons_per_atom, row.exact_excited_fraction,
              row.exact_jz_per_j, row.gap_per_atom, row.finite_j_gap_per_atom,
              row.variational_bound, row.n_max_used, row.cutoff_gap, row.error};
    case TaskKind::SeriesConvergence:
      return {row.j, row.rho_over_sqrt2j, row.f_value, row.f_limit, row.abs_dev, row.error};
  }
  return {};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string render(const Cell& cell, OutputFormat format) {
  return std::visit(
      [format](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (format == OutputFormat::Json && !std::isfinite(v)) return "null";
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return format == OutputFormat::Csv ? csv_escape(v) : json_escape(v);
        }
      },
      cell);
}

}  // namespace

std::size_t write_cells(std::span<const std::string> columns,
                        std::span<const std::vector<Cell>> rows, OutputFormat format,
                        std::ostream& out) {
  std::string text;
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) text += ',';
      text += columns[c];
    }
    text += '\n';
    for (const auto& cells : rows) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) text += ',';
        text += render(cells[c], format);
      }
      text += '\n';
    }
  } else {
    text += '[';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      text += r ? ",\n {" : "\n {";
      const auto& cells = rows[r];
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) text += ", ";
        text += json_escape(columns[c]) + ": " + render(cells[c], format);
      }
      text += '}';
    }
    text += rows.empty() ? "]\n" : "\n]\n";
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing table to stream");
  return text.size();
}

std::size_t write_table(std::span<const SweepRow> rows, TaskKind kind, OutputFormat format,
                        std::ostream& out) {
  std::vector<std::vector<Cell>> cells;
  cells.reserve(rows.size());
  for (const SweepRow& row : rows) cells.push_back(table_cells(row, kind));
  return write_cells(table_columns(kind), cells, format, out);
}

std::size_t write_table(std::span<const SweepRow> rows, TaskKind kind, OutputFormat format,
                        const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + destination.string() + "' for writing");
  const std::size_t bytes = write_table(rows, kind, format, file);
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + destination.string() + "'");
  return bytes;
}

}  // namespace dicke

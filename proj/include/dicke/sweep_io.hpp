#pragma once

// Parameter sweeps over (gamma, omega_a, j) grids and CSV/JSON serialization.
//
// Grid order is row-major over the axes as listed (first axis slowest).  For
// SeriesConvergence the rho/sqrt(2j) grid is an implicit innermost axis.
// Rows come back in grid order whatever the worker count.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dicke/exact_oracle.hpp"
#include "dicke/variational_solver.hpp"

namespace dicke {

enum class TaskKind { MeanFieldAnalytic, MeanFieldFiniteJ, ExactCompare, SeriesConvergence };
enum class OutputFormat { Csv, Json };
enum class AxisParam { Gamma, OmegaA, J };
enum class Spacing { Linear, Log };

std::string_view to_string(TaskKind kind);
std::string_view to_string(AxisParam param);
TaskKind parse_task_kind(std::string_view text);
AxisParam parse_axis_param(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

struct Axis {
  AxisParam param = AxisParam::Gamma;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  Spacing spacing = Spacing::Linear;
  /// When non-empty, used verbatim instead of (min, max, count, spacing).
  std::vector<double> explicit_values;

  static Axis list(AxisParam param, std::vector<double> values);
  std::size_t size() const;
  /// Grid values; j values are rounded to the nearest half-integer.
  std::vector<double> values() const;
  void validate() const;
};

struct SweepSpec {
  TaskKind task = TaskKind::MeanFieldAnalytic;
  std::vector<Axis> axes;
  // Values for parameters without an axis.
  double omega_a = 1.0;
  double gamma = 0.0;
  double j = 10.0;
  int series_grid = 1001;
  MinimizerOptions minimizer;
  double ed_tolerance = 1e-8;
  CutoffOptions cutoff;
  int workers = 1;

  void validate() const;
  std::size_t row_count() const;
};

struct SweepRow {
  double omega_a = 0.0;
  double gamma = 0.0;
  double j = 0.0;
  /// Empty unless this grid point failed.
  std::string error;

  // Mean-field results (analytic or finite-j depending on the task).
  MeanFieldSolution mean_field;

  // ExactCompare extras.
  double finite_j_energy_per_atom = 0.0;
  double exact_energy_per_atom = 0.0;
  double exact_photons_per_atom = 0.0;
  double exact_excited_fraction = 0.0;
  double exact_jz_per_j = 0.0;
  double gap_per_atom = 0.0;
  double finite_j_gap_per_atom = 0.0;
  bool variational_bound = false;
  std::int64_t n_max_used = 0;
  double cutoff_gap = 0.0;

  // SeriesConvergence.
  double rho_over_sqrt2j = 0.0;
  double f_value = 0.0;
  double f_limit = 0.0;
  double abs_dev = 0.0;
};

/// Evaluates one grid point.  Never throws; failures land in row.error.
SweepRow evaluate_point(const SweepSpec& spec, std::size_t flat_index);

/// Evaluates every grid point, over spec.workers OpenMP threads.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
/// Single-threaded reference of run_sweep.
std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec);

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Header for a task kind; fixed and documented in README.
std::vector<std::string> table_columns(TaskKind kind);
std::vector<Cell> table_cells(const SweepRow& row, TaskKind kind);

/// %.17g, with nan/inf spelled out.
std::string format_double(double value);

/// Generic table writer used by write_table and the CLI.
std::size_t write_cells(std::span<const std::string> columns,
                        std::span<const std::vector<Cell>> rows, OutputFormat format,
                        std::ostream& out);

/// CSV (header + LF-terminated lines) or JSON array of objects.  Returns the
/// byte count written.
std::size_t write_table(std::span<const SweepRow> rows, TaskKind kind, OutputFormat format,
                        std::ostream& out);
/// Writes to a file; throws std::runtime_error naming the path on failure.
std::size_t write_table(std::span<const SweepRow> rows, TaskKind kind, OutputFormat format,
                        const std::filesystem::path& destination);

}  // namespace dicke

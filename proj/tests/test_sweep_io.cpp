#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dicke/hp_series.hpp"
#include "dicke/sweep_io.hpp"

using namespace dicke;

namespace {

std::string render(const std::vector<SweepRow>& rows, TaskKind kind, OutputFormat f) {
  std::ostringstream out;
  write_table(rows, kind, f, out);
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

SweepSpec gamma_sweep(int workers) {
  SweepSpec spec;
  spec.task = TaskKind::MeanFieldAnalytic;
  spec.axes = {Axis{AxisParam::Gamma, 0.0, 1.0, 101, Spacing::Linear, {}}};
  spec.omega_a = 1.0;
  spec.j = 10;
  spec.workers = workers;
  return spec;
}

}  // namespace

TEST_CASE("axis values") {
  Axis lin{AxisParam::Gamma, 0.0, 1.0, 5, Spacing::Linear, {}};
  CHECK(lin.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  Axis lg{AxisParam::OmegaA, 0.25, 4.0, 3, Spacing::Log, {}};
  const auto v = lg.values();
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == 4.0);
  Axis js{AxisParam::J, 1.0, 2.0, 3, Spacing::Linear, {}};
  CHECK(js.values() == std::vector<double>{1.0, 1.5, 2.0});
  Axis one{AxisParam::Gamma, 0.3, 0.3, 1, Spacing::Linear, {}};
  CHECK(one.values() == std::vector<double>{0.3});
  CHECK_THROWS_AS((Axis{AxisParam::Gamma, 1.0, 0.0, 3, Spacing::Linear, {}}.validate()), DomainError);
  CHECK_THROWS_AS((Axis{AxisParam::Gamma, 0.0, 1.0, 0, Spacing::Linear, {}}.validate()), DomainError);
  CHECK_THROWS_AS((Axis{AxisParam::OmegaA, 0.0, 1.0, 3, Spacing::Log, {}}.validate()), DomainError);
}

TEST_CASE("spec validation") {
  SweepSpec s = gamma_sweep(1);
  s.axes.push_back(s.axes.front());
  CHECK_THROWS_AS(s.validate(), DomainError);
  SweepSpec series;
  series.task = TaskKind::SeriesConvergence;
  series.axes = {Axis::list(AxisParam::Gamma, {0.1})};
  CHECK_THROWS_AS(series.validate(), DomainError);
  SweepSpec w = gamma_sweep(0);
  CHECK_THROWS_AS(w.validate(), DomainError);
}

TEST_CASE("gamma sweep shows the threshold at gamma_c = 0.5") {
  const auto rows = run_sweep(gamma_sweep(1));
  REQUIRE(rows.size() == 101);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    if (r.gamma <= 0.5) {
      CHECK(r.mean_field.excited_fraction == 0.0);
      CHECK(r.mean_field.photons_per_atom == 0.0);
    } else {
      CHECK(r.mean_field.excited_fraction > 0.0);
    }
  }
}

TEST_CASE("row count is the product of axis counts, in row-major order") {
  SweepSpec s;
  s.task = TaskKind::MeanFieldAnalytic;
  s.axes = {Axis{AxisParam::OmegaA, 0.5, 2.0, 3, Spacing::Linear, {}},
            Axis{AxisParam::Gamma, 0.1, 1.0, 4, Spacing::Linear, {}},
            Axis::list(AxisParam::J, {1, 2})};
  CHECK(s.row_count() == 24);
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 24);
  CHECK(rows[0].omega_a == 0.5);
  CHECK(rows[0].j == 1.0);
  CHECK(rows[1].j == 2.0);
  CHECK(rows[2].gamma == doctest::Approx(0.4));
  CHECK(rows[8].omega_a == 1.25);
}

TEST_CASE("single-point sweep equals the direct call") {
  SweepSpec s;
  s.task = TaskKind::MeanFieldFiniteJ;
  s.omega_a = 1;
  s.gamma = 0.9;
  s.j = 3;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 1);
  const auto direct = numeric_minimum({1, 0.9, HalfInteger::from_double(3)});
  CHECK(rows[0].mean_field.energy == direct.energy);
  CHECK(rows[0].mean_field.point.rho_b == direct.point.rho_b);
}

TEST_CASE("series convergence rows") {
  SweepSpec s;
  s.task = TaskKind::SeriesConvergence;
  s.axes = {Axis::list(AxisParam::J, {10, 100, 1000})};
  s.series_grid = 1001;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 3003);
  double worst[3] = {0, 0, 0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst[i / 1001] = std::max(worst[i / 1001], rows[i].abs_dev);
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(worst[k] == sup_deviation(HalfInteger::from_double(std::pow(10.0, k + 1)), 1001));
  }
  CHECK(rows[0].f_value == 1.0);
  CHECK(rows[1000].f_limit == 0.0);
}

TEST_CASE("failed grid points are recorded, not thrown") {
  SweepSpec s;
  s.task = TaskKind::ExactCompare;
  s.axes = {Axis::list(AxisParam::Gamma, {0.0, 1.0})};
  s.j = 5;
  s.cutoff.n_max_ceiling = 16;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].variational_bound);
  CHECK_FALSE(rows[1].error.empty());
  CHECK(std::isnan(rows[1].exact_energy_per_atom));
  const std::string csv = render(rows, TaskKind::ExactCompare, OutputFormat::Csv);
  CHECK(csv.find("ceiling") != std::string::npos);
}

TEST_CASE("parallel sweep output is byte-identical to serial") {
  SweepSpec s = gamma_sweep(1);
  s.task = TaskKind::MeanFieldFiniteJ;
  s.axes = {Axis{AxisParam::Gamma, 0.3, 1.2, 13, Spacing::Linear, {}},
            Axis::list(AxisParam::J, {0.5, 4, 40})};
  const auto serial = render(run_sweep_serial(s), s.task, OutputFormat::Csv);
  s.workers = 4;
  CHECK(render(run_sweep(s), s.task, OutputFormat::Csv) == serial);
  CHECK(render(run_sweep(s), s.task, OutputFormat::Csv) == serial);
}

TEST_CASE("empty table is header-only CSV / empty JSON array") {
  const std::vector<SweepRow> none;
  const std::string csv = render(none, TaskKind::MeanFieldAnalytic, OutputFormat::Csv);
  CHECK(csv ==
        "omega_a,gamma,j,atoms,method,phase,rho_a,phi_a,rho_b,phi_b,energy,energy_per_atom,"
        "photons_per_atom,excited_fraction,error\n");
  CHECK(nlohmann::json::parse(render(none, TaskKind::MeanFieldAnalytic, OutputFormat::Json)).empty());
}

TEST_CASE("closed-form observables serialize losslessly and CSV/JSON agree") {
  SweepSpec s;
  s.omega_a = 1;
  s.gamma = 1;
  s.j = 10;
  const auto rows = run_sweep(s);
  const std::string csv = render(rows, TaskKind::MeanFieldAnalytic, OutputFormat::Csv);
  const auto table = parse_csv(csv);
  REQUIRE(table.size() == 2);
  const auto json = nlohmann::json::parse(render(rows, TaskKind::MeanFieldAnalytic, OutputFormat::Json));
  REQUIRE(json.size() == 1);
  const auto& header = table[0];
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& field = json[0][header[c]];
    if (field.is_number()) {
      CHECK(std::stod(table[1][c]) == field.get<double>());
    } else if (field.is_string()) {
      CHECK(table[1][c] == field.get<std::string>());
    }
  }
  CHECK(json[0]["energy_per_atom"].get<double>() == doctest::Approx(-1.0625).epsilon(1e-14));
  CHECK(json[0]["photons_per_atom"].get<double>() == doctest::Approx(0.9375).epsilon(1e-14));
  CHECK(json[0]["excited_fraction"].get<double>() == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(std::stod(table[1][11]) == rows[0].mean_field.energy_per_atom);
}

TEST_CASE("float formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("write failures carry the destination") {
  const std::vector<SweepRow> none;
  try {
    write_table(none, TaskKind::MeanFieldAnalytic, OutputFormat::Csv,
                std::filesystem::path("/nonexistent-dir/x.csv"));
    FAIL("expected a write error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
  const auto path = std::filesystem::temp_directory_path() / "dicke_sweep_test.csv";
  const std::size_t bytes = write_table(none, TaskKind::SeriesConvergence, OutputFormat::Csv, path);
  CHECK(std::filesystem::file_size(path) == bytes);
  std::filesystem::remove(path);
}

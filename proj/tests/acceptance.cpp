// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dicke/energy_surface.hpp"
#include "dicke/exact_oracle.hpp"
#include "dicke/hp_series.hpp"
#include "dicke/variational_solver.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ModelParams params(double omega_a, double gamma, double j) {
  return {omega_a, gamma, HalfInteger::from_double(j)};
}

int failures = 0;

void run_criterion(int id, const char* title, double max_seconds,
                   const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (max_seconds > 0) {
    out.require(seconds < max_seconds, "runtime " + fmt(seconds) + " s >= " + fmt(max_seconds) + " s");
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %d. %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, title, seconds,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

// Frozen from oracle::sup_deviation (50-digit direct summation, 1001 points).
constexpr double kSup[3] = {0.19408697240769879, 0.10957677699786086, 0.06155072986734958};

void criterion_series(Outcome& o) {
  const double js[3] = {10, 100, 1000};
  double d[3];
  for (int k = 0; k < 3; ++k) {
    d[k] = sup_deviation(HalfInteger::from_double(js[k]), 1001);
    o.require(std::abs(d[k] - kSup[k]) <= 1e-12 * kSup[k],
              "j=" + fmt(js[k]) + " sup " + fmt(d[k]) + " vs pinned " + fmt(kSup[k]));
  }
  o.require(d[0] > d[1] && d[1] > d[2], "sup deviation not strictly decreasing");
  o.detail += o.detail.empty() ? "" : "; ";
  o.detail += "d10=" + fmt(d[0]) + " d100=" + fmt(d[1]) + " d1000=" + fmt(d[2]);
}

double coordinate(const VariationalPoint& pt, int c) {
  return c == 0 ? pt.rho_a : c == 1 ? pt.phi_a : c == 2 ? pt.rho_b : pt.phi_b;
}

void criterion_gradient(Outcome& o) {
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto p = params(0.2 + 1.8 * u(rng), 0.1 + 1.4 * u(rng), 0.5 * (1 + std::floor(40 * u(rng))));
    const double j = p.j.value();
    const VariationalPoint pt{3 * u(rng), 2 * std::numbers::pi * u(rng),
                              std::sqrt(1.8 * j * u(rng)), 2 * std::numbers::pi * u(rng)};
    const GradientVector g = gradient_thermo(p, pt);
    const double analytic[4] = {g.d_rho_a, g.d_phi_a, g.d_rho_b, g.d_phi_b};
    for (int c = 0; c < 4; ++c) {
      auto along = [&](double v) {
        VariationalPoint q = pt;
        (c == 0 ? q.rho_a : c == 1 ? q.phi_a : c == 2 ? q.rho_b : q.phi_b) = v;
        return energy_thermo(p, q);
      };
      const double fd = oracle::central_difference(along, coordinate(pt, c), h);
      // Pure relative error; the tiny floor only guards 0/0.
      const double scale = std::max({std::abs(analytic[c]), std::abs(fd), 1e-300});
      worst = std::max(worst, std::abs(analytic[c] - fd) / scale);
    }
  }
  o.require(worst <= 1e-6, "worst relative error " + fmt(worst));
  if (o.pass) o.detail = "worst relative error " + fmt(worst);
}


void criterion_stationarity(Outcome& o) {
  double worst = 0.0;
  int points = 0;
  for (double omega : {0.5, 1.0, 2.0}) {
    const double gc = critical_coupling(omega);
    std::vector<double> gammas{gc};
    for (int k = 1; k <= 20; ++k) {
      if (0.1 * k > gc) gammas.push_back(0.1 * k);
    }
    for (double gamma : gammas) {
      for (double j : {0.5, 10.0, 1000.0}) {
        const auto p = params(omega, gamma, j);
        const MeanFieldSolution sol = analytic_minimum(p);
        const double r = gradient_thermo(p, sol.point).max_abs();
        worst = std::max(worst, r);
        ++points;
        o.require(r <= 1e-10, "omega_a=" + fmt(omega) + " gamma=" + fmt(gamma) + " j=" + fmt(j) +
                                  " residual " + fmt(r));
      }
    }
  }
  if (o.pass) o.detail = fmt(points) + " points, worst residual " + fmt(worst);
}

void criterion_threshold(Outcome& o) {
  for (int k = 0; k <= 100; ++k) {
    const double gamma = 0.01 * k;
    const auto p = params(1.0, gamma, 10);
    const MeanFieldSolution a = analytic_minimum(p);
    const bool normal_side = gamma <= 0.5;
    const bool zero = a.point.rho_a == 0.0 && a.point.rho_b == 0.0 && a.photons_per_atom == 0.0 &&
                      a.excited_fraction == 0.0;
    const bool positive = a.point.rho_a > 0.0 && a.point.rho_b > 0.0 && a.photons_per_atom > 0.0 &&
                          a.excited_fraction > 0.0;
    o.require(normal_side ? zero : positive, "analytic order parameter wrong at gamma=" + fmt(gamma));
  }
  for (double gamma : {0.1, 0.3, 0.45, 0.5}) {
    const MeanFieldSolution n = numeric_minimum(params(1.0, gamma, 10));
    o.require(n.point.rho_b == 0.0 && n.excited_fraction == 0.0,
              "finite-j minimizer off the origin at gamma=" + fmt(gamma));
  }
  for (double gamma : {0.55, 0.8, 1.5}) {
    const MeanFieldSolution n = numeric_minimum(params(1.0, gamma, 10));
    o.require(n.point.rho_b > 0.0 && n.excited_fraction > 0.0,
              "finite-j minimizer at the origin for gamma=" + fmt(gamma));
  }

  // Independent grid oracle on the per-atom energy as a function of x = rho_b^2 / 2j.
  const auto e_of_x = [](double x) { return -4.0 * x * (1.0 - x) + x - 0.5; };
  const double x_star = oracle::grid_argmin(e_of_x, 0.0, 1.0, 1000001);
  const double targets[3] = {e_of_x(x_star), 4.0 * x_star * (1.0 - x_star), x_star};
  const double expected[3] = {-1.0625, 0.9375, 0.375};
  for (int k = 0; k < 3; ++k) {
    o.require(std::abs(targets[k] - expected[k]) <= 1e-4, "grid oracle disagrees: " + fmt(targets[k]));
  }

  const MeanFieldSolution a = analytic_minimum(params(1.0, 1.0, 10));
  const MeanFieldSolution n = numeric_minimum(params(1.0, 1.0, 1e6));
  for (const auto* s : {&a, &n}) {
    const double got[3] = {s->energy_per_atom, s->photons_per_atom, s->excited_fraction};
    for (int k = 0; k < 3; ++k) {
      o.require(std::abs(got[k] - expected[k]) <= 1e-4,
                std::string(to_string(s->method)) + " observable " + fmt(k) + " = " + fmt(got[k]));
    }
  }
  if (o.pass) {
    o.detail = "j=1e6 finite-j: e=" + fmt(n.energy_per_atom) + " n=" + fmt(n.photons_per_atom) +
               " x=" + fmt(n.excited_fraction);
  }
}

void criterion_second_order(Outcome& o) {
  const double gc = critical_coupling(1.0);
  const double h = 1e-3;
  const auto e = [](double gamma) { return analytic_minimum(params(1.0, gamma, 10)).energy_per_atom; };
  const auto d1 = [&](double g) { return (e(g + h) - e(g - h)) / (2 * h); };
  const auto d2 = [&](double g) { return (e(g + h) - 2 * e(g) + e(g - h)) / (h * h); };
  // Stencils centred 2h and 3h from the threshold never straddle it; extrapolate each side linearly.
  const auto side = [&](const std::function<double(double)>& d, double sign) {
    return 3 * d(gc + sign * 2 * h) - 2 * d(gc + sign * 3 * h);
  };
  const double jump0 = std::abs(e(gc + 1e-9) - e(gc - 1e-9));
  const double jump1 = side(d1, 1) - side(d1, -1);
  const double jump2 = side(d2, 1) - side(d2, -1);
  o.require(jump0 < 1e-6, "energy jumps by " + fmt(jump0));
  o.require(std::abs(jump1) < 1e-3, "first derivative jumps by " + fmt(jump1));
  o.require(std::abs(jump2) > 1.0, "second derivative jump only " + fmt(jump2));
  const double x_near = analytic_minimum(params(1.0, gc + 1e-6, 10)).excited_fraction;
  o.require(x_near < 1e-4, "order parameter not continuous: " + fmt(x_near));
  if (o.pass) o.detail = "dE' jump " + fmt(jump1) + ", dE'' jump " + fmt(jump2);
}

// Frozen from converge_cutoff at tol 1e-8: MF(analytic) minus exact energy per atom.
struct GapPin {
  double gamma, j, gap;
};
constexpr GapPin kGaps[] = {
    {0.2, 1, 0.010309490875619054},  {0.2, 2, 0.0052119878434452316}, {0.2, 5, 0.0020993190223278723},
    {0.2, 10, 0.0010521526653249681}, {0.2, 20, 0.00052670680025093122},
    {1.0, 1, 0.014640272576138535},  {1.0, 2, 0.0037178769332932848}, {1.0, 5, 0.0013406590486365389},
    {1.0, 10, 0.00065289768905802954}, {1.0, 20, 0.00032232847704491972},
};

void criterion_exact_bound(Outcome& o) {
  const double tol = 1e-8;
  std::vector<double> gaps_at_one;
  for (const GapPin& pin : kGaps) {
    const auto p = params(1.0, pin.gamma, pin.j);
    const double atoms = 2 * pin.j;
    const ExactSolution ex = converge_cutoff(p, tol);
    const double e_exact = ex.ground_energy / atoms;
    const double e_mf = analytic_minimum(p).energy_per_atom;
    const double e_fin = numeric_minimum(p).energy_per_atom;
    const std::string at = " at gamma=" + fmt(pin.gamma) + " j=" + fmt(pin.j);
    o.require(e_mf >= e_exact - tol / atoms, "analytic MF below exact" + at);
    o.require(e_fin >= e_exact - tol / atoms, "finite-j MF below exact" + at);
    const double gap = e_mf - e_exact;
    o.require(std::abs(gap - pin.gap) <= tol, "gap " + fmt(gap) + " vs pinned " + fmt(pin.gap) + at);
    if (pin.gamma == 1.0) gaps_at_one.push_back(gap);
  }
  for (std::size_t k = 1; k < gaps_at_one.size(); ++k) {
    o.require(gaps_at_one[k] < gaps_at_one[k - 1], "gap not decreasing in j at gamma=1");
  }
  if (o.pass) {
    o.detail = "gamma=1 gaps:";
    for (double g : gaps_at_one) o.detail += " " + fmt(g);
  }
}

void criterion_small_system(Outcome& o) {
  const ExactSolution ex = converge_cutoff(params(1.0, 0.05, 0.5), 1e-12);
  o.require(std::abs(ex.ground_energy - (-0.50125)) <= 1e-5, "ground energy " + fmt(ex.ground_energy));
  const HalfInteger half = HalfInteger::from_twice(1);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double rho = 0.05 * k;
    // exp(-rho^2) evaluated in 50 digits, so the squaring of rho is not rounded first.
    const double want = static_cast<double>(oracle::series_F(rho, 1));
    worst = std::max(worst, std::abs(eval_F(rho, half) - want) / want);
  }
  o.require(worst <= 2 * std::numeric_limits<double>::epsilon(), "F(rho,1/2) relative error " + fmt(worst));
  if (o.pass) o.detail = "E0=" + fmt(ex.ground_energy) + ", F worst relative " + fmt(worst);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() / "dicke_acceptance";
  std::filesystem::create_directories(dir);
  int files = 0;
  for (const char* format : {"csv", "json"}) {
    for (bool finite : {false, true}) {
      std::string reference;
      for (const char* workers : {"1", "4", "1", "4"}) {
        const auto path = dir / ("sweep_" + std::to_string(files++) + "." + format);
        std::vector<std::string> args{"phase-diagram", "--j", "10", "--axis", "gamma=0:2:41",
                                      "--axis", "omega_a=0.25:4:9:log", "--format", format,
                                      "--workers", workers, "--out", path.string()};
        if (finite) args.push_back("--finite-j");
        std::ostringstream out, err;
        const int status = cli::run(args, out, err);
        o.require(status == cli::kExitOk, "exit status " + fmt(status) + ": " + err.str());
        const std::string bytes = slurp(path);
        o.require(!bytes.empty(), "empty output");
        if (reference.empty()) {
          reference = bytes;
        } else {
          o.require(bytes == reference, std::string(format) + (finite ? " finite-j" : " analytic") +
                                            " output differs with workers=" + workers);
        }
      }
    }
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = fmt(files) + " runs byte-identical";
}

}  // namespace

int main() {
  run_criterion(1, "coefficient series converges to its large-j limit", 5.0, criterion_series);
  run_criterion(2, "analytic gradient matches central differences", 1.0, criterion_gradient);
  run_criterion(3, "superradiant closed form is stationary", 1.0, criterion_stationarity);
  run_criterion(4, "threshold and observables at omega_a=gamma=1", 10.0, criterion_threshold);
  run_criterion(5, "transition is second order", 0.0, criterion_second_order);
  run_criterion(6, "mean field bounds exact energy and gap shrinks", 60.0, criterion_exact_bound);
  run_criterion(7, "single-atom closed forms", 0.0, criterion_small_system);
  run_criterion(8, "sweeps are deterministic across runs and workers", 0.0, criterion_determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

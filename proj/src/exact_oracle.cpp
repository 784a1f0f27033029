#include "dicke/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace dicke {

CsrMatrix build_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                            std::size_t max_nonzeros) {
  params.validate();
  if (basis.n_max < 1) throw DomainError("photon cutoff n_max must be >= 1");
  const std::int64_t two_j = basis.j.twice();
  const std::int64_t dim = basis.dimension();
  // Each of the n_max * 2j (n, m) -> (n+1, m+1) and (n, m) -> (n+1, m-1)
  // pairs is stored twice.
  const auto nonzeros = static_cast<double>(dim) + 4.0 * static_cast<double>(basis.n_max) *
                                                       static_cast<double>(two_j);
  if (nonzeros > static_cast<double>(max_nonzeros)) {
    throw DomainError("Hamiltonian needs " + std::to_string(static_cast<long long>(nonzeros)) +
                      " nonzeros, above the cap of " + std::to_string(max_nonzeros));
  }

  const double j = basis.j.value();
  const double casimir = j * (j + 1.0);
  const double scale = params.gamma / std::sqrt(basis.j.atoms());

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nonzeros));
  for (std::int64_t n = 0; n <= basis.n_max; ++n) {
    for (std::int64_t k = 0; k <= two_j; ++k) {
      const double m = static_cast<double>(k) - j;
      const std::int64_t row = basis.index(n, k);
      triplets.push_back({row, row, static_cast<double>(n) + params.omega_a * m});
      if (n == basis.n_max || scale == 0.0) continue;
      const double photon = std::sqrt(static_cast<double>(n + 1));
      if (k < two_j) {  // J_+ : m -> m + 1
        const double v = scale * photon * std::sqrt(casimir - m * (m + 1.0));
        const std::int64_t col = basis.index(n + 1, k + 1);
        triplets.push_back({row, col, v});
        triplets.push_back({col, row, v});
      }
      if (k > 0) {  // J_- : m -> m - 1
        const double v = scale * photon * std::sqrt(casimir - m * (m - 1.0));
        const std::int64_t col = basis.index(n + 1, k - 1);
        triplets.push_back({row, col, v});
        triplets.push_back({col, row, v});
      }
    }
  }
  return CsrMatrix::from_triplets(dim, std::move(triplets));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void normalize(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  for (double& x : v) x /= norm;
}

// Deterministic sign: largest-magnitude component positive.
void fix_sign(std::vector<double>& v) {
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (it != v.end() && *it < 0.0) {
    for (double& x : v) x = -x;
  }
}

double residual_norm(const CsrMatrix& h, std::span<const double> v, double energy) {
  std::vector<double> hv(v.size());
  matvec(h, v, hv);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = hv[i] - energy * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

Eigenpair dense_ground_state(const CsrMatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  const auto rows = h.row_offsets();
  const auto cols = h.columns();
  const auto vals = h.values();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (auto k = rows[static_cast<std::size_t>(r)]; k < rows[static_cast<std::size_t>(r) + 1];
         ++k) {
      dense(r, static_cast<Eigen::Index>(cols[static_cast<std::size_t>(k)])) +=
          vals[static_cast<std::size_t>(k)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("dense symmetric eigensolver failed (dimension " + std::to_string(n) +
                         ")");
  }
  Eigenpair out;
  out.energy = solver.eigenvalues()(0);
  out.vector.assign(solver.eigenvectors().col(0).data(), solver.eigenvectors().col(0).data() + n);
  normalize(out.vector);
  fix_sign(out.vector);
  out.residual = residual_norm(h, out.vector, out.energy);
  return out;
}

Eigenpair lanczos_ground_state(const CsrMatrix& h, const EigenOptions& opts) {
  const auto n = static_cast<std::size_t>(h.dimension());
  const int krylov = std::max(2, std::min<int>(opts.krylov_dim, static_cast<int>(n)));

  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = 1e-3 * std::sin(0.7 * static_cast<double>(i) + 0.3) / std::sqrt(static_cast<double>(n));
  }
  start[0] += 1.0;
  normalize(start);

  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> w(n);
  int matvecs = 0;
  double last_residual = 0.0;
  double last_energy = 0.0;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    basis.assign(1, start);
    alpha.clear();
    beta.clear();
    for (int i = 0; i < krylov; ++i) {
      matvec(h, basis[static_cast<std::size_t>(i)], w);
      ++matvecs;
      const double a = dot(w, basis[static_cast<std::size_t>(i)]);
      alpha.push_back(a);
      // Full reorthogonalization, two passes.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) axpy(-dot(w, q), q, w);
      }
      const double b = std::sqrt(dot(w, w));
      if (i + 1 == krylov || b <= 1e-13 * std::max(1.0, std::abs(a))) break;
      beta.push_back(b);
      std::vector<double> next(w);
      for (double& x : next) x /= b;
      basis.push_back(std::move(next));
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i + 1 < k; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()(0);

    std::vector<double> ritz(n, 0.0);
    for (Eigen::Index i = 0; i < k; ++i) {
      axpy(tri.eigenvectors()(i, 0), basis[static_cast<std::size_t>(i)], ritz);
    }
    normalize(ritz);
    last_energy = theta;
    last_residual = residual_norm(h, ritz, theta);
    ++matvecs;
    if (last_residual <= opts.residual_tol * std::max(1.0, std::abs(theta))) {
      fix_sign(ritz);
      return {theta, std::move(ritz), last_residual, matvecs};
    }
    start = std::move(ritz);
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge: dimension " << n << ", " << opts.max_restarts
      << " restarts, " << matvecs << " matvecs, last energy " << last_energy
      << ", last residual " << last_residual;
  throw NonConvergence(msg.str());
}

}  // namespace

Eigenpair ground_state(const CsrMatrix& h, const EigenOptions& opts) {
  if (h.dimension() < 1) throw DomainError("empty matrix");
  if (h.dimension() <= opts.dense_limit) return dense_ground_state(h);
  return lanczos_ground_state(h, opts);
}

Eigenpair ground_state_by_parity(const CsrMatrix& h, const BasisSpec& basis,
                                 const EigenOptions& opts) {
  if (h.dimension() != basis.dimension()) throw DomainError("basis does not match matrix");
  std::vector<std::int64_t> sectors[2];
  for (std::int64_t i = 0; i < basis.dimension(); ++i) {
    sectors[basis.parity_of(i)].push_back(i);
  }
  Eigenpair best;
  int best_sector = -1;
  for (int s = 0; s < 2; ++s) {
    if (sectors[s].empty()) continue;
    Eigenpair block = ground_state(h.principal_submatrix(sectors[s]), opts);
    const double tie = 1e-12 * std::max(1.0, std::abs(block.energy));
    if (best_sector < 0 || block.energy < best.energy - tie) {
      best = std::move(block);
      best_sector = s;
    } else {
      best.matvecs += block.matvecs;
    }
  }
  std::vector<double> full(static_cast<std::size_t>(basis.dimension()), 0.0);
  const auto& idx = sectors[best_sector];
  for (std::size_t i = 0; i < idx.size(); ++i) {
    full[static_cast<std::size_t>(idx[i])] = best.vector[i];
  }
  best.vector = std::move(full);
  return best;
}

ExactObservables exact_observables(std::span<const double> vector, const BasisSpec& basis) {
  if (static_cast<std::int64_t>(vector.size()) != basis.dimension()) {
    throw DomainError("vector length does not match basis dimension");
  }
  const double j = basis.j.value();
  double photons = 0.0, jz = 0.0;
  for (std::size_t i = 0; i < vector.size(); ++i) {
    const double p = vector[i] * vector[i];
    const auto idx = static_cast<std::int64_t>(i);
    photons += p * static_cast<double>(basis.photons_of(idx));
    jz += p * (static_cast<double>(basis.m_index_of(idx)) - j);
  }
  return {photons / basis.j.atoms(), jz / j};
}

ExactSolution converge_cutoff(const ModelParams& params, double tol, const CutoffOptions& opts) {
  params.validate();
  if (!(tol > 0.0)) throw DomainError("cutoff tolerance must be > 0");

  auto solve = [&](std::int64_t n_max) {
    const BasisSpec basis{params.j, n_max};
    const CsrMatrix h = build_hamiltonian(params, basis, opts.max_nonzeros);
    return std::pair{basis, ground_state_by_parity(h, basis, opts.eigen)};
  };

  const double guess = std::ceil(4.0 * params.gamma * params.gamma * params.j.atoms());
  std::int64_t n_max = std::max<std::int64_t>(8, static_cast<std::int64_t>(guess));
  if (n_max > opts.n_max_ceiling) {
    throw NonConvergence("initial photon cutoff " + std::to_string(n_max) +
                         " exceeds the ceiling " + std::to_string(opts.n_max_ceiling));
  }
  auto previous = solve(n_max);
  double gap = -1.0;
  while (2 * n_max <= opts.n_max_ceiling) {
    auto current = solve(2 * n_max);
    gap = std::abs(current.second.energy - previous.second.energy);
    n_max *= 2;
    if (gap < tol) {
      ExactSolution out;
      out.basis = current.first;
      out.ground_energy = current.second.energy;
      out.residual = current.second.residual;
      const ExactObservables obs = exact_observables(current.second.vector, out.basis);
      out.photons_per_atom = obs.photons_per_atom;
      out.jz_per_j = obs.jz_per_j;
      out.n_max_used = n_max;
      out.cutoff_gap = gap;
      out.ground_vector = std::move(current.second.vector);
      return out;
    }
    previous = std::move(current);
  }
  std::ostringstream msg;
  msg << "photon cutoff did not converge below " << tol << " up to n_max = " << n_max
      << " (ceiling " << opts.n_max_ceiling << "), last gap ";
  if (gap < 0.0) msg << "n/a"; else msg << gap;
  throw NonConvergence(msg.str());
}

void write_ground_state_json(const ExactSolution& sol, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["basis"] = {{"j", sol.basis.j.value()},
                  {"twice_j", sol.basis.j.twice()},
                  {"n_max", sol.basis.n_max},
                  {"dimension", sol.basis.dimension()},
                  {"ordering", "n-major, m ascending: index = n*(2j+1) + (m+j)"}};
  doc["ground_energy"] = sol.ground_energy;
  doc["cutoff_gap"] = sol.cutoff_gap;
  doc["amplitudes"] = sol.ground_vector;
  out << doc.dump(1) << '\n';
}

}  // namespace dicke

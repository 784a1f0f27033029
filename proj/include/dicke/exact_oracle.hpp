#pragma once

// Exact diagonalization of the Dicke Hamiltonian
//
//   H = a^dag a + omega_a J_z + gamma/sqrt(N) (a^dag + a)(J_- + J_+),  N = 2j,
//
// in the symmetric j = N/2 sector, on a truncated photon Fock space.  Used as
// an independent check of the mean-field results.
//
// Basis ordering: n-major, m ascending.  State (n, m) sits at index
// n * (2j + 1) + (m + j), n = 0..n_max, m = -j..j.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/sparse.hpp"

namespace dicke {

struct BasisSpec {
  HalfInteger j;
  std::int64_t n_max = 1;

  std::int64_t spin_states() const { return j.twice() + 1; }
  std::int64_t dimension() const { return (n_max + 1) * spin_states(); }
  /// m_index = m + j in 0..2j.
  std::int64_t index(std::int64_t n, std::int64_t m_index) const {
    return n * spin_states() + m_index;
  }
  std::int64_t photons_of(std::int64_t index) const { return index / spin_states(); }
  std::int64_t m_index_of(std::int64_t index) const { return index % spin_states(); }
  /// Parity of n + m + j, conserved by H.
  int parity_of(std::int64_t index) const {
    return static_cast<int>((photons_of(index) + m_index_of(index)) % 2);
  }
};

inline constexpr std::size_t kDefaultMaxNonzeros = 2'000'000;

/// Throws DomainError when n_max < 1 or the nonzero count exceeds max_nonzeros.
CsrMatrix build_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                            std::size_t max_nonzeros = kDefaultMaxNonzeros);

struct EigenOptions {
  /// Dense solver at or below this dimension, restarted Lanczos above.
  std::int64_t dense_limit = 512;
  int krylov_dim = 80;
  int max_restarts = 400;
  /// Required ||Hv - Ev|| / max(1, |E|).
  double residual_tol = 1e-8;
};

struct Eigenpair {
  double energy = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  /// Matrix-vector products (Lanczos) or 0 for the dense path.
  int matvecs = 0;
};

/// Lowest eigenpair of a symmetric matrix.  The Lanczos path is seeded with
/// basis vector 0 plus a small deterministic perturbation.  The returned
/// vector has unit norm and a positive largest-magnitude component.
Eigenpair ground_state(const CsrMatrix& h, const EigenOptions& opts = {});

/// Lowest eigenpair found by diagonalizing each parity block separately; the
/// vector is supported on a single block.  Ties go to the even block.
Eigenpair ground_state_by_parity(const CsrMatrix& h, const BasisSpec& basis,
                                 const EigenOptions& opts = {});

struct ExactObservables {
  double photons_per_atom = 0.0;
  double jz_per_j = 0.0;
};

/// <a^dag a>/2j and <J_z>/j of a unit-norm vector in basis order.
ExactObservables exact_observables(std::span<const double> vector, const BasisSpec& basis);

struct CutoffOptions {
  std::int64_t n_max_ceiling = 4096;
  std::size_t max_nonzeros = kDefaultMaxNonzeros;
  EigenOptions eigen;
};

struct ExactSolution {
  double ground_energy = 0.0;
  double photons_per_atom = 0.0;
  double jz_per_j = 0.0;
  std::int64_t n_max_used = 0;
  /// |E(n_max_used) - E(n_max_used / 2)|.
  double cutoff_gap = 0.0;
  double residual = 0.0;
  BasisSpec basis;
  std::vector<double> ground_vector;
};

/// Doubles n_max from max(8, ceil(4 gamma^2 2j)) until consecutive ground
/// energies agree within tol.  Throws NonConvergence past n_max_ceiling.
ExactSolution converge_cutoff(const ModelParams& params, double tol,
                              const CutoffOptions& opts = {});

/// JSON document: basis header, energy, and amplitudes in basis order.
void write_ground_state_json(const ExactSolution& sol, std::ostream& out);

}  // namespace dicke

#pragma once

// Exact log-partition functions and free energies for the finite box, the
// infinite-height box and the slice-weighted box, plus the resummed series
// evaluator for the first two.

#include <cstdint>
#include <span>
#include <vector>

#include "hexdimer/model_core.hpp"
#include "hexdimer/scenario.hpp"
#include "hexdimer/weights.hpp"

namespace hexdimer::exact {

struct FreeEnergySample {
  std::int64_t inv_eps = 1;
  double eps = 1.0;
  double f = 0.0;
};

struct SeriesSettings {
  double term_tol = 1e-16;
  std::int64_t n_max_cap = 10'000'000;

  void validate() const;
};

/// ln Z of the finite box from the MacMahon product, q in (0, 1).
double log_z_macmahon(const BoxShape& shape, double q);

/// ln Z of the M x N box of infinite height, q in (0, 1). The shape's k must
/// be unbounded.
double log_z_infinite(const BoxShape& shape, double q);

/// Same two products parametrised by beta = -ln q > 0, which avoids the
/// rounding of q = e^{-eps} in the scaling limit.
double log_z_macmahon_beta(const BoxShape& shape, double beta);
double log_z_infinite_beta(std::int64_t m, std::int64_t n, double beta);

/*!
  ln Z of the infinite-height m x n box with slice weights
  q_t = exp(-eps phi(t eps)).

    ln Z = -sum_{i<n, j<m} ln(1 - exp(-S_ij)),
    S_ij = eps sum_{k=0}^{i} phi((n-m-k) eps) + eps sum_{l=1}^{j} phi((n-m+l) eps)

  Both partial sums are plain running sums in index order. Throws DomainError
  if some S_ij <= 0.
*/
double log_z_sliced(std::int64_t m, std::int64_t n, const SliceFunction& phi, double eps);

/// Free energy of a lattice box with uniform weight q: -ln Z / V for a finite
/// box, +ln Z / (MN) for infinite height.
double free_energy(const BoxShape& shape, double q);

/// Free energy of a scenario at mesh 1/inv_eps. Sides a/eps etc. must be
/// integers.
FreeEnergySample free_energy(const Scenario& scenario, std::int64_t inv_eps);

/// free_energy over a grid of meshes, evaluated on up to `threads` workers
/// and returned in input order.
std::vector<FreeEnergySample> free_energy_grid(const Scenario& scenario,
                                               std::span<const std::int64_t> inv_eps, unsigned threads = 1);

/*!
  Resummed form of the free energy:

    finite:    f = -1/(2(ab+bc+ca)) sum_n chi(n eps) H_n / n^3,  H_n = prod_{x=a,b,c} (1 - e^{-n x})
    infinite:  f = +1/(ab)          sum_n chi(n eps) H_n / n^3,  H_n = (1 - e^{-n a})(1 - e^{-n b})

  The variant is finite when scaled.c is set. Terms are added in ascending n
  until the bound chi(n eps) / (2 n^2) on the remaining tail, times the
  prefactor, drops below term_tol. Throws NumericalError with the partial sum
  when n_max_cap terms were not enough.
*/
double series_free_energy(const ScaledShape& scaled, const SeriesSettings& settings = {});

/// The first `count` terms of the series above, prefactor included.
std::vector<double> series_terms(const ScaledShape& scaled, std::int64_t count);

}  // namespace hexdimer::exact

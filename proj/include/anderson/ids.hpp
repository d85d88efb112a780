#pragma once

#include <cstdint>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/eigensolve.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

/// Disorder-averaged eigenvalue counting per unit volume for one box size.
struct IdsRecord {
  double L = 0.0;  // physical side, m*h
  int m = 0;
  int realizations = 0;
  std::vector<double> n_mean;    // per energy-grid point
  std::vector<double> n_stderr;  // sample std / sqrt(R)
};

struct IdsCurve {
  std::vector<double> energies;  // ascending
  int axes = 1;                  // n*d
  double h = 1.0;
  std::vector<IdsRecord> records;  // ascending L
};

// Mean over R realizations of count_below / volume, per box side and energy.
// Aggregation is by realization index, so results do not depend on worker
// count or evaluation order.
IdsCurve estimate_ids(const ModelSpec& model, bool include_interaction,
                      const std::vector<double>& L_list,
                      const std::vector<double>& energies,
                      const DisorderSpec& disorder, int workers = 1);

struct LifshitzFit {
  double slope = 0.0;      // target -d/2
  double gamma_hat = 0.0;  // exp(intercept)
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual_rms = 0.0;
  double e0 = 0.0;
  int points = 0;
};

// Least squares on (log(E - e0), log(-log Ntilde)) over the largest-L record,
// where Ntilde = N * h^(n*d) is the filled fraction. Every point inside the
// window must satisfy 0 < Ntilde < 1.
LifshitzFit fit_lifshitz(const IdsCurve& curve, double e0, double window_lo,
                         double window_hi);

// Default fit window: energies of the largest-L record whose filled fraction
// lies in [n_lo, n_hi].
std::pair<double, double> default_fit_window(const IdsCurve& curve, double n_lo,
                                             double n_hi);

// Exact non-interacting count: number of index tuples (k_1..k_n) with
// sum of single-particle eigenvalues <= energy, by full enumeration.
std::int64_t free_ids_by_convolution(const SpectrumResult& single_particle,
                                     int n, double energy);

struct CompareRow {
  double L = 0.0;
  int m = 0;
  int realizations = 0;
  double e_probe = 0.0;
  double n_int = 0.0;
  double n_free = 0.0;
  double delta = 0.0;    // |n_int - n_free|
  double stderr_ = 0.0;  // paired standard error of the difference
  std::vector<std::int64_t> counts_int;   // per realization
  std::vector<std::int64_t> counts_free;  // per realization
};

// Paired comparison: the same realization feeds both the interacting and the
// interaction-free operator, and both are counted at the probe energy.
std::vector<CompareRow> compare_free_vs_interacting(
    const ModelSpec& model, double e_probe, const std::vector<double>& L_list,
    const DisorderSpec& disorder, int workers = 1);

namespace detail {
// L/h must be an integer box side; errors otherwise.
int box_sites_from_side(double L, double h);
}  // namespace detail

}  // namespace anderson

#pragma once

#include <cstdint>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/eigensolve.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

/// Particle basepoints spaced so that every pair is farther apart (max-norm)
/// than r0 + 2*k*m. The explicit sequence uses spacing C = floor(r0)+2km+1
/// at integer multiples (1, 2, ..., n*d), reshaped to n positions in Z^d.
struct SeparatedBasepoints {
  int n = 1;
  int d = 1;
  int k = 1;
  int m = 1;
  double r0 = 0.0;
  std::int64_t spacing = 0;          // C_{k,m}
  std::vector<std::int64_t> coords;  // n*d, particle-major

  std::int64_t min_pair_separation() const;  // max-norm, +inf-like for n=1
  bool separated() const;                    // min separation > r0 + 2km
};

SeparatedBasepoints separated_basepoints(int n, int d, double r0, int k, int m);

/// Tensor product of per-particle sine bumps, each supported on a cube of
/// side `bump_side` around its basepoint. Zero outside the product cube.
struct WeylTrialState {
  int bump_side = 0;
  std::vector<std::int64_t> support_start;  // n*d, first site of each cube
  std::vector<Eigen::VectorXd> factors;     // per particle, unit norm
  Eigen::VectorXd state;                    // full tensor vector, unit norm
};

// The factor profile is the ground profile of a bump_side-site box
// (half-period sine). Errors if a support cube overflows the grid, with the
// minimal grid side in the message; errors if supports are not pairwise
// farther apart than the kernel range.
WeylTrialState build_trial_state(const LatticeCube& cube,
                                 const SeparatedBasepoints& basepoints,
                                 int bump_side, double range_r0,
                                 PairNorm norm = PairNorm::Max);

// Same placement, caller-supplied per-axis profiles (test hook for arbitrary
// compactly supported factors).
WeylTrialState assemble_trial_state(const LatticeCube& cube,
                                    const SeparatedBasepoints& basepoints,
                                    int bump_side,
                                    const std::vector<std::vector<double>>& axis_profiles,
                                    double range_r0, PairNorm norm = PairNorm::Max);

struct RayleighResult {
  double quotient = 0.0;  // <v,Hv>/<v,v>
  double residual = 0.0;  // ||Hv||/||v||
};

RayleighResult rayleigh_quotient(const HamiltonianMatrix& H,
                                 const Eigen::VectorXd& state);

struct EdgeScanRow {
  double L = 0.0;
  int m = 0;
  int realizations = 0;
  double median_e0 = 0.0;
  double iqr_e0 = 0.0;
  std::vector<double> minima;  // per realization, by index
};

// Median and interquartile range of the smallest eigenvalue over R
// realizations, per box side; rows ascending in L.
std::vector<EdgeScanRow> edge_scan(const ModelSpec& model,
                                   const std::vector<double>& L_list,
                                   const DisorderSpec& disorder, double tol,
                                   int workers = 1);

namespace detail {
double quantile_sorted(const std::vector<double>& sorted, double p);
}

}  // namespace anderson

#include "anderson/edge_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "anderson/ids.hpp"
#include "anderson/parallel.hpp"

namespace anderson {

namespace {

// Max-norm (or Euclidean) distance between two axis-aligned site boxes of
// equal side, in lattice units: per-axis interval gaps combined by the norm.
double box_distance(const std::vector<std::int64_t>& starts, int side, int p,
                    int q, int d, PairNorm norm) {
  double max_gap = 0.0;
  double sum2 = 0.0;
  for (int l = 0; l < d; ++l) {
    const std::int64_t a = starts[static_cast<std::size_t>(p * d + l)];
    const std::int64_t b = starts[static_cast<std::size_t>(q * d + l)];
    const std::int64_t lo = std::min(a, b);
    const std::int64_t hi = std::max(a, b);
    const std::int64_t gap = std::max<std::int64_t>(0, hi - (lo + side - 1));
    max_gap = std::max(max_gap, static_cast<double>(gap));
    sum2 += static_cast<double>(gap) * static_cast<double>(gap);
  }
  return norm == PairNorm::Max ? max_gap : std::sqrt(sum2);
}

}  // namespace

std::int64_t SeparatedBasepoints::min_pair_separation() const {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      std::int64_t dmax = 0;
      for (int l = 0; l < d; ++l) {
        const std::int64_t delta =
            std::abs(coords[static_cast<std::size_t>(p * d + l)] -
                     coords[static_cast<std::size_t>(q * d + l)]);
        dmax = std::max(dmax, delta);
      }
      best = std::min(best, dmax);
    }
  }
  return best;
}

bool SeparatedBasepoints::separated() const {
  if (n < 2) return true;  // vacuous for a single particle
  return static_cast<double>(min_pair_separation()) >
         r0 + 2.0 * static_cast<double>(k) * static_cast<double>(m);
}

SeparatedBasepoints separated_basepoints(int n, int d, double r0, int k, int m) {
  if (n < 1 || d < 1 || k < 1 || m < 1) {
    throw std::invalid_argument("separated_basepoints: n, d, k, m must be positive");
  }
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("separated_basepoints: r0 must be positive");
  }
  SeparatedBasepoints bp;
  bp.n = n;
  bp.d = d;
  bp.k = k;
  bp.m = m;
  bp.r0 = r0;
  // Smallest integer spacing exceeding r0 + 2km; equals r0 + 2km + 1 for
  // integer ranges.
  bp.spacing = static_cast<std::int64_t>(std::floor(r0)) +
               2 * static_cast<std::int64_t>(k) * m + 1;
  bp.coords.resize(static_cast<std::size_t>(n * d));
  for (int a = 0; a < n * d; ++a) {
    bp.coords[static_cast<std::size_t>(a)] = bp.spacing * (a + 1);
  }
  if (!bp.separated()) {
    throw std::runtime_error("separated_basepoints: constructed points violate the separation bound");
  }
  return bp;
}

WeylTrialState assemble_trial_state(
    const LatticeCube& cube, const SeparatedBasepoints& basepoints, int bump_side,
    const std::vector<std::vector<double>>& axis_profiles, double range_r0,
    PairNorm norm) {
  const int n = cube.params.n;
  const int d = cube.params.d;
  const int axes = n * d;
  if (basepoints.n != n || basepoints.d != d) {
    throw std::invalid_argument("assemble_trial_state: basepoints do not match the grid");
  }
  if (bump_side < 1) {
    throw std::invalid_argument("assemble_trial_state: bump side must be positive");
  }
  if (static_cast<int>(axis_profiles.size()) != axes) {
    throw std::invalid_argument("assemble_trial_state: need one profile per axis");
  }
  for (const auto& prof : axis_profiles) {
    if (static_cast<int>(prof.size()) != bump_side) {
      throw std::invalid_argument("assemble_trial_state: profile length must equal the bump side");
    }
  }

  WeylTrialState trial;
  trial.bump_side = bump_side;
  trial.support_start.resize(static_cast<std::size_t>(axes));
  std::int64_t max_needed = 0;
  for (int a = 0; a < axes; ++a) {
    const std::int64_t start =
        basepoints.coords[static_cast<std::size_t>(a)] - bump_side / 2;
    trial.support_start[static_cast<std::size_t>(a)] = start;
    max_needed = std::max(max_needed, start + bump_side);
    if (start < 0 || start + bump_side > cube.params.m) {
      const std::int64_t suggested =
          basepoints.spacing * axes + bump_side + 2;
      throw std::invalid_argument(
          "assemble_trial_state: support cube [" + std::to_string(start) + ", " +
          std::to_string(start + bump_side) + ") overflows the grid side m = " +
          std::to_string(cube.params.m) + "; minimal grid side = " +
          std::to_string(suggested));
    }
  }

  // The supports must stay pairwise farther apart than the interaction range,
  // otherwise the pair potential no longer vanishes on the product support.
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double dist =
          cube.params.h *
          box_distance(trial.support_start, bump_side, p, q, d, norm);
      if (!(dist > range_r0)) {
        throw std::invalid_argument(
            "assemble_trial_state: supports of particles " + std::to_string(p) +
            " and " + std::to_string(q) + " are " + std::to_string(dist) +
            " apart, not beyond the interaction range " + std::to_string(range_r0));
      }
    }
  }

  // Per-particle factors on the single-particle grid, unit-normalized.
  trial.factors.assign(static_cast<std::size_t>(n),
                       Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cube.sp_sites)));
  std::vector<int> local(static_cast<std::size_t>(d), 0);
  for (int p = 0; p < n; ++p) {
    Eigen::VectorXd& factor = trial.factors[static_cast<std::size_t>(p)];
    std::fill(local.begin(), local.end(), 0);
    for (;;) {
      double val = 1.0;
      std::int64_t site = 0;
      for (int l = 0; l < d; ++l) {
        const int a = p * d + l;
        const int c = static_cast<int>(trial.support_start[static_cast<std::size_t>(a)]) +
                      local[static_cast<std::size_t>(l)];
        val *= axis_profiles[static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(local[static_cast<std::size_t>(l)])];
        site = site * cube.params.m + c;
      }
      factor[static_cast<Eigen::Index>(site)] = val;
      int l = d - 1;
      for (; l >= 0; --l) {
        if (++local[static_cast<std::size_t>(l)] < bump_side) break;
        local[static_cast<std::size_t>(l)] = 0;
      }
      if (l < 0) break;
    }
    const double norm2 = factor.norm();
    if (!(norm2 > 0.0)) {
      throw std::invalid_argument("assemble_trial_state: zero factor profile");
    }
    factor /= norm2;
  }

  // Tensor product over the support only; everything else stays exactly zero.
  trial.state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cube.dim));
  std::vector<int> cfg(static_cast<std::size_t>(axes), 0);
  std::vector<int> coords(static_cast<std::size_t>(axes), 0);
  for (;;) {
    double val = 1.0;
    for (int p = 0; p < n; ++p) {
      std::int64_t site = 0;
      for (int l = 0; l < d; ++l) {
        const int a = p * d + l;
        const int c = static_cast<int>(trial.support_start[static_cast<std::size_t>(a)]) +
                      cfg[static_cast<std::size_t>(a)];
        coords[static_cast<std::size_t>(a)] = c;
        site = site * cube.params.m + c;
      }
      val *= trial.factors[static_cast<std::size_t>(p)][static_cast<Eigen::Index>(site)];
    }
    trial.state[static_cast<Eigen::Index>(cube.encode(coords))] = val;
    int a = axes - 1;
    for (; a >= 0; --a) {
      if (++cfg[static_cast<std::size_t>(a)] < bump_side) break;
      cfg[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  trial.state.normalize();
  return trial;
}

WeylTrialState build_trial_state(const LatticeCube& cube,
                                 const SeparatedBasepoints& basepoints,
                                 int bump_side, double range_r0, PairNorm norm) {
  if (bump_side < 1) {
    throw std::invalid_argument("build_trial_state: bump side must be positive");
  }
  const int axes = cube.params.axes();
  // Ground profile of a bump_side-site box: half-period sine vanishing one
  // site outside the cube on both ends.
  std::vector<double> bump(static_cast<std::size_t>(bump_side));
  const double pi = std::acos(-1.0);
  for (int t = 0; t < bump_side; ++t) {
    bump[static_cast<std::size_t>(t)] = std::sin(pi * (t + 1) / (bump_side + 1));
  }
  std::vector<std::vector<double>> profiles(static_cast<std::size_t>(axes), bump);
  return assemble_trial_state(cube, basepoints, bump_side, profiles, range_r0, norm);
}

RayleighResult rayleigh_quotient(const HamiltonianMatrix& H,
                                 const Eigen::VectorXd& state) {
  if (state.size() != H.dim()) {
    throw std::invalid_argument("rayleigh_quotient: state dimension mismatch");
  }
  const double norm2 = state.squaredNorm();
  if (!(norm2 > 0.0)) {
    throw std::invalid_argument("rayleigh_quotient: zero state");
  }
  const Eigen::VectorXd hv = H.mat * state;
  RayleighResult out;
  out.quotient = state.dot(hv) / norm2;
  out.residual = hv.norm() / std::sqrt(norm2);
  return out;
}

namespace detail {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

std::vector<EdgeScanRow> edge_scan(const ModelSpec& model,
                                   const std::vector<double>& L_list,
                                   const DisorderSpec& disorder, double tol,
                                   int workers) {
  if (disorder.realization_count < 1) {
    throw std::invalid_argument("edge_scan: needs at least one realization");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("edge_scan: tol must be positive");
  std::vector<double> sides = L_list;
  std::sort(sides.begin(), sides.end());

  const int R = disorder.realization_count;
  std::vector<EdgeScanRow> rows;
  for (double L : sides) {
    const int m = detail::box_sites_from_side(L, model.h);
    std::int64_t sp_sites = 1;
    for (int l = 0; l < model.d; ++l) sp_sites *= m;

    EdgeScanRow row;
    row.L = m * model.h;
    row.m = m;
    row.realizations = R;
    row.minima.assign(static_cast<std::size_t>(R), 0.0);

    parallel_for_index(R, workers, [&](std::int64_t k) {
      const PotentialField field =
          sample_field(disorder, sp_sites, static_cast<int>(k));
      const HamiltonianMatrix H = build_hamiltonian(model, m, field, true);
      row.minima[static_cast<std::size_t>(k)] = smallest_eigenvalue(H, tol);
    });

    std::vector<double> sorted = row.minima;
    std::sort(sorted.begin(), sorted.end());
    row.median_e0 = detail::quantile_sorted(sorted, 0.5);
    row.iqr_e0 = detail::quantile_sorted(sorted, 0.75) -
                 detail::quantile_sorted(sorted, 0.25);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace anderson

#include "anderson/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anderson {

namespace {

// Eigen's sparse storage indexes with int; keep dimensions well inside it.
constexpr std::int64_t kHardDimLimit = 2'000'000'000;

void check_params(const ModelParams& p) {
  if (p.d < 1) throw std::invalid_argument("make_grid: d must be positive");
  if (p.n < 1) throw std::invalid_argument("make_grid: n must be positive");
  if (p.m < 1) throw std::invalid_argument("make_grid: m must be positive");
  if (!(p.h > 0.0)) throw std::invalid_argument("make_grid: h must be positive");
  if (p.dim_cap < 1) throw std::invalid_argument("make_grid: dim_cap must be positive");
}

std::int64_t checked_power(int m, int axes, std::int64_t cap, std::int64_t hard) {
  std::int64_t dim = 1;
  const std::int64_t limit = std::min(cap, hard);
  for (int a = 0; a < axes; ++a) {
    if (dim > limit / m) {
      throw std::invalid_argument(
          "make_grid: lattice dimension m^(n*d) = " + std::to_string(m) + "^" +
          std::to_string(axes) + " exceeds the configured cap " +
          std::to_string(cap));
    }
    dim *= m;
  }
  return dim;
}

}  // namespace

void LatticeCube::decode(std::int64_t flat, std::span<int> coords) const {
  const int axes = params.axes();
  for (int a = axes - 1; a >= 0; --a) {
    coords[static_cast<std::size_t>(a)] = static_cast<int>(flat % params.m);
    flat /= params.m;
  }
}

std::int64_t LatticeCube::encode(std::span<const int> coords) const {
  std::int64_t flat = 0;
  for (int a = 0; a < params.axes(); ++a) {
    flat = flat * params.m + coords[static_cast<std::size_t>(a)];
  }
  return flat;
}

std::int64_t LatticeCube::particle_site(std::span<const int> coords,
                                        int particle) const {
  std::int64_t site = 0;
  for (int l = 0; l < params.d; ++l) {
    site = site * params.m + coords[static_cast<std::size_t>(particle * params.d + l)];
  }
  return site;
}

double LatticeCube::volume() const {
  return std::pow(params.side(), params.axes());
}

LatticeCube make_grid(const ModelParams& params) {
  check_params(params);
  LatticeCube cube;
  cube.params = params;
  cube.dim = checked_power(params.m, params.axes(), params.dim_cap, kHardDimLimit);
  cube.sp_sites = 1;
  for (int l = 0; l < params.d; ++l) cube.sp_sites *= params.m;
  return cube;
}

double InteractionKernel::value(double r) const {
  if (kind == KernelKind::None || r0 <= 0.0) return 0.0;
  if (r > r0) return 0.0;  // exact cutoff
  switch (kind) {
    case KernelKind::HardSphere:
      return u0;
    case KernelKind::Yukawa:
      // Screened exponential; the short-distance singularity of the textbook
      // form is dropped so lattice values stay finite and bounded by u0.
      return u0 * std::exp(-r / r0);
    case KernelKind::Table: {
      if (table.empty()) return 0.0;
      const auto bins = static_cast<std::int64_t>(table.size());
      auto idx = static_cast<std::int64_t>(std::floor(r * bins / r0));
      if (idx < 0) idx = 0;
      if (idx >= bins) idx = bins - 1;
      return table[static_cast<std::size_t>(idx)];
    }
    case KernelKind::None:
      break;
  }
  return 0.0;
}

double InteractionKernel::max_value() const {
  if (kind == KernelKind::None || r0 <= 0.0) return 0.0;
  if (kind == KernelKind::Table) {
    double top = 0.0;
    for (double v : table) top = std::max(top, v);
    return top;
  }
  return u0;
}

HamiltonianMatrix build_laplacian(const LatticeCube& cube) {
  const int axes = cube.params.axes();
  const int m = cube.params.m;
  const double inv_h2 = 1.0 / (cube.params.h * cube.params.h);
  const double diag = 2.0 * axes * inv_h2;
  const double hop = -inv_h2;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(cube.dim) * (1 + axes));

  std::vector<int> coords(static_cast<std::size_t>(axes), 0);
  std::vector<std::int64_t> stride(static_cast<std::size_t>(axes));
  stride[static_cast<std::size_t>(axes - 1)] = 1;
  for (int a = axes - 2; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * m;
  }

  for (std::int64_t i = 0; i < cube.dim; ++i) {
    const auto ii = static_cast<int>(i);
    triplets.emplace_back(ii, ii, diag);
    for (int a = 0; a < axes; ++a) {
      if (coords[static_cast<std::size_t>(a)] + 1 < m) {
        const auto j = static_cast<int>(i + stride[static_cast<std::size_t>(a)]);
        triplets.emplace_back(ii, j, hop);
        triplets.emplace_back(j, ii, hop);
      }
    }
    // odometer increment of the coordinate tuple
    for (int a = axes - 1; a >= 0; --a) {
      if (++coords[static_cast<std::size_t>(a)] < m) break;
      coords[static_cast<std::size_t>(a)] = 0;
    }
  }

  HamiltonianMatrix H;
  H.h = cube.params.h;
  H.includes_interaction = false;
  H.mat.resize(static_cast<Eigen::Index>(cube.dim), static_cast<Eigen::Index>(cube.dim));
  H.mat.setFromTriplets(triplets.begin(), triplets.end());
  H.mat.makeCompressed();
  return H;
}

DiagonalField build_potential_diagonal(const LatticeCube& cube,
                                       const PotentialField& field) {
  if (static_cast<std::int64_t>(field.values.size()) != cube.sp_sites) {
    throw std::invalid_argument(
        "build_potential_diagonal: field length " +
        std::to_string(field.values.size()) + " does not match m^d = " +
        std::to_string(cube.sp_sites));
  }
  const int n = cube.params.n;
  DiagonalField out;
  out.values.resize(static_cast<Eigen::Index>(cube.dim));

  std::vector<int> coords(static_cast<std::size_t>(cube.params.axes()), 0);
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < cube.dim; ++i) {
    cube.decode(i, coords);
    for (int p = 0; p < n; ++p) {
      terms[static_cast<std::size_t>(p)] =
          field.values[static_cast<std::size_t>(cube.particle_site(coords, p))];
    }
    // canonical summation order keeps the entry bitwise permutation-invariant
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    out.values[static_cast<Eigen::Index>(i)] = sum;
  }
  return out;
}

DiagonalField build_interaction_diagonal(const LatticeCube& cube,
                                         const InteractionKernel& kernel) {
  const int n = cube.params.n;
  const int d = cube.params.d;
  const double h = cube.params.h;
  DiagonalField out;
  out.values.resize(static_cast<Eigen::Index>(cube.dim));
  if (n < 2 || kernel.kind == KernelKind::None || kernel.r0 <= 0.0) {
    out.values.setZero();
    return out;
  }

  std::vector<int> coords(static_cast<std::size_t>(cube.params.axes()), 0);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (std::int64_t i = 0; i < cube.dim; ++i) {
    cube.decode(i, coords);
    terms.clear();
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double r = 0.0;
        if (kernel.norm == PairNorm::Max) {
          int dmax = 0;
          for (int l = 0; l < d; ++l) {
            const int delta = std::abs(coords[static_cast<std::size_t>(p * d + l)] -
                                       coords[static_cast<std::size_t>(q * d + l)]);
            dmax = std::max(dmax, delta);
          }
          r = h * dmax;
        } else {
          double s2 = 0.0;
          for (int l = 0; l < d; ++l) {
            const double delta = coords[static_cast<std::size_t>(p * d + l)] -
                                 coords[static_cast<std::size_t>(q * d + l)];
            s2 += delta * delta;
          }
          r = h * std::sqrt(s2);
        }
        terms.push_back(kernel.value(r));
      }
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    out.values[static_cast<Eigen::Index>(i)] = sum;
  }
  return out;
}

HamiltonianMatrix assemble_hamiltonian(const HamiltonianMatrix& laplacian,
                                       const DiagonalField& bv,
                                       const DiagonalField& bu,
                                       bool include_interaction) {
  const std::int64_t dim = laplacian.dim();
  if (bv.values.size() != dim ||
      (include_interaction && bu.values.size() != dim)) {
    throw std::invalid_argument(
        "assemble_hamiltonian: diagonal length does not match matrix dimension " +
        std::to_string(dim));
  }
  HamiltonianMatrix H;
  H.mat = laplacian.mat;
  H.h = laplacian.h;
  H.includes_interaction = include_interaction;
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double add = bv.values[ii];
    if (include_interaction) add += bu.values[ii];
    H.mat.coeffRef(ii, ii) += add;
  }
  return H;
}

HamiltonianMatrix build_hamiltonian(const ModelSpec& spec, int m,
                                    const PotentialField& field,
                                    bool include_interaction) {
  const LatticeCube cube = make_grid(spec.params(m));
  const HamiltonianMatrix lap = build_laplacian(cube);
  const DiagonalField bv = build_potential_diagonal(cube, field);
  DiagonalField bu;
  if (include_interaction) {
    bu = build_interaction_diagonal(cube, spec.kernel);
  } else {
    bu.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cube.dim));
  }
  return assemble_hamiltonian(lap, bv, bu, include_interaction);
}

}  // namespace anderson

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <span>
#include <vector>

#include "anderson/disorder.hpp"

namespace anderson {

enum class PairNorm { Max, Euclid };
enum class KernelKind { None, HardSphere, Yukawa, Table };

/// Geometry of one finite box: n particles in d dimensions, m interior
/// sites per axis, spacing h. The zero boundary sits one spacing outside
/// the stored grid, so the matrix dimension is exactly m^(n*d).
struct ModelParams {
  int d = 1;
  int n = 1;
  int m = 1;
  double h = 1.0;
  std::int64_t dim_cap = 1'000'000;

  int axes() const { return n * d; }
  double side() const { return m * h; }
};

struct LatticeCube {
  ModelParams params;
  std::int64_t dim = 0;       // m^(n*d)
  std::int64_t sp_sites = 0;  // m^d

  // Row-major flat index over the n*d coordinates, each in [0, m).
  // Axis a = particle*(d) + axis-within-particle; axis n*d-1 is fastest.
  void decode(std::int64_t flat, std::span<int> coords) const;
  std::int64_t encode(std::span<const int> coords) const;
  std::int64_t particle_site(std::span<const int> coords, int particle) const;
  double position(int coord) const { return params.h * (coord + 1); }
  double volume() const;
};

LatticeCube make_grid(const ModelParams& params);

/// Pair potential U(r): non-negative, exactly zero beyond the range r0.
/// A non-positive range means an empty interaction (identically zero).
struct InteractionKernel {
  KernelKind kind = KernelKind::None;
  double u0 = 0.0;
  double r0 = 0.0;
  std::vector<double> table;  // Table kind: equal bins on [0, r0]
  PairNorm norm = PairNorm::Max;

  double value(double r) const;
  double max_value() const;
};

struct DiagonalField {
  Eigen::VectorXd values;
};

struct HamiltonianMatrix {
  Eigen::SparseMatrix<double> mat;  // full symmetric storage
  double h = 1.0;
  bool includes_interaction = false;

  std::int64_t dim() const { return mat.rows(); }
};

// Second-order central differences with the zero boundary one spacing
// outside the grid: diagonal 2*n*d/h^2, off-diagonal -1/h^2 along each axis.
HamiltonianMatrix build_laplacian(const LatticeCube& cube);

// Entry at (x_1,...,x_n) is sum_i V(x_i); summed in a canonical order so the
// result is bitwise invariant under particle permutations.
DiagonalField build_potential_diagonal(const LatticeCube& cube,
                                       const PotentialField& field);

// Entry is sum over pairs i<j of U(|x_i - x_j|); exactly zero whenever all
// pairwise distances exceed the range.
DiagonalField build_interaction_diagonal(const LatticeCube& cube,
                                         const InteractionKernel& kernel);

// H = laplacian + diag(bv) [+ diag(bu)]. With the flag off the output does
// not depend on bu at all.
HamiltonianMatrix assemble_hamiltonian(const HamiltonianMatrix& laplacian,
                                       const DiagonalField& bv,
                                       const DiagonalField& bu,
                                       bool include_interaction);

/// Everything that defines the operator family except the box size.
struct ModelSpec {
  int d = 1;
  int n = 1;
  double h = 1.0;
  InteractionKernel kernel;
  std::int64_t dim_cap = 1'000'000;

  ModelParams params(int m) const {
    return ModelParams{d, n, m, h, dim_cap};
  }
};

// Full assembly pipeline for one realization on an m-site box.
HamiltonianMatrix build_hamiltonian(const ModelSpec& spec, int m,
                                    const PotentialField& field,
                                    bool include_interaction);

}  // namespace anderson

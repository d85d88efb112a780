#pragma once

#include <cstdint>
#include <vector>

#include "anderson/lattice.hpp"

namespace anderson {

inline constexpr std::int64_t kDenseCap = 2000;

enum class SpectrumMethod { Dense, Sturm, Lanczos };

struct SpectrumResult {
  std::vector<double> values;  // ascending
  SpectrumMethod method = SpectrumMethod::Dense;
};

/// Similarity-reduced tridiagonal form of a symmetric matrix. Built once per
/// matrix and reused across shifts; immutable afterwards.
struct TridiagonalForm {
  std::vector<double> diag;
  std::vector<double> sub;  // size dim-1

  std::int64_t dim() const { return static_cast<std::int64_t>(diag.size()); }
};

// Extracts directly when the matrix is already tridiagonal; otherwise runs a
// dense Householder reduction (guarded by a size cap since it needs dim^2
// workspace).
TridiagonalForm tridiagonal_form(const HamiltonianMatrix& H);

// All eigenvalues, ascending. Errors above the dense cap.
SpectrumResult dense_spectrum(const HamiltonianMatrix& H,
                              std::int64_t dense_cap = kDenseCap);

// Exact number of eigenvalues <= energy, by Sturm sign counts on the
// tridiagonal form. Values exactly equal to the shift are counted.
std::int64_t count_below(const TridiagonalForm& T, double energy);
std::int64_t count_below(const HamiltonianMatrix& H, double energy);

// Smallest eigenvalue to within tol: bisection on count_below at desk scale,
// Lanczos with full reorthogonalization above the dense cap, certified by a
// single Sturm count.
double smallest_eigenvalue(const HamiltonianMatrix& H, double tol,
                           std::int64_t dense_cap = kDenseCap);

namespace detail {
// Smallest eigenvalue of a raw tridiagonal by count bisection.
double tridiag_smallest(const TridiagonalForm& T, double tol);
// Lanczos with full reorthogonalization; returns the smallest Ritz value.
double lanczos_smallest(const Eigen::SparseMatrix<double>& A, double tol,
                        int max_iter = 300);
}  // namespace detail

}  // namespace anderson

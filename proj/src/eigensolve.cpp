#include "anderson/eigensolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace anderson {

namespace {

// Dense Householder reduction needs dim^2 workspace; keep it at desk scale.
constexpr std::int64_t kTridiagDenseCap = 4000;

constexpr std::uint64_t kStartVectorSalt = 0x5DEECE66Dull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

bool extract_if_tridiagonal(const Eigen::SparseMatrix<double>& A,
                            TridiagonalForm& T) {
  const std::int64_t n = A.rows();
  T.diag.assign(static_cast<std::size_t>(n), 0.0);
  T.sub.assign(static_cast<std::size_t>(n > 0 ? n - 1 : 0), 0.0);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      const std::int64_t i = it.row();
      const std::int64_t j = it.col();
      if (std::abs(i - j) > 1) return false;
      if (i == j) {
        T.diag[static_cast<std::size_t>(i)] = it.value();
      } else if (i == j + 1) {
        T.sub[static_cast<std::size_t>(j)] = it.value();
      }
    }
  }
  return true;
}

// Symmetric Householder reduction to tridiagonal form, eigenvalues only.
// Full square storage; reflectors are applied as A <- A - v w^T - w v^T.
void householder_reduce(std::vector<double>& a, std::int64_t n,
                        std::vector<double>& diag, std::vector<double>& sub) {
  diag.assign(static_cast<std::size_t>(n), 0.0);
  sub.assign(static_cast<std::size_t>(n > 0 ? n - 1 : 0), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);

  for (std::int64_t k = 0; k + 2 < n; ++k) {
    const double x0 = a[static_cast<std::size_t>((k + 1) * n + k)];
    double tail = 0.0;
    for (std::int64_t i = k + 2; i < n; ++i) {
      const double x = a[static_cast<std::size_t>(i * n + k)];
      tail += x * x;
    }
    if (tail == 0.0) {
      sub[static_cast<std::size_t>(k)] = x0;  // column already tridiagonal
      continue;
    }
    const double sigma = std::sqrt(x0 * x0 + tail);
    const double alpha = x0 >= 0.0 ? -sigma : sigma;
    sub[static_cast<std::size_t>(k)] = alpha;

    const double v0 = x0 - alpha;
    const double beta = 2.0 / (v0 * v0 + tail);  // 2 / ||v||^2
    v[static_cast<std::size_t>(k + 1)] = v0;
    for (std::int64_t i = k + 2; i < n; ++i) {
      v[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i * n + k)];
    }

    // w = beta*A22*v - (beta^2/2)(v.A22.v) v
    double vp = 0.0;
    for (std::int64_t i = k + 1; i < n; ++i) {
      const double* row = &a[static_cast<std::size_t>(i * n)];
      double s = 0.0;
      for (std::int64_t j = k + 1; j < n; ++j) {
        s += row[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      }
      w[static_cast<std::size_t>(i)] = beta * s;
      vp += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    }
    const double kappa = 0.5 * beta * vp;
    for (std::int64_t i = k + 1; i < n; ++i) {
      w[static_cast<std::size_t>(i)] -= kappa * v[static_cast<std::size_t>(i)];
    }

    for (std::int64_t i = k + 1; i < n; ++i) {
      const double vi = v[static_cast<std::size_t>(i)];
      const double wi = w[static_cast<std::size_t>(i)];
      double* row = &a[static_cast<std::size_t>(i * n)];
      for (std::int64_t j = k + 1; j < n; ++j) {
        row[static_cast<std::size_t>(j)] -=
            vi * w[static_cast<std::size_t>(j)] + wi * v[static_cast<std::size_t>(j)];
      }
    }
  }

  for (std::int64_t i = 0; i < n; ++i) {
    diag[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i * n + i)];
  }
  if (n >= 2) {
    sub[static_cast<std::size_t>(n - 2)] =
        a[static_cast<std::size_t>((n - 1) * n + (n - 2))];
  }
}

// Spectrum bounds from Gershgorin discs of the tridiagonal form.
std::pair<double, double> gershgorin(const TridiagonalForm& T) {
  const std::int64_t n = T.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(T.sub[static_cast<std::size_t>(i - 1)]);
    if (i + 1 < n) radius += std::abs(T.sub[static_cast<std::size_t>(i)]);
    lo = std::min(lo, T.diag[static_cast<std::size_t>(i)] - radius);
    hi = std::max(hi, T.diag[static_cast<std::size_t>(i)] + radius);
  }
  return {lo, hi};
}

// Bisection on the counting function; the caller guarantees count(hi) >= 1.
double bisect_smallest(const TridiagonalForm& T, double lo, double hi, double tol) {
  if (count_below(T, lo) >= 1) return lo;  // minimum sits exactly on the bound
  constexpr int kMaxIter = 240;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // fp resolution exhausted
    if (count_below(T, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw std::runtime_error(
      "smallest_eigenvalue: bisection did not reach width " + std::to_string(tol) +
      "; last bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

TridiagonalForm tridiagonal_form(const HamiltonianMatrix& H) {
  const std::int64_t n = H.dim();
  if (n == 0) throw std::invalid_argument("tridiagonal_form: empty matrix");
  TridiagonalForm T;
  if (extract_if_tridiagonal(H.mat, T)) return T;
  if (n > kTridiagDenseCap) {
    throw std::invalid_argument(
        "tridiagonal_form: dimension " + std::to_string(n) +
        " exceeds the dense reduction cap " + std::to_string(kTridiagDenseCap) +
        " and the matrix is not tridiagonal");
  }
  std::vector<double> dense(static_cast<std::size_t>(n * n), 0.0);
  for (int k = 0; k < H.mat.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H.mat, k); it; ++it) {
      dense[static_cast<std::size_t>(it.row() * n + it.col())] = it.value();
    }
  }
  householder_reduce(dense, n, T.diag, T.sub);
  return T;
}

SpectrumResult dense_spectrum(const HamiltonianMatrix& H, std::int64_t dense_cap) {
  const std::int64_t n = H.dim();
  if (n > dense_cap) {
    throw std::invalid_argument("dense_spectrum: dimension " + std::to_string(n) +
                                " exceeds the dense cap " + std::to_string(dense_cap));
  }
  Eigen::MatrixXd dense(H.mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense_spectrum: eigenvalue iteration failed");
  }
  SpectrumResult out;
  out.method = SpectrumMethod::Dense;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  return out;
}

std::int64_t count_below(const TridiagonalForm& T, double energy) {
  const std::int64_t n = T.dim();
  double b2max = 0.0;
  for (double b : T.sub) b2max = std::max(b2max, b * b);
  // Zero pivots are clamped negative, so eigenvalues exactly at the shift
  // are counted: this realizes counting over the closed half-line.
  const double pivmin =
      std::numeric_limits<double>::min() * std::max(1.0, b2max);

  std::int64_t count = 0;
  double q = 1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double piv = T.diag[static_cast<std::size_t>(i)] - energy;
    if (i > 0) {
      const double b = T.sub[static_cast<std::size_t>(i - 1)];
      piv -= b * b / q;
    }
    if (piv <= pivmin) {
      ++count;
      piv = std::min(piv, -pivmin);
    }
    q = piv;
  }
  return count;
}

std::int64_t count_below(const HamiltonianMatrix& H, double energy) {
  return count_below(tridiagonal_form(H), energy);
}

namespace detail {

double tridiag_smallest(const TridiagonalForm& T, double tol) {
  auto [lo, hi] = gershgorin(T);
  return bisect_smallest(T, lo, hi, tol);
}

double lanczos_smallest(const Eigen::SparseMatrix<double>& A, double tol,
                        int max_iter) {
  const std::int64_t n = A.rows();
  max_iter = static_cast<int>(std::min<std::int64_t>(max_iter, n));

  Eigen::VectorXd v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    v[static_cast<Eigen::Index>(i)] =
        static_cast<double>(mix64(static_cast<std::uint64_t>(i) + kStartVectorSalt) >> 11) *
            0x1.0p-52 -
        1.0;
  }
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  basis.push_back(v);
  TridiagonalForm T;
  double theta_prev = std::numeric_limits<double>::infinity();
  double theta = theta_prev;
  int stable = 0;

  for (int j = 0; j < max_iter; ++j) {
    Eigen::VectorXd w = A * basis.back();
    const double alpha = basis.back().dot(w);
    T.diag.push_back(alpha);

    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    const double beta = w.norm();

    if (!T.diag.empty() && T.dim() >= 1) {
      theta = tridiag_smallest(T, std::max(tol / 16.0, 1e-15));
      if (std::abs(theta - theta_prev) <=
          std::max(tol / 16.0, 1e-14 * std::abs(theta))) {
        if (++stable >= 3) return theta;
      } else {
        stable = 0;
      }
      theta_prev = theta;
    }

    if (beta <= 1e-13 * std::max(1.0, std::abs(alpha))) {
      return theta;  // invariant subspace reached
    }
    T.sub.push_back(beta);
    basis.push_back(w / beta);
  }
  return theta;
}

}  // namespace detail

double smallest_eigenvalue(const HamiltonianMatrix& H, double tol,
                           std::int64_t dense_cap) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("smallest_eigenvalue: tol must be positive");
  }
  const std::int64_t n = H.dim();

  // The Sturm bisection is exact and cheap whenever the tridiagonal form is
  // available; the Lanczos path only pays off for large non-tridiagonal input.
  TridiagonalForm T;
  const bool already_tridiagonal = extract_if_tridiagonal(H.mat, T);
  if (already_tridiagonal || n <= dense_cap) {
    if (!already_tridiagonal) T = tridiagonal_form(H);
    return detail::tridiag_smallest(T, tol);
  }

  const double theta = detail::lanczos_smallest(H.mat, tol);
  // One Sturm count certifies the Ritz value: nothing lies below theta - tol,
  // and theta itself is an upper bound by the variational principle.
  T = tridiagonal_form(H);
  if (count_below(T, theta - tol) == 0) return theta;
  return detail::tridiag_smallest(T, tol);
}

}  // namespace anderson

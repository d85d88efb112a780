#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "anderson/edge_probe.hpp"
#include "anderson/eigensolve.hpp"
#include "anderson/ids.hpp"

using namespace anderson;

namespace {

constexpr double kPi = 3.14159265358979323846;

double box_ground_energy(int sites, int axes, double h) {
  return 2.0 * axes * (1.0 - std::cos(kPi / (sites + 1))) / (h * h);
}

PotentialField zero_field(std::int64_t sites) {
  PotentialField f;
  f.values.assign(static_cast<std::size_t>(sites), 0.0);
  return f;
}

struct WeylSetup {
  LatticeCube cube;
  HamiltonianMatrix h_full;
  HamiltonianMatrix h_free;
  DiagonalField bu;
  WeylTrialState trial;
};

// Standard probe: hard-sphere pair kernel, basepoints from (k, m), bump on
// the full separation support cube of side 2km, V = 0.
WeylSetup make_weyl_setup(int n, int d, double r0, int k, int m) {
  const SeparatedBasepoints bp = separated_basepoints(n, d, r0, k, m);
  const int bump_side = 2 * k * m;
  const auto grid_side = static_cast<int>(bp.spacing * n * d + bump_side + 2);
  WeylSetup s{make_grid({d, n, grid_side, 1.0, 100'000'000}), {}, {}, {}, {}};

  const HamiltonianMatrix lap = build_laplacian(s.cube);
  const DiagonalField bv = build_potential_diagonal(s.cube, zero_field(s.cube.sp_sites));
  InteractionKernel kernel{KernelKind::HardSphere, 1.0, r0, {}, PairNorm::Max};
  s.bu = build_interaction_diagonal(s.cube, kernel);
  s.h_full = assemble_hamiltonian(lap, bv, s.bu, true);
  s.h_free = assemble_hamiltonian(lap, bv, s.bu, false);
  s.trial = build_trial_state(s.cube, bp, bump_side, r0);
  return s;
}

}  // namespace

TEST_CASE("explicit basepoints land inside the separated set") {
  const SeparatedBasepoints a = separated_basepoints(2, 1, 2.0, 1, 1);
  CHECK(a.spacing == 5);
  CHECK(a.coords == std::vector<std::int64_t>{5, 10});
  CHECK(a.min_pair_separation() == 5);
  CHECK(a.separated());  // 5 > r0 + 2km = 4

  const SeparatedBasepoints single = separated_basepoints(1, 2, 3.0, 2, 4);
  CHECK(single.separated());  // vacuous for one particle

  const SeparatedBasepoints b = separated_basepoints(2, 2, 1.0, 1, 2);
  CHECK(b.spacing == 6);
  CHECK(b.coords == std::vector<std::int64_t>{6, 12, 18, 24});
  CHECK(b.min_pair_separation() == 12);
  CHECK(b.separated());  // 12 > 1 + 4 = 5

  CHECK_THROWS_AS(separated_basepoints(0, 1, 1.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(separated_basepoints(2, 1, 0.0, 1, 1), std::invalid_argument);
}

TEST_CASE("full-grid bump is the exact ground state of the clean box") {
  const LatticeCube cube = make_grid({1, 1, 24, 1.0});
  SeparatedBasepoints bp;
  bp.n = 1;
  bp.d = 1;
  bp.r0 = 1.0;
  bp.spacing = 12;
  bp.coords = {12};  // support start 12 - 24/2 = 0: whole grid
  const WeylTrialState trial = build_trial_state(cube, bp, 24, 1.0);

  const HamiltonianMatrix lap = build_laplacian(cube);
  const DiagonalField bv = build_potential_diagonal(cube, zero_field(cube.sp_sites));
  const HamiltonianMatrix H = assemble_hamiltonian(lap, bv, bv, false);
  const RayleighResult ray = rayleigh_quotient(H, trial.state);

  const double e0 = box_ground_energy(24, 1, 1.0);
  CHECK(ray.quotient == doctest::Approx(e0).epsilon(1e-12));
  CHECK((H.mat * trial.state - ray.quotient * trial.state).norm() <= 1e-10);
  CHECK(ray.residual == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("separated trial states never feel the interaction") {
  const WeylSetup s = make_weyl_setup(2, 1, 2.0, 1, 2);

  // <phi, U phi> and (U phi) vanish identically
  const Eigen::VectorXd u_phi = s.bu.values.cwiseProduct(s.trial.state);
  CHECK(s.trial.state.dot(u_phi) == 0.0);
  CHECK(u_phi.cwiseAbs().maxCoeff() == 0.0);

  // the full and interaction-free operators act identically on the trial
  const Eigen::VectorXd a = s.h_full.mat * s.trial.state;
  const Eigen::VectorXd b = s.h_free.mat * s.trial.state;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);  // entry-wise, no tolerance
  }
}

TEST_CASE("trial support and normalization invariants") {
  const WeylSetup s = make_weyl_setup(2, 1, 2.0, 1, 2);
  CHECK(s.trial.state.norm() == doctest::Approx(1.0).epsilon(1e-13));

  // support is exactly the product of the per-particle cubes
  std::vector<int> coords(2);
  for (std::int64_t i = 0; i < s.cube.dim; ++i) {
    s.cube.decode(i, coords);
    bool inside = true;
    for (int a = 0; a < 2; ++a) {
      const auto start = s.trial.support_start[static_cast<std::size_t>(a)];
      if (coords[a] < start || coords[a] >= start + s.trial.bump_side) inside = false;
    }
    if (inside) {
      CHECK(s.trial.state[i] != 0.0);
    } else {
      CHECK(s.trial.state[i] == 0.0);
    }
  }
}

TEST_CASE("clean rayleigh quotient has the product closed form") {
  for (int side : {3, 5, 9}) {
    const SeparatedBasepoints bp = separated_basepoints(2, 1, 2.0, 1, side);
    const auto grid_side = static_cast<int>(bp.spacing * 2 + side + 2);
    const LatticeCube cube = make_grid({1, 2, grid_side, 1.0, 100'000'000});
    const HamiltonianMatrix lap = build_laplacian(cube);
    const DiagonalField bv = build_potential_diagonal(cube, zero_field(cube.sp_sites));
    const HamiltonianMatrix H = assemble_hamiltonian(lap, bv, bv, false);
    const WeylTrialState trial = build_trial_state(cube, bp, side, 2.0);
    const RayleighResult ray = rayleigh_quotient(H, trial.state);
    CHECK(ray.quotient == doctest::Approx(box_ground_energy(side, 2, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("quotients shrink by roughly four per support doubling") {
  std::vector<double> quotients;
  for (int m : {4, 8, 16}) {
    const WeylSetup s = make_weyl_setup(2, 1, 2.0, 1, m);
    quotients.push_back(rayleigh_quotient(s.h_full, s.trial.state).quotient);
    // closed form for the 2km-site support at V = 0
    CHECK(quotients.back() ==
          doctest::Approx(box_ground_energy(2 * m, 2, 1.0)).epsilon(1e-12));
  }
  CHECK(quotients[0] > quotients[1]);
  CHECK(quotients[1] > quotients[2]);
  CHECK(quotients[0] / quotients[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(quotients[1] / quotients[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("support overflow names the minimal grid side") {
  const SeparatedBasepoints bp = separated_basepoints(2, 1, 2.0, 1, 2);
  const LatticeCube tiny = make_grid({1, 2, 8, 1.0});
  CHECK_THROWS_WITH_AS(build_trial_state(tiny, bp, 4, 2.0),
                       doctest::Contains("minimal grid side"),
                       std::invalid_argument);
}

TEST_CASE("overlapping supports are rejected") {
  SeparatedBasepoints bp;
  bp.n = 2;
  bp.d = 1;
  bp.r0 = 2.0;
  bp.spacing = 4;
  bp.coords = {4, 8};  // too close for side-4 bumps and range 2
  const LatticeCube cube = make_grid({1, 2, 16, 1.0});
  CHECK_THROWS_WITH_AS(build_trial_state(cube, bp, 4, 2.0),
                       doctest::Contains("interaction range"),
                       std::invalid_argument);
}

TEST_CASE("rayleigh quotient basics") {
  const HamiltonianMatrix lap = build_laplacian(make_grid({1, 2, 4, 1.0}));
  const SpectrumResult s = dense_spectrum(lap);

  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(lap.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
  const RayleighResult ray = rayleigh_quotient(lap, v);
  CHECK(ray.quotient >= s.values.front() - 1e-12);
  CHECK(ray.quotient <= s.values.back() + 1e-12);
  CHECK(ray.quotient >= smallest_eigenvalue(lap, 1e-10) - 1e-9);

  CHECK_THROWS_AS(rayleigh_quotient(lap, Eigen::VectorXd::Zero(lap.dim())),
                  std::invalid_argument);
}

TEST_CASE("tensor action is bounded by the factor residual sum") {
  // random separated factors phi_j: || H0 phi || <= sum_j ||H_j phi_j||
  // for unit factors (triangle inequality over the one-particle terms)
  const int m_sep = 3;
  const SeparatedBasepoints bp = separated_basepoints(2, 1, 2.0, 1, m_sep);
  const int bump_side = 2 * m_sep;
  const auto grid_side = static_cast<int>(bp.spacing * 2 + bump_side + 2);
  const LatticeCube cube = make_grid({1, 2, grid_side, 1.0, 100'000'000});

  std::mt19937 rng(123);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<std::vector<double>> profiles(2, std::vector<double>(bump_side));
  for (auto& prof : profiles) {
    for (auto& x : prof) x = u(rng);
  }
  const WeylTrialState trial =
      assemble_trial_state(cube, bp, bump_side, profiles, 2.0);

  DisorderSpec dis;
  dis.seed = 6;
  dis.realization_count = 1;
  const PotentialField field = sample_field(dis, cube.sp_sites, 0);
  const HamiltonianMatrix h2 = build_hamiltonian(
      ModelSpec{1, 2, 1.0, InteractionKernel{}, 100'000'000}, grid_side, field, false);
  const HamiltonianMatrix h1 = build_hamiltonian(
      ModelSpec{1, 1, 1.0, InteractionKernel{}, 100'000'000}, grid_side, field, false);

  double bound = 0.0;
  for (const Eigen::VectorXd& factor : trial.factors) {
    bound += (h1.mat * factor).norm();  // unit factors: the product term is 1
  }
  const double lhs = (h2.mat * trial.state).norm();
  CHECK(lhs <= bound * (1.0 + 1e-12));
}

TEST_CASE("edge scan on the clean box reproduces the deterministic floor") {
  const ModelSpec model{1, 2, 1.0, InteractionKernel{}, 1'000'000};
  DisorderSpec clean;
  clean.distribution = DistKind::Uniform;
  clean.v_max = 0.0;  // V identically zero
  clean.seed = 1;
  clean.realization_count = 5;

  const double tol = 1e-10;
  const auto rows = edge_scan(model, {16.0, 32.0}, clean, tol);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].median_e0 == doctest::Approx(box_ground_energy(16, 2, 1.0)).epsilon(1e-8));
  CHECK(rows[1].median_e0 == doctest::Approx(box_ground_energy(32, 2, 1.0)).epsilon(1e-8));
  CHECK(rows[0].iqr_e0 == 0.0);
  CHECK(rows[1].iqr_e0 == 0.0);
  // box doubling shrinks the floor by roughly four
  CHECK(rows[0].median_e0 / rows[1].median_e0 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("edge scan medians decrease with the box under disorder") {
  const ModelSpec model{1, 1, 1.0, InteractionKernel{}, 1'000'000};
  DisorderSpec dis;
  dis.seed = 99;
  dis.realization_count = 10;
  const auto rows = edge_scan(model, {32.0, 16.0}, dis, 1e-9, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].L == 16.0);  // rows come back ascending in L
  CHECK(rows[1].L == 32.0);
  CHECK(rows[1].median_e0 < rows[0].median_e0);
  for (const EdgeScanRow& row : rows) {
    REQUIRE(row.minima.size() == 10);
    for (double v : row.minima) CHECK(v > 0.0);
  }
}

TEST_CASE("quantiles interpolate between order statistics") {
  const std::vector<double> sorted = {1.0, 2.0, 4.0, 8.0};
  CHECK(detail::quantile_sorted(sorted, 0.0) == 1.0);
  CHECK(detail::quantile_sorted(sorted, 1.0) == 8.0);
  CHECK(detail::quantile_sorted(sorted, 0.5) == doctest::Approx(3.0));
  CHECK(detail::quantile_sorted(sorted, 0.25) == doctest::Approx(1.75));
}

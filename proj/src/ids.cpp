#include "anderson/ids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "anderson/parallel.hpp"

namespace anderson {

namespace detail {

int box_sites_from_side(double L, double h) {
  const double ratio = L / h;
  const double rounded = std::round(ratio);
  if (!(rounded >= 1.0) ||
      std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument("box side L = " + std::to_string(L) +
                                " is not an integer multiple of h = " +
                                std::to_string(h));
  }
  return static_cast<int>(rounded);
}

}  // namespace detail

namespace {

void check_energy_grid(const std::vector<double>& energies) {
  if (energies.empty()) {
    throw std::invalid_argument("energy grid must not be empty");
  }
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (!(energies[i] > energies[i - 1])) {
      throw std::invalid_argument("energy grid must be strictly ascending");
    }
  }
}

std::vector<double> sorted_side_list(const std::vector<double>& L_list) {
  if (L_list.empty()) throw std::invalid_argument("L list must not be empty");
  std::vector<double> sorted = L_list;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Mean and sample standard error accumulated in realization-index order.
struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr reduce_ordered(const std::vector<double>& values) {
  const auto r = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  MeanStderr out;
  out.mean = sum / r;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  return out;
}

}  // namespace

IdsCurve estimate_ids(const ModelSpec& model, bool include_interaction,
                      const std::vector<double>& L_list,
                      const std::vector<double>& energies,
                      const DisorderSpec& disorder, int workers) {
  check_energy_grid(energies);
  if (disorder.realization_count < 1) {
    throw std::invalid_argument("estimate_ids: needs at least one realization");
  }

  IdsCurve curve;
  curve.energies = energies;
  curve.axes = model.n * model.d;
  curve.h = model.h;

  const int R = disorder.realization_count;
  const auto nE = static_cast<std::int64_t>(energies.size());

  for (double L : sorted_side_list(L_list)) {
    const int m = detail::box_sites_from_side(L, model.h);
    std::int64_t sp_sites = 1;
    for (int l = 0; l < model.d; ++l) sp_sites *= m;
    const double volume = std::pow(m * model.h, curve.axes);

    std::vector<std::vector<std::int64_t>> counts(
        static_cast<std::size_t>(R),
        std::vector<std::int64_t>(static_cast<std::size_t>(nE), 0));

    parallel_for_index(R, workers, [&](std::int64_t k) {
      const PotentialField field =
          sample_field(disorder, sp_sites, static_cast<int>(k));
      const HamiltonianMatrix H =
          build_hamiltonian(model, m, field, include_interaction);
      const TridiagonalForm T = tridiagonal_form(H);
      auto& row = counts[static_cast<std::size_t>(k)];
      for (std::int64_t e = 0; e < nE; ++e) {
        row[static_cast<std::size_t>(e)] =
            count_below(T, energies[static_cast<std::size_t>(e)]);
      }
    });

    IdsRecord record;
    record.L = m * model.h;
    record.m = m;
    record.realizations = R;
    record.n_mean.resize(static_cast<std::size_t>(nE));
    record.n_stderr.resize(static_cast<std::size_t>(nE));
    std::vector<double> per_real(static_cast<std::size_t>(R));
    for (std::int64_t e = 0; e < nE; ++e) {
      for (int k = 0; k < R; ++k) {
        per_real[static_cast<std::size_t>(k)] =
            static_cast<double>(counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)]) /
            volume;
      }
      const MeanStderr ms = reduce_ordered(per_real);
      record.n_mean[static_cast<std::size_t>(e)] = ms.mean;
      record.n_stderr[static_cast<std::size_t>(e)] = ms.stderr_;
    }
    curve.records.push_back(std::move(record));
  }
  return curve;
}

std::pair<double, double> default_fit_window(const IdsCurve& curve, double n_lo,
                                             double n_hi) {
  if (curve.records.empty()) {
    throw std::invalid_argument("default_fit_window: empty curve");
  }
  const IdsRecord& rec = curve.records.back();  // largest L
  const double fill = std::pow(curve.h, curve.axes);
  double lo = 0.0, hi = 0.0;
  int found = 0;
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    const double ntilde = rec.n_mean[i] * fill;
    if (ntilde >= n_lo && ntilde <= n_hi) {
      if (found == 0) lo = curve.energies[i];
      hi = curve.energies[i];
      ++found;
    }
  }
  if (found < 4) {
    throw std::invalid_argument(
        "default_fit_window: fewer than 4 grid points with filled fraction in [" +
        std::to_string(n_lo) + ", " + std::to_string(n_hi) + "]");
  }
  return {lo, hi};
}

LifshitzFit fit_lifshitz(const IdsCurve& curve, double e0, double window_lo,
                         double window_hi) {
  if (curve.records.empty()) {
    throw std::invalid_argument("fit_lifshitz: empty curve");
  }
  if (!(window_lo > e0)) {
    throw std::invalid_argument("fit_lifshitz: window must lie strictly above E0");
  }
  if (!(window_hi > window_lo)) {
    throw std::invalid_argument("fit_lifshitz: window upper edge must exceed lower edge");
  }

  const IdsRecord& rec = curve.records.back();  // largest L
  const double fill = std::pow(curve.h, curve.axes);

  std::vector<double> xs, ys;
  std::string offending;
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    const double E = curve.energies[i];
    if (E < window_lo || E > window_hi) continue;
    const double ntilde = rec.n_mean[i] * fill;
    if (!(ntilde > 0.0) || !(ntilde < 1.0)) {
      if (!offending.empty()) offending += ", ";
      offending += "E=" + std::to_string(E);
      continue;
    }
    xs.push_back(std::log(E - e0));
    ys.push_back(std::log(-std::log(ntilde)));
  }
  if (!offending.empty()) {
    throw std::invalid_argument(
        "fit_lifshitz: filled fraction outside (0,1) inside the window at " +
        offending);
  }
  if (xs.size() < 4) {
    throw std::invalid_argument(
        "fit_lifshitz: need at least 4 grid points inside the window, got " +
        std::to_string(xs.size()));
  }

  const auto npts = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / npts, my = sy / npts;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_lifshitz: degenerate window (single abscissa)");
  }

  LifshitzFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  fit.gamma_hat = std::exp(intercept);
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.e0 = e0;
  fit.points = static_cast<int>(xs.size());
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / npts);
  return fit;
}

std::int64_t free_ids_by_convolution(const SpectrumResult& single_particle,
                                     int n, double energy) {
  if (n < 1) throw std::invalid_argument("free_ids_by_convolution: n must be positive");
  const auto len = static_cast<std::int64_t>(single_particle.values.size());
  if (len == 0) return 0;
  double tuples = 1.0;
  for (int i = 0; i < n; ++i) tuples *= static_cast<double>(len);
  if (tuples > 1e7) {
    throw std::invalid_argument(
        "free_ids_by_convolution: " + std::to_string(len) + "^" +
        std::to_string(n) + " index tuples exceed the brute-force cap 1e7");
  }

  // Plain enumeration over all index tuples; this is the oracle path, so no
  // pruning or factorization tricks.
  std::int64_t count = 0;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += single_particle.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    if (sum <= energy) ++count;
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < len) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return count;
}

std::vector<CompareRow> compare_free_vs_interacting(
    const ModelSpec& model, double e_probe, const std::vector<double>& L_list,
    const DisorderSpec& disorder, int workers) {
  if (disorder.realization_count < 1) {
    throw std::invalid_argument("compare_free_vs_interacting: needs realizations");
  }
  const int R = disorder.realization_count;
  const int axes = model.n * model.d;

  std::vector<CompareRow> rows;
  for (double L : sorted_side_list(L_list)) {
    const int m = detail::box_sites_from_side(L, model.h);
    std::int64_t sp_sites = 1;
    for (int l = 0; l < model.d; ++l) sp_sites *= m;
    const double volume = std::pow(m * model.h, axes);

    CompareRow row;
    row.L = m * model.h;
    row.m = m;
    row.realizations = R;
    row.e_probe = e_probe;
    row.counts_int.assign(static_cast<std::size_t>(R), 0);
    row.counts_free.assign(static_cast<std::size_t>(R), 0);

    parallel_for_index(R, workers, [&](std::int64_t k) {
      const PotentialField field =
          sample_field(disorder, sp_sites, static_cast<int>(k));
      const HamiltonianMatrix h_int = build_hamiltonian(model, m, field, true);
      const HamiltonianMatrix h_free = build_hamiltonian(model, m, field, false);
      row.counts_int[static_cast<std::size_t>(k)] = count_below(h_int, e_probe);
      row.counts_free[static_cast<std::size_t>(k)] = count_below(h_free, e_probe);
    });

    std::vector<double> n_int(static_cast<std::size_t>(R));
    std::vector<double> n_free(static_cast<std::size_t>(R));
    std::vector<double> diff(static_cast<std::size_t>(R));
    for (int k = 0; k < R; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      n_int[kk] = static_cast<double>(row.counts_int[kk]) / volume;
      n_free[kk] = static_cast<double>(row.counts_free[kk]) / volume;
      diff[kk] = n_int[kk] - n_free[kk];
    }
    row.n_int = reduce_ordered(n_int).mean;
    row.n_free = reduce_ordered(n_free).mean;
    const MeanStderr d = reduce_ordered(diff);
    row.delta = std::abs(row.n_int - row.n_free);
    row.stderr_ = d.stderr_;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace anderson

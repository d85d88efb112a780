#include "anderson/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "anderson/edge_probe.hpp"
#include "anderson/eigensolve.hpp"
#include "anderson/ids.hpp"

namespace anderson {

namespace {

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void write_row(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void run_spectrum(const ExperimentConfig& cfg, std::ofstream& out) {
  const int m = cfg.m_list.front();
  std::int64_t sp_sites = 1;
  for (int l = 0; l < cfg.model.d; ++l) sp_sites *= m;
  const PotentialField field = sample_field(cfg.disorder, sp_sites, 0);
  const HamiltonianMatrix H = build_hamiltonian(cfg.model, m, field, true);
  const SpectrumResult spectrum = dense_spectrum(H);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    write_row(out, {std::to_string(i), format_value(spectrum.values[i])});
  }
}

void run_ids(const ExperimentConfig& cfg, int workers, std::ofstream& out) {
  const IdsCurve curve = estimate_ids(cfg.model, true, cfg.L_list,
                                      task_energy_grid(cfg.task), cfg.disorder,
                                      workers);
  out << "L,E,N_mean,N_stderr,R\n";
  for (const IdsRecord& rec : curve.records) {
    for (std::size_t e = 0; e < curve.energies.size(); ++e) {
      write_row(out, {format_value(rec.L), format_value(curve.energies[e]),
                      format_value(rec.n_mean[e]), format_value(rec.n_stderr[e]),
                      std::to_string(rec.realizations)});
    }
  }
}

void run_fit(const ExperimentConfig& cfg, int workers, std::ofstream& out) {
  const IdsCurve curve = estimate_ids(cfg.model, true, cfg.L_list,
                                      task_energy_grid(cfg.task), cfg.disorder,
                                      workers);
  double lo, hi;
  if (cfg.task.fit_window_lo) {
    lo = *cfg.task.fit_window_lo;
    hi = *cfg.task.fit_window_hi;
  } else {
    std::tie(lo, hi) = default_fit_window(curve, cfg.task.fit_n_lo, cfg.task.fit_n_hi);
  }
  const LifshitzFit fit = fit_lifshitz(curve, cfg.task.fit_e0, lo, hi);
  out << "slope,gamma_hat,window_lo,window_hi,residual_rms\n";
  write_row(out, {format_value(fit.slope), format_value(fit.gamma_hat),
                  format_value(fit.window_lo), format_value(fit.window_hi),
                  format_value(fit.residual_rms)});
}

void run_compare(const ExperimentConfig& cfg, int workers, std::ofstream& out) {
  if (!cfg.task.e_probe) {
    throw std::invalid_argument("compare: task.e_probe is mandatory");
  }
  const auto rows = compare_free_vs_interacting(cfg.model, *cfg.task.e_probe,
                                                cfg.L_list, cfg.disorder, workers);
  out << "L,E_probe,N_int,N_free,delta,stderr\n";
  for (const CompareRow& row : rows) {
    write_row(out, {format_value(row.L), format_value(row.e_probe),
                    format_value(row.n_int), format_value(row.n_free),
                    format_value(row.delta), format_value(row.stderr_)});
  }
}

void run_weyl(const ExperimentConfig& cfg, std::ofstream& out) {
  out << "k,m,quotient,residual,interaction_energy\n";
  const int k = cfg.task.weyl_k;
  for (int m : cfg.task.weyl_m_list) {
    const double r0 = cfg.model.kernel.kind == KernelKind::None
                          ? 1.0
                          : cfg.model.kernel.r0;
    const SeparatedBasepoints bp =
        separated_basepoints(cfg.model.n, cfg.model.d, r0, k, m);
    const int bump_side = 2 * k * m;  // full separation-scale support cube
    const auto grid_side =
        static_cast<int>(bp.spacing * cfg.model.n * cfg.model.d + bump_side + 2);
    const LatticeCube cube = make_grid(cfg.model.params(grid_side));
    const PotentialField field = sample_field(cfg.disorder, cube.sp_sites, 0);

    const HamiltonianMatrix lap = build_laplacian(cube);
    const DiagonalField bv = build_potential_diagonal(cube, field);
    const DiagonalField bu = build_interaction_diagonal(cube, cfg.model.kernel);
    const HamiltonianMatrix H = assemble_hamiltonian(lap, bv, bu, true);

    const WeylTrialState trial =
        build_trial_state(cube, bp, bump_side, r0, cfg.model.kernel.norm);
    const RayleighResult ray = rayleigh_quotient(H, trial.state);
    const double interaction_energy =
        trial.state.dot(bu.values.cwiseProduct(trial.state));

    write_row(out, {std::to_string(k), std::to_string(m),
                    format_value(ray.quotient), format_value(ray.residual),
                    format_value(interaction_energy)});
  }
}

void run_edge(const ExperimentConfig& cfg, int workers, std::ofstream& out) {
  const auto rows =
      edge_scan(cfg.model, cfg.L_list, cfg.disorder, cfg.task.tol, workers);
  out << "L,median_E0,iqr_E0,R\n";
  for (const EdgeScanRow& row : rows) {
    write_row(out, {format_value(row.L), format_value(row.median_e0),
                    format_value(row.iqr_e0), std::to_string(row.realizations)});
  }
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> task_energy_grid(const TaskConfig& task) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(task.e_points));
  if (task.e_points == 1) {
    grid.push_back(task.e_min);
    return grid;
  }
  for (int i = 0; i < task.e_points; ++i) {
    grid.push_back(task.e_min + (task.e_max - task.e_min) * i /
                                    static_cast<double>(task.e_points - 1));
  }
  return grid;
}

std::string output_path(const ExperimentConfig& cfg, const std::string& subcommand) {
  return (std::filesystem::path(cfg.output.dir) /
          (cfg.output.prefix + "_" + subcommand + ".csv"))
      .string();
}

void run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                    int workers) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) ==
      kSubcommands.end()) {
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  }
  std::ofstream out = open_output(output_path(cfg, subcommand));
  if (subcommand == "spectrum") {
    run_spectrum(cfg, out);
  } else if (subcommand == "ids") {
    run_ids(cfg, workers, out);
  } else if (subcommand == "fit") {
    run_fit(cfg, workers, out);
  } else if (subcommand == "compare") {
    run_compare(cfg, workers, out);
  } else if (subcommand == "weyl") {
    run_weyl(cfg, out);
  } else {
    run_edge(cfg, workers, out);
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing output for subcommand " + subcommand);
  }
}

}  // namespace anderson

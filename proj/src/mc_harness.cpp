#include "eigendetect/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eigendetect {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(trial) for every trial index, partitioned across workers.
// fn must only touch per-trial state; results keyed by trial index stay
// deterministic for any worker count.
template <typename Fn>
void parallel_trials(int trials, int workers, const Fn& fn) {
  workers = std::min(resolve_workers(workers), trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += workers) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

Field field_for(Beta beta) {
  switch (beta) {
    case Beta::real:
      return Field::real;
    case Beta::cplx:
      return Field::cplx;
    case Beta::quaternion:
      break;
  }
  throw std::invalid_argument(
      "quaternion snapshot generation is not supported; beta = 4 applies to "
      "externally supplied spectra only");
}

}  // namespace

void ExperimentConfig::validate() const {
  require(trials >= 1, "ExperimentConfig: trials must be >= 1");
  require(!grid.empty(), "ExperimentConfig: grid must be nonempty");
  require(grid.size() <= 0xFFFF, "ExperimentConfig: grid too large");
  require(!methods.empty(), "ExperimentConfig: methods must be nonempty");
  require(noise_var > 0.0, "ExperimentConfig: noise_var must be positive");
  for (const auto& cell : grid) {
    require(cell.n >= 2 && cell.m >= 2,
            "ExperimentConfig: every grid cell needs n >= 2 and m >= 2");
    require(static_cast<int>(signal_eigs.size()) < cell.n,
            "ExperimentConfig: need fewer signals than sensors in every cell");
  }
  for (double v : signal_eigs) {
    require(v > noise_var,
            "ExperimentConfig: signal eigenvalues must exceed noise_var");
  }
  for (Method m : methods) {
    require(m != Method::new_wideband,
            "ExperimentConfig: wideband detection is not a grid method");
  }
}

double ReportRow::probability(std::size_t j) const {
  return static_cast<double>(k_counts.at(j)) / trials;
}

double ReportRow::overflow_probability() const {
  return static_cast<double>(overflow) / trials;
}

double ReportRow::error_probability() const {
  return static_cast<double>(errors) / trials;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();
  const int k_true = static_cast<int>(config.signal_eigs.size());
  const int k_max = k_true + 2;
  const int n_methods = static_cast<int>(config.methods.size());

  ExperimentReport report;
  report.k_max = k_max;
  report.config = config;

  for (std::size_t cell_index = 0; cell_index < config.grid.size();
       ++cell_index) {
    const GridCell cell = config.grid[cell_index];
    const PopulationModel model(config.signal_eigs, config.noise_var, cell.n,
                                config.field);
    const SampleOptions opts{config.rotate_eigenvectors};

    // outcome per (trial, method): estimated order, or -1 for an error
    std::vector<int> outcomes(
        static_cast<std::size_t>(config.trials) * n_methods, -1);
    parallel_trials(config.trials, workers, [&](int trial) {
      const StreamKey key{config.seed, static_cast<std::uint32_t>(cell_index),
                          static_cast<std::uint32_t>(trial)};
      const EigenSpectrum spectrum =
          scm_eigenvalues(sample_snapshots(model, cell.m, key, opts));
      for (int mi = 0; mi < n_methods; ++mi) {
        int k_hat = -1;
        try {
          k_hat = detect(spectrum, config.methods[mi]).k_hat;
        } catch (const std::exception&) {
          // degenerate spectrum for this method: tallied, not raised
        }
        outcomes[static_cast<std::size_t>(trial) * n_methods + mi] = k_hat;
      }
    });

    const int cell_keff =
        k_eff(config.signal_eigs, config.noise_var, cell.n, cell.m);
    std::optional<double> cell_zsep;
    if (cell_keff >= 1) {
      try {
        cell_zsep = z_sep(config.signal_eigs[cell_keff - 1], config.noise_var,
                          cell.n, cell.m, field_beta(config.field));
      } catch (const std::exception&) {
        // separation metric undefined for this cell
      }
    }

    for (int mi = 0; mi < n_methods; ++mi) {
      ReportRow row;
      row.n = cell.n;
      row.m = cell.m;
      row.method = config.methods[mi];
      row.k_counts.assign(static_cast<std::size_t>(k_max) + 1, 0);
      row.k_eff = cell_keff;
      row.z_sep = cell_zsep;
      row.trials = config.trials;
      row.seed = config.seed;
      for (int trial = 0; trial < config.trials; ++trial) {
        const int k_hat =
            outcomes[static_cast<std::size_t>(trial) * n_methods + mi];
        if (k_hat < 0) {
          ++row.errors;
        } else if (k_hat > k_max) {
          ++row.overflow;
        } else {
          ++row.k_counts[static_cast<std::size_t>(k_hat)];
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

CltValidation clt_validation(double noise_var, int n, int m, Beta beta,
                             int trials, std::uint64_t seed, int workers) {
  require(n >= 2 && m >= 1, "clt_validation: need n >= 2 and m >= 1");
  require(trials >= 100,
          "clt_validation: need at least 100 trials for a meaningful check");
  const PopulationModel model({}, noise_var, n, field_for(beta));
  const double ratio = static_cast<double>(n) / m;

  std::vector<double> statistic(trials);
  parallel_trials(trials, workers, [&](int trial) {
    const StreamKey key{seed, 0, static_cast<std::uint32_t>(trial)};
    const EigenSpectrum spectrum =
        scm_eigenvalues(sample_snapshots(model, m, key));
    const double q = q_statistic(spectrum.values);
    statistic[trial] = n * (q - (1.0 + ratio));
  });

  double mean = 0.0;
  for (double v : statistic) mean += v;
  mean /= trials;
  double var = 0.0;
  for (double v : statistic) var += (v - mean) * (v - mean);
  var /= (trials - 1);

  const QCltParams theory = q_clt_params(ratio, beta);
  return {mean, var, theory.mean_shift, theory.variance, trials};
}

SpikeValidation spike_validation(double pop_eig, const MpLaw& law, Beta beta,
                                 int n, int trials, std::uint64_t seed,
                                 int workers) {
  require(trials >= 1, "spike_validation: need at least 1 trial");
  require(n >= 2, "spike_validation: need n >= 2");
  const int m = std::max(1, static_cast<int>(std::lround(n / law.ratio)));
  const PopulationModel model({pop_eig}, law.noise_var, n, field_for(beta));

  std::vector<double> largest(trials);
  parallel_trials(trials, workers, [&](int trial) {
    const StreamKey key{seed, 0, static_cast<std::uint32_t>(trial)};
    const EigenSpectrum spectrum =
        scm_eigenvalues(sample_snapshots(model, m, key, {.rotate = false}));
    largest[trial] = spectrum.values.front();
  });

  double mean = 0.0;
  for (double v : largest) mean += v;
  mean /= trials;

  const double limit = spike_limit(pop_eig, law);
  double std_dev = 0.0;
  double z = std::numeric_limits<double>::quiet_NaN();
  try {
    std_dev = spike_fluctuation_std(pop_eig, law, beta, n);
    z = (mean - limit) / (std_dev / std::sqrt(static_cast<double>(trials)));
  } catch (const std::domain_error&) {
    // below the transition the limit is the bulk edge; no fluctuation scale
  }
  return {mean, limit, std_dev, z, trials};
}

}  // namespace eigendetect

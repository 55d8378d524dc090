#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eigendetect/detectors.hpp"
#include "eigendetect/identifiability.hpp"

namespace eigendetect {

struct GridCell {
  int n;
  int m;
};

/// Declarative description of a detection-probability experiment: one
/// population model template instantiated at every (n, m) cell of the grid,
/// a trial count, the detectors to score, and the master seed.
struct ExperimentConfig {
  std::vector<double> signal_eigs;
  double noise_var = 1.0;
  Field field = Field::cplx;
  std::vector<GridCell> grid;
  int trials = 1;
  std::vector<Method> methods;
  std::uint64_t seed = 0;
  bool rotate_eigenvectors = true;

  void validate() const;  // throws std::invalid_argument
};

/// Tallies for one (cell, method) pair. Counts, not probabilities, are
/// stored so aggregation across workers is exact; histogram buckets cover
/// estimates 0..k_max with an overflow bucket above and an error bucket
/// for trials where the detector reported a degenerate spectrum.
struct ReportRow {
  int n;
  int m;
  Method method;
  std::vector<std::int64_t> k_counts;  // index j = trials with k_hat == j
  std::int64_t overflow = 0;
  std::int64_t errors = 0;
  int k_eff = 0;
  std::optional<double> z_sep;  // for the k_eff-th signal; absent if k_eff = 0
  int trials = 0;
  std::uint64_t seed = 0;

  double probability(std::size_t j) const;
  double overflow_probability() const;
  double error_probability() const;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;
  int k_max = 0;  // histogram truncation: true signal count + 2
  std::vector<ReportRow> rows;
  ExperimentConfig config;
};

/// Runs the full grid. Each trial draws snapshots keyed by
/// (seed, cell index, trial index), so the report is identical for any
/// worker count and any execution order. Detector errors are tallied, never
/// raised. workers <= 0 selects the hardware concurrency.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                int workers = 0);

/// Empirical check of the scaled q-statistic limit on a noise-only model:
/// per trial computes n * (q_n - (1 + n/m)) and reports sample mean and
/// variance next to the predicted (2/beta - 1) c and (4/beta) c^2.
struct CltValidation {
  double empirical_mean;
  double empirical_var;
  double theory_mean;
  double theory_var;
  int trials;
};

CltValidation clt_validation(double noise_var, int n, int m, Beta beta,
                             int trials, std::uint64_t seed, int workers = 0);

/// Empirical check of the largest-eigenvalue limit for a single spike:
/// compares the across-trial mean of l_1 with the predicted biased location
/// and reports the studentized difference. The sample count per trial is
/// round(n / law.ratio). Spectra are sampled in the population eigenbasis;
/// SCM eigenvalues are invariant to the basis rotation.
struct SpikeValidation {
  double empirical_mean_l1;
  double predicted_limit;
  double predicted_std;
  double z_score;
  int trials;
};

SpikeValidation spike_validation(double pop_eig, const MpLaw& law, Beta beta,
                                 int n, int trials, std::uint64_t seed,
                                 int workers = 0);

}  // namespace eigendetect

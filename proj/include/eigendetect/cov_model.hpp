#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "eigendetect/rmt.hpp"
#include "eigendetect/rng.hpp"

namespace eigendetect {

enum class Field { real, cplx };

Beta field_beta(Field f);  // real -> 1, complex -> 2

/// Ground-truth population covariance: `signal_count()` eigenvalues strictly
/// above a flat noise level, the remaining dim - k equal to noise_var.
/// Eigenvectors are chosen by the sampler (seeded rotation or identity).
struct PopulationModel {
  std::vector<double> signal_eigs;  // sorted descending, all > noise_var
  double noise_var;
  int dim;
  Field field;

  PopulationModel(std::vector<double> signal_eigs, double noise_var, int dim,
                  Field field);

  int signal_count() const { return static_cast<int>(signal_eigs.size()); }
};

/// n x m matrix of observations, one snapshot per column.
struct SnapshotMatrix {
  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> data;

  Field field() const {
    return data.index() == 0 ? Field::real : Field::cplx;
  }
  Eigen::Index rows() const;
  Eigen::Index cols() const;
};

/// Descending sample eigenvalues together with the dimensions that produced
/// them; the sole input to every detector.
struct EigenSpectrum {
  std::vector<double> values;  // length n, descending, nonnegative
  int n;
  int m;
  Beta beta;

  /// Sorts `values` descending and validates the invariants
  /// (nonnegative, count of positives <= min(n, m)).
  static EigenSpectrum from_values(std::vector<double> values, int n, int m,
                                   Beta beta);
};

struct SampleOptions {
  /// Draw the population eigenbasis as a seeded Haar-distributed rotation.
  /// When false the population covariance is diagonal. Either way the
  /// sample covariance spectrum has the same distribution; the rotation
  /// keeps downstream code honest about not exploiting axis alignment.
  bool rotate = true;
};

/// Draws m independent snapshots from N(0, R) (real) or the circularly
/// symmetric complex Gaussian with covariance R, where R has the model's
/// eigenvalues and a (seed, cell)-deterministic eigenbasis. The rotation
/// stream ignores the trial index, so every trial of a cell shares one
/// "arbitrarily fixed, yet unknown" basis. Identical keys give identical
/// matrices.
SnapshotMatrix sample_snapshots(const PopulationModel& model, int m,
                                const StreamKey& key,
                                const SampleOptions& opts = {});

SnapshotMatrix sample_snapshots(const PopulationModel& model, int m,
                                std::uint64_t seed,
                                const SampleOptions& opts = {});

/// Sample covariance matrix (1/m) X X' with ' the conjugate transpose.
std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> scm(const SnapshotMatrix& x);

/// Descending eigenvalues of (1/m) X X'. When m < n they are computed from
/// the m x m Gram matrix (1/m) X' X and padded with exactly n - m zeros.
/// Magnitudes below 1e-12 * l_max * n are clamped to zero; anything below
/// the negative of that tolerance is rejected as non-PSD.
EigenSpectrum scm_eigenvalues(const SnapshotMatrix& x);

/// Per-bin spectra for a set of frequency-bin snapshot matrices sharing
/// (n, m, field). Order preserved.
std::vector<EigenSpectrum> bin_spectra(const std::vector<SnapshotMatrix>& bins);

}  // namespace eigendetect

#pragma once

#include <array>
#include <span>

namespace eigendetect {

/// Dyson index of the data field: 1 for real, 2 for circularly symmetric
/// complex, 4 for quaternion-valued samples. Scales every fluctuation
/// variance in the limit theorems below.
enum class Beta : int { real = 1, cplx = 2, quaternion = 4 };

int beta_value(Beta b);
Beta beta_from_int(int b);  // throws std::invalid_argument unless 1, 2 or 4

/// Marchenko-Pastur law of a noise-only sample covariance matrix in the
/// n, m -> infinity limit with n/m -> ratio. `noise_var` is the per-entry
/// noise variance (the centering of the bulk).
struct MpLaw {
  double noise_var;
  double ratio;

  MpLaw(double noise_var, double ratio);

  double edge_minus() const;  // noise_var * (1 - sqrt(ratio))^2
  double edge_plus() const;   // noise_var * (1 + sqrt(ratio))^2
};

struct SupportInterval {
  double lower;
  double upper;
};

/// Endpoints of the continuous support, noise_var * (1 -+ sqrt(ratio))^2.
SupportInterval mp_support(const MpLaw& law);

/// Continuous part of the density. Zero outside the support and at x = 0;
/// the point mass at zero is reported by mp_atom.
double mp_pdf(const MpLaw& law, double x);

/// Mass of the atom at zero, max(0, 1 - 1/ratio). Nonzero only when the
/// sample covariance matrix is singular in the limit (ratio > 1).
double mp_atom(const MpLaw& law);

/// Distribution function: atom plus adaptive Simpson quadrature of the
/// continuous density, evaluated after a trigonometric substitution that
/// removes the square-root edge behavior. Absolute tolerance 1e-10.
double mp_cdf(const MpLaw& law, double x);

/// k-th moment of the law,
///   noise_var^k * sum_{j=0}^{k-1} ratio^j / (j+1) * C(k,j) * C(k-1,j).
/// k = 0 returns 1 (total mass).
double mp_moment(const MpLaw& law, int k);

/// Joint Gaussian limit of n * ([mean eig, mean squared eig] - [M1, M2]).
/// `mean` and `cov` are the parameters of that limit; `cov` already carries
/// the 2/beta prefactor.
struct MomentCltParams {
  std::array<double, 2> mean;
  std::array<std::array<double, 2>, 2> cov;
  Beta beta;
};

MomentCltParams moment_clt_params(const MpLaw& law, Beta beta);

/// Scale-free spectrum statistic (mean of squares) / (mean)^2
///   = len * sum(l^2) / (sum l)^2.
double q_statistic(std::span<const double> eigs);

/// Gaussian limit of n * (q - center): center = 1 + ratio,
/// mean_shift = (2/beta - 1) * ratio, variance = (4/beta) * ratio^2.
struct QCltParams {
  double center;
  double mean_shift;
  double variance;
};

QCltParams q_clt_params(double ratio, Beta beta);

/// Almost-sure limit of the sample eigenvalue paired with population
/// eigenvalue `pop_eig`: the biased location
///   pop_eig * (1 + noise_var * ratio / (pop_eig - noise_var))
/// above the phase transition noise_var * (1 + sqrt(ratio)), and the bulk
/// edge noise_var * (1 + sqrt(ratio))^2 at or below it.
double spike_limit(double pop_eig, const MpLaw& law);

/// Standard deviation of the sample eigenvalue around spike_limit at
/// finite dimension n:
///   sqrt( 2 / (beta n) * pop_eig^2 * (1 - ratio / (pop_eig - noise_var)^2) ).
/// Requires pop_eig strictly above the phase transition. The variance
/// factor is evaluated exactly as written, which is exact for
/// noise_var = 1; see the project README for the unit-scaling caveat.
double spike_fluctuation_std(double pop_eig, const MpLaw& law, Beta beta,
                             int n);

}  // namespace eigendetect

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "eigendetect/cov_model.hpp"

namespace eigendetect {

enum class Method {
  new_est,       // moment-based estimator, any n/m
  new_wideband,  // same criterion summed over frequency bins
  aic_wk,        // classical AIC, requires m > n
  mdl_wk,        // classical MDL, requires m > n
  mdl_modified,  // MDL with the candidate range cut at min(n, m)
};

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

struct ScoreEntry {
  int k;
  double score;  // +infinity marks an infeasible candidate order
};

/// Outcome of one detector run: the selected order and the full score
/// vector over the method's legal k range, retained for auditing.
/// k_hat is always the smallest k attaining the minimal finite score.
struct DetectionResult {
  int k_hat;
  std::vector<ScoreEntry> scores;
  Method method;
};

/// Maximum-likelihood noise variance given k signals: the mean of the
/// n - k trailing eigenvalues.
double noise_var_mle(const EigenSpectrum& spec, int k);

/// Centered and scaled tail-moment statistic of the candidate order k:
///   [ (n-k) * sum(tail^2) / (sum tail)^2 - (1 + n/m) ] * n
///     - (2/beta - 1) * n/m,
/// with the limiting ratio replaced by the plug-in n/m throughout.
double t_statistic(const EigenSpectrum& spec, int k);

/// Moment-based estimator: score(k) = (beta/4) (m/n)^2 t_k^2 + 2(k+1)
/// over k in [0, min(n, m)).
DetectionResult detect_new(const EigenSpectrum& spec);

/// Wideband variant over M frequency bins sharing (n, m, beta):
/// score(k) = sum_j (beta/4) (m/n)^2 t_{j,k}^2 + 2 M (k+1).
DetectionResult detect_new_wideband(std::span<const EigenSpectrum> specs);

/// Classical AIC: score(k) = -2 (n-k) m log(g(k)/a(k)) + 2 k (2n-k) over
/// k in [0, n), with g/a the geometric/arithmetic means of the trailing
/// n - k eigenvalues. Valid only for m > n.
DetectionResult detect_aic_wk(const EigenSpectrum& spec);

/// Classical MDL: score(k) = -(n-k) m log(g(k)/a(k)) + k (2n-k) log(m) / 2
/// over k in [0, n). Valid only for m > n.
DetectionResult detect_mdl_wk(const EigenSpectrum& spec);

/// MDL criterion with the candidate range restricted to [0, min(n, m)).
/// Exact zero eigenvalues in a tail make that candidate's score infinite;
/// with a singular spectrum every tail contains a zero, and the operation
/// reports the degeneracy as an error.
DetectionResult detect_mdl_modified(const EigenSpectrum& spec);

/// Dispatch on a single-spectrum method (everything except new_wideband).
DetectionResult detect(const EigenSpectrum& spec, Method method);

namespace detail {
/// Index of the smallest finite minimum; ties resolve to the lowest k.
/// Throws std::domain_error when no score is finite.
int argmin_first(std::span<const ScoreEntry> scores);
}  // namespace detail

}  // namespace eigendetect

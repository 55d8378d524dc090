#include "eigendetect/detectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eigendetect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

struct TailSums {
  // sums over the trailing eigenvalues l_{k+1..n} for every k
  std::vector<double> sum;     // sum[k]  = sum of tail values
  std::vector<double> sum_sq;  // squared values
  std::vector<double> sum_log; // logs; NaN once the tail contains a zero
};

TailSums tail_sums(const EigenSpectrum& spec) {
  const int n = spec.n;
  TailSums t;
  t.sum.assign(n + 1, 0.0);
  t.sum_sq.assign(n + 1, 0.0);
  t.sum_log.assign(n + 1, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    const double v = spec.values[k];
    t.sum[k] = t.sum[k + 1] + v;
    t.sum_sq[k] = t.sum_sq[k + 1] + v * v;
    t.sum_log[k] =
        v > 0.0 ? t.sum_log[k + 1] + std::log(v)
                : std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

double t_from_tails(const TailSums& t, const EigenSpectrum& spec, int k) {
  const double s1 = t.sum[k];
  const double s2 = t.sum_sq[k];
  if (!(s1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double n = spec.n;
  const double ratio = n / static_cast<double>(spec.m);
  const double b = beta_value(spec.beta);
  return ((n - k) * s2 / (s1 * s1) - (1.0 + ratio)) * n -
         (2.0 / b - 1.0) * ratio;
}

double new_data_term(const TailSums& t, const EigenSpectrum& spec, int k) {
  const double tk = t_from_tails(t, spec, k);
  if (std::isnan(tk)) return kInf;
  const double b = beta_value(spec.beta);
  const double m_over_n = static_cast<double>(spec.m) / spec.n;
  return b / 4.0 * m_over_n * m_over_n * tk * tk;
}

// -(n-k) * m * log(g(k)/a(k)) expanded through the log of the geometric
// mean, which avoids overflow in the product of the tail.
double log_likelihood_term(const TailSums& t, const EigenSpectrum& spec,
                           int k) {
  if (std::isnan(t.sum_log[k])) return kInf;  // zero in the tail: g = 0
  const int n = spec.n;
  const double arith = t.sum[k] / (n - k);
  return -static_cast<double>(spec.m) *
         (t.sum_log[k] - (n - k) * std::log(arith));
}

DetectionResult finish(std::vector<ScoreEntry> scores, Method method) {
  const int k_hat = detail::argmin_first(scores);
  return {k_hat, std::move(scores), method};
}

DetectionResult detect_mdl_range(const EigenSpectrum& spec, int k_end,
                                 Method method) {
  const auto tails = tail_sums(spec);
  const double half_log_m = 0.5 * std::log(static_cast<double>(spec.m));
  std::vector<ScoreEntry> scores;
  scores.reserve(k_end);
  for (int k = 0; k < k_end; ++k) {
    const double data = log_likelihood_term(tails, spec, k);
    const double penalty = k * (2.0 * spec.n - k) * half_log_m;
    scores.push_back({k, std::isinf(data) ? kInf : data + penalty});
  }
  return finish(std::move(scores), method);
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::new_est:
      return "new";
    case Method::new_wideband:
      return "new_wideband";
    case Method::aic_wk:
      return "aic_wk";
    case Method::mdl_wk:
      return "mdl_wk";
    case Method::mdl_modified:
      return "mdl_modified";
  }
  return "unknown";
}

Method method_from_name(std::string_view name) {
  if (name == "new") return Method::new_est;
  if (name == "new_wideband") return Method::new_wideband;
  if (name == "aic_wk") return Method::aic_wk;
  if (name == "mdl_wk") return Method::mdl_wk;
  if (name == "mdl_modified") return Method::mdl_modified;
  throw std::invalid_argument("unknown method name: " + std::string(name));
}

int detail::argmin_first(std::span<const ScoreEntry> scores) {
  int best = -1;
  double best_score = kInf;
  for (const auto& entry : scores) {
    if (std::isfinite(entry.score) && entry.score < best_score) {
      best_score = entry.score;
      best = entry.k;
    }
  }
  if (best < 0) {
    throw std::domain_error(
        "unusable spectrum: every candidate order has infinite score");
  }
  return best;
}

double noise_var_mle(const EigenSpectrum& spec, int k) {
  require(k >= 0 && k < spec.n, "noise_var_mle: k must lie in [0, n)");
  double sum = 0.0;
  for (int i = k; i < spec.n; ++i) sum += spec.values[i];
  if (!(sum > 0.0)) {
    throw std::domain_error("noise_var_mle: degenerate noise estimate");
  }
  return sum / (spec.n - k);
}

double t_statistic(const EigenSpectrum& spec, int k) {
  require(k >= 0 && k < std::min(spec.n, spec.m),
          "t_statistic: k must lie in [0, min(n, m))");
  const auto tails = tail_sums(spec);
  const double t = t_from_tails(tails, spec, k);
  if (std::isnan(t)) {
    throw std::domain_error("t_statistic: zero tail sum");
  }
  return t;
}

DetectionResult detect_new(const EigenSpectrum& spec) {
  require(spec.n >= 2 && spec.m >= 2, "detect_new: need n >= 2 and m >= 2");
  const auto tails = tail_sums(spec);
  const int k_end = std::min(spec.n, spec.m);
  std::vector<ScoreEntry> scores;
  scores.reserve(k_end);
  for (int k = 0; k < k_end; ++k) {
    const double data = new_data_term(tails, spec, k);
    scores.push_back({k, std::isinf(data) ? kInf : data + 2.0 * (k + 1)});
  }
  return finish(std::move(scores), Method::new_est);
}

DetectionResult detect_new_wideband(std::span<const EigenSpectrum> specs) {
  require(!specs.empty(), "detect_new_wideband: need at least one bin");
  const auto& first = specs.front();
  for (const auto& s : specs) {
    require(s.n == first.n && s.m == first.m && s.beta == first.beta,
            "detect_new_wideband: bins must share (n, m, beta)");
  }
  require(first.n >= 2 && first.m >= 2,
          "detect_new_wideband: need n >= 2 and m >= 2");

  std::vector<TailSums> tails;
  tails.reserve(specs.size());
  for (const auto& s : specs) tails.push_back(tail_sums(s));

  const int k_end = std::min(first.n, first.m);
  const double bins = static_cast<double>(specs.size());
  std::vector<ScoreEntry> scores;
  scores.reserve(k_end);
  for (int k = 0; k < k_end; ++k) {
    double data = 0.0;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      data += new_data_term(tails[j], specs[j], k);
    }
    scores.push_back(
        {k, std::isinf(data) ? kInf : data + 2.0 * bins * (k + 1)});
  }
  return finish(std::move(scores), Method::new_wideband);
}

DetectionResult detect_aic_wk(const EigenSpectrum& spec) {
  require(spec.m > spec.n, "detect_aic_wk: AIC-WK requires m > n");
  const auto tails = tail_sums(spec);
  std::vector<ScoreEntry> scores;
  scores.reserve(spec.n);
  for (int k = 0; k < spec.n; ++k) {
    const double data = 2.0 * log_likelihood_term(tails, spec, k);
    const double penalty = 2.0 * k * (2.0 * spec.n - k);
    scores.push_back({k, std::isinf(data) ? kInf : data + penalty});
  }
  return finish(std::move(scores), Method::aic_wk);
}

DetectionResult detect_mdl_wk(const EigenSpectrum& spec) {
  require(spec.m > spec.n, "detect_mdl_wk: MDL-WK requires m > n");
  return detect_mdl_range(spec, spec.n, Method::mdl_wk);
}

DetectionResult detect_mdl_modified(const EigenSpectrum& spec) {
  require(spec.n >= 2 && spec.m >= 2,
          "detect_mdl_modified: need n >= 2 and m >= 2");
  return detect_mdl_range(spec, std::min(spec.n, spec.m),
                          Method::mdl_modified);
}

DetectionResult detect(const EigenSpectrum& spec, Method method) {
  switch (method) {
    case Method::new_est:
      return detect_new(spec);
    case Method::aic_wk:
      return detect_aic_wk(spec);
    case Method::mdl_wk:
      return detect_mdl_wk(spec);
    case Method::mdl_modified:
      return detect_mdl_modified(spec);
    case Method::new_wideband:
      break;
  }
  throw std::invalid_argument("detect: method needs a list of bin spectra");
}

}  // namespace eigendetect

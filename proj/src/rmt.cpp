#include "eigendetect/rmt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eigendetect {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Adaptive Simpson with an absolute tolerance and a depth cap.
template <typename F>
double adaptive_simpson(const F& f, double a, double fa, double b, double fb,
                        double m, double fm, double whole, double tol,
                        int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                          depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (int j = 1; j <= k; ++j) {
    value *= static_cast<double>(n - k + j) / static_cast<double>(j);
  }
  return value;
}

}  // namespace

int beta_value(Beta b) { return static_cast<int>(b); }

Beta beta_from_int(int b) {
  switch (b) {
    case 1:
      return Beta::real;
    case 2:
      return Beta::cplx;
    case 4:
      return Beta::quaternion;
    default:
      throw std::invalid_argument("beta must be 1, 2 or 4, got " +
                                  std::to_string(b));
  }
}

MpLaw::MpLaw(double noise_var, double ratio)
    : noise_var(noise_var), ratio(ratio) {
  require(noise_var > 0.0, "MpLaw: noise_var must be positive");
  require(ratio > 0.0, "MpLaw: ratio must be positive");
  require(std::isfinite(noise_var) && std::isfinite(ratio),
          "MpLaw: parameters must be finite");
}

double MpLaw::edge_minus() const {
  const double d = 1.0 - std::sqrt(ratio);
  return noise_var * d * d;
}

double MpLaw::edge_plus() const {
  const double d = 1.0 + std::sqrt(ratio);
  return noise_var * d * d;
}

SupportInterval mp_support(const MpLaw& law) {
  return {law.edge_minus(), law.edge_plus()};
}

double mp_pdf(const MpLaw& law, double x) {
  const double lo = law.edge_minus();
  const double hi = law.edge_plus();
  if (x <= 0.0 || x < lo || x > hi) return 0.0;
  const double num = std::sqrt((x - lo) * (hi - x));
  return num / (2.0 * std::numbers::pi * law.noise_var * x * law.ratio);
}

double mp_atom(const MpLaw& law) { return std::max(0.0, 1.0 - 1.0 / law.ratio); }

double mp_cdf(const MpLaw& law, double x) {
  if (x < 0.0) return 0.0;
  const double lo = law.edge_minus();
  const double hi = law.edge_plus();
  const double atom = mp_atom(law);
  if (x <= lo) return atom;

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double norm = 2.0 * std::numbers::pi * law.noise_var * law.ratio;
  // Substituting t = lo + half*(1 + sin(theta)) turns the square-root edge
  // factor into half*cos(theta), leaving a smooth integrand in theta. When
  // the support touches zero (ratio = 1) the remaining cos^2/(1 + sin)
  // factor is simplified algebraically so the endpoint stays finite.
  const auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    if (lo == 0.0) return half * (1.0 - s) / norm;
    const double c = std::cos(theta);
    return half * half * c * c / (norm * (lo + half * (1.0 + s)));
  };
  const double upper =
      x >= hi ? std::numbers::pi / 2.0
              : std::asin(std::clamp((x - center) / half, -1.0, 1.0));
  return atom +
         integrate(integrand, -std::numbers::pi / 2.0, upper, 1e-10);
}

double mp_moment(const MpLaw& law, int k) {
  require(k >= 0, "mp_moment: order must be nonnegative");
  if (k == 0) return 1.0;
  double sum = 0.0;
  double ratio_pow = 1.0;
  for (int j = 0; j < k; ++j) {
    sum += ratio_pow / (j + 1.0) * binomial(k, j) * binomial(k - 1, j);
    ratio_pow *= law.ratio;
  }
  return std::pow(law.noise_var, k) * sum;
}

MomentCltParams moment_clt_params(const MpLaw& law, Beta beta) {
  const double b = beta_value(beta);
  const double lam = law.noise_var;
  const double c = law.ratio;
  const double lam2 = lam * lam;
  const double lam3 = lam2 * lam;
  const double lam4 = lam2 * lam2;
  const double scale = 2.0 / b;
  MomentCltParams out;
  out.mean = {0.0, (2.0 / b - 1.0) * lam2 * c};
  out.cov[0][0] = scale * lam2 * c;
  out.cov[0][1] = scale * 2.0 * lam3 * c * (c + 1.0);
  out.cov[1][0] = out.cov[0][1];
  out.cov[1][1] = scale * 2.0 * lam4 * c * (2.0 * c * c + 5.0 * c + 2.0);
  out.beta = beta;
  return out;
}

double q_statistic(std::span<const double> eigs) {
  require(eigs.size() >= 2, "q_statistic: need at least 2 eigenvalues");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : eigs) {
    require(v >= 0.0, "q_statistic: eigenvalues must be nonnegative");
    sum += v;
    sum_sq += v * v;
  }
  if (sum <= 0.0) throw std::domain_error("q_statistic: degenerate spectrum");
  return static_cast<double>(eigs.size()) * sum_sq / (sum * sum);
}

QCltParams q_clt_params(double ratio, Beta beta) {
  require(ratio > 0.0, "q_clt_params: ratio must be positive");
  const double b = beta_value(beta);
  return {1.0 + ratio, (2.0 / b - 1.0) * ratio, (4.0 / b) * ratio * ratio};
}

double spike_limit(double pop_eig, const MpLaw& law) {
  require(pop_eig > 0.0, "spike_limit: population eigenvalue must be positive");
  const double threshold = law.noise_var * (1.0 + std::sqrt(law.ratio));
  if (pop_eig > threshold) {
    return pop_eig *
           (1.0 + law.noise_var * law.ratio / (pop_eig - law.noise_var));
  }
  return law.edge_plus();
}

double spike_fluctuation_std(double pop_eig, const MpLaw& law, Beta beta,
                             int n) {
  require(n >= 1, "spike_fluctuation_std: n must be positive");
  const double threshold = law.noise_var * (1.0 + std::sqrt(law.ratio));
  if (!(pop_eig > threshold)) {
    throw std::domain_error(
        "spike_fluctuation_std: below phase transition; fluctuation formula "
        "inapplicable");
  }
  const double gap = pop_eig - law.noise_var;
  const double factor = 1.0 - law.ratio / (gap * gap);
  if (!(factor > 0.0)) {
    throw std::domain_error(
        "spike_fluctuation_std: nonpositive variance factor; fluctuation "
        "formula inapplicable");
  }
  const double variance =
      2.0 / (beta_value(beta) * static_cast<double>(n)) * pop_eig * pop_eig *
      factor;
  return std::sqrt(variance);
}

}  // namespace eigendetect

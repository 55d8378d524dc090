#include "eigendetect/identifiability.hpp"

#include <cmath>
#include <stdexcept>

namespace eigendetect {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

double detection_threshold(double noise_var, int n, int m) {
  return noise_var * (1.0 + std::sqrt(static_cast<double>(n) / m));
}

}  // namespace

TwoSourceGeometry::TwoSourceGeometry(double power1, double power2,
                                     double norm1_sq, double norm2_sq,
                                     double inner_abs_sq, double noise_var)
    : power1(power1),
      power2(power2),
      norm1_sq(norm1_sq),
      norm2_sq(norm2_sq),
      inner_abs_sq(inner_abs_sq),
      noise_var(noise_var) {
  require(power1 > 0.0 && power2 > 0.0,
          "TwoSourceGeometry: source powers must be positive");
  require(norm1_sq > 0.0 && norm2_sq > 0.0,
          "TwoSourceGeometry: vector norms must be positive");
  require(inner_abs_sq >= 0.0,
          "TwoSourceGeometry: |<v1,v2>|^2 must be nonnegative");
  require(noise_var > 0.0, "TwoSourceGeometry: noise_var must be positive");
  if (inner_abs_sq > norm1_sq * norm2_sq * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "TwoSourceGeometry: |<v1,v2>|^2 exceeds ||v1||^2 ||v2||^2 "
        "(Cauchy-Schwarz violation)");
  }
}

int k_eff(std::span<const double> signal_eigs, double noise_var, int n,
          int m) {
  require(n >= 1 && m >= 1, "k_eff: n and m must be positive");
  require(noise_var > 0.0, "k_eff: noise_var must be positive");
  const double threshold = detection_threshold(noise_var, n, m);
  int count = 0;
  for (double v : signal_eigs) {
    if (v > threshold) ++count;
  }
  return count;
}

int k_eff(const PopulationModel& model, int n, int m) {
  return k_eff(model.signal_eigs, model.noise_var, n, m);
}

std::pair<double, double> two_source_eigs(const TwoSourceGeometry& geom) {
  const double p1 = geom.power1 * geom.norm1_sq;
  const double p2 = geom.power2 * geom.norm2_sq;
  const double mean = 0.5 * (p1 + p2);
  const double disc = std::sqrt((p1 - p2) * (p1 - p2) +
                                4.0 * geom.power1 * geom.power2 *
                                    geom.inner_abs_sq);
  return {geom.noise_var + mean + 0.5 * disc,
          geom.noise_var + mean - 0.5 * disc};
}

int two_source_keff(const TwoSourceGeometry& geom, int n, int m) {
  require(n >= 1 && m >= 1, "two_source_keff: n and m must be positive");
  const auto [lambda1, lambda2] = two_source_eigs(geom);
  const double threshold = detection_threshold(geom.noise_var, n, m);
  if (threshold < lambda2) return 2;
  if (threshold < lambda1) return 1;
  return 0;
}

bool identifiability_condition(double power, double norm_sq, double inner_abs,
                               double noise_var, int n, int m) {
  require(n >= 1 && m >= 1,
          "identifiability_condition: n and m must be positive");
  require(power > 0.0 && norm_sq > 0.0 && noise_var > 0.0 && inner_abs >= 0.0,
          "identifiability_condition: parameters must be positive");
  const double lhs =
      power * norm_sq * (1.0 - inner_abs / std::sqrt(norm_sq));
  return lhs > noise_var * std::sqrt(static_cast<double>(n) / m);
}

double z_sep(double pop_eig, double noise_var, int n, int m, Beta beta) {
  require(n >= 1 && m >= 1, "z_sep: n and m must be positive");
  require(noise_var > 0.0, "z_sep: noise_var must be positive");
  const double ratio = static_cast<double>(n) / m;
  const MpLaw law(noise_var, ratio);
  const double threshold = noise_var * (1.0 + std::sqrt(ratio));
  if (!(pop_eig > threshold)) {
    throw std::domain_error("z_sep undefined below phase transition");
  }
  const double separation = spike_limit(pop_eig, law) - law.edge_plus();
  return separation / spike_fluctuation_std(pop_eig, law, beta, n);
}

}  // namespace eigendetect

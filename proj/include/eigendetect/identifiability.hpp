#pragma once

#include <span>
#include <utility>

#include "eigendetect/cov_model.hpp"

namespace eigendetect {

/// Two uncorrelated point sources described through the quantities that
/// determine the top of the population spectrum: per-source powers, squared
/// norms of the mixing vectors, and the squared magnitude of their inner
/// product.
struct TwoSourceGeometry {
  double power1;        // first source power
  double power2;        // second source power
  double norm1_sq;      // ||v1||^2
  double norm2_sq;      // ||v2||^2
  double inner_abs_sq;  // |<v1, v2>|^2
  double noise_var;

  TwoSourceGeometry(double power1, double power2, double norm1_sq,
                    double norm2_sq, double inner_abs_sq, double noise_var);
};

/// Effective number of identifiable signals: the count of population
/// eigenvalues strictly greater than noise_var * (1 + sqrt(n/m)). A signal
/// exactly at the threshold is not counted. No sample-eigenvalue method can
/// asymptotically identify more than this many signals at the given
/// dimension-to-sample ratio.
int k_eff(std::span<const double> signal_eigs, double noise_var, int n, int m);
int k_eff(const PopulationModel& model, int n, int m);

/// The two signal eigenvalues of the rank-two model,
///   noise_var + (p1 + p2)/2 +- sqrt((p1 - p2)^2 + 4 power1 power2 |<v1,v2>|^2)/2
/// with p_j = power_j * ||v_j||^2. Returns (larger, smaller).
std::pair<double, double> two_source_eigs(const TwoSourceGeometry& geom);

/// Piecewise effective signal count for the two-source model: 2, 1 or 0
/// depending on where noise_var * (1 + sqrt(n/m)) falls relative to the
/// two eigenvalues above.
int two_source_keff(const TwoSourceGeometry& geom, int n, int m);

/// Equal-norm, equal-power identifiability inequality, evaluated exactly as
/// printed:
///   power * norm_sq * (1 - inner_abs / sqrt(norm_sq)) > noise_var * sqrt(n/m).
/// Prefer two_source_keff for decisions; this closed form is kept for
/// reference and carries a unit quirk in the inner-product term.
bool identifiability_condition(double power, double norm_sq, double inner_abs,
                               double noise_var, int n, int m);

/// Predicted separation of the sample eigenvalue attached to `pop_eig` from
/// the largest noise eigenvalue, in units of its own fluctuation standard
/// deviation:
///   [ spike limit - noise_var (1 + sqrt(n/m))^2 ] / fluctuation std.
/// Defined only strictly above the phase transition.
double z_sep(double pop_eig, double noise_var, int n, int m, Beta beta);

}  // namespace eigendetect

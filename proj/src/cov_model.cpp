#include "eigendetect/cov_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eigendetect {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gaussian_matrix(
    Eigen::Index rows, Eigen::Index cols, NormalStream stream) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        out(i, j) = stream.next();
      } else {
        out(i, j) = stream.next_complex();
      }
    }
  }
  return out;
}

// Orthonormal n x k frame distributed as the leading columns of a Haar
// rotation: QR of a Gaussian matrix with the R diagonal normalized to be
// real and positive.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> haar_frame(
    Eigen::Index n, Eigen::Index k, NormalStream stream) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix g = gaussian_matrix<Scalar>(n, k, std::move(stream));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  const auto r_diag = qr.matrixQR().diagonal().head(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Scalar d = r_diag(j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / Scalar(mag);
  }
  return q;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sample_impl(
    const PopulationModel& model, int m, const StreamKey& key,
    const SampleOptions& opts) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = model.dim;
  const int k = model.signal_count();
  const double noise_sd = std::sqrt(model.noise_var);

  Matrix x =
      noise_sd *
      gaussian_matrix<Scalar>(n, m, NormalStream(key, Substream::noise));
  if (k == 0) return x;

  Eigen::VectorXd signal_sd(k);
  for (int j = 0; j < k; ++j) signal_sd(j) = std::sqrt(model.signal_eigs[j]);
  const Matrix z_signal =
      gaussian_matrix<Scalar>(k, m, NormalStream(key, Substream::signal));

  if (!opts.rotate) {
    // Diagonal covariance: the first k rows carry the signal eigenvalues.
    x.topRows(k) = signal_sd.asDiagonal() * z_signal;
    return x;
  }

  // One basis per (seed, cell): the rotation stream ignores the trial index.
  const StreamKey basis_key{key.seed, key.cell, 0};
  const Matrix frame =
      haar_frame<Scalar>(n, k, NormalStream(basis_key, Substream::rotation));
  // Project the white part onto the orthogonal complement of the frame and
  // add the signal subspace, so column covariance is exactly
  // frame * diag(signal_eigs) * frame' + noise_var * (I - frame * frame').
  const Matrix coeffs = frame.adjoint() * x;
  x.noalias() -= frame * coeffs;
  x.noalias() += frame * (signal_sd.asDiagonal() * z_signal);
  return x;
}

template <typename Matrix>
Matrix scm_impl(const Matrix& x) {
  const double inv_m = 1.0 / static_cast<double>(x.cols());
  Matrix out = Matrix::Zero(x.rows(), x.rows());
  out.template selfadjointView<Eigen::Lower>().rankUpdate(x, inv_m);
  return out.template selfadjointView<Eigen::Lower>();
}

template <typename Matrix>
std::vector<double> hermitian_eigs_descending(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::domain_error("scm_eigenvalues: eigensolver did not converge");
  }
  const auto& vals = solver.eigenvalues();
  std::vector<double> out(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    out[out.size() - 1 - static_cast<std::size_t>(i)] = vals(i);
  }
  return out;
}

}  // namespace

Beta field_beta(Field f) { return f == Field::real ? Beta::real : Beta::cplx; }

PopulationModel::PopulationModel(std::vector<double> eigs, double noise_var,
                                 int dim, Field field)
    : signal_eigs(std::move(eigs)),
      noise_var(noise_var),
      dim(dim),
      field(field) {
  require(noise_var > 0.0, "PopulationModel: noise_var must be positive");
  require(dim >= 1, "PopulationModel: dim must be positive");
  require(signal_count() < dim,
          "PopulationModel: need fewer signals than dimensions");
  std::sort(signal_eigs.begin(), signal_eigs.end(), std::greater<>());
  for (double v : signal_eigs) {
    require(v > noise_var,
            "PopulationModel: signal eigenvalues must exceed noise_var");
  }
}

Eigen::Index SnapshotMatrix::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, data);
}

Eigen::Index SnapshotMatrix::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, data);
}

EigenSpectrum EigenSpectrum::from_values(std::vector<double> values, int n,
                                         int m, Beta beta) {
  require(n >= 1 && m >= 1, "EigenSpectrum: n and m must be positive");
  require(static_cast<int>(values.size()) == n,
          "EigenSpectrum: expected exactly n eigenvalues, got " +
              std::to_string(values.size()));
  std::sort(values.begin(), values.end(), std::greater<>());
  for (double v : values) {
    require(std::isfinite(v), "EigenSpectrum: eigenvalues must be finite");
    require(v >= 0.0, "EigenSpectrum: eigenvalues must be nonnegative");
  }
  const auto positives =
      std::count_if(values.begin(), values.end(), [](double v) { return v > 0.0; });
  require(positives <= std::min(n, m),
          "EigenSpectrum: more than min(n, m) positive eigenvalues");
  return {std::move(values), n, m, beta};
}

SnapshotMatrix sample_snapshots(const PopulationModel& model, int m,
                                const StreamKey& key,
                                const SampleOptions& opts) {
  require(m >= 1, "sample_snapshots: m must be positive");
  if (model.field == Field::real) {
    return {sample_impl<double>(model, m, key, opts)};
  }
  return {sample_impl<std::complex<double>>(model, m, key, opts)};
}

SnapshotMatrix sample_snapshots(const PopulationModel& model, int m,
                                std::uint64_t seed,
                                const SampleOptions& opts) {
  return sample_snapshots(model, m, StreamKey{seed, 0, 0}, opts);
}

std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> scm(const SnapshotMatrix& x) {
  return std::visit(
      [](const auto& m) -> std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> {
        return scm_impl(m);
      },
      x.data);
}

EigenSpectrum scm_eigenvalues(const SnapshotMatrix& x) {
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());
  std::vector<double> eigs = std::visit(
      [&](const auto& mat) {
        using Matrix = std::decay_t<decltype(mat)>;
        const double inv_m = 1.0 / static_cast<double>(m);
        if (m < n) {
          // Gram trick: the nonzero eigenvalues of (1/m) X X' equal those
          // of the m x m matrix (1/m) X' X; the rest are exact zeros.
          Matrix gram = Matrix::Zero(m, m);
          gram.template selfadjointView<Eigen::Lower>().rankUpdate(
              mat.adjoint(), inv_m);
          auto vals = hermitian_eigs_descending<Matrix>(
              gram.template selfadjointView<Eigen::Lower>());
          vals.resize(static_cast<std::size_t>(n), 0.0);
          return vals;
        }
        return hermitian_eigs_descending<Matrix>(scm_impl(mat));
      },
      x.data);

  const double l_max = eigs.empty() ? 0.0 : std::max(eigs.front(), 0.0);
  const double tol = 1e-12 * l_max * n;
  for (double& v : eigs) {
    if (v < -tol) {
      throw std::domain_error("scm_eigenvalues: covariance not PSD");
    }
    if (std::abs(v) < tol || v < 0.0) v = 0.0;
  }
  return EigenSpectrum::from_values(std::move(eigs), n, m,
                                    field_beta(x.field()));
}

std::vector<EigenSpectrum> bin_spectra(const std::vector<SnapshotMatrix>& bins) {
  require(!bins.empty(), "bin_spectra: need at least one bin");
  const auto n = bins.front().rows();
  const auto m = bins.front().cols();
  const auto field = bins.front().field();
  for (const auto& b : bins) {
    require(b.rows() == n && b.cols() == m && b.field() == field,
            "bin_spectra: bins must share (n, m, field)");
  }
  std::vector<EigenSpectrum> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back(scm_eigenvalues(b));
  return out;
}

}  // namespace eigendetect

#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace assure {

/// Thrown when a matrix fails a symmetry or positive-semidefiniteness check.
class NotPsdError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Symmetric positive-semidefinite matrix, as used for V_n, the stage prior
/// correlations and the design marginal covariance. Symmetry is checked on
/// construction (1e-10 relative tolerance); definiteness is checked when the
/// matrix is factored for sampling.
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries);

    static CovarianceMatrix identity(Eigen::Index dim);

    const Eigen::MatrixXd& entries() const { return entries_; }
    Eigen::Index dimension() const { return entries_.rows(); }

    /// Transform L with L L^T = cov, usable to map iid standard normals to
    /// correlated draws. Eigenvalues in [-1e-10*max, 0] are clamped to zero
    /// so point masses and rank-deficient priors are accepted; anything more
    /// negative raises NotPsdError.
    Eigen::MatrixXd sampling_factor() const;

  private:
    Eigen::MatrixXd entries_;
};

}  // namespace assure

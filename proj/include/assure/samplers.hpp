#pragma once

#include <Eigen/Dense>

#include "assure/covariance.hpp"
#include "assure/rng.hpp"

namespace assure {

/// Standard normal draw via the inverse-cdf map, so sequences depend only on
/// the stream and carry no rejection-loop state.
double sample_std_normal(RngStream& rng);

/// Gamma(shape, rate = 1) draw, Marsaglia-Tsang squeeze method.
double sample_gamma(double shape, RngStream& rng);

/// Inverse gamma with density proportional to x^{-(shape+1)} exp(-scale/x);
/// mean scale/(shape-1) for shape > 1.
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

double sample_beta(double alpha, double beta, RngStream& rng);

long sample_binomial(long n, double p, RngStream& rng);

/// One draw from N(mean, cov). Rank-deficient covariances are allowed, down
/// to the zero matrix (point mass at the mean).
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const CovarianceMatrix& cov,
                           RngStream& rng);

/// Same draw with a precomputed sampling factor (L L^T = cov); used in the
/// simulation loops where the covariance is fixed across iterations.
Eigen::VectorXd sample_mvn_factored(const Eigen::VectorXd& mean, const Eigen::MatrixXd& factor,
                                    RngStream& rng);

}  // namespace assure

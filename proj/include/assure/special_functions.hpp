#pragma once

namespace assure {

/// Standard normal cumulative distribution function Phi(x).
double std_normal_cdf(double x);

/// Standard normal density phi(x).
double std_normal_pdf(double x);

/// Inverse of Phi. Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

}  // namespace assure

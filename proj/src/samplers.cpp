#include "assure/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "assure/special_functions.hpp"

namespace assure {

double sample_std_normal(RngStream& rng) {
    return std_normal_quantile(rng.uniform());
}

double sample_gamma(double shape, RngStream& rng) {
    if (!(shape > 0.0)) {
        throw std::domain_error("sample_gamma: shape must be positive");
    }
    if (shape < 1.0) {
        // Boost to shape+1 and scale back by a uniform power.
        double u = rng.uniform();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x = sample_std_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw std::domain_error("sample_inverse_gamma: shape and scale must be positive");
    }
    return scale / sample_gamma(shape, rng);
}

double sample_beta(double alpha, double beta, RngStream& rng) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::domain_error("sample_beta: shape parameters must be positive");
    }
    double x = sample_gamma(alpha, rng);
    double y = sample_gamma(beta, rng);
    return x / (x + y);
}

long sample_binomial(long n, double p, RngStream& rng) {
    if (n < 1) {
        throw std::domain_error("sample_binomial: n must be a positive integer");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("sample_binomial: p must lie in [0,1]");
    }
    if (p == 0.0) return 0;
    if (p == 1.0) return n;
    long count = 0;
    for (long i = 0; i < n; ++i) {
        if (rng.uniform() < p) ++count;
    }
    return count;
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const CovarianceMatrix& cov,
                           RngStream& rng) {
    if (mean.size() != cov.dimension()) {
        throw std::invalid_argument("sample_mvn: mean length must match covariance dimension");
    }
    return sample_mvn_factored(mean, cov.sampling_factor(), rng);
}

Eigen::VectorXd sample_mvn_factored(const Eigen::VectorXd& mean, const Eigen::MatrixXd& factor,
                                    RngStream& rng) {
    Eigen::VectorXd z(factor.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = sample_std_normal(rng);
    }
    return mean + factor * z;
}

}  // namespace assure

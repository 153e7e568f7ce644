#include "assure/goal.hpp"

#include <cmath>

#include "assure/design.hpp"
#include "assure/special_functions.hpp"

namespace assure {

void GoalSpec::validate() const {
    if (!(K > 0.0)) throw std::domain_error("GoalSpec: K must be positive");
    if (!(pi > 0.0 && pi < 1.0)) throw std::domain_error("GoalSpec: pi must lie in (0,1)");
    if (!(sigsq > 0.0)) throw std::domain_error("GoalSpec: sigsq must be positive");
    if (u.size() == 0 || u.size() != beta_0.size() || u.size() != beta_1.size()) {
        throw std::invalid_argument("GoalSpec: u, beta_0 and beta_1 must share one length");
    }
    if (u.dot(beta_1) == u.dot(beta_0)) {
        throw std::domain_error("GoalSpec: critical difference u^T(beta_1 - beta_0) is zero");
    }
}

Eigen::VectorXd solve_contrast_vector(const Eigen::MatrixXd& X, const Eigen::VectorXd& u) {
    if (u.size() != X.cols()) {
        throw std::invalid_argument("solve_contrast_vector: u length must match X columns");
    }
    // Minimal-norm solution of X^T z = u.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::VectorXd z = svd.solve(u);
    const double residual = (X.transpose() * z - u).norm();
    if (residual > 1e-8 * u.norm()) {
        throw EstimabilityError("solve_contrast_vector: u is not in the row space of X");
    }
    return z;
}

namespace {

double goal_value(double K, double pi, double delta_raw, double sigma_ztz_root) {
    // sigma_ztz_root = sigma * sqrt(z^T z). A negative critical difference
    // flips the acceptance inequality, which lands on the same expression in
    // |delta|; using the magnitude keeps r* invariant under relabeling the
    // hypotheses.
    const double delta = std::abs(delta_raw);
    const double log_term = (sigma_ztz_root / delta) * std::log(K * pi / (1.0 - pi));
    const double half = delta / (2.0 * sigma_ztz_root);
    return K * pi * std_normal_cdf(log_term + half) +
           (1.0 - pi) * (1.0 - std_normal_cdf(log_term - half));
}

double contrast_norm_sq(const GoalSpec& spec, double n) {
    if (spec.Xn) {
        return solve_contrast_vector(*spec.Xn, spec.u).squaredNorm();
    }
    const double rounded = std::round(n);
    if (std::abs(n - rounded) < 1e-9) {
        DesignMatrix X = gen_design_balanced(static_cast<int>(rounded),
                                             static_cast<int>(spec.u.size()));
        return solve_contrast_vector(X.entries, spec.u).squaredNorm();
    }
    if (spec.u.size() != 1) {
        throw std::domain_error(
            "rate_correct_classification: fractional n is only supported for the scalar model");
    }
    return spec.u[0] * spec.u[0] / n;
}

}  // namespace

double rate_correct_classification_at(const GoalSpec& spec, double n) {
    spec.validate();
    if (!(n > 0.0)) throw std::domain_error("rate_correct_classification: n must be positive");
    const double delta = spec.u.dot(spec.beta_1) - spec.u.dot(spec.beta_0);
    const double ztz = contrast_norm_sq(spec, n);
    return goal_value(spec.K, spec.pi, delta, std::sqrt(spec.sigsq) * std::sqrt(ztz));
}

ColumnTable rate_correct_classification(const GoalSpec& spec, const std::vector<double>& n_grid) {
    if (n_grid.empty()) {
        throw std::domain_error("rate_correct_classification: sample size grid is empty");
    }
    ColumnTable table;
    table.headers = {"n", "rate_correct_classification"};
    for (double n : n_grid) {
        table.rows.push_back({n, rate_correct_classification_at(spec, n)});
    }
    return table;
}

double frequentist_sample_size(double alpha, double beta, double sigma, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
        throw std::domain_error("frequentist_sample_size: alpha and beta must lie in (0,1)");
    }
    if (delta == 0.0) {
        throw std::domain_error("frequentist_sample_size: delta must be nonzero");
    }
    const double z_sum = std_normal_quantile(alpha) + std_normal_quantile(beta);
    const double ratio = sigma / delta;
    return z_sum * z_sum * ratio * ratio;
}

ColumnTable power_rstar_pairs(const std::vector<double>& beta_grid, double alpha, double sigma,
                              double delta, const GoalSpec& goal) {
    if (beta_grid.empty()) {
        throw std::domain_error("power_rstar_pairs: beta grid is empty");
    }
    GoalSpec scalar = goal;
    scalar.Xn.reset();
    ColumnTable table;
    table.headers = {"n", "r_star", "beta"};
    for (double beta : beta_grid) {
        const double n = frequentist_sample_size(alpha, beta, sigma, delta);
        // r* is evaluated at the largest attainable integer sample size.
        const double n_int = std::max(1.0, std::floor(n));
        table.rows.push_back({n, rate_correct_classification_at(scalar, n_int), beta});
    }
    return table;
}

}  // namespace assure

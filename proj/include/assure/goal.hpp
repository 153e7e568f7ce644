#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

#include "assure/table.hpp"

namespace assure {

/// Thrown when the contrast u is not expressible as X^T z.
class EstimabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rate-of-correct-classification setup for H0: u^T beta = u^T beta_0 versus
/// Ha: u^T beta = u^T beta_1 with prior P(H0) = pi and utility K on a correct
/// acceptance; H0 is kept when its posterior probability reaches 1/(1+K).
struct GoalSpec {
    double K = 1.0;
    double pi = 0.5;
    Eigen::VectorXd u;
    Eigen::VectorXd beta_0;
    Eigen::VectorXd beta_1;
    double sigsq = 1.0;
    std::optional<Eigen::MatrixXd> Xn;  // default: balanced gen_design per n

    void validate() const;
};

/// Minimal-norm z with X^T z = u, via SVD with singular values below
/// 1e-12 * sigma_max treated as zero. Throws EstimabilityError when the
/// residual exceeds 1e-8 * ||u||.
Eigen::VectorXd solve_contrast_vector(const Eigen::MatrixXd& X, const Eigen::VectorXd& u);

/// r* per sample size: columns n,rate_correct_classification. Real-valued n
/// is accepted; the scalar balanced design then uses the z^T z = 1/n shortcut.
ColumnTable rate_correct_classification(const GoalSpec& spec, const std::vector<double>& n_grid);

/// Single r* value (used by both the grid and the pairing table).
double rate_correct_classification_at(const GoalSpec& spec, double n);

/// n_F = (z_alpha + z_beta)^2 (sigma/delta)^2.
double frequentist_sample_size(double alpha, double beta, double sigma, double delta);

/// Per Type II error beta: the frequentist n and the r* the goal function
/// attains at floor(n), the largest attainable integer sample size.
/// Columns n,r_star,beta.
ColumnTable power_rstar_pairs(const std::vector<double>& beta_grid, double alpha, double sigma,
                              double delta, const GoalSpec& goal);

}  // namespace assure

#include "assure/closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include "assure/conjugate.hpp"
#include "assure/special_functions.hpp"

namespace assure {

void TwoPriorSpec::validate() const {
    if (!(sigsq > 0.0)) throw std::domain_error("TwoPriorSpec: sigsq must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("TwoPriorSpec: alpha must lie in (0,1)");
    }
    if (n_a < 0.0 || n_d < 0.0) {
        throw std::domain_error("TwoPriorSpec: precision parameters must be nonnegative");
    }
}

namespace {

double power_one_sided(double n, double delta, double sigma, double z_alpha) {
    return std_normal_cdf(std::sqrt(n) * delta / sigma + z_alpha);
}

/// Probability under the design marginal ybar ~ N(theta_1, sigsq(1/n + 1/n_d))
/// that the posterior upper-tail condition holds at level `alpha`, i.e. that
/// ybar crosses the threshold implied by the analysis posterior.
double assurance_upper_tail(double n, const TwoPriorSpec& spec, double alpha) {
    const double sigma = std::sqrt(spec.sigsq);
    const double na = spec.n_a;
    const double z_hi = std_normal_quantile(1.0 - alpha);
    // P(theta > theta_0 | ybar) > 1-alpha  <=>  ybar > threshold.
    const double threshold =
        ((n + na) * (spec.theta_0 + sigma * z_hi / std::sqrt(n + na)) - na * spec.theta_1) / n;
    const double marg_sd = sigma * std::sqrt(1.0 / n + 1.0 / spec.n_d);
    return std_normal_cdf((spec.theta_1 - threshold) / marg_sd);
}

}  // namespace

double frequentist_power(double n, const TwoPriorSpec& spec) {
    spec.validate();
    if (!(n > 0.0)) throw std::domain_error("frequentist_power: n must be positive");
    const double delta = spec.theta_1 - spec.theta_0;
    const double sigma = std::sqrt(spec.sigsq);
    switch (spec.alt) {
        case Alt::greater:
            return power_one_sided(n, delta, sigma, std_normal_quantile(spec.alpha));
        case Alt::less:
            return power_one_sided(n, -delta, sigma, std_normal_quantile(spec.alpha));
        default: {
            const double z = std_normal_quantile(spec.alpha / 2.0);
            return power_one_sided(n, delta, sigma, z) + power_one_sided(n, -delta, sigma, z);
        }
    }
}

double closed_form_assurance(double n, const TwoPriorSpec& spec) {
    spec.validate();
    if (!(n > 0.0)) throw std::domain_error("closed_form_assurance: n must be positive");
    switch (spec.alt) {
        case Alt::greater:
            return assurance_upper_tail(n, spec, spec.alpha);
        case Alt::less: {
            TwoPriorSpec mirrored = spec;
            mirrored.theta_0 = -spec.theta_0;
            mirrored.theta_1 = -spec.theta_1;
            return assurance_upper_tail(n, mirrored, spec.alpha);
        }
        default: {
            TwoPriorSpec mirrored = spec;
            mirrored.theta_0 = -spec.theta_0;
            mirrored.theta_1 = -spec.theta_1;
            return assurance_upper_tail(n, spec, spec.alpha / 2.0) +
                   assurance_upper_tail(n, mirrored, spec.alpha / 2.0);
        }
    }
}

ColumnTable power_assurance_curve(const std::vector<double>& n_grid, const TwoPriorSpec& spec,
                                  bool include_sim, const McSettings& mc) {
    spec.validate();
    if (n_grid.empty()) {
        throw std::domain_error("power_assurance_curve: sample size grid is empty");
    }
    ColumnTable table;
    table.headers = {"n", "power", "assurance_exact"};
    if (include_sim) table.headers.push_back("assurance_sim");

    std::vector<double> sim;
    if (include_sim) {
        // Scalar conjugate mapping: theta ~ N(theta_1, sigsq/n_a) at analysis,
        // theta ~ N(theta_1, sigsq/n_d) at design, objective theta vs theta_0.
        ConjugateModelSpec model;
        model.p = 1;
        model.Vbeta_d = Eigen::MatrixXd::Constant(1, 1, 1.0 / spec.n_d);
        model.Vbeta_a_inv = Eigen::MatrixXd::Constant(1, 1, spec.n_a);
        model.mu_beta_d = Eigen::VectorXd::Constant(1, spec.theta_1);
        model.mu_beta_a = Eigen::VectorXd::Constant(1, spec.theta_1);
        model.sigsq = spec.sigsq;
        model.alt = spec.alt;
        model.alpha = spec.alpha;
        HypothesisSpec hyp{Eigen::VectorXd::Ones(1), spec.theta_0};
        std::vector<int> n_int;
        n_int.reserve(n_grid.size());
        for (double n : n_grid) n_int.push_back(static_cast<int>(std::lround(n)));
        AssuranceTable sim_table = simulate_assurance(model, hyp, n_int, mc);
        for (const auto& row : sim_table.rows) sim.push_back(row.assurance);
    }

    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        std::vector<double> row{n_grid[i], frequentist_power(n_grid[i], spec),
                                closed_form_assurance(n_grid[i], spec)};
        if (include_sim) row.push_back(sim[i]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace assure

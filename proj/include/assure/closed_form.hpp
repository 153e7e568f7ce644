#pragma once

#include <optional>
#include <vector>

#include "assure/table.hpp"
#include "assure/types.hpp"

namespace assure {

/// Scalar-mean model with normal priors at the analysis and design stages.
/// n_a and n_d are the stage precision parameters (effective prior sample
/// sizes); zero and infinite precisions are passed as small/large finite
/// sentinels such as 1e-8 and 1e8.
struct TwoPriorSpec {
    double theta_0 = 0.0;
    double theta_1 = 0.0;
    double sigsq = 1.0;
    double n_a = 0.0;
    double n_d = 0.0;
    Alt alt = Alt::greater;
    double alpha = 0.05;

    void validate() const;
};

/// Exact frequentist power of the z-test at sample size n.
double frequentist_power(double n, const TwoPriorSpec& spec);

/// Exact assurance: probability under the design-stage marginal of the sample
/// mean that the posterior tail condition P(theta > theta_0 | ybar) > 1-alpha
/// holds (mirrored for "less", both tails at alpha/2 for "two.sided").
double closed_form_assurance(double n, const TwoPriorSpec& spec);

/// Combined curve with headers n,power,assurance_exact[,assurance_sim].
/// The simulated column maps the spec onto the scalar conjugate model
/// (Vbeta_a_inv = n_a, Vbeta_d = 1/n_d) and runs the Monte Carlo estimator.
ColumnTable power_assurance_curve(const std::vector<double>& n_grid, const TwoPriorSpec& spec,
                                  bool include_sim, const McSettings& mc);

}  // namespace assure

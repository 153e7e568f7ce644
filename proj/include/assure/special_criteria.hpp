#pragma once

#include <optional>
#include <vector>

#include "assure/table.hpp"
#include "assure/types.hpp"

namespace assure {

/// Precision-margin criterion: the study succeeds when the posterior mass of
/// |xbar - mu| <= d reaches 1 - alpha.
struct AdcockSpec {
    double d = 0.0;
    double mu_beta_a = 0.0;
    double mu_beta_d = 0.0;
    double n_a = 0.0;
    double n_d = 0.0;
    double sig_sq = 1.0;
    double alpha = 0.05;

    void validate() const;
};

/// Difference of two proportions with Beta priors. p1/p2 may be fixed; when
/// absent a fresh value is drawn from the corresponding Beta prior on every
/// Monte Carlo iteration.
struct BetaBinSpec {
    std::optional<double> p1;
    std::optional<double> p2;
    double alpha_1 = 0.5;
    double beta_1 = 0.5;
    double alpha_2 = 0.5;
    double beta_2 = 0.5;
    double sig_level = 0.05;
    Alt alt = Alt::two_sided;

    void validate() const;
};

AssuranceTable adcock_assurance(const std::vector<int>& n_grid, const AdcockSpec& spec,
                                const McSettings& mc);

AssuranceTable betabin_assurance(const std::vector<int>& n1_grid, const std::vector<int>& n2_grid,
                                 const BetaBinSpec& spec, const McSettings& mc);

/// Normal-approximation power for detecting p1 - p2 != 0 at equal group size n.
double prop_diff_power(double n, double p1, double p2, double sig_level);

}  // namespace assure

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "assure/covariance.hpp"
#include "assure/design.hpp"
#include "assure/rng.hpp"
#include "assure/table.hpp"
#include "assure/types.hpp"

namespace assure {

/// Conjugate Bayesian linear model y = Xn beta + eps, eps ~ N(0, sigsq Vn),
/// with separate design and analysis priors on beta. When Xn is absent it is
/// generated per sample size (gen_design, or gen_design_longitudinal in the
/// longitudinal runs) with `p` coefficients. Vbeta_a_inv = 0 is the flat
/// analysis prior; Vbeta_d = 0 is a point-mass design prior.
struct ConjugateModelSpec {
    std::optional<Eigen::MatrixXd> Xn;
    int p = 0;
    std::optional<Eigen::MatrixXd> Vn;  // default: identity sized to Xn rows
    Eigen::MatrixXd Vbeta_d;
    Eigen::MatrixXd Vbeta_a_inv;
    Eigen::VectorXd mu_beta_d;
    Eigen::VectorXd mu_beta_a;
    double sigsq = 1.0;
    Alt alt = Alt::greater;
    double alpha = 0.05;
};

/// Linear hypothesis u^T beta vs C.
struct HypothesisSpec {
    Eigen::VectorXd u;
    double C = 0.0;
};

/// Stage inverse-gamma priors on sigma^2 for the unknown-variance routine.
/// The analysis pair may be improper; only the resulting posterior parameters
/// are validated.
struct IGPriorPair {
    double a_sig_d = 0.0;
    double b_sig_d = 0.0;
    double a_sig_a = 0.0;
    double b_sig_a = 0.0;
};

struct Posterior {
    Eigen::MatrixXd M;   // posterior covariance factor: beta | y ~ N(M m, sigsq M)
    Eigen::VectorXd m;
    double a_star = 0.0;
    double b_star = 0.0;
};

/// Full conjugate update. M^{-1} = Vbeta_a_inv + Xn^T Vn^{-1} Xn,
/// m = Vbeta_a_inv mu_a + Xn^T Vn^{-1} y, a* = a + n/2,
/// b* = b + (mu^T Vinv mu + y^T Vn^{-1} y - m^T M m)/2.
/// Requires an explicit Xn in the model. Throws NotPsdError when M^{-1} is
/// singular.
Posterior posterior_update(const ConjugateModelSpec& model, const Eigen::VectorXd& y,
                           double a_prior = 0.0, double b_prior = 0.0);

/// Analysis-stage decision: for alt = greater, accept iff
/// Phi((C - u^T M m) / (sigma sqrt(u^T M u))) < alpha.
bool analysis_decision(const Eigen::MatrixXd& M, const Eigen::VectorXd& m,
                       const HypothesisSpec& hyp, double sigsq, Alt alt, double alpha);

/// One dataset from the design marginal y ~ N(Xn mu_d, sigsq Vn*) with
/// Vn* = Xn Vbeta_d Xn^T + Vn. sigma2_override replaces model.sigsq in the
/// unknown-variance outer loop.
Eigen::VectorXd sample_design_marginal(const ConjugateModelSpec& model, RngStream& rng,
                                       std::optional<double> sigma2_override = {});

/// Monte Carlo assurance over a grid of balanced sample sizes (or repeated
/// measure counts when `longitudinal` is given). Reproducible bitwise for a
/// fixed seed, independent of mc.workers.
AssuranceTable simulate_assurance(const ConjugateModelSpec& model, const HypothesisSpec& hyp,
                                  const std::vector<int>& n_grid, const McSettings& mc,
                                  const std::optional<LongitudinalSpec>& longitudinal = {});

struct UnbalancedResult {
    AssuranceTable table;                   // pairwise over (n1[i], n2[i])
    std::optional<AssuranceTable> surface;  // full Cartesian grid when requested
};

UnbalancedResult simulate_assurance_unbalanced(const std::vector<int>& n1_grid,
                                               const std::vector<int>& n2_grid, int repeats,
                                               const ConjugateModelSpec& model,
                                               const HypothesisSpec& hyp, const McSettings& mc,
                                               bool surface);

/// Unknown-variance assurance: R outer datasets drawn with sigma^2 from the
/// design IG prior, each judged by the fraction of J joint posterior draws of
/// (sigma^2, beta) landing on the alternative side of C.
AssuranceTable simulate_assurance_unknown_var(const ConjugateModelSpec& model,
                                              const HypothesisSpec& hyp, const IGPriorPair& ig,
                                              const std::vector<int>& n_grid,
                                              const McSettings& mc);

}  // namespace assure

#include <doctest.h>

#include <cmath>

#include "assure/conjugate.hpp"
#include "assure/design.hpp"
#include "assure/samplers.hpp"
#include "assure/special_functions.hpp"
#include "oracles.hpp"

using namespace assure;

namespace {

/// Scalar-mean model: flat or precision-n_a analysis prior, point-mass or
/// variance-1/n_d design prior.
ConjugateModelSpec scalar_model(double sigsq, double mu_d, double va_inv, double vd) {
    ConjugateModelSpec m;
    m.p = 1;
    m.Vbeta_d = Eigen::MatrixXd::Constant(1, 1, vd);
    m.Vbeta_a_inv = Eigen::MatrixXd::Constant(1, 1, va_inv);
    m.mu_beta_d = Eigen::VectorXd::Constant(1, mu_d);
    m.mu_beta_a = Eigen::VectorXd::Constant(1, mu_d);
    m.sigsq = sigsq;
    return m;
}

ConjugateModelSpec example1_model() {
    ConjugateModelSpec m = scalar_model(0.265, 0.25, 0.0, 0.0);
    m.alt = Alt::greater;
    m.alpha = 0.05;
    return m;
}

}  // namespace

TEST_CASE("posterior_update collapses to the sample mean under a flat prior") {
    const int n = 12;
    ConjugateModelSpec m = scalar_model(1.0, 0.0, 0.0, 0.0);
    m.Xn = Eigen::MatrixXd::Ones(n, 1);

    RngStream rng(5, 0);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = sample_std_normal(rng);

    const Posterior post = posterior_update(m, y);
    CHECK(std::abs(post.M(0, 0) - 1.0 / n) <= 1e-14);
    CHECK(std::abs((post.M * post.m)(0) - y.mean()) <= 1e-12);
    CHECK(post.a_star == doctest::Approx(n / 2.0));
}

TEST_CASE("posterior mean equals GLS under a flat prior with general Vn") {
    const int n = 30;
    ConjugateModelSpec m;
    m.p = 2;
    m.Vbeta_d = Eigen::MatrixXd::Zero(2, 2);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(2, 2);
    m.mu_beta_d = Eigen::Vector2d(0.3, -0.1);
    m.mu_beta_a = Eigen::Vector2d::Zero();
    m.sigsq = 0.265;
    m.Xn = gen_design_balanced(n / 2, 2).entries;
    Eigen::VectorXd diag(n);
    RngStream rng(6, 0);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 + 0.5 * std::abs(sample_std_normal(rng));
    m.Vn = Eigen::MatrixXd(diag.asDiagonal());

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = sample_std_normal(rng);

    const Posterior post = posterior_update(m, y);
    const Eigen::MatrixXd X = *m.Xn;
    const Eigen::MatrixXd W = m.Vn->inverse();
    const Eigen::VectorXd gls = (X.transpose() * W * X).inverse() * X.transpose() * W * y;
    CHECK(((post.M * post.m) - gls).norm() <= 1e-10);
}

TEST_CASE("scalar conjugate posterior matches the two-prior formula") {
    const int n = 25;
    const double n_a = 7.0, theta_1 = 0.25;
    ConjugateModelSpec m = scalar_model(0.104, theta_1, n_a, 0.0);
    m.Xn = Eigen::MatrixXd::Ones(n, 1);

    RngStream rng(7, 0);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = 0.2 + 0.3 * sample_std_normal(rng);

    const Posterior post = posterior_update(m, y);
    const double expected = (n_a * theta_1 + n * y.mean()) / (n + n_a);
    CHECK(std::abs((post.M * post.m)(0) - expected) <= 1e-12);
}

TEST_CASE("posterior precision identity holds entrywise") {
    const int n = 24;
    ConjugateModelSpec m;
    m.p = 3;
    m.Vbeta_d = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd va_inv(3, 3);
    va_inv << 2.0, 0.3, 0.0, 0.3, 1.5, 0.2, 0.0, 0.2, 1.0;
    m.Vbeta_a_inv = va_inv;
    m.mu_beta_d = Eigen::Vector3d(1, 2, 3);
    m.mu_beta_a = Eigen::Vector3d(0.5, 0.5, 0.5);
    m.sigsq = 2.0;
    m.Xn = gen_design_balanced(n / 3, 3).entries;

    const Posterior post = posterior_update(m, Eigen::VectorXd::Zero(n));
    const Eigen::MatrixXd lhs =
        post.M.inverse() - m.Xn->transpose() * *m.Xn;  // Vn = I here
    CHECK((lhs - va_inv).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("b_star stays positive for flat priors with n > p") {
    const int n = 40;
    ConjugateModelSpec m;
    m.p = 2;
    m.Vbeta_d = Eigen::MatrixXd::Zero(2, 2);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(2, 2);
    m.mu_beta_d = Eigen::Vector2d::Zero();
    m.mu_beta_a = Eigen::Vector2d::Zero();
    m.sigsq = 1.0;
    m.Xn = gen_design_balanced(n / 2, 2).entries;
    RngStream rng(8, 0);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = sample_std_normal(rng);
        CHECK(posterior_update(m, y).b_star > 0.0);
    }
}

TEST_CASE("singular posterior precision is reported") {
    ConjugateModelSpec m;
    m.p = 2;
    m.Vbeta_d = Eigen::MatrixXd::Zero(2, 2);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(2, 2);
    m.mu_beta_d = Eigen::Vector2d::Zero();
    m.mu_beta_a = Eigen::Vector2d::Zero();
    m.sigsq = 1.0;
    Eigen::MatrixXd X(4, 2);
    X << 1, 1, 1, 1, 1, 1, 1, 1;  // duplicated column: X^T X singular
    m.Xn = X;
    CHECK_THROWS_AS(posterior_update(m, Eigen::VectorXd::Zero(4)), NotPsdError);
}

TEST_CASE("analysis_decision evaluates the posterior tail rule") {
    const Eigen::MatrixXd M = Eigen::MatrixXd::Constant(1, 1, 0.01);
    HypothesisSpec hyp{Eigen::VectorXd::Ones(1), 0.0};

    SUBCASE("far above the threshold accepts") {
        const Eigen::VectorXd m = Eigen::VectorXd::Constant(1, 200.0);  // u^T M m = 2.0 = 20 sd
        CHECK(analysis_decision(M, m, hyp, 1.0, Alt::greater, 0.05));
    }
    SUBCASE("at the boundary rejects for alpha below one half") {
        const Eigen::VectorXd m = Eigen::VectorXd::Zero(1);
        CHECK_FALSE(analysis_decision(M, m, hyp, 1.0, Alt::greater, 0.05));
    }
    SUBCASE("matches a direct cdf evaluation") {
        RngStream rng(9, 0);
        for (int i = 0; i < 200; ++i) {
            const double t = sample_std_normal(rng);
            const Eigen::VectorXd m = Eigen::VectorXd::Constant(1, t / 0.01);
            const bool expected = oracles::normal_cdf((0.0 - t) / (0.1)) < 0.05;
            CHECK(analysis_decision(M, m, hyp, 1.0, Alt::greater, 0.05) == expected);
        }
    }
    SUBCASE("degenerate contrast errors") {
        CHECK_THROWS_AS(analysis_decision(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1),
                                          hyp, 1.0, Alt::greater, 0.05),
                        std::domain_error);
    }
}

TEST_CASE("design marginal honors point masses and moments") {
    SUBCASE("point-mass design prior at zero variance gives X mu exactly") {
        const int n = 6;
        ConjugateModelSpec m = scalar_model(1.0, 0.7, 0.0, 0.0);
        m.Xn = Eigen::MatrixXd::Ones(n, 1);
        RngStream rng(10, 0);
        const Eigen::VectorXd y = sample_design_marginal(m, rng, 0.0);
        CHECK((y - Eigen::VectorXd::Constant(n, 0.7)).norm() <= 1e-12);
    }
    SUBCASE("ybar has the stated design-marginal moments") {
        const int n = 10;
        ConjugateModelSpec m = scalar_model(0.265, 0.25, 0.0, 0.0);
        m.Xn = Eigen::MatrixXd::Ones(n, 1);
        RngStream rng(11, 0);
        const int reps = 100000;
        double sum = 0.0;
        for (int r = 0; r < reps; ++r) sum += sample_design_marginal(m, rng).mean();
        const double se = std::sqrt(m.sigsq / n / reps);
        CHECK(std::abs(sum / reps - 0.25) <= 3.0 * se);
    }
}

TEST_CASE("simulate_assurance matches the frequentist anchor") {
    ConjugateModelSpec m = example1_model();
    HypothesisSpec hyp{Eigen::VectorXd::Ones(1), 0.15};
    McSettings mc;
    mc.mc_iter = 5000;
    mc.seed = 21;

    const std::vector<int> grid{25, 50, 100, 200};
    const AssuranceTable t = simulate_assurance(m, hyp, grid, mc);
    REQUIRE(t.rows.size() == grid.size());
    const double z_alpha = std_normal_quantile(0.05);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double n = grid[i];
        const double exact =
            std_normal_cdf(std::sqrt(n) * (0.25 - 0.15) / std::sqrt(0.265) + z_alpha);
        const double tol = 3.0 * std::sqrt(exact * (1.0 - exact) / mc.mc_iter);
        CHECK(std::abs(t.rows[i].assurance - exact) <= tol);
        CHECK(t.rows[i].assurance >= 0.0);
        CHECK(t.rows[i].assurance <= 1.0);
    }
}

TEST_CASE("worker count never changes the estimates") {
    ConjugateModelSpec m = example1_model();
    HypothesisSpec hyp{Eigen::VectorXd::Ones(1), 0.15};
    McSettings mc;
    mc.mc_iter = 4000;
    mc.seed = 33;

    mc.workers = 1;
    const AssuranceTable t1 = simulate_assurance(m, hyp, {40, 80}, mc);
    mc.workers = 2;
    const AssuranceTable t2 = simulate_assurance(m, hyp, {40, 80}, mc);
    mc.workers = 8;
    const AssuranceTable t8 = simulate_assurance(m, hyp, {40, 80}, mc);
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].assurance == t2.rows[i].assurance);
        CHECK(t1.rows[i].assurance == t8.rows[i].assurance);
    }
}

TEST_CASE("balanced consistency: scalar expansion equals explicit group sizes") {
    ConjugateModelSpec m;
    m.p = 3;
    m.Vbeta_d = 0.5 * Eigen::MatrixXd::Identity(3, 3);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(3, 3);
    m.mu_beta_d = Eigen::Vector3d(1.0, 1.2, 0.8);
    m.mu_beta_a = Eigen::Vector3d::Zero();
    m.sigsq = 2.0;
    HypothesisSpec hyp{Eigen::Vector3d(1.0, -1.0, 0.0), 0.0};
    McSettings mc;
    mc.mc_iter = 2000;
    mc.seed = 44;

    const AssuranceTable implicit = simulate_assurance(m, hyp, {15}, mc);
    ConjugateModelSpec explicit_model = m;
    explicit_model.Xn = gen_design({15, 15, 15}).entries;
    const AssuranceTable explicit_t = simulate_assurance(explicit_model, hyp, {15}, mc);
    CHECK(implicit.rows[0].assurance == explicit_t.rows[0].assurance);
}

TEST_CASE("unbalanced grid with equal sizes reproduces the balanced run") {
    ConjugateModelSpec m;
    m.p = 2;
    m.Vbeta_d = Eigen::MatrixXd::Identity(2, 2);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(2, 2);
    m.mu_beta_d = Eigen::Vector2d(1.17, 1.25);
    m.mu_beta_a = Eigen::Vector2d::Zero();
    m.sigsq = 100.0;
    m.alt = Alt::two_sided;
    HypothesisSpec hyp{Eigen::Vector2d(1.0, -1.0), 0.0};
    McSettings mc;
    mc.mc_iter = 2000;
    mc.seed = 55;

    const AssuranceTable balanced = simulate_assurance(m, hyp, {30}, mc);
    const UnbalancedResult unbalanced =
        simulate_assurance_unbalanced({30}, {30}, 1, m, hyp, mc, false);
    // Same design matrix, same stream indices: the runs are bitwise identical.
    CHECK(unbalanced.table.rows[0].assurance == balanced.rows[0].assurance);
    CHECK_FALSE(unbalanced.surface.has_value());

    SUBCASE("surface covers the Cartesian grid without mc_se") {
        const UnbalancedResult with_surface =
            simulate_assurance_unbalanced({10, 20}, {15, 25}, 1, m, hyp, mc, true);
        REQUIRE(with_surface.surface.has_value());
        CHECK(with_surface.surface->rows.size() == 4);
        CHECK_FALSE(with_surface.surface->has_mc_se);
    }
    CHECK_THROWS_AS(simulate_assurance_unbalanced({1, 2}, {1}, 1, m, hyp, mc, false),
                    std::domain_error);
}

TEST_CASE("unknown-variance estimator respects limits and validation") {
    ConjugateModelSpec m;
    m.p = 2;
    m.Vbeta_d = 0.2 * Eigen::MatrixXd::Identity(2, 2);
    m.Vbeta_a_inv = Eigen::MatrixXd::Zero(2, 2);
    m.mu_beta_d = Eigen::Vector2d(1.5, 0.5);
    m.mu_beta_a = Eigen::Vector2d::Zero();
    m.sigsq = 4.0;
    HypothesisSpec hyp{Eigen::Vector2d(1.0, -1.0), 0.0};

    SUBCASE("concentrated design IG matches the known-variance run") {
        McSettings mc;
        mc.mc_iter = 2000;
        mc.datasets = 400;
        mc.seed = 66;
        IGPriorPair ig;
        ig.a_sig_a = -1.0;  // -p/2, improper analysis prior
        ig.b_sig_a = 0.0;
        ig.a_sig_d = m.sigsq / 1e-7 + 2.0;
        ig.b_sig_d = m.sigsq * (ig.a_sig_d - 1.0);

        const AssuranceTable unknown = simulate_assurance_unknown_var(m, hyp, ig, {20}, mc);
        const AssuranceTable known = simulate_assurance(m, hyp, {20}, mc);
        const double d1 = unknown.rows[0].assurance;
        const double d2 = known.rows[0].assurance;
        const double tol = 3.0 * std::sqrt(d1 * (1.0 - d1) / mc.datasets +
                                           d2 * (1.0 - d2) / mc.mc_iter) +
                           0.02;
        CHECK(std::abs(d1 - d2) <= tol);
    }
    SUBCASE("a single overwhelmingly passing dataset gives assurance one") {
        McSettings mc;
        mc.mc_iter = 500;
        mc.datasets = 1;
        mc.seed = 67;
        ConjugateModelSpec sure = m;
        sure.mu_beta_d = Eigen::Vector2d(1000.0, 0.0);  // contrast far above C
        IGPriorPair ig;
        ig.a_sig_a = 3.0;
        ig.b_sig_a = 2.0;
        ig.a_sig_d = 3.0;
        ig.b_sig_d = 2.0;
        const AssuranceTable t = simulate_assurance_unknown_var(sure, hyp, ig, {10}, mc);
        CHECK(t.rows[0].assurance == 1.0);
    }
    SUBCASE("improper design prior is rejected") {
        McSettings mc;
        IGPriorPair ig;
        ig.a_sig_d = 0.0;
        ig.b_sig_d = 1.0;
        CHECK_THROWS_AS(simulate_assurance_unknown_var(m, hyp, ig, {10}, mc), std::domain_error);
    }
}

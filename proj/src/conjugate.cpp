#include "assure/conjugate.hpp"

#include <cmath>
#include <stdexcept>

#include "assure/parallel.hpp"
#include "assure/samplers.hpp"
#include "assure/special_functions.hpp"

namespace assure {

namespace {

void check_prior_dimensions(const ConjugateModelSpec& model, const HypothesisSpec& hyp, int p) {
    if (hyp.u.size() != p || model.mu_beta_d.size() != p || model.mu_beta_a.size() != p) {
        throw std::invalid_argument("conjugate model: u and prior means must have length p");
    }
    if (model.Vbeta_d.rows() != p || model.Vbeta_d.cols() != p ||
        model.Vbeta_a_inv.rows() != p || model.Vbeta_a_inv.cols() != p) {
        throw std::invalid_argument("conjugate model: prior correlation matrices must be p x p");
    }
    if (hyp.u.isZero(0.0)) {
        throw std::invalid_argument("conjugate model: contrast u must be nonzero");
    }
    if (!(model.sigsq > 0.0)) {
        throw std::domain_error("conjugate model: sigsq must be positive");
    }
    if (!(model.alpha > 0.0 && model.alpha < 1.0)) {
        throw std::domain_error("conjugate model: alpha must lie in (0,1)");
    }
}

/// Everything that stays fixed across Monte Carlo iterations for one design.
struct CompiledDesign {
    Eigen::MatrixXd X;
    Eigen::LLT<Eigen::MatrixXd> Vn_llt;  // valid iff !identity_Vn
    bool identity_Vn = true;
    Eigen::MatrixXd XtVninv;   // p x n
    Eigen::MatrixXd M;         // posterior covariance factor
    Eigen::VectorXd marg_mean; // X mu_d
    Eigen::MatrixXd marg_factor;  // L L^T = X Vbeta_d X^T + Vn (unit sigma^2)
    double prior_quad = 0.0;      // mu_a^T Vbeta_a_inv mu_a

    Eigen::VectorXd solve_Vn(const Eigen::VectorXd& y) const {
        return identity_Vn ? y : Vn_llt.solve(y);
    }
};

CompiledDesign compile_design(const ConjugateModelSpec& model, const HypothesisSpec& hyp,
                              Eigen::MatrixXd X) {
    const int p = static_cast<int>(X.cols());
    check_prior_dimensions(model, hyp, p);
    const Eigen::Index rows = X.rows();

    CompiledDesign c;
    c.X = std::move(X);
    c.identity_Vn = !model.Vn.has_value();
    if (!c.identity_Vn) {
        if (model.Vn->rows() != rows || model.Vn->cols() != rows) {
            throw std::invalid_argument("conjugate model: Vn must match the design row count");
        }
        c.Vn_llt.compute(*model.Vn);
        if (c.Vn_llt.info() != Eigen::Success) {
            throw NotPsdError("conjugate model: Vn is not positive definite");
        }
    }

    c.XtVninv = c.identity_Vn ? Eigen::MatrixXd(c.X.transpose())
                              : Eigen::MatrixXd(c.Vn_llt.solve(c.X).transpose());
    Eigen::MatrixXd Minv = model.Vbeta_a_inv + c.XtVninv * c.X;
    Eigen::LLT<Eigen::MatrixXd> Minv_llt(Minv);
    if (Minv_llt.info() != Eigen::Success) {
        throw NotPsdError(
            "conjugate model: posterior precision Vbeta_a_inv + Xn^T Vn^-1 Xn is singular");
    }
    c.M = Minv_llt.solve(Eigen::MatrixXd::Identity(p, p));

    c.marg_mean = c.X * model.mu_beta_d;
    Eigen::MatrixXd Vstar = c.X * model.Vbeta_d * c.X.transpose();
    if (c.identity_Vn) {
        Vstar += Eigen::MatrixXd::Identity(rows, rows);
    } else {
        Vstar += *model.Vn;
    }
    c.marg_factor = CovarianceMatrix(std::move(Vstar)).sampling_factor();
    c.prior_quad = model.mu_beta_a.dot(model.Vbeta_a_inv * model.mu_beta_a);
    return c;
}

Eigen::MatrixXd design_for(const ConjugateModelSpec& model, int n,
                           const std::optional<LongitudinalSpec>& longitudinal) {
    if (model.Xn.has_value()) return *model.Xn;
    if (longitudinal.has_value()) {
        LongitudinalSpec spec = *longitudinal;
        spec.num_repeated_measures = n;
        return gen_design_longitudinal(spec).entries;
    }
    if (model.p < 1) {
        throw std::invalid_argument("conjugate model: p is required when Xn is absent");
    }
    return gen_design_balanced(n, model.p).entries;
}

bool decision_from_statistic(double t, double scale, double C, Alt alt, double alpha) {
    // t = u^T M m, scale = sigma * sqrt(u^T M u).
    const double z = (C - t) / scale;
    switch (alt) {
        case Alt::greater: return std_normal_cdf(z) < alpha;
        case Alt::less: return std_normal_cdf(-z) < alpha;
        default: return std_normal_cdf(z) < alpha / 2.0 || std_normal_cdf(-z) < alpha / 2.0;
    }
}

double mc_se(double delta, long n) {
    return std::sqrt(delta * (1.0 - delta) / static_cast<double>(n));
}

/// Known-variance assurance for one compiled design. Iteration j draws its
/// dataset from stream (seed, stream_base + j); only the linear statistic
/// u^T M m = c0 + w . y is tracked per draw.
double assurance_for_design(const CompiledDesign& c, const ConjugateModelSpec& model,
                            const HypothesisSpec& hyp, const McSettings& mc,
                            std::uint64_t stream_base) {
    const Eigen::VectorXd Mu = c.M * hyp.u;
    const double uMu = hyp.u.dot(Mu);
    if (!(uMu > 0.0)) {
        throw std::domain_error("conjugate model: degenerate contrast, u^T M u <= 0");
    }
    const double scale = std::sqrt(model.sigsq) * std::sqrt(uMu);
    const Eigen::VectorXd w = c.XtVninv.transpose() * Mu;
    const double c0 = Mu.dot(model.Vbeta_a_inv * model.mu_beta_a);
    const double base = c0 + w.dot(c.marg_mean);
    const Eigen::VectorXd proj = c.marg_factor.transpose() * w;
    const double sigma = std::sqrt(model.sigsq);

    const long J = mc.mc_iter;
    long hits = parallel_count(J, mc.workers, [&](long j) {
        RngStream rng(mc.seed, stream_base + static_cast<std::uint64_t>(j));
        double dot = 0.0;
        for (Eigen::Index i = 0; i < proj.size(); ++i) {
            dot += proj[i] * sample_std_normal(rng);
        }
        const double t = base + sigma * dot;
        return decision_from_statistic(t, scale, hyp.C, model.alt, model.alpha);
    });
    return static_cast<double>(hits) / static_cast<double>(J);
}

}  // namespace

Posterior posterior_update(const ConjugateModelSpec& model, const Eigen::VectorXd& y,
                           double a_prior, double b_prior) {
    if (!model.Xn.has_value()) {
        throw std::invalid_argument("posterior_update: model must carry an explicit Xn");
    }
    HypothesisSpec dummy{Eigen::VectorXd::Ones(model.Xn->cols()), 0.0};
    CompiledDesign c = compile_design(model, dummy, *model.Xn);
    if (y.size() != c.X.rows()) {
        throw std::invalid_argument("posterior_update: y length must match Xn rows");
    }
    Posterior post;
    post.M = c.M;
    post.m = model.Vbeta_a_inv * model.mu_beta_a + c.XtVninv * y;
    post.a_star = a_prior + 0.5 * static_cast<double>(y.size());
    post.b_star =
        b_prior + 0.5 * (c.prior_quad + y.dot(c.solve_Vn(y)) - post.m.dot(post.M * post.m));
    return post;
}

bool analysis_decision(const Eigen::MatrixXd& M, const Eigen::VectorXd& m,
                       const HypothesisSpec& hyp, double sigsq, Alt alt, double alpha) {
    const Eigen::VectorXd Mu = M * hyp.u;
    const double uMu = hyp.u.dot(Mu);
    if (!(uMu > 0.0)) {
        throw std::domain_error("analysis_decision: degenerate contrast, u^T M u <= 0");
    }
    const double t = Mu.dot(m);
    return decision_from_statistic(t, std::sqrt(sigsq) * std::sqrt(uMu), hyp.C, alt, alpha);
}

Eigen::VectorXd sample_design_marginal(const ConjugateModelSpec& model, RngStream& rng,
                                       std::optional<double> sigma2_override) {
    if (!model.Xn.has_value()) {
        throw std::invalid_argument("sample_design_marginal: model must carry an explicit Xn");
    }
    HypothesisSpec dummy{Eigen::VectorXd::Ones(model.Xn->cols()), 0.0};
    CompiledDesign c = compile_design(model, dummy, *model.Xn);
    const double sigsq = sigma2_override.value_or(model.sigsq);
    return sample_mvn_factored(c.marg_mean, std::sqrt(sigsq) * c.marg_factor, rng);
}

AssuranceTable simulate_assurance(const ConjugateModelSpec& model, const HypothesisSpec& hyp,
                                  const std::vector<int>& n_grid, const McSettings& mc,
                                  const std::optional<LongitudinalSpec>& longitudinal) {
    if (n_grid.empty()) {
        throw std::domain_error("simulate_assurance: sample size grid is empty");
    }
    AssuranceTable table;
    table.key_names = {"n"};
    table.method = longitudinal ? "sim-longitudinal" : "sim";
    table.seed = mc.seed;
    table.mc_iter = mc.mc_iter;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        CompiledDesign c = compile_design(model, hyp, design_for(model, n_grid[g], longitudinal));
        const std::uint64_t base = static_cast<std::uint64_t>(g) * mc.mc_iter;
        const double delta = assurance_for_design(c, model, hyp, mc, base);
        table.rows.push_back({{static_cast<double>(n_grid[g])}, delta, mc_se(delta, mc.mc_iter)});
    }
    return table;
}

UnbalancedResult simulate_assurance_unbalanced(const std::vector<int>& n1_grid,
                                               const std::vector<int>& n2_grid, int repeats,
                                               const ConjugateModelSpec& model,
                                               const HypothesisSpec& hyp, const McSettings& mc,
                                               bool surface) {
    if (n1_grid.size() != n2_grid.size()) {
        throw std::domain_error("simulate_assurance_unbalanced: n1 and n2 grids differ in length");
    }
    if (n1_grid.empty()) {
        throw std::domain_error("simulate_assurance_unbalanced: sample size grids are empty");
    }

    ConjugateModelSpec local = model;
    local.Xn.reset();

    auto assurance_pair = [&](int n1, int n2, std::uint64_t stream_base) {
        DesignMatrix X = gen_design(replicate_pair(n1, n2, repeats));
        CompiledDesign c = compile_design(local, hyp, std::move(X.entries));
        return assurance_for_design(c, local, hyp, mc, stream_base);
    };

    UnbalancedResult result;
    result.table.key_names = {"n1", "n2"};
    result.table.method = "sim-unbalanced";
    result.table.seed = mc.seed;
    result.table.mc_iter = mc.mc_iter;
    for (std::size_t g = 0; g < n1_grid.size(); ++g) {
        const std::uint64_t base = static_cast<std::uint64_t>(g) * mc.mc_iter;
        const double delta = assurance_pair(n1_grid[g], n2_grid[g], base);
        result.table.rows.push_back({{static_cast<double>(n1_grid[g]),
                                      static_cast<double>(n2_grid[g])},
                                     delta,
                                     mc_se(delta, mc.mc_iter)});
    }

    if (surface) {
        AssuranceTable grid;
        grid.key_names = {"n1", "n2"};
        grid.method = "sim-unbalanced-surface";
        grid.seed = mc.seed;
        grid.mc_iter = mc.mc_iter;
        grid.has_mc_se = false;
        // Cells are recomputed with their own streams, offset past the
        // pairwise table's stream block.
        std::uint64_t g = n1_grid.size();
        for (int n1 : n1_grid) {
            for (int n2 : n2_grid) {
                const double delta = assurance_pair(n1, n2, g++ * mc.mc_iter);
                grid.rows.push_back(
                    {{static_cast<double>(n1), static_cast<double>(n2)}, delta, 0.0});
            }
        }
        result.surface = std::move(grid);
    }
    return result;
}

AssuranceTable simulate_assurance_unknown_var(const ConjugateModelSpec& model,
                                              const HypothesisSpec& hyp, const IGPriorPair& ig,
                                              const std::vector<int>& n_grid,
                                              const McSettings& mc) {
    if (n_grid.empty()) {
        throw std::domain_error("simulate_assurance_unknown_var: sample size grid is empty");
    }
    if (!(ig.a_sig_d > 0.0) || !(ig.b_sig_d > 0.0)) {
        throw std::domain_error("simulate_assurance_unknown_var: design IG prior must be proper");
    }
    const long R = mc.datasets;
    const long J = mc.mc_iter;

    AssuranceTable table;
    table.key_names = {"n"};
    table.method = "sim-unknownvar";
    table.seed = mc.seed;
    table.mc_iter = mc.mc_iter;
    table.datasets = mc.datasets;

    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        CompiledDesign c = compile_design(model, hyp, design_for(model, n_grid[g], {}));
        const Eigen::VectorXd Mu = c.M * hyp.u;
        const double uMu = hyp.u.dot(Mu);
        if (!(uMu > 0.0)) {
            throw std::domain_error("conjugate model: degenerate contrast, u^T M u <= 0");
        }
        const double u_norm = std::sqrt(uMu);
        const Eigen::VectorXd prior_m = model.Vbeta_a_inv * model.mu_beta_a;
        const double n_obs = static_cast<double>(c.X.rows());
        const double a_star = ig.a_sig_a + 0.5 * n_obs;
        if (!(a_star > 0.0)) {
            throw std::domain_error(
                "simulate_assurance_unknown_var: posterior IG shape is not positive");
        }

        const std::uint64_t base = static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(R);
        long passes = parallel_count(R, mc.workers, [&](long r) {
            RngStream rng(mc.seed, base + static_cast<std::uint64_t>(r));
            const double sigsq_d = sample_inverse_gamma(ig.a_sig_d, ig.b_sig_d, rng);
            const Eigen::VectorXd y =
                sample_mvn_factored(c.marg_mean, std::sqrt(sigsq_d) * c.marg_factor, rng);

            const Eigen::VectorXd m = prior_m + c.XtVninv * y;
            const Eigen::VectorXd Mm = c.M * m;
            const double b_star =
                ig.b_sig_a + 0.5 * (c.prior_quad + y.dot(c.solve_Vn(y)) - m.dot(Mm));
            if (!(b_star > 0.0)) {
                throw std::domain_error(
                    "simulate_assurance_unknown_var: posterior IG scale is not positive");
            }

            const double center = hyp.u.dot(Mm);
            long above = 0;
            long below = 0;
            for (long j = 0; j < J; ++j) {
                const double sigsq_post = sample_inverse_gamma(a_star, b_star, rng);
                const double ub = center + std::sqrt(sigsq_post) * u_norm * sample_std_normal(rng);
                if (ub > hyp.C) {
                    ++above;
                } else if (ub < hyp.C) {
                    ++below;
                }
            }
            const double frac_above = static_cast<double>(above) / static_cast<double>(J);
            const double frac_below = static_cast<double>(below) / static_cast<double>(J);
            switch (model.alt) {
                case Alt::greater: return frac_above > 1.0 - model.alpha;
                case Alt::less: return frac_below > 1.0 - model.alpha;
                default:
                    return frac_above > 1.0 - model.alpha / 2.0 ||
                           frac_below > 1.0 - model.alpha / 2.0;
            }
        });
        const double delta = static_cast<double>(passes) / static_cast<double>(R);
        table.rows.push_back({{static_cast<double>(n_grid[g])}, delta, mc_se(delta, R)});
    }
    return table;
}

}  // namespace assure

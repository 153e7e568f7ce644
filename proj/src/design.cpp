#include "assure/design.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace assure {

DesignMatrix gen_design(const std::vector<int>& group_sizes) {
    if (group_sizes.empty()) {
        throw std::domain_error("gen_design: group_sizes must be nonempty");
    }
    long total = 0;
    for (int g : group_sizes) {
        if (g < 1) throw std::domain_error("gen_design: group sizes must be >= 1");
        total += g;
    }
    const auto p = static_cast<Eigen::Index>(group_sizes.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(total, p);
    Eigen::Index row = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
        for (int k = 0; k < group_sizes[static_cast<std::size_t>(j)]; ++k) {
            X(row++, j) = 1.0;
        }
    }
    return {std::move(X), group_sizes};
}

DesignMatrix gen_design_balanced(int n, int p) {
    if (p < 1) throw std::domain_error("gen_design_balanced: p must be >= 1");
    return gen_design(std::vector<int>(static_cast<std::size_t>(p), n));
}

DesignMatrix gen_design_longitudinal(const LongitudinalSpec& spec) {
    if (spec.ids.empty()) {
        throw std::domain_error("gen_design_longitudinal: ids must be nonempty");
    }
    if (std::set<int>(spec.ids.begin(), spec.ids.end()).size() != spec.ids.size()) {
        throw std::domain_error("gen_design_longitudinal: ids must be distinct");
    }
    if (!(spec.from < spec.to)) {
        throw std::domain_error("gen_design_longitudinal: requires from < to");
    }
    const int measures = static_cast<int>(std::ceil(spec.num_repeated_measures));
    if (measures < 2) {
        throw std::domain_error("gen_design_longitudinal: need at least 2 repeated measures");
    }
    if (spec.poly_degree < 1) {
        throw std::domain_error("gen_design_longitudinal: poly_degree must be >= 1");
    }

    const auto m = static_cast<Eigen::Index>(spec.ids.size());
    const Eigen::Index rows = m * measures;
    Eigen::VectorXd t(measures);
    const double step = (spec.to - spec.from) / (measures - 1);
    for (int j = 0; j < measures; ++j) {
        t[j] = spec.from + step * j;
    }

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(rows, m * (spec.poly_degree + 1));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (int j = 0; j < measures; ++j) {
            const Eigen::Index r = i * measures + j;
            X(r, i) = 1.0;
            double power = 1.0;
            for (int d = 1; d <= spec.poly_degree; ++d) {
                power *= t[j];
                X(r, m * d + i) = power;
            }
        }
    }
    return {std::move(X), std::vector<int>(static_cast<std::size_t>(m), measures)};
}

std::vector<int> replicate_pair(int n1, int n2, int repeats) {
    if (n1 < 1 || n2 < 1) throw std::domain_error("replicate_pair: sample sizes must be >= 1");
    if (repeats < 1) throw std::domain_error("replicate_pair: repeats must be >= 1");
    std::vector<int> out;
    out.reserve(2 * static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        out.push_back(n1);
        out.push_back(n2);
    }
    return out;
}

CovarianceMatrix block_diagonal_cov(const std::vector<std::pair<int, double>>& blocks) {
    if (blocks.empty()) {
        throw std::domain_error("block_diagonal_cov: blocks must be nonempty");
    }
    Eigen::Index total = 0;
    for (const auto& [size, mult] : blocks) {
        if (size < 1) throw std::domain_error("block_diagonal_cov: block sizes must be >= 1");
        if (!(mult > 0.0)) throw std::domain_error("block_diagonal_cov: multipliers must be > 0");
        total += size;
    }
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(total, total);
    Eigen::Index offset = 0;
    for (const auto& [size, mult] : blocks) {
        V.block(offset, offset, size, size) = mult * Eigen::MatrixXd::Identity(size, size);
        offset += size;
    }
    return CovarianceMatrix(std::move(V));
}

}  // namespace assure

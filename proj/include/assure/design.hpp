#pragma once

#include <Eigen/Dense>
#include <vector>

#include "assure/covariance.hpp"

namespace assure {

/// Design matrix together with the per-group observation counts it encodes.
struct DesignMatrix {
    Eigen::MatrixXd entries;
    std::vector<int> group_sizes;
};

/// Balanced longitudinal layout: every subject shares the same sequence of
/// equally spaced timepoints from `from` to `to` inclusive.
struct LongitudinalSpec {
    std::vector<int> ids;
    double from = 0.0;
    double to = 0.0;
    double num_repeated_measures = 0.0;  // fractional values round up
    int poly_degree = 1;
};

/// Block indicator matrix: column i is a ones vector over group i's rows.
DesignMatrix gen_design(const std::vector<int>& group_sizes);

/// Expand a scalar per-group size to p groups and build the indicator matrix.
DesignMatrix gen_design_balanced(int n, int p);

/// Columns 1..m are subject intercept indicators; each further degree d adds
/// m columns holding t^d at that subject's rows.
DesignMatrix gen_design_longitudinal(const LongitudinalSpec& spec);

/// (n1, n2) repeated `repeats` times, e.g. repeats = 2 -> (n1, n2, n1, n2).
std::vector<int> replicate_pair(int n1, int n2, int repeats);

/// Block-diagonal covariance with multiplier * I blocks.
CovarianceMatrix block_diagonal_cov(const std::vector<std::pair<int, double>>& blocks);

}  // namespace assure

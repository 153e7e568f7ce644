#include <doctest.h>

#include <cmath>

#include "assure/design.hpp"

using namespace assure;

TEST_CASE("gen_design builds block indicator matrices") {
    const DesignMatrix X = gen_design({1, 3, 5, 8});
    REQUIRE(X.entries.rows() == 17);
    REQUIRE(X.entries.cols() == 4);
    // Column sums match group sizes, each row has exactly one 1.
    const Eigen::VectorXd col_sums = X.entries.colwise().sum();
    CHECK(col_sums[0] == 1.0);
    CHECK(col_sums[1] == 3.0);
    CHECK(col_sums[2] == 5.0);
    CHECK(col_sums[3] == 8.0);
    CHECK((X.entries.rowwise().sum().array() == 1.0).all());
    // Blocks are contiguous: rows 1..3 indicate group 2, etc.
    CHECK(X.entries(0, 0) == 1.0);
    CHECK(X.entries(1, 1) == 1.0);
    CHECK(X.entries(3, 1) == 1.0);
    CHECK(X.entries(4, 2) == 1.0);
    CHECK(X.entries(9, 3) == 1.0);
    CHECK(X.entries(16, 3) == 1.0);

    const DesignMatrix single = gen_design({5});
    CHECK(single.entries.isOnes());
    CHECK(single.entries.rows() == 5);
    CHECK(single.entries.cols() == 1);

    CHECK_THROWS_AS(gen_design({}), std::domain_error);
    CHECK_THROWS_AS(gen_design({2, 0}), std::domain_error);
}

TEST_CASE("balanced expansion replicates the scalar size") {
    const DesignMatrix X = gen_design_balanced(2, 4);
    CHECK(X.entries.rows() == 8);
    CHECK(X.entries.cols() == 4);
    CHECK(X.entries == gen_design({2, 2, 2, 2}).entries);
    CHECK_THROWS_AS(gen_design_balanced(2, 0), std::domain_error);
}

TEST_CASE("longitudinal designs use inclusive equally spaced timepoints") {
    LongitudinalSpec spec;
    spec.ids = {1, 2, 3, 4};
    spec.from = 1.0;
    spec.to = 10.0;
    spec.num_repeated_measures = 4;

    const DesignMatrix X = gen_design_longitudinal(spec);
    REQUIRE(X.entries.rows() == 16);
    REQUIRE(X.entries.cols() == 8);
    // Subject 1 block: intercept indicator plus timepoints 1,4,7,10.
    for (int j = 0; j < 4; ++j) {
        CHECK(X.entries(j, 0) == 1.0);
        CHECK(X.entries(j, 4) == 1.0 + 3.0 * j);
    }
    // Subject 3 block sits at rows 8..11 with the same timepoints in column 6.
    for (int j = 0; j < 4; ++j) {
        CHECK(X.entries(8 + j, 2) == 1.0);
        CHECK(X.entries(8 + j, 6) == 1.0 + 3.0 * j);
    }

    SUBCASE("quadratic degree appends squared-time columns") {
        spec.poly_degree = 2;
        const DesignMatrix Q = gen_design_longitudinal(spec);
        REQUIRE(Q.entries.cols() == 12);
        CHECK(Q.entries(1, 8) == 16.0);
        CHECK(Q.entries(2, 8) == 49.0);
        CHECK(Q.entries(3, 8) == 100.0);
        // Degree-d block equals the degree-1 block raised elementwise.
        for (int d = 1; d <= 2; ++d) {
            const auto block1 = Q.entries.block(0, 4, 16, 4).array();
            const auto blockd = Q.entries.block(0, 4 * d, 16, 4).array();
            CHECK(((blockd - block1.pow(d)).abs() <= 1e-12).all());
        }
    }
    SUBCASE("minimal case") {
        LongitudinalSpec tiny;
        tiny.ids = {1};
        tiny.from = 0.0;
        tiny.to = 1.0;
        tiny.num_repeated_measures = 2;
        const DesignMatrix T = gen_design_longitudinal(tiny);
        Eigen::MatrixXd expected(2, 2);
        expected << 1, 0, 1, 1;
        CHECK(T.entries == expected);
    }
    SUBCASE("fractional measure counts round up") {
        spec.num_repeated_measures = 3.2;
        CHECK(gen_design_longitudinal(spec).entries.rows() == 16);  // ceil -> 4 per subject
    }
    SUBCASE("invalid specs are rejected") {
        LongitudinalSpec bad = spec;
        bad.ids = {1, 1};
        CHECK_THROWS_AS(gen_design_longitudinal(bad), std::domain_error);
        bad = spec;
        bad.from = 5.0;
        bad.to = 5.0;
        CHECK_THROWS_AS(gen_design_longitudinal(bad), std::domain_error);
        bad = spec;
        bad.num_repeated_measures = 1;
        CHECK_THROWS_AS(gen_design_longitudinal(bad), std::domain_error);
    }
}

TEST_CASE("replicate_pair unrolls the requested repetitions") {
    CHECK(replicate_pair(285, 285, 1) == std::vector<int>{285, 285});
    CHECK(replicate_pair(4, 8, 2) == std::vector<int>{4, 8, 4, 8});
    CHECK(replicate_pair(3, 5, 3) == std::vector<int>{3, 5, 3, 5, 3, 5});
    CHECK_THROWS_AS(replicate_pair(0, 5, 1), std::domain_error);
    CHECK_THROWS_AS(replicate_pair(3, 5, 0), std::domain_error);
}

TEST_CASE("block_diagonal_cov assembles scalar blocks") {
    CHECK(block_diagonal_cov({{3, 1.0}}).entries() == Eigen::MatrixXd::Identity(3, 3));

    const CovarianceMatrix V = block_diagonal_cov({{2, 1.0}, {2, 4.0}});
    Eigen::VectorXd expected(4);
    expected << 1, 1, 4, 4;
    CHECK(V.entries().diagonal() == expected);
    CHECK(V.entries() == Eigen::MatrixXd(expected.asDiagonal()));

    const double ratio_sq = (8700.0 / 4.04) * (8700.0 / 4.04);
    const CovarianceMatrix big =
        block_diagonal_cov({{285, 1.0}, {285, ratio_sq}, {285, 1.0}, {285, ratio_sq}});
    CHECK(big.dimension() == 1140);
    CHECK(big.entries()(0, 0) == 1.0);
    CHECK(big.entries()(285, 285) == ratio_sq);
    CHECK(big.entries()(570, 570) == 1.0);
    CHECK(big.entries()(1139, 1139) == ratio_sq);

    CHECK_THROWS_AS(block_diagonal_cov({}), std::domain_error);
    CHECK_THROWS_AS(block_diagonal_cov({{2, -1.0}}), std::domain_error);
}

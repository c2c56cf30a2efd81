#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fairmit/exposure.hpp"

using namespace fairmit;

TEST_CASE("self-only accumulation sums own counts") {
    Matrix eye = identity_matrix(1);
    // counts[realization][user]
    ImpactTable t = accumulate_impacts({{2.0}, {3.0}}, {{0.0}, {0.0}}, eye, 1);
    CHECK(t.mis_impact[0] == doctest::Approx(5.0));
    CHECK(t.true_impact[0] == doctest::Approx(0.0));
}

TEST_CASE("neighbor counts flow along influence rows") {
    Matrix a = {{1.0, 1.0}, {0.0, 1.0}};
    ImpactTable t = accumulate_impacts({{1.0, 4.0}}, {{0.0, 0.0}}, a, 0);
    CHECK(t.mis_impact[0] == doctest::Approx(5.0));
    CHECK(t.mis_impact[1] == doctest::Approx(4.0));
}

TEST_CASE("zero counts give zero impacts") {
    Matrix a = {{1.0, 1.0}, {1.0, 1.0}};
    ImpactTable t = accumulate_impacts({{0.0, 0.0}}, {{0.0, 0.0}}, a, 0);
    for (double v : t.mis_impact) CHECK(v == 0.0);
    for (double v : t.true_impact) CHECK(v == 0.0);
}

TEST_CASE("a zero diagonal still counts the user itself") {
    Matrix a = {{0.0, 0.0}, {0.0, 0.0}};
    ImpactTable t = accumulate_impacts({{3.0, 1.0}}, {{0.0, 2.0}}, a, 0);
    CHECK(t.mis_impact[0] == doctest::Approx(3.0));
    CHECK(t.true_impact[1] == doctest::Approx(2.0));
}

TEST_CASE("impacts add across realization partitions") {
    Matrix a = {{1.0, 1.0}, {1.0, 1.0}};
    std::vector<std::vector<double>> mis = {{1.0, 2.0}, {0.5, 0.0}, {3.0, 1.0}};
    std::vector<std::vector<double>> tru = {{0.0, 1.0}, {2.0, 2.0}, {1.0, 0.0}};
    ImpactTable whole = accumulate_impacts(mis, tru, a, 2);
    ImpactTable head = accumulate_impacts({mis[0], mis[1]}, {tru[0], tru[1]}, a, 1);
    ImpactTable tail = accumulate_impacts({mis[2]}, {tru[2]}, a, 0);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(whole.mis_impact[i] ==
              doctest::Approx(head.mis_impact[i] + tail.mis_impact[i]));
        CHECK(whole.true_impact[i] ==
              doctest::Approx(head.true_impact[i] + tail.true_impact[i]));
    }
}

TEST_CASE("ratio arithmetic") {
    ImpactTable t;
    t.mis_impact = {0.0, 1.0, 4.0};
    t.true_impact = {0.0, 1.0, 12.0};
    ExposureRatios r1 = ratio(t, 1.0);
    CHECK(r1.r[0] == doctest::Approx(1.0));
    ExposureRatios rb = ratio(t, 1.3);
    CHECK(rb.r[1] == doctest::Approx(2.0 / 2.6));
    CHECK(rb.r[2] == doctest::Approx(13.0 / (5.0 * 1.3)));
}

TEST_CASE("ratio monotone in impacts and balance") {
    ImpactTable t;
    t.mis_impact = {2.0};
    t.true_impact = {3.0};
    double base = ratio(t, 1.3).r[0];

    ImpactTable more_true = t;
    more_true.true_impact = {4.0};
    CHECK(ratio(more_true, 1.3).r[0] > base);

    ImpactTable more_mis = t;
    more_mis.mis_impact = {3.0};
    CHECK(ratio(more_mis, 1.3).r[0] < base);

    CHECK(ratio(t, 1.5).r[0] < base);
    CHECK(ratio(t, 1.3).r[0] > 0.0);
}

TEST_CASE("identity influence with unit balance reduces to own counts") {
    Matrix eye = identity_matrix(3);
    std::vector<std::vector<double>> mis = {{1.0, 0.0, 5.0}};
    std::vector<std::vector<double>> tru = {{3.0, 0.0, 2.0}};
    ExposureRatios r = ratio(accumulate_impacts(mis, tru, eye, 0), 1.0);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(r.r[i] == doctest::Approx((1.0 + tru[0][i]) / (1.0 + mis[0][i])));
}

TEST_CASE("bad balance and mismatched dimensions are rejected") {
    ImpactTable t;
    t.mis_impact = {1.0};
    t.true_impact = {1.0};
    CHECK_THROWS_AS(ratio(t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(accumulate_impacts({{1.0, 2.0}}, {{1.0}}, identity_matrix(2), 0),
                    std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>

#include "doctest.h"
#include "fairmit/fairness.hpp"
#include "fairmit/rng.hpp"

using namespace fairmit;

namespace {

ExposureRatios make_ratios(std::vector<double> r) {
    ExposureRatios out;
    out.r = std::move(r);
    out.balance = 1.0;
    return out;
}

}  // namespace

TEST_CASE("loss terms are the user plus its adjacency column") {
    Matrix a = identity_matrix(3);
    a[2][0] = 1.0;  // user 0 influences user 2
    auto t0 = loss_terms(0, a);
    CHECK(t0 == std::vector<std::size_t>{0, 2});
    CHECK(loss_terms(1, a) == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(loss_terms(5, a), std::out_of_range);
}

TEST_CASE("local loss hand values") {
    Matrix isolated = identity_matrix(1);
    CHECK(local_loss(0, make_ratios({1.0}), isolated) == doctest::Approx(0.0));
    CHECK(local_loss(0, make_ratios({0.5}), isolated) == doctest::Approx(0.25));

    // user 0 with neighbors 1 and 2
    Matrix a = identity_matrix(3);
    a[1][0] = 1.0;
    a[2][0] = 1.0;
    CHECK(local_loss(0, make_ratios({1.0, 0.6, 1.4}), a) == doctest::Approx(0.32));
}

TEST_CASE("total loss equals the per-user sum and is zero only at balance") {
    Matrix a = identity_matrix(4);
    a[1][0] = 1.0;
    ExposureRatios r = make_ratios({0.8, 1.1, 1.0, 2.0});
    LossReport report = total_loss(r, a);
    double sum = std::accumulate(report.per_user.begin(), report.per_user.end(), 0.0);
    CHECK(report.total == doctest::Approx(sum).epsilon(1e-9));
    CHECK(report.total > 0.0);

    LossReport balanced = total_loss(make_ratios({1.0, 1.0, 1.0, 1.0}), a);
    CHECK(balanced.total == doctest::Approx(0.0));
    CHECK(balanced.normalized == doctest::Approx(0.0));
}

TEST_CASE("all-zero ratios on isolated users give normalized 1") {
    Matrix eye = identity_matrix(10);
    LossReport report = total_loss(make_ratios(std::vector<double>(10, 0.0)), eye);
    CHECK(report.total == doctest::Approx(10.0));
    CHECK(report.normalized == doctest::Approx(1.0));
}

TEST_CASE("normalized loss is clamped per term into [0, 1]") {
    Matrix eye = identity_matrix(2);
    LossReport report = total_loss(make_ratios({5.0, 1.0}), eye);  // (1-5)^2 = 16
    CHECK(report.total == doctest::Approx(16.0));
    CHECK(report.normalized == doctest::Approx(0.5));  // min(16,1)/2 terms
}

TEST_CASE("full subset equals the unsampled total") {
    Matrix a = identity_matrix(5);
    a[0][3] = 1.0;
    a[4][1] = 1.0;
    ExposureRatios r = make_ratios({0.5, 1.5, 1.0, 0.9, 1.2});
    std::vector<std::size_t> all = {0, 1, 2, 3, 4};
    CHECK(total_loss(r, a, all).total == doctest::Approx(total_loss(r, a).total));
    CHECK_THROWS_AS(total_loss(r, a, std::vector<std::size_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(total_loss(r, a, std::vector<std::size_t>{9}), std::invalid_argument);
}

TEST_CASE("loss is invariant under user relabeling") {
    const std::size_t n = 6;
    Matrix a = identity_matrix(n);
    a[1][0] = a[3][2] = a[5][4] = a[0][5] = 1.0;
    std::vector<double> r = {0.3, 1.2, 0.9, 1.7, 1.0, 0.6};
    double base = total_loss(make_ratios(r), a).total;

    std::vector<std::size_t> perm = {2, 0, 5, 1, 4, 3};
    Matrix pa = zero_matrix(n, n);
    std::vector<double> pr(n);
    for (std::size_t i = 0; i < n; ++i) {
        pr[perm[i]] = r[i];
        for (std::size_t j = 0; j < n; ++j) pa[perm[i]][perm[j]] = a[i][j];
    }
    CHECK(total_loss(make_ratios(pr), pa).total == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("uniform subsets estimate the per-term mean without bias") {
    const std::size_t n = 12;
    Matrix a = identity_matrix(n);
    auto rng = make_rng(99);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && uniform01(rng) < 0.2) a[i][j] = 1.0;
    std::vector<double> r(n);
    for (double& v : r) v = 0.2 + 1.6 * uniform01(rng);
    ExposureRatios ratios = make_ratios(r);

    auto per_term = [&](const LossReport& rep, const std::vector<std::size_t>& scope) {
        std::size_t terms = 0;
        for (std::size_t i : scope) terms += loss_terms(i, a).size();
        return rep.total / static_cast<double>(terms);
    };
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    double full = per_term(total_loss(ratios, a), all);

    const std::size_t k = 4;
    double acc = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::size_t> pool = all;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + uniform_index(rng, n - i)]);
        std::vector<std::size_t> subset(pool.begin(), pool.begin() + k);
        acc += per_term(total_loss(ratios, a, subset), subset);
    }
    CHECK(acc / trials == doctest::Approx(full).epsilon(0.02));
}

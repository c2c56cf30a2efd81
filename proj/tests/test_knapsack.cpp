#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <thread>

#include "doctest.h"
#include "fairmit/knapsack.hpp"
#include "fairmit/rng.hpp"

using namespace fairmit;

TEST_CASE("exactly capacity/step grants fit") {
    BudgetLedger ledger(0.06, 0.0002);
    int grants = 0;
    while (ledger.try_reserve(0.0002)) ++grants;
    CHECK(grants == 300);
    CHECK(ledger.consumed() == doctest::Approx(0.06));
    CHECK(ledger.full_flag() == 1);
}

TEST_CASE("a denied reserve leaves the ledger untouched") {
    BudgetLedger ledger(0.01, 0.0001);
    CHECK(ledger.try_reserve(0.008));
    double before = ledger.consumed();
    CHECK_FALSE(ledger.try_reserve(0.005));
    CHECK(ledger.consumed() == before);
}

TEST_CASE("reserve and release are inverse") {
    BudgetLedger ledger(1.0, 0.01);
    CHECK(ledger.try_reserve(0.37));
    ledger.release(0.37);
    CHECK(ledger.consumed() == doctest::Approx(0.0));
    CHECK(ledger.full_flag() == 0);
}

TEST_CASE("release beyond consumption is an underflow") {
    BudgetLedger ledger(1.0, 0.01);
    CHECK(ledger.try_reserve(0.1));
    CHECK_THROWS_AS(ledger.release(0.2), std::underflow_error);
}

TEST_CASE("full flag trips exactly when a step no longer fits") {
    BudgetLedger ledger(0.1, 0.03);
    CHECK(ledger.full_flag() == 0);
    CHECK(ledger.try_reserve(0.03));
    CHECK(ledger.try_reserve(0.03));
    CHECK(ledger.full_flag() == 0);  // 0.06 + 0.03 still fits
    CHECK(ledger.try_reserve(0.03));
    CHECK(ledger.full_flag() == 1);  // 0.09 + 0.03 > 0.1
}

TEST_CASE("randomized interleavings never exceed capacity") {
    auto rng = make_rng(314);
    for (int trial = 0; trial < 50; ++trial) {
        double capacity = 0.02 + uniform01(rng) * 0.1;
        double step = capacity / (10 + uniform_index(rng, 100));
        BudgetLedger ledger(capacity, step);
        double held = 0.0;
        for (int op = 0; op < 2000; ++op) {
            if (uniform01(rng) < 0.6) {
                if (ledger.try_reserve(step)) held += step;
            } else if (held >= step) {
                ledger.release(step);
                held -= step;
            }
            CHECK(ledger.consumed() <= capacity * (1.0 + 1e-9));
            CHECK(ledger.consumed() >= -1e-12);
            CHECK(ledger.consumed() == doctest::Approx(held).epsilon(1e-9));
        }
    }
}

TEST_CASE("concurrent reserves never over-grant") {
    BudgetLedger ledger(1.0, 0.001);
    const int threads = 8;
    std::vector<int> granted(threads, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = 0; i < 400; ++i)
                if (ledger.try_reserve(0.001)) ++granted[t];
        });
    for (auto& th : pool) th.join();
    int total = 0;
    for (int g : granted) total += g;
    CHECK(total == 1000);
    CHECK(ledger.consumed() <= 1.0 + 1e-9);
}

TEST_CASE("restore bypasses the reserve path") {
    BudgetLedger ledger(0.5, 0.01);
    ledger.restore(0.234);
    CHECK(ledger.consumed() == doctest::Approx(0.234));
    CHECK(ledger.try_reserve(0.01));
}

TEST_CASE("invalid construction is rejected") {
    CHECK_THROWS_AS(BudgetLedger(0.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(BudgetLedger(1.0, 0.0), std::invalid_argument);
}

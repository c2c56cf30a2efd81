#include "fairmit/knapsack.hpp"

#include <algorithm>

namespace fairmit {

namespace {
// Absorbs float accumulation error from step-sized grants so an exact
// sequence of capacity/step reservations fills the ledger completely.
constexpr double kRelativeSlack = 1e-9;
}  // namespace

BudgetLedger::BudgetLedger(double capacity, double step) : capacity_(capacity), step_(step) {
    if (capacity <= 0.0) throw std::invalid_argument("BudgetLedger: capacity must be positive");
    if (step <= 0.0) throw std::invalid_argument("BudgetLedger: step must be positive");
}

BudgetLedger::BudgetLedger(const BudgetLedger& other)
    : capacity_(other.capacity_), step_(other.step_), consumed_(other.consumed()) {}

BudgetLedger& BudgetLedger::operator=(const BudgetLedger& other) {
    if (this != &other) {
        double c = other.consumed();
        std::lock_guard<std::mutex> lock(mutex_);
        capacity_ = other.capacity_;
        step_ = other.step_;
        consumed_ = c;
    }
    return *this;
}

double BudgetLedger::consumed() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return consumed_;
}

bool BudgetLedger::try_reserve(double delta) {
    if (delta <= 0.0) throw std::invalid_argument("try_reserve: delta must be positive");
    std::lock_guard<std::mutex> lock(mutex_);
    if (consumed_ + delta > capacity_ * (1.0 + kRelativeSlack)) return false;
    consumed_ = std::min(consumed_ + delta, capacity_);
    return true;
}

void BudgetLedger::release(double delta) {
    if (delta <= 0.0) throw std::invalid_argument("release: delta must be positive");
    std::lock_guard<std::mutex> lock(mutex_);
    if (delta > consumed_ + capacity_ * kRelativeSlack)
        throw std::underflow_error("release: more than consumed");
    consumed_ = std::max(0.0, consumed_ - delta);
}

void BudgetLedger::restore(double consumed) {
    if (consumed < 0.0 || consumed > capacity_)
        throw std::invalid_argument("restore: consumed outside [0, capacity]");
    std::lock_guard<std::mutex> lock(mutex_);
    consumed_ = consumed;
}

int BudgetLedger::full_flag() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return (consumed_ + step_ > capacity_ * (1.0 + kRelativeSlack)) ? 1 : 0;
}

}  // namespace fairmit

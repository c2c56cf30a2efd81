#ifndef FAIRMIT_KNAPSACK_HPP
#define FAIRMIT_KNAPSACK_HPP

#include <mutex>
#include <stdexcept>

namespace fairmit {

// Shared incentivization budget. The ledger is the single serialization
// point between automata: reserve/release are atomic read-modify-write.
class BudgetLedger {
public:
    BudgetLedger(double capacity, double step);
    BudgetLedger(const BudgetLedger& other);
    BudgetLedger& operator=(const BudgetLedger& other);

    double capacity() const { return capacity_; }
    double step() const { return step_; }
    double consumed() const;

    // Grants iff consumed + delta fits the capacity (within a relative
    // rounding allowance); a denial leaves the ledger untouched.
    bool try_reserve(double delta);

    // Returns previously reserved budget. Throws on underflow.
    void release(double delta);

    // Full flag: 1 when no further step-sized move is fundable.
    int full_flag() const;

    // Checkpoint restore; bypasses the reserve path on purpose.
    void restore(double consumed);

private:
    double capacity_;
    double step_;
    double consumed_ = 0.0;
    mutable std::mutex mutex_;
};

}  // namespace fairmit

#endif

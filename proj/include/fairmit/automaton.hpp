#ifndef FAIRMIT_AUTOMATON_HPP
#define FAIRMIT_AUTOMATON_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "fairmit/types.hpp"

namespace fairmit {

enum class Direction { Left, Stay, Right };

// Binary environment feedback for one attempted move.
struct Feedback {
    int beta = 0;          // 1 penalty, 0 reward
    double slope = 0.0;    // loss slope m over the attempted increment
    int knapsack_full = 0; // shared budget flag
};

// One user's learning automaton: a random walk over incentive levels
// 0..memory_depth whose directional transition probabilities are learned
// from reward/attempt counters.
class Automaton {
public:
    Automaton() = default;
    Automaton(std::size_t user_id, std::size_t memory_depth);

    std::size_t user_id() const { return user_id_; }
    std::size_t state() const { return state_; }
    std::size_t memory_depth() const { return memory_depth_; }
    bool converged() const { return converged_; }

    // Incentive represented by the current state: k * step.
    double state_value(double step) const;

    // Transition probabilities (left, stay, right) at the current state.
    // Attempted moves carry their empirical reward rate v/w; the remaining
    // mass is split equally over stay and any unattempted feasible move, so
    // a fresh state starts uniform over its feasible transitions.
    std::array<double, 3> pi() const;

    // Sample a direction from pi. Returns nullopt for a converged automaton.
    std::optional<Direction> propose(std::mt19937_64& rng);

    // Commit (beta = 0) or roll back (beta = 1) the attempted move and update
    // the counters of the origin state.
    void apply_feedback(Direction direction, int beta);

    // Converged when the walk probabilities in both directions are within
    // epsilon of zero; once set, the state is frozen.
    bool check_convergence(double epsilon);

    // Empirical occupancy of the current state from visit counters; uniform
    // prior before any visit.
    double marginal_occupancy() const;

    // counters, exposed for checkpointing
    std::vector<double> rewarded_left, performed_left;
    std::vector<double> rewarded_right, performed_right;
    std::vector<double> visits;

    void restore(std::size_t state, bool converged);

private:
    bool feasible(Direction d) const;

    std::size_t user_id_ = 0;
    std::size_t memory_depth_ = 0;
    std::size_t state_ = 0;
    bool converged_ = false;
};

// Reward signal for a proposed directional move. Stay is never evaluated by
// the environment and is rejected here.
int reward(Direction direction, double slope, int knapsack_full);

// Diagnostic chain-rule product of the automata's marginal state-occupancy
// estimates; 1 for an empty list.
double joint_state_probability(std::span<const Automaton> automata);

}  // namespace fairmit

#endif

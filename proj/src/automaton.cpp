#include "fairmit/automaton.hpp"

#include <numeric>

#include "fairmit/rng.hpp"

namespace fairmit {

Automaton::Automaton(std::size_t user_id, std::size_t memory_depth)
    : user_id_(user_id), memory_depth_(memory_depth) {
    if (memory_depth == 0) throw std::invalid_argument("Automaton: memory depth must be positive");
    rewarded_left.assign(memory_depth + 1, 0.0);
    performed_left.assign(memory_depth + 1, 0.0);
    rewarded_right.assign(memory_depth + 1, 0.0);
    performed_right.assign(memory_depth + 1, 0.0);
    visits.assign(memory_depth + 1, 0.0);
}

double Automaton::state_value(double step) const {
    if (step <= 0.0) throw std::invalid_argument("state_value: step must be positive");
    return static_cast<double>(state_) * step;
}

bool Automaton::feasible(Direction d) const {
    if (d == Direction::Left) return state_ > 0;
    if (d == Direction::Right) return state_ < memory_depth_;
    return true;
}

std::array<double, 3> Automaton::pi() const {
    std::array<double, 3> p{0.0, 0.0, 0.0};  // left, stay, right
    double attempted_mass = 0.0;
    int unattempted = 1;  // stay always shares the leftover

    bool left_ok = feasible(Direction::Left);
    bool right_ok = feasible(Direction::Right);
    bool left_tried = left_ok && performed_left[state_] > 0.0;
    bool right_tried = right_ok && performed_right[state_] > 0.0;

    if (left_tried) {
        p[0] = rewarded_left[state_] / performed_left[state_];
        attempted_mass += p[0];
    } else if (left_ok) {
        ++unattempted;
    }
    if (right_tried) {
        p[2] = rewarded_right[state_] / performed_right[state_];
        attempted_mass += p[2];
    } else if (right_ok) {
        ++unattempted;
    }

    double leftover = 1.0 - attempted_mass;
    if (leftover < 0.0) {
        // both directions near-certainly rewarded; renormalize, nothing for stay
        p[0] /= attempted_mass;
        p[2] /= attempted_mass;
        p[1] = 0.0;
        return p;
    }
    double share = leftover / static_cast<double>(unattempted);
    p[1] = share;
    if (left_ok && !left_tried) p[0] = share;
    if (right_ok && !right_tried) p[2] = share;
    return p;
}

std::optional<Direction> Automaton::propose(std::mt19937_64& rng) {
    if (converged_) return std::nullopt;
    visits[state_] += 1.0;
    auto p = pi();
    double u = uniform01(rng);
    if (u < p[0]) return Direction::Left;
    if (u < p[0] + p[1]) return Direction::Stay;
    return Direction::Right;
}

void Automaton::apply_feedback(Direction direction, int beta) {
    if (!feasible(direction) || direction == Direction::Stay)
        throw std::logic_error("apply_feedback: infeasible or recurrent direction");
    if (direction == Direction::Left) {
        performed_left[state_] += 1.0;
        if (beta == 0) {
            rewarded_left[state_] += 1.0;
            --state_;
        }
    } else {
        performed_right[state_] += 1.0;
        if (beta == 0) {
            rewarded_right[state_] += 1.0;
            ++state_;
        }
    }
}

bool Automaton::check_convergence(double epsilon) {
    if (epsilon <= 0.0 || epsilon >= 0.5)
        throw std::invalid_argument("check_convergence: epsilon must be in (0, 0.5)");
    if (converged_) return true;
    auto p = pi();
    if (p[0] + p[2] <= epsilon) converged_ = true;
    return converged_;
}

double Automaton::marginal_occupancy() const {
    double total = std::accumulate(visits.begin(), visits.end(), 0.0);
    if (total == 0.0) return 1.0 / static_cast<double>(memory_depth_ + 1);
    return visits[state_] / total;
}

void Automaton::restore(std::size_t state, bool converged) {
    if (state > memory_depth_) throw std::invalid_argument("restore: state out of range");
    state_ = state;
    converged_ = converged;
}

int reward(Direction direction, double slope, int knapsack_full) {
    if (direction == Direction::Right) return (slope > 0.0 || knapsack_full == 1) ? 1 : 0;
    if (direction == Direction::Left) return (slope > 0.0) ? 1 : 0;
    throw std::logic_error("reward: stay is never environment-evaluated");
}

double joint_state_probability(std::span<const Automaton> automata) {
    double p = 1.0;
    for (const Automaton& a : automata) p *= a.marginal_occupancy();
    return p;
}

}  // namespace fairmit

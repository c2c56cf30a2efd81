#ifndef FAIRMIT_HAWKES_HPP
#define FAIRMIT_HAWKES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "fairmit/types.hpp"

namespace fairmit {

// Exponential-kernel multivariate Hawkes model for one content type.
// influence[i][j] is the excitation weight of user j's events on user i.
struct HawkesModel {
    std::vector<double> mu;  // base intensities, events/hour
    Matrix influence;        // N x N, nonnegative
    double decay = 1.0;      // 1/hours
    ContentType content = ContentType::Misinformation;

    std::size_t n_users() const { return mu.size(); }
    void validate() const;
};

// Additive base-intensity boost per user, events/hour.
struct Incentives {
    std::vector<double> x;

    static Incentives zero(std::size_t n) { return Incentives{std::vector<double>(n, 0.0)}; }
    double total() const;
};

// Spectral radius of influence/decay via power iteration (100 rounds).
// At or above 1 the process is potentially explosive.
double branching_spectral_radius(const HawkesModel& model, int iterations = 100);

// Conditional intensity of `user` at time t given the events of `history`
// strictly before t. With zero incentives this is the plain model intensity.
double intensity(const HawkesModel& model, const Incentives& incentives,
                 std::size_t user, double t, const EventLog& history);

// Ogata thinning simulation over [0, horizon). Deterministic given seed.
// Throws StabilityError for a potentially explosive model unless
// allow_unstable is set.
EventLog simulate(const HawkesModel& model, const Incentives& incentives,
                  double horizon, std::uint64_t seed, bool allow_unstable = false);

// Thinning simulation of [window_start, window_end) conditioned on an
// observed history whose events precede window_start.
EventLog simulate_conditional(const HawkesModel& model, const Incentives& incentives,
                              const EventLog& history, double window_start, double window_end,
                              std::uint64_t seed, bool allow_unstable = false);

// Per-user expected event counts over the realization window, history frozen:
// the closed-form integral of the conditional intensity, no excitation from
// unsimulated future events.
std::vector<double> expected_counts(const HawkesModel& model, const Incentives& incentives,
                                    const Realization& realization, const EventLog& history);

// Per-user count increments of a log over [start, end).
std::vector<double> count_increments(const EventLog& log, const Realization& realization,
                                     std::size_t n_users);

// Average absolute difference between actual and predicted per-user count
// increments over the realization window.
double simulation_error(const EventLog& actual, const EventLog& predicted,
                        const Realization& realization, std::size_t n_users);

// Default error baseline the reported simulation error is compared against.
inline constexpr double kSimulationErrorBaseline = 5.0;

// Default decays per content type.
inline constexpr double kDecayMisinformation = 0.7;
inline constexpr double kDecayTrueContent = 1.0;
inline constexpr double kDefaultRealizationHours = 2.0;

}  // namespace fairmit

#endif

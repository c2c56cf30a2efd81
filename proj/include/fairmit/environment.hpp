#ifndef FAIRMIT_ENVIRONMENT_HPP
#define FAIRMIT_ENVIRONMENT_HPP

#include <cstdint>

#include "fairmit/fairness.hpp"
#include "fairmit/network.hpp"

namespace fairmit {

enum class Backend { Expected, Sampled };

struct EnvironmentConfig {
    Backend backend = Backend::Expected;
    double delta_t = kDefaultRealizationHours;
    int realizations = 1;  // evaluation horizon, in realizations
    double balance = kDefaultBalance;
};

// The automata's view of the diffusion process: per-user event counts over
// the evaluation horizon (expected or sampled), turned into cumulative
// impacts and balance-adjusted exposure ratios.
//
// The expected backend accumulates the realization windows' closed-form
// counts and then applies the branching closure (events spawned inside the
// window excite further in-window events), so its counts agree with the
// sampled backend's mean instead of systematically undercounting.
class DiffusionEnvironment {
public:
    DiffusionEnvironment(const Network& network, const EnvironmentConfig& config);

    const Network& network() const { return *network_; }
    const EnvironmentConfig& config() const { return config_; }
    double window_hours() const { return config_.delta_t * config_.realizations; }

    // Exposure ratios for the listed users under the given incentives.
    // Expected mode only touches the listed users' influencers and their
    // diffusion ancestors; sampled mode draws one seeded realization of both
    // content processes.
    std::vector<double> ratios_for(const std::vector<std::size_t>& users,
                                   const Incentives& incentives, std::uint64_t seed) const;

    // Full-network exposure ratios, via the exposure module.
    ExposureRatios all_ratios(const Incentives& incentives, std::uint64_t seed) const;

    // Full-network fairness loss at the given incentives.
    LossReport network_loss(const Incentives& incentives, std::uint64_t seed) const;

    // Expected per-user event counts over the evaluation window including
    // in-window offspring; entries are filled for the requested users and
    // their diffusion ancestors.
    std::vector<double> expected_closure_counts(const HawkesModel& model,
                                                const Incentives& incentives,
                                                const std::vector<std::size_t>& users) const;

private:
    void sampled_counts(const Incentives& incentives, std::uint64_t seed,
                        std::vector<double>& mis, std::vector<double>& tru) const;
    const std::vector<double>& cached_mis_counts() const;
    std::vector<std::size_t> diffusion_ancestors(const HawkesModel& model,
                                                 const std::vector<std::size_t>& users) const;

    const Network* network_;
    EnvironmentConfig config_;
    std::vector<std::vector<std::size_t>> influencers_;  // adjacency in-edges
    mutable std::vector<double> mis_counts_cache_;  // expected mode; x-independent
    mutable bool mis_cache_ready_ = false;
};

}  // namespace fairmit

#endif

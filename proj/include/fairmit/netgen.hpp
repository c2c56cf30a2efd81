#ifndef FAIRMIT_NETGEN_HPP
#define FAIRMIT_NETGEN_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "fairmit/network.hpp"

namespace fairmit {

enum class ExposureCase { Case0, Case1, Case2, Custom };

struct NetworkSpec {
    std::size_t n_users = 200;
    ExposureCase exposure = ExposureCase::Case0;
    double target_mis_pct = 50.0;       // overall misinformation share, percent
    double exposed_fraction = 0.2;      // Case-1: fraction of mis-heavy users
    double heavy_subset_fraction = 0.1; // Case-2 knobs
    double heavy_multiplier = 4.0;
    double edge_density = 0.05;
    std::size_t total_events = 0;       // 0 -> 20 per user
    double horizon_hours = 8.0;         // training history length
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedNetwork {
    Matrix adjacency;  // binary, diagonal 1
    EventLog mis_log;
    EventLog true_log;
    double achieved_mis_pct = 0.0;
};

struct FeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Random adjacency plus per-user event counts shaped by the exposure case,
// bounded so the overall misinformation share lands on the target;
// timestamps uniform over the history horizon. Deterministic per seed.
GeneratedNetwork generate(const NetworkSpec& spec);

// Split a combined event CSV into per-content logs; rows are validated and
// errors carry line numbers.
std::pair<EventLog, EventLog> ingest_csv(const std::string& path, std::size_t n_users);

// 100 * |mis| / (|mis| + |true|); throws when both logs are empty.
double mis_percentage(const EventLog& mis_log, const EventLog& true_log);

// Mitigation-scale scenario networks: Hawkes rates sized against the
// incentive budgets of a campaign (events per hour comparable to C/N), with
// a short simulated history. Case-1 concentrates misinformation on a
// self-exciting exposed minority whose true content diffuses with a high
// multiplier; Case-0 starts everyone balanced.
Network case0_scenario(std::size_t n_users, std::uint64_t seed);
Network case1_scenario(std::size_t n_users, std::uint64_t seed);

// Evaluation-window defaults the scenario rates were sized for.
inline constexpr int kScenarioRealizations = 256;
inline constexpr double kScenarioWindowHours =
    kScenarioRealizations * kDefaultRealizationHours;

}  // namespace fairmit

#endif

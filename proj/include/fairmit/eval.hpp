#ifndef FAIRMIT_EVAL_HPP
#define FAIRMIT_EVAL_HPP

#include <string>

#include "fairmit/environment.hpp"

namespace fairmit {

struct RunMetrics {
    double mis_pct_before = 0.0;
    double mis_pct_after = 0.0;
    double efficiency = 0.0;
    double fairness_error = 0.0;     // normalized total loss, in [0, 1]
    double consumption_ratio = 0.0;  // c / C
    double wall_time_seconds = 0.0;
};

struct AggregateMetrics {
    RunMetrics mean;
    RunMetrics std_error;  // sample std / sqrt(n)
    std::size_t n_runs = 0;
};

// Mitigation efficiency 1 - after/before. Throws std::domain_error when
// before is 0 (undefined metric).
double efficiency(double before, double after);

// Misinformation share (percent) over the evaluation horizon with the
// incentives applied to the true-content model. The sampled backend pools
// event counts over `replications` seeded simulations with seeds derived
// from `seed`; the expected backend is deterministic and ignores both.
double post_mitigation_share(const Network& network, const Incentives& incentives,
                             Backend backend, double horizon_hours, std::uint64_t seed,
                             int replications = 1);

struct EvalOptions {
    Backend backend = Backend::Expected;
    double horizon_hours = kDefaultRealizationHours;
    int replications = 1;
    std::uint64_t seed = 0;
    EnvironmentConfig fairness_env;  // backend/horizon for the fairness error
};

// Before/after shares, efficiency and fairness error for one incentive
// allocation. Before and after use matched seeds (common random numbers).
RunMetrics evaluate_allocation(const Network& network, const Incentives& incentives,
                               const EvalOptions& options);

// Per-metric mean and standard error of the mean.
AggregateMetrics aggregate(const std::vector<RunMetrics>& runs);

struct ReportRow {
    std::string method;
    std::string network;
    double capacity = 0.0;
    AggregateMetrics metrics;
};

inline constexpr const char* kReportHeader =
    "method,network,capacity,efficiency_mean,efficiency_se,fairness_mean,fairness_se,"
    "consumption_ratio,runs";

// One row per (method, network, capacity), CSV and a JSON mirror with the
// same values.
void emit_report(const std::vector<ReportRow>& rows, const std::string& csv_path,
                 const std::string& json_path);

std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace fairmit

#endif

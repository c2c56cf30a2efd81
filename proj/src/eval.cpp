#include "fairmit/eval.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fairmit/rng.hpp"
#include "json.hpp"

namespace fairmit {

double efficiency(double before, double after) {
    if (before <= 0.0) throw std::domain_error("efficiency: pre-mitigation share is zero");
    if (after < 0.0) throw std::invalid_argument("efficiency: negative post-mitigation share");
    return 1.0 - after / before;
}

namespace {

// Pooled mis/true event counts over [history_end, history_end + horizon).
std::pair<double, double> window_totals(const Network& network, const Incentives& incentives,
                                        Backend backend, double horizon_hours,
                                        std::uint64_t seed, int replications) {
    const double t0 = network.history_end();
    const double t1 = t0 + horizon_hours;
    const std::size_t n = network.n_users();
    Incentives none = Incentives::zero(n);

    double mis_total = 0.0, true_total = 0.0;
    if (backend == Backend::Expected) {
        Realization window{0, t0, t1};
        auto mis = expected_counts(network.mis_model, none, window, network.mis_history);
        auto tru = expected_counts(network.true_model, incentives, window, network.true_history);
        for (std::size_t i = 0; i < n; ++i) {
            mis_total += mis[i];
            true_total += tru[i];
        }
    } else {
        for (int r = 0; r < replications; ++r) {
            std::uint64_t rep_seed = derive_seed(seed, "evalrep", static_cast<std::uint64_t>(r));
            EventLog mis_log = simulate_conditional(network.mis_model, none, network.mis_history,
                                                    t0, t1, derive_seed(rep_seed, "mis"));
            EventLog true_log = simulate_conditional(network.true_model, incentives,
                                                     network.true_history, t0, t1,
                                                     derive_seed(rep_seed, "true"));
            mis_total += static_cast<double>(mis_log.events.size());
            true_total += static_cast<double>(true_log.events.size());
        }
    }
    return {mis_total, true_total};
}

}  // namespace

double post_mitigation_share(const Network& network, const Incentives& incentives,
                             Backend backend, double horizon_hours, std::uint64_t seed,
                             int replications) {
    if (horizon_hours <= 0.0)
        throw std::invalid_argument("post_mitigation_share: horizon must be positive");
    if (replications <= 0)
        throw std::invalid_argument("post_mitigation_share: replications must be positive");
    auto [mis, tru] = window_totals(network, incentives, backend, horizon_hours, seed,
                                    replications);
    double total = mis + tru;
    if (total <= 0.0)
        throw std::domain_error("post_mitigation_share: no events over the evaluation horizon");
    return 100.0 * mis / total;
}

RunMetrics evaluate_allocation(const Network& network, const Incentives& incentives,
                               const EvalOptions& options) {
    Incentives none = Incentives::zero(network.n_users());
    // Matched seeds before/after: the mis process and every replication reuse
    // the same derived seed stream.
    RunMetrics m;
    m.mis_pct_before = post_mitigation_share(network, none, options.backend,
                                             options.horizon_hours, options.seed,
                                             options.replications);
    m.mis_pct_after = post_mitigation_share(network, incentives, options.backend,
                                            options.horizon_hours, options.seed,
                                            options.replications);
    m.efficiency = efficiency(m.mis_pct_before, m.mis_pct_after);
    DiffusionEnvironment env(network, options.fairness_env);
    m.fairness_error = env.network_loss(incentives, derive_seed(options.seed, "fairness"))
                           .normalized;
    return m;
}

namespace {

const std::vector<double RunMetrics::*>& metric_fields() {
    static const std::vector<double RunMetrics::*> fields = {
        &RunMetrics::mis_pct_before, &RunMetrics::mis_pct_after, &RunMetrics::efficiency,
        &RunMetrics::fairness_error, &RunMetrics::consumption_ratio,
        &RunMetrics::wall_time_seconds};
    return fields;
}

}  // namespace

AggregateMetrics aggregate(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: empty run list");
    AggregateMetrics agg;
    agg.n_runs = runs.size();
    const double n = static_cast<double>(runs.size());
    for (auto field : metric_fields()) {
        double mean = 0.0;
        for (const RunMetrics& r : runs) mean += r.*field;
        mean /= n;
        double var = 0.0;
        if (runs.size() > 1) {
            for (const RunMetrics& r : runs) {
                double d = r.*field - mean;
                var += d * d;
            }
            var /= (n - 1.0);
        }
        agg.mean.*field = mean;
        agg.std_error.*field = std::sqrt(var / n);
    }
    return agg;
}

namespace {

std::string fmt6(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << kReportHeader << '\n';
    for (const ReportRow& row : rows) {
        os << row.method << ',' << row.network << ',' << fmt6(row.capacity) << ','
           << fmt6(row.metrics.mean.efficiency) << ',' << fmt6(row.metrics.std_error.efficiency)
           << ',' << fmt6(row.metrics.mean.fairness_error) << ','
           << fmt6(row.metrics.std_error.fairness_error) << ','
           << fmt6(row.metrics.mean.consumption_ratio) << ',' << row.metrics.n_runs << '\n';
    }
    return os.str();
}

void emit_report(const std::vector<ReportRow>& rows, const std::string& csv_path,
                 const std::string& json_path) {
    {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("emit_report: cannot write " + csv_path);
        out << report_csv(rows);
    }
    nlohmann::json doc = nlohmann::json::array();
    for (const ReportRow& row : rows) {
        doc.push_back({{"method", row.method},
                       {"network", row.network},
                       {"capacity", fmt6(row.capacity)},
                       {"efficiency_mean", fmt6(row.metrics.mean.efficiency)},
                       {"efficiency_se", fmt6(row.metrics.std_error.efficiency)},
                       {"fairness_mean", fmt6(row.metrics.mean.fairness_error)},
                       {"fairness_se", fmt6(row.metrics.std_error.fairness_error)},
                       {"consumption_ratio", fmt6(row.metrics.mean.consumption_ratio)},
                       {"runs", row.metrics.n_runs}});
    }
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("emit_report: cannot write " + json_path);
    out << doc.dump(2) << '\n';
}

}  // namespace fairmit

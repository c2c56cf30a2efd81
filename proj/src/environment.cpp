#include "fairmit/environment.hpp"

#include <cmath>

#include "fairmit/rng.hpp"

namespace fairmit {

DiffusionEnvironment::DiffusionEnvironment(const Network& network,
                                           const EnvironmentConfig& config)
    : network_(&network), config_(config) {
    network.validate();
    if (config.delta_t <= 0.0) throw std::invalid_argument("environment: delta_t must be positive");
    if (config.realizations <= 0)
        throw std::invalid_argument("environment: realizations must be positive");
    if (config.balance <= 0.0) throw std::invalid_argument("environment: balance must be positive");
    if (branching_spectral_radius(network.mis_model) >= 1.0 ||
        branching_spectral_radius(network.true_model) >= 1.0)
        throw StabilityError("environment: potentially explosive model");
    influencers_ = influencer_lists(network.adjacency);
}

std::vector<std::size_t> DiffusionEnvironment::diffusion_ancestors(
    const HawkesModel& model, const std::vector<std::size_t>& users) const {
    const std::size_t n = model.n_users();
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t u : users)
        if (!seen[u]) {
            seen[u] = 1;
            queue.push_back(u);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t u = queue[head];
        for (std::size_t k = 0; k < n; ++k)
            if (model.influence[u][k] > 0.0 && !seen[k]) {
                seen[k] = 1;
                queue.push_back(k);
            }
    }
    return queue;
}

std::vector<double> DiffusionEnvironment::expected_closure_counts(
    const HawkesModel& model, const Incentives& incentives,
    const std::vector<std::size_t>& users) const {
    const double t0 = network_->history_end();
    const double dt = config_.delta_t;
    const double w = model.decay;
    const double window = window_hours();
    const EventLog& history =
        model.content == ContentType::Misinformation ? network_->mis_history
                                                     : network_->true_history;

    std::vector<std::size_t> anc = diffusion_ancestors(model, users);

    // Per-realization closed-form counts of the base process: incentivized
    // base rate plus the decaying kernel mass of the observed history.
    std::vector<double> base(model.n_users(), 0.0);
    for (std::size_t u : anc) {
        double b = 0.0;
        const auto& row = model.influence[u];
        for (int r = 0; r < config_.realizations; ++r) {
            double a0 = t0 + r * dt;
            double a1 = a0 + dt;
            b += (incentives.x[u] + model.mu[u]) * dt;
            for (const Event& e : history.events) {
                double a = row[e.user_id];
                if (a > 0.0)
                    b += a * (std::exp(-w * (a0 - e.timestamp)) - std::exp(-w * (a1 - e.timestamp))) /
                         w;
            }
        }
        base[u] = b;
    }

    // Branching closure: each in-window event contributes its own offspring.
    // kappa discounts offspring that would land past the window end.
    double kappa = 1.0 - (1.0 - std::exp(-w * window)) / (w * window);
    std::vector<double> counts = base;
    std::vector<double> next(model.n_users(), 0.0);
    for (int iter = 0; iter < 10000; ++iter) {
        double delta = 0.0;
        for (std::size_t u : anc) {
            double s = base[u];
            const auto& row = model.influence[u];
            for (std::size_t k : anc) {
                double a = row[k];
                if (a > 0.0) s += a * kappa / w * counts[k];
            }
            next[u] = s;
            delta = std::max(delta, std::abs(s - counts[u]));
        }
        for (std::size_t u : anc) counts[u] = next[u];
        if (delta < 1e-12) break;
    }
    return counts;
}

void DiffusionEnvironment::sampled_counts(const Incentives& incentives, std::uint64_t seed,
                                          std::vector<double>& mis, std::vector<double>& tru) const {
    const double t0 = network_->history_end();
    const double t1 = t0 + window_hours();
    const std::size_t n = network_->n_users();
    Incentives none = Incentives::zero(n);
    EventLog mis_log = simulate_conditional(network_->mis_model, none, network_->mis_history,
                                            t0, t1, derive_seed(seed, "mis"));
    EventLog true_log = simulate_conditional(network_->true_model, incentives,
                                             network_->true_history, t0, t1,
                                             derive_seed(seed, "true"));
    mis.assign(n, 0.0);
    tru.assign(n, 0.0);
    for (const Event& e : mis_log.events) mis[e.user_id] += 1.0;
    for (const Event& e : true_log.events) tru[e.user_id] += 1.0;
}

const std::vector<double>& DiffusionEnvironment::cached_mis_counts() const {
    if (!mis_cache_ready_) {
        const std::size_t n = network_->n_users();
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        mis_counts_cache_ =
            expected_closure_counts(network_->mis_model, Incentives::zero(n), all);
        mis_cache_ready_ = true;
    }
    return mis_counts_cache_;
}

std::vector<double> DiffusionEnvironment::ratios_for(const std::vector<std::size_t>& users,
                                                     const Incentives& incentives,
                                                     std::uint64_t seed) const {
    const std::size_t n = network_->n_users();
    std::vector<double> mis_counts, true_counts;

    if (config_.backend == Backend::Sampled) {
        sampled_counts(incentives, seed, mis_counts, true_counts);
    } else {
        // collect every influencer of a requested user, once
        std::vector<char> needed(n, 0);
        std::vector<std::size_t> need_list;
        for (std::size_t u : users)
            for (std::size_t k : influencers_[u])
                if (!needed[k]) {
                    needed[k] = 1;
                    need_list.push_back(k);
                }
        mis_counts = cached_mis_counts();
        true_counts = expected_closure_counts(network_->true_model, incentives, need_list);
    }

    std::vector<double> out;
    out.reserve(users.size());
    for (std::size_t u : users) {
        double f = 0.0, t = 0.0;
        for (std::size_t k : influencers_[u]) {
            double a = (k == u) ? 1.0 : network_->adjacency[u][k];
            f += a * mis_counts[k];
            t += a * true_counts[k];
        }
        out.push_back((1.0 + t) / ((1.0 + f) * config_.balance));
    }
    return out;
}

ExposureRatios DiffusionEnvironment::all_ratios(const Incentives& incentives,
                                                std::uint64_t seed) const {
    const std::size_t n = network_->n_users();
    std::vector<double> mis_counts, true_counts;
    if (config_.backend == Backend::Sampled) {
        sampled_counts(incentives, seed, mis_counts, true_counts);
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        mis_counts = cached_mis_counts();
        true_counts = expected_closure_counts(network_->true_model, incentives, all);
    }
    ImpactTable impacts = accumulate_impacts({mis_counts}, {true_counts},
                                             network_->adjacency, 0);
    return ratio(impacts, config_.balance);
}

LossReport DiffusionEnvironment::network_loss(const Incentives& incentives,
                                              std::uint64_t seed) const {
    return total_loss(all_ratios(incentives, seed), network_->adjacency);
}

}  // namespace fairmit

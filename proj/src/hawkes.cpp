#include "fairmit/hawkes.hpp"

#include <cmath>
#include <numeric>

#include "fairmit/rng.hpp"

namespace fairmit {

void HawkesModel::validate() const {
    if (decay <= 0.0) throw std::invalid_argument("HawkesModel: decay must be positive");
    if (influence.size() != mu.size())
        throw std::invalid_argument("HawkesModel: influence rows != n_users");
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] < 0.0) throw std::invalid_argument("HawkesModel: negative base intensity");
        if (influence[i].size() != mu.size())
            throw std::invalid_argument("HawkesModel: influence is not square");
        for (double a : influence[i])
            if (a < 0.0) throw std::invalid_argument("HawkesModel: negative influence entry");
    }
}

double Incentives::total() const { return std::accumulate(x.begin(), x.end(), 0.0); }

double branching_spectral_radius(const HawkesModel& model, int iterations) {
    const std::size_t n = model.n_users();
    if (n == 0) return 0.0;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n, 0.0);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += model.influence[i][j] * v[j];
            w[i] = s / model.decay;
        }
        double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (norm == 0.0) return 0.0;
        lambda = norm;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    return lambda;
}

double intensity(const HawkesModel& model, const Incentives& incentives,
                 std::size_t user, double t, const EventLog& history) {
    const std::size_t n = model.n_users();
    if (user >= n) throw std::out_of_range("intensity: user index out of range");
    if (incentives.x.size() != n) throw std::invalid_argument("intensity: incentive size mismatch");
    double lam = incentives.x[user] + model.mu[user];
    const auto& row = model.influence[user];
    for (const Event& e : history.events) {
        if (e.timestamp >= t) break;
        double a = row[e.user_id];
        if (a > 0.0) lam += a * std::exp(-model.decay * (t - e.timestamp));
    }
    return lam;
}

namespace {

// Thinning core over [t_start, t_end); s carries the decayed excitation state
// of each source at t_start.
EventLog run_thinning(const HawkesModel& model, const Incentives& incentives,
                      std::vector<double> s, double t_start, double t_end,
                      std::uint64_t seed) {
    const std::size_t n = model.n_users();
    EventLog log;
    log.horizon = t_end;
    log.n_users = n;

    double base_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) base_total += incentives.x[i] + model.mu[i];

    // Column sums of the influence matrix: an event by source j raises total
    // intensity by col[j] immediately after.
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) col[j] += model.influence[i][j];

    std::vector<double> lam(n, 0.0);
    auto rng = make_rng(seed);
    const double w = model.decay;

    double t = t_start;
    double horizon = t_end;
    while (true) {
        // Upper bound: intensity just after t; exponential decay makes it a
        // valid dominating rate until the next accepted event.
        double bound = base_total;
        for (std::size_t j = 0; j < n; ++j) bound += col[j] * s[j];
        if (bound <= 0.0) break;

        double u = uniform01(rng);
        double dt = -std::log(1.0 - u) / bound;
        double tn = t + dt;
        if (tn >= horizon) break;

        double decay_factor = std::exp(-w * dt);
        for (std::size_t j = 0; j < n; ++j) s[j] *= decay_factor;
        t = tn;

        double total = base_total;
        for (std::size_t i = 0; i < n; ++i) {
            double li = incentives.x[i] + model.mu[i];
            const auto& row = model.influence[i];
            for (std::size_t j = 0; j < n; ++j) li += row[j] * s[j];
            lam[i] = li;
        }
        total = std::accumulate(lam.begin(), lam.end(), 0.0);

        double accept = uniform01(rng);
        if (accept * bound <= total) {
            double pick = uniform01(rng) * total;
            std::size_t who = n - 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += lam[i];
                if (pick <= acc) {
                    who = i;
                    break;
                }
            }
            log.events.push_back(Event{who, t, model.content});
            s[who] += 1.0;
        }
    }
    return log;
}

}  // namespace

EventLog simulate(const HawkesModel& model, const Incentives& incentives,
                  double horizon, std::uint64_t seed, bool allow_unstable) {
    model.validate();
    const std::size_t n = model.n_users();
    if (incentives.x.size() != n) throw std::invalid_argument("simulate: incentive size mismatch");
    if (horizon <= 0.0) throw std::invalid_argument("simulate: horizon must be positive");
    if (!allow_unstable && branching_spectral_radius(model) >= 1.0)
        throw StabilityError("simulate: spectral radius of influence/decay >= 1");
    return run_thinning(model, incentives, std::vector<double>(n, 0.0), 0.0, horizon, seed);
}

EventLog simulate_conditional(const HawkesModel& model, const Incentives& incentives,
                              const EventLog& history, double window_start, double window_end,
                              std::uint64_t seed, bool allow_unstable) {
    model.validate();
    const std::size_t n = model.n_users();
    if (incentives.x.size() != n)
        throw std::invalid_argument("simulate_conditional: incentive size mismatch");
    if (window_end <= window_start)
        throw std::invalid_argument("simulate_conditional: empty window");
    if (!allow_unstable && branching_spectral_radius(model) >= 1.0)
        throw StabilityError("simulate_conditional: spectral radius of influence/decay >= 1");

    std::vector<double> s(n, 0.0);
    for (const Event& e : history.events) {
        if (e.timestamp >= window_start) break;
        s[e.user_id] += std::exp(-model.decay * (window_start - e.timestamp));
    }
    return run_thinning(model, incentives, std::move(s), window_start, window_end, seed);
}

std::vector<double> expected_counts(const HawkesModel& model, const Incentives& incentives,
                                    const Realization& realization, const EventLog& history) {
    const std::size_t n = model.n_users();
    if (incentives.x.size() != n)
        throw std::invalid_argument("expected_counts: incentive size mismatch");
    if (realization.end <= realization.start)
        throw std::invalid_argument("expected_counts: empty realization window");
    const double w = model.decay;
    const double t0 = realization.start;
    const double t1 = realization.end;

    std::vector<double> counts(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        counts[i] = (incentives.x[i] + model.mu[i]) * (t1 - t0);

    // Remaining kernel mass of each history event over the window, in closed
    // form; events at or after the window start contribute from their own time.
    for (const Event& e : history.events) {
        if (e.timestamp >= t1) break;
        double lo = std::max(t0, e.timestamp);
        double mass = (std::exp(-w * (lo - e.timestamp)) - std::exp(-w * (t1 - e.timestamp))) / w;
        for (std::size_t i = 0; i < n; ++i) {
            double a = model.influence[i][e.user_id];
            if (a > 0.0) counts[i] += a * mass;
        }
    }
    return counts;
}

std::vector<double> count_increments(const EventLog& log, const Realization& realization,
                                     std::size_t n_users) {
    std::vector<double> inc(n_users, 0.0);
    for (const Event& e : log.events) {
        if (e.timestamp < realization.start) continue;
        if (e.timestamp >= realization.end) break;
        if (e.user_id >= n_users)
            throw std::invalid_argument("count_increments: user index out of range");
        inc[e.user_id] += 1.0;
    }
    return inc;
}

double simulation_error(const EventLog& actual, const EventLog& predicted,
                        const Realization& realization, std::size_t n_users) {
    if (n_users == 0) throw std::invalid_argument("simulation_error: n_users must be positive");
    if (actual.n_users != n_users || predicted.n_users != n_users)
        throw std::invalid_argument("simulation_error: n_users mismatch");
    std::vector<double> a = count_increments(actual, realization, n_users);
    std::vector<double> p = count_increments(predicted, realization, n_users);
    double total = 0.0;
    for (std::size_t i = 0; i < n_users; ++i) total += std::abs(a[i] - p[i]);
    return total / static_cast<double>(n_users);
}

}  // namespace fairmit

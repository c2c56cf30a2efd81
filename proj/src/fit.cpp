#include "fairmit/fit.hpp"

#include <cmath>
#include <limits>

namespace fairmit {

namespace {

// Per-event excitation snapshots: for event k (in log order), excite[k][j] is
// the decayed sum of past events of source j at that event's time, events at
// identical timestamps excluded from each other's history.
struct Precomputed {
    std::vector<std::vector<double>> excite;  // one row per event
    std::vector<double> kernel_mass;          // integral of the unit kernel per source
    std::vector<std::vector<std::size_t>> events_of;  // event indices per target user
};

Precomputed precompute(const EventLog& log, double decay, std::size_t n) {
    Precomputed pre;
    const std::size_t m = log.size();
    pre.excite.assign(m, std::vector<double>(n, 0.0));
    pre.kernel_mass.assign(n, 0.0);
    pre.events_of.assign(n, {});

    std::vector<double> s(n, 0.0);
    double last_t = 0.0;
    std::size_t k = 0;
    while (k < m) {
        double t = log.events[k].timestamp;
        double f = std::exp(-decay * (t - last_t));
        for (std::size_t j = 0; j < n; ++j) s[j] *= f;
        last_t = t;
        // snapshot the whole tie group before any of it enters the history
        std::size_t g = k;
        while (g < m && log.events[g].timestamp == t) {
            pre.excite[g] = s;
            pre.events_of[log.events[g].user_id].push_back(g);
            ++g;
        }
        for (; k < g; ++k) s[log.events[k].user_id] += 1.0;
    }
    for (const Event& e : log.events)
        pre.kernel_mass[e.user_id] += (1.0 - std::exp(-decay * (log.horizon - e.timestamp))) / decay;
    return pre;
}

// Row log-likelihood: sum log lambda at user i's events minus the compensator.
double row_ll(const Precomputed& pre, std::size_t i, const std::vector<double>& theta,
              double horizon, std::size_t n) {
    double ll = -theta[0] * horizon;
    for (std::size_t j = 0; j < n; ++j) ll -= theta[1 + j] * pre.kernel_mass[j];
    for (std::size_t k : pre.events_of[i]) {
        double lam = theta[0];
        const auto& g = pre.excite[k];
        for (std::size_t j = 0; j < n; ++j) lam += theta[1 + j] * g[j];
        if (lam <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log(lam);
    }
    return ll;
}

void row_grad(const Precomputed& pre, std::size_t i, const std::vector<double>& theta,
              double horizon, std::size_t n, std::vector<double>& grad) {
    grad.assign(n + 1, 0.0);
    grad[0] = -horizon;
    for (std::size_t j = 0; j < n; ++j) grad[1 + j] = -pre.kernel_mass[j];
    for (std::size_t k : pre.events_of[i]) {
        double lam = theta[0];
        const auto& g = pre.excite[k];
        for (std::size_t j = 0; j < n; ++j) lam += theta[1 + j] * g[j];
        double inv = 1.0 / lam;
        grad[0] += inv;
        for (std::size_t j = 0; j < n; ++j) grad[1 + j] += g[j] * inv;
    }
}

}  // namespace

double log_likelihood(const HawkesModel& model, const EventLog& log) {
    const std::size_t n = model.n_users();
    Precomputed pre = precompute(log, model.decay, n);
    double ll = 0.0;
    std::vector<double> theta(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        theta[0] = model.mu[i];
        for (std::size_t j = 0; j < n; ++j) theta[1 + j] = model.influence[i][j];
        ll += row_ll(pre, i, theta, log.horizon, n);
    }
    return ll;
}

FitResult fit_mle(const EventLog& log, double decay, std::size_t n_users,
                  const FitOptions& options) {
    if (log.empty()) throw FitError("fit_mle: empty event log");
    if (decay <= 0.0) throw std::invalid_argument("fit_mle: decay must be positive");
    log.validate();
    if (log.n_users > n_users) throw std::invalid_argument("fit_mle: log n_users exceeds n_users");

    const std::size_t n = n_users;
    Precomputed pre = precompute(log, decay, n);

    FitResult res;
    res.model.decay = decay;
    res.model.mu.assign(n, 0.0);
    res.model.influence = zero_matrix(n, n);

    std::vector<double> theta(n + 1), grad(n + 1), trial(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double count_i = static_cast<double>(pre.events_of[i].size());
        // start near the Poisson rate with a little excitation mass
        theta.assign(n + 1, 0.01);
        theta[0] = std::max(count_i / log.horizon, 1e-6);

        // EM updates: each event splits its intensity between the background
        // and the decayed excitation of every source; the M-step rescales by
        // the compensator. Monotone in the likelihood, no step size to tune.
        double ll = row_ll(pre, i, theta, log.horizon, n);
        int it = 0;
        for (; it < options.max_iterations; ++it) {
            row_grad(pre, i, theta, log.horizon, n, grad);
            // projected gradient norm: at the boundary only ascent directions count
            double gnorm2 = 0.0;
            for (std::size_t p = 0; p <= n; ++p) {
                double g = (theta[p] <= 0.0 && grad[p] < 0.0) ? 0.0 : grad[p];
                gnorm2 += g * g;
            }
            if (std::sqrt(gnorm2) < options.gradient_tol) break;

            trial.assign(n + 1, 0.0);
            for (std::size_t k : pre.events_of[i]) {
                double lam = theta[0];
                const auto& g = pre.excite[k];
                for (std::size_t j = 0; j < n; ++j) lam += theta[1 + j] * g[j];
                double inv = 1.0 / lam;
                trial[0] += theta[0] * inv;
                for (std::size_t j = 0; j < n; ++j) trial[1 + j] += theta[1 + j] * g[j] * inv;
            }
            theta[0] = trial[0] / log.horizon;
            for (std::size_t j = 0; j < n; ++j)
                theta[1 + j] = pre.kernel_mass[j] > 0.0 ? trial[1 + j] / pre.kernel_mass[j] : 0.0;
            double next_ll = row_ll(pre, i, theta, log.horizon, n);
            if (next_ll - ll < 1e-10 * (1.0 + std::abs(ll))) {
                ll = next_ll;
                break;  // likelihood has stopped moving at numeric precision
            }
            ll = next_ll;
        }
        res.iterations += it;
        if (it >= options.max_iterations) res.converged = false;
        res.log_likelihood += ll;
        res.model.mu[i] = theta[0];
        for (std::size_t j = 0; j < n; ++j) res.model.influence[i][j] = theta[1 + j];
    }
    return res;
}

}  // namespace fairmit

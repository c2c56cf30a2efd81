#include "fairmit/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairmit/io.hpp"
#include "fairmit/rng.hpp"

namespace fairmit {

void NetworkSpec::validate() const {
    if (n_users < 2) throw std::invalid_argument("netgen: need at least 2 users");
    if (target_mis_pct <= 0.0 || target_mis_pct >= 100.0)
        throw std::invalid_argument("netgen: target_mis_pct must be in (0, 100)");
    if (exposed_fraction <= 0.0 || exposed_fraction > 1.0)
        throw std::invalid_argument("netgen: exposed_fraction must be in (0, 1]");
    if (heavy_subset_fraction <= 0.0 || heavy_subset_fraction > 1.0)
        throw std::invalid_argument("netgen: heavy_subset_fraction must be in (0, 1]");
    if (heavy_multiplier < 1.0)
        throw std::invalid_argument("netgen: heavy_multiplier must be >= 1");
    if (edge_density <= 0.0 || edge_density >= 1.0)
        throw std::invalid_argument("netgen: edge_density must be in (0, 1)");
    if (horizon_hours <= 0.0) throw std::invalid_argument("netgen: horizon must be positive");
}

namespace {

// Integer allocation proportional to weights, exact total (largest remainder).
std::vector<std::size_t> allocate_counts(std::size_t total, const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (wsum <= 0.0) throw std::invalid_argument("netgen: nonpositive weight sum");

    std::vector<std::size_t> counts(n, 0);
    std::vector<std::pair<double, std::size_t>> remainders(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double share = static_cast<double>(total) * weights[i] / wsum;
        counts[i] = static_cast<std::size_t>(std::floor(share));
        assigned += counts[i];
        remainders[i] = {share - std::floor(share), i};
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % n].second];
    return counts;
}

EventLog build_log(const std::vector<std::size_t>& counts, ContentType content, double horizon,
                   std::mt19937_64& rng) {
    EventLog log;
    log.horizon = horizon;
    log.n_users = counts.size();
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::size_t k = 0; k < counts[i]; ++k)
            log.events.push_back(Event{i, uniform01(rng) * horizon, content});
    log.sort_events();
    return log;
}

std::vector<std::size_t> shuffled_users(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    return order;
}

}  // namespace

GeneratedNetwork generate(const NetworkSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_users;
    auto rng = make_rng(derive_seed(spec.seed, "netgen"));

    GeneratedNetwork net;
    net.adjacency = identity_matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && uniform01(rng) < spec.edge_density) net.adjacency[i][j] = 1.0;

    const std::size_t total = spec.total_events > 0 ? spec.total_events : 20 * n;
    const double p = spec.target_mis_pct / 100.0;
    std::size_t mis_total = static_cast<std::size_t>(std::llround(p * static_cast<double>(total)));
    mis_total = std::clamp<std::size_t>(mis_total, 1, total - 1);

    std::vector<double> mis_weights(n, 1.0), true_weights(n, 1.0);
    switch (spec.exposure) {
        case ExposureCase::Case0:
        case ExposureCase::Custom:
            for (std::size_t i = 0; i < n; ++i) {
                mis_weights[i] = 1.0 + 0.1 * (2.0 * uniform01(rng) - 1.0);
                true_weights[i] = 1.0 + 0.1 * (2.0 * uniform01(rng) - 1.0);
            }
            break;
        case ExposureCase::Case1: {
            std::size_t exposed = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(spec.exposed_fraction *
                                                         static_cast<double>(n))));
            if (exposed >= n) exposed = n - 1;
            std::vector<std::size_t> order = shuffled_users(n, rng);

            // Per-user mis shares: s_e on the exposed minority, s_o elsewhere,
            // chosen so the population share hits the target while exposed
            // users stay clearly mis-dominated and the rest clearly not.
            const double ne = static_cast<double>(exposed);
            const double no = static_cast<double>(n - exposed);
            double s_e = 0.85;
            double s_o = (static_cast<double>(n) * p - ne * s_e) / no;
            if (s_o < 0.02) {
                s_e = (static_cast<double>(n) * p - 0.02 * no) / ne;
                s_o = 0.02;
                if (s_e < 0.58)
                    throw FeasibilityError(
                        "netgen: misinformation target too low for the exposed fraction");
            } else if (s_o > 0.42) {
                s_e = 0.98;
                s_o = (static_cast<double>(n) * p - ne * s_e) / no;
                if (s_o > 0.42)
                    throw FeasibilityError(
                        "netgen: misinformation target too high for Case-1 exposure");
            }
            for (std::size_t k = 0; k < n; ++k) {
                bool is_exposed = k < exposed;
                mis_weights[order[k]] = is_exposed ? s_e : s_o;
                true_weights[order[k]] = is_exposed ? 1.0 - s_e : 1.0 - s_o;
            }
            break;
        }
        case ExposureCase::Case2: {
            std::size_t heavy = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(spec.heavy_subset_fraction *
                                                         static_cast<double>(n))));
            std::vector<std::size_t> order = shuffled_users(n, rng);
            for (std::size_t k = 0; k < heavy && k < n; ++k)
                mis_weights[order[k]] = spec.heavy_multiplier;
            break;
        }
    }

    std::vector<std::size_t> mis_counts = allocate_counts(mis_total, mis_weights);
    std::vector<std::size_t> true_counts = allocate_counts(total - mis_total, true_weights);
    net.mis_log = build_log(mis_counts, ContentType::Misinformation, spec.horizon_hours, rng);
    net.true_log = build_log(true_counts, ContentType::TrueContent, spec.horizon_hours, rng);
    net.achieved_mis_pct =
        100.0 * static_cast<double>(mis_total) / static_cast<double>(total);
    return net;
}

std::pair<EventLog, EventLog> ingest_csv(const std::string& path, std::size_t n_users) {
    if (n_users == 0) throw std::invalid_argument("ingest_csv: n_users must be positive");
    std::vector<Event> events = read_events_csv(path);
    EventLog mis, tru;
    double horizon = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.user_id >= n_users)
            throw ParseError("line " + std::to_string(i + 2) + ": user id " +
                             std::to_string(e.user_id) + " outside [0, " +
                             std::to_string(n_users) + ")");
        horizon = std::max(horizon, e.timestamp);
        (e.content == ContentType::Misinformation ? mis : tru).events.push_back(e);
    }
    for (EventLog* log : {&mis, &tru}) {
        log->n_users = n_users;
        log->horizon = std::max(horizon, 1e-9);
        log->sort_events();
        log->validate();
    }
    return {std::move(mis), std::move(tru)};
}

double mis_percentage(const EventLog& mis_log, const EventLog& true_log) {
    const double m = static_cast<double>(mis_log.events.size());
    const double t = static_cast<double>(true_log.events.size());
    if (m + t == 0.0) throw std::domain_error("mis_percentage: no events");
    return 100.0 * m / (m + t);
}

namespace {

// Rates below are events per hour, sized so that demand over the scenario
// evaluation window is commensurate with per-user budget shares of a small
// knapsack (C on the order of 1e-2).
constexpr double kScenarioHistoryHours = 8.0;
constexpr std::size_t kScenarioHistoryEvents = 30;  // per posting user
constexpr double kQuietSelfExcitation = 0.05;

// Dense observed history: `per_user` jittered posts per listed user across
// the history window.
EventLog spaced_history(const std::vector<std::size_t>& users, ContentType content,
                        std::size_t n_users, std::uint64_t seed) {
    EventLog log;
    log.n_users = n_users;
    log.horizon = kScenarioHistoryHours;
    for (std::size_t u : users) {
        auto rng = make_rng(derive_seed(seed, "hist", u));
        for (std::size_t k = 0; k < kScenarioHistoryEvents; ++k) {
            double t = kScenarioHistoryHours * (static_cast<double>(k) + uniform01(rng)) /
                       static_cast<double>(kScenarioHistoryEvents);
            log.events.push_back({u, t, content});
        }
    }
    log.sort_events();
    return log;
}

Network finish_scenario(Matrix adjacency, HawkesModel mis_model, HawkesModel true_model,
                        std::uint64_t seed) {
    const std::size_t n = adjacency.size();
    Incentives none = Incentives::zero(n);
    Network net;
    net.adjacency = std::move(adjacency);
    net.mis_model = std::move(mis_model);
    net.true_model = std::move(true_model);
    net.mis_history =
        simulate(net.mis_model, none, kScenarioHistoryHours, derive_seed(seed, "hist-mis"));
    net.true_history =
        simulate(net.true_model, none, kScenarioHistoryHours, derive_seed(seed, "hist-true"));
    net.validate();
    return net;
}

}  // namespace

Network case0_scenario(std::size_t n_users, std::uint64_t seed) {
    if (n_users < 2) throw std::invalid_argument("case0_scenario: need at least 2 users");
    const double w = kScenarioWindowHours;
    HawkesModel mis{std::vector<double>(n_users, 1.0 / w), zero_matrix(n_users, n_users),
                    kDecayMisinformation, ContentType::Misinformation};
    // chosen so every exposure ratio starts at exactly 1
    HawkesModel tru{std::vector<double>(n_users, 1.6 / w), zero_matrix(n_users, n_users),
                    kDecayTrueContent, ContentType::TrueContent};
    return finish_scenario(identity_matrix(n_users), std::move(mis), std::move(tru), seed);
}

Network case1_scenario(std::size_t n_users, std::uint64_t seed) {
    if (n_users < 15) throw std::invalid_argument("case1_scenario: need at least 15 users");
    const std::size_t exposed = std::max<std::size_t>(3, n_users / 5);
    const double w = kScenarioWindowHours;

    // Exposed users: mis-heavy posters with self-exciting true content (each
    // true event breeds a burst of its own, branching ratio 0.8). The rest
    // are quiet, weakly self-exciting, and start balanced.
    std::vector<double> mu_mis(n_users, 0.0), mu_true(n_users, 0.0);
    Matrix a_true = zero_matrix(n_users, n_users);
    std::vector<std::size_t> exposed_ids, quiet_ids;
    for (std::size_t j = 0; j < n_users; ++j) {
        if (j < exposed) {
            exposed_ids.push_back(j);
            mu_mis[j] = 2.6 / w;
            mu_true[j] = 0.1 / w;
            a_true[j][j] = 0.8 * kDecayTrueContent;
        } else {
            quiet_ids.push_back(j);
            a_true[j][j] = kQuietSelfExcitation * kDecayTrueContent;
        }
    }

    Network net;
    // Exposed users watch each other along a short ring; everyone else only
    // sees themselves.
    net.adjacency = identity_matrix(n_users);
    for (std::size_t j = 0; j < exposed; ++j) {
        net.adjacency[(j + 1) % exposed][j] = 1.0;
        net.adjacency[(j + 2) % exposed][j] = 1.0;
    }
    net.mis_history = spaced_history(exposed_ids, ContentType::Misinformation, n_users,
                                     derive_seed(seed, "hist-mis"));
    net.true_history = spaced_history(quiet_ids, ContentType::TrueContent, n_users,
                                      derive_seed(seed, "hist-true"));

    // Calibrate each quiet user's base rate so its expected true count over
    // the window is exactly 0.3: with the balance factor 1.3 its exposure
    // ratio then starts at 1. The observed history keeps exciting posts into
    // the window, so that mass is deducted from the base rate.
    const double decay = kDecayTrueContent;
    const double kappa = 1.0 - (1.0 - std::exp(-decay * w)) / (decay * w);
    const double alpha = kQuietSelfExcitation * decay;
    const double mult = 1.0 / (1.0 - alpha * kappa / decay);
    std::vector<double> hist_mass(n_users, 0.0);
    for (const Event& e : net.true_history.events) {
        double dt0 = kScenarioHistoryHours - e.timestamp;
        hist_mass[e.user_id] +=
            (std::exp(-decay * dt0) - std::exp(-decay * (dt0 + w))) / decay;
    }
    for (std::size_t j : quiet_ids) mu_true[j] = (0.3 / mult - alpha * hist_mass[j]) / w;

    net.mis_model = {std::move(mu_mis), zero_matrix(n_users, n_users), kDecayMisinformation,
                     ContentType::Misinformation};
    net.true_model = {std::move(mu_true), std::move(a_true), kDecayTrueContent,
                      ContentType::TrueContent};
    net.validate();
    return net;
}

}  // namespace fairmit

#include "fairmit/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fairmit/io.hpp"
#include "fairmit/rng.hpp"

namespace fairmit {

double CampaignConfig::resolved_step() const {
    return step > 0.0 ? step : capacity / static_cast<double>(memory_depth);
}

void CampaignConfig::validate(std::size_t n_users) const {
    if (capacity <= 0.0) throw std::invalid_argument("campaign: capacity must be positive");
    if (memory_depth == 0) throw std::invalid_argument("campaign: memory depth must be positive");
    if (epsilon <= 0.0 || epsilon >= 0.5)
        throw std::invalid_argument("campaign: epsilon must lie in (0, 0.5)");
    if (delta_t <= 0.0) throw std::invalid_argument("campaign: delta_t must be positive");
    if (eval_horizon <= 0) throw std::invalid_argument("campaign: eval_horizon must be positive");
    if (loss_sample_size > n_users)
        throw std::invalid_argument("campaign: loss sample size exceeds user count");
    if (max_sweeps == 0) throw std::invalid_argument("campaign: max_sweeps must be positive");
    if (trajectory_stride == 0)
        throw std::invalid_argument("campaign: trajectory stride must be positive");
}

namespace {

EnvironmentConfig env_config(const CampaignConfig& config) {
    EnvironmentConfig ec;
    ec.backend = config.backend;
    ec.delta_t = config.delta_t;
    ec.realizations = config.eval_horizon;
    ec.balance = config.balance;
    return ec;
}

}  // namespace

Campaign::Campaign(const Network& network, const CampaignConfig& config)
    : network_(&network),
      config_(config),
      env_(network, env_config(config)),
      ledger_(config.capacity, config.resolved_step()),
      incentives_(Incentives::zero(network.n_users())) {
    config.validate(network.n_users());
    automata_.reserve(network.n_users());
    for (std::size_t i = 0; i < network.n_users(); ++i)
        automata_.emplace_back(i, config.memory_depth);
    record_trajectory();
}

std::vector<std::size_t> Campaign::sweep_order() const {
    std::vector<std::size_t> order(automata_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (config_.shuffle_order) {
        auto rng = make_rng(derive_seed(config_.seed, "order", sweep_));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }
    return order;
}

void Campaign::step_user(std::size_t user) {
    Automaton& a = automata_[user];
    if (a.converged()) return;

    auto rng = make_rng(derive_seed(config_.seed, "propose", sweep_, user));
    std::optional<Direction> proposal = a.propose(rng);
    if (!proposal) return;
    ++iterations_;
    if (*proposal == Direction::Stay) return;

    const double step = config_.resolved_step();
    const std::vector<std::size_t>& terms = loss_terms(user, network_->adjacency);

    // A.6 subsampling: the slope only sees loss terms that landed in a fresh
    // uniform user sample; a miss skips the step entirely.
    std::vector<std::size_t> affected;
    if (config_.loss_sample_size > 0 && config_.loss_sample_size < network_->n_users()) {
        const std::size_t n = network_->n_users();
        auto sample_rng = make_rng(derive_seed(config_.seed, "losssample", sweep_, user));
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::vector<char> in_sample(n, 0);
        for (std::size_t k = 0; k < config_.loss_sample_size; ++k) {
            std::size_t pick = k + uniform_index(sample_rng, n - k);
            std::swap(pool[k], pool[pick]);
            in_sample[pool[k]] = 1;
        }
        for (std::size_t j : terms)
            if (in_sample[j]) affected.push_back(j);
        if (affected.empty()) return;
    } else {
        affected = terms;
    }

    if (*proposal == Direction::Right && !ledger_.try_reserve(step)) {
        // An unfundable rightward move is the full-knapsack penalty without
        // spending an environment evaluation.
        a.apply_feedback(Direction::Right, 1);
        a.check_convergence(config_.epsilon);
        return;
    }

    Incentives tentative = incentives_;
    tentative.x[user] += (*proposal == Direction::Right) ? step : -step;
    if (tentative.x[user] < 0.0) tentative.x[user] = 0.0;

    // Common random numbers: committed and tentative ratios share the seed,
    // so the slope isolates the incentive change.
    ++evaluations_;
    std::uint64_t env_seed = derive_seed(config_.seed, "env", sweep_, user);
    std::vector<double> before = env_.ratios_for(affected, incentives_, env_seed);
    std::vector<double> after = env_.ratios_for(affected, tentative, env_seed);

    double slope = 0.0;
    for (std::size_t k = 0; k < affected.size(); ++k) {
        double db = 1.0 - before[k];
        double da = 1.0 - after[k];
        slope += (da * da - db * db);
    }
    slope /= step;

    int beta = reward(*proposal, slope, 0);
    a.apply_feedback(*proposal, beta);
    if (*proposal == Direction::Right) {
        if (beta == 0)
            incentives_.x[user] = tentative.x[user];
        else
            ledger_.release(step);
    } else {
        if (beta == 0) {
            incentives_.x[user] = tentative.x[user];
            ledger_.release(step);
        }
    }
    a.check_convergence(config_.epsilon);
    max_total_incentive_ = std::max(max_total_incentive_, incentives_.total());
}

void Campaign::check_budget_invariant() const {
    double total = incentives_.total();
    double consumed = ledger_.consumed();
    double tol = 1e-9 * std::max(1.0, config_.capacity);
    if (std::abs(total - consumed) > tol + 1e-9 * static_cast<double>(automata_.size()))
        throw std::logic_error("campaign: ledger out of sync with committed incentives");
    if (total > config_.capacity * (1.0 + 1e-9))
        throw std::logic_error("campaign: committed incentives exceed capacity");
}

void Campaign::record_trajectory() {
    trajectory_.push_back(
        env_.network_loss(incentives_, derive_seed(config_.seed, "traj", sweep_)));
}

bool Campaign::step_sweep() {
    if (all_converged_) return true;
    for (std::size_t user : sweep_order()) step_user(user);
    ++sweep_;
    check_budget_invariant();
    if (sweep_ % config_.trajectory_stride == 0) record_trajectory();
    all_converged_ = std::all_of(automata_.begin(), automata_.end(),
                                 [](const Automaton& a) { return a.converged(); });
    return all_converged_;
}

bool Campaign::finished() const { return all_converged_; }

CampaignResult Campaign::result() const {
    CampaignResult r;
    r.incentives = incentives_;
    r.per_user_states.reserve(automata_.size());
    for (const Automaton& a : automata_) r.per_user_states.push_back(a.state());
    r.loss_trajectory = trajectory_;
    r.consumption = ledger_.consumed() / config_.capacity;
    r.max_total_incentive = max_total_incentive_;
    r.iterations = iterations_;
    r.evaluations = evaluations_;
    r.sweeps = sweep_;
    r.converged = all_converged_;
    return r;
}

namespace {

nlohmann::json loss_to_json(const LossReport& report) {
    return {{"per_user", report.per_user},
            {"total", report.total},
            {"normalized", report.normalized}};
}

LossReport loss_from_json(const nlohmann::json& doc) {
    LossReport r;
    r.per_user = doc.at("per_user").get<std::vector<double>>();
    r.total = doc.at("total").get<double>();
    r.normalized = doc.at("normalized").get<double>();
    return r;
}

}  // namespace

std::string Campaign::checkpoint_json() const {
    nlohmann::json payload;
    payload["sweep"] = sweep_;
    payload["iterations"] = iterations_;
    payload["evaluations"] = evaluations_;
    payload["consumed"] = ledger_.consumed();
    payload["max_total_incentive"] = max_total_incentive_;
    payload["incentives"] = incentives_.x;
    payload["config"] = {{"capacity", config_.capacity},
                         {"memory_depth", config_.memory_depth},
                         {"step", config_.resolved_step()},
                         {"seed", config_.seed}};
    nlohmann::json autos = nlohmann::json::array();
    for (const Automaton& a : automata_) {
        autos.push_back({{"user_id", a.user_id()},
                         {"state", a.state()},
                         {"converged", a.converged()},
                         {"rewarded_left", a.rewarded_left},
                         {"performed_left", a.performed_left},
                         {"rewarded_right", a.rewarded_right},
                         {"performed_right", a.performed_right},
                         {"visits", a.visits}});
    }
    payload["automata"] = std::move(autos);
    nlohmann::json traj = nlohmann::json::array();
    for (const LossReport& t : trajectory_) traj.push_back(loss_to_json(t));
    payload["trajectory"] = std::move(traj);

    std::string body = payload.dump();
    std::ostringstream hash;
    hash << std::hex << fnv1a64(body);
    nlohmann::json doc = {{"hash", hash.str()}, {"payload", std::move(payload)}};
    return doc.dump(2) + "\n";
}

void Campaign::save_checkpoint(const std::string& path) const {
    write_text_file(path, checkpoint_json());
}

Campaign Campaign::resume(const Network& network, const CampaignConfig& config,
                          const std::string& checkpoint_text) {
    nlohmann::json doc = nlohmann::json::parse(checkpoint_text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("hash") || !doc.contains("payload"))
        throw IntegrityError("checkpoint: unreadable or truncated file");
    const nlohmann::json& payload = doc["payload"];
    std::ostringstream hash;
    hash << std::hex << fnv1a64(payload.dump());
    if (hash.str() != doc["hash"].get<std::string>())
        throw IntegrityError("checkpoint: content hash mismatch");

    Campaign c(network, config);
    try {
        const nlohmann::json& echo = payload.at("config");
        if (echo.at("capacity").get<double>() != config.capacity ||
            echo.at("memory_depth").get<std::size_t>() != config.memory_depth ||
            echo.at("step").get<double>() != config.resolved_step() ||
            echo.at("seed").get<std::uint64_t>() != config.seed)
            throw IntegrityError("checkpoint: configuration does not match");

        const nlohmann::json& autos = payload.at("automata");
        if (autos.size() != c.automata_.size())
            throw IntegrityError("checkpoint: automaton count mismatch");
        for (std::size_t i = 0; i < c.automata_.size(); ++i) {
            const nlohmann::json& a = autos[i];
            Automaton& dst = c.automata_[i];
            dst.rewarded_left = a.at("rewarded_left").get<std::vector<double>>();
            dst.performed_left = a.at("performed_left").get<std::vector<double>>();
            dst.rewarded_right = a.at("rewarded_right").get<std::vector<double>>();
            dst.performed_right = a.at("performed_right").get<std::vector<double>>();
            dst.visits = a.at("visits").get<std::vector<double>>();
            dst.restore(a.at("state").get<std::size_t>(), a.at("converged").get<bool>());
        }
        c.incentives_.x = payload.at("incentives").get<std::vector<double>>();
        c.ledger_.restore(payload.at("consumed").get<double>());
        c.max_total_incentive_ = payload.at("max_total_incentive").get<double>();
        c.iterations_ = payload.at("iterations").get<std::size_t>();
        c.evaluations_ = payload.at("evaluations").get<std::size_t>();
        c.sweep_ = payload.at("sweep").get<std::size_t>();
        c.trajectory_.clear();
        for (const auto& t : payload.at("trajectory")) c.trajectory_.push_back(loss_from_json(t));
    } catch (const nlohmann::json::exception& e) {
        throw IntegrityError(std::string("checkpoint: malformed payload: ") + e.what());
    }
    c.all_converged_ = std::all_of(c.automata_.begin(), c.automata_.end(),
                                   [](const Automaton& a) { return a.converged(); });
    c.check_budget_invariant();
    return c;
}

Campaign Campaign::resume_file(const Network& network, const CampaignConfig& config,
                               const std::string& path) {
    return resume(network, config, read_text_file(path));
}

CampaignResult run(const Network& network, const CampaignConfig& config) {
    Campaign c(network, config);
    while (!c.finished() && c.sweep() < config.max_sweeps) c.step_sweep();
    return c.result();
}

CampaignResult uniform_baseline(const Network& network, const CampaignConfig& config) {
    config.validate(network.n_users());
    const std::size_t n = network.n_users();
    const double share = config.capacity / static_cast<double>(n);

    CampaignResult r;
    r.incentives.x.assign(n, share);
    r.per_user_states.assign(
        n, static_cast<std::size_t>(std::llround(share / config.resolved_step())));
    r.consumption = 1.0;
    r.max_total_incentive = config.capacity;
    r.converged = true;
    DiffusionEnvironment env(network, env_config(config));
    r.loss_trajectory.push_back(
        env.network_loss(r.incentives, derive_seed(config.seed, "traj", 0)));
    return r;
}

CampaignResult run_sampled_loss(const Network& network, const CampaignConfig& config) {
    if (config.loss_sample_size < 1 || config.loss_sample_size > network.n_users())
        throw std::invalid_argument("run_sampled_loss: sample size outside [1, N]");
    return run(network, config);
}

}  // namespace fairmit

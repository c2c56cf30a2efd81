#ifndef FAIRMIT_CAMPAIGN_HPP
#define FAIRMIT_CAMPAIGN_HPP

#include <string>

#include "fairmit/automaton.hpp"
#include "fairmit/eval.hpp"
#include "fairmit/knapsack.hpp"

namespace fairmit {

struct CampaignConfig {
    double balance = kDefaultBalance;
    std::size_t memory_depth = 300;
    double capacity = 0.0;
    double step = 0.0;  // 0 -> capacity / memory_depth
    double epsilon = 0.01;
    Backend backend = Backend::Expected;
    double delta_t = kDefaultRealizationHours;
    int eval_horizon = 1;             // evaluation window, in realizations
    std::size_t loss_sample_size = 0; // 0 -> full loss; otherwise sampled subset size
    std::uint64_t seed = 0;
    std::size_t max_sweeps = 50000;   // one LA step per user per sweep
    std::size_t trajectory_stride = 1;
    bool shuffle_order = false;

    double resolved_step() const;
    void validate(std::size_t n_users) const;
};

struct CampaignResult {
    Incentives incentives;
    std::vector<std::size_t> per_user_states;
    std::vector<LossReport> loss_trajectory;
    double consumption = 0.0;            // final c / C
    double max_total_incentive = 0.0;    // peak committed sum over all sweeps
    std::size_t iterations = 0;          // LA proposals performed
    std::size_t evaluations = 0;         // environment slope evaluations performed
    std::size_t sweeps = 0;
    bool converged = false;
    RunMetrics metrics;
};

// Round-robin mitigation campaign: each sweep gives every unconverged
// automaton one proposed move, evaluated against the diffusion environment
// and the shared budget ledger. Deterministic given (network, config).
class Campaign {
public:
    Campaign(const Network& network, const CampaignConfig& config);

    // Runs one sweep over all users; returns true when every automaton has
    // converged.
    bool step_sweep();

    bool finished() const;
    std::size_t sweep() const { return sweep_; }

    CampaignResult result() const;

    // Lossless snapshot of automata, ledger and progress, guarded by a
    // content hash.
    std::string checkpoint_json() const;
    void save_checkpoint(const std::string& path) const;
    static Campaign resume(const Network& network, const CampaignConfig& config,
                           const std::string& checkpoint_text);
    static Campaign resume_file(const Network& network, const CampaignConfig& config,
                                const std::string& path);

private:
    void step_user(std::size_t user);
    void record_trajectory();
    void check_budget_invariant() const;
    std::vector<std::size_t> sweep_order() const;

    const Network* network_;
    CampaignConfig config_;
    DiffusionEnvironment env_;
    BudgetLedger ledger_;
    std::vector<Automaton> automata_;
    Incentives incentives_;
    std::vector<LossReport> trajectory_;
    double max_total_incentive_ = 0.0;
    std::size_t iterations_ = 0;
    std::size_t evaluations_ = 0;
    std::size_t sweep_ = 0;
    bool all_converged_ = false;
};

// Full campaign run until convergence or the sweep cap.
CampaignResult run(const Network& network, const CampaignConfig& config);

// x_i = C/N for everyone, no learning; reported through the same result type.
CampaignResult uniform_baseline(const Network& network, const CampaignConfig& config);

// Campaign with per-step fairness-loss subsampling of `loss_sample_size`
// users (set in config); validates the sample size.
CampaignResult run_sampled_loss(const Network& network, const CampaignConfig& config);

}  // namespace fairmit

#endif

#include <chrono>
#include <filesystem>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "fairmit/campaign.hpp"
#include "fairmit/fit.hpp"
#include "fairmit/io.hpp"
#include "fairmit/netgen.hpp"
#include "fairmit/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliContext {
    json cfg;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    bool resume = false;
    double decay_mis = fairmit::kDecayMisinformation;
    double decay_true = fairmit::kDecayTrueContent;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json block(const json& cfg, const std::string& name) {
    if (cfg.contains(name)) {
        if (!cfg[name].is_object()) throw ConfigError("config: block '" + name + "' must be an object");
        return cfg[name];
    }
    return json::object();
}

template <typename T>
T get_or(const json& blk, const std::string& key, T fallback) {
    if (!blk.contains(key)) return fallback;
    try {
        return blk.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for '" + key + "'");
    }
}

void apply_override(json& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key.path=value, got '" + kv + "'");
    std::string path = kv.substr(0, eq);
    std::string raw = kv.substr(eq + 1);

    json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        std::size_t dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (key.empty()) throw ConfigError("--set: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            json value = json::parse(raw, nullptr, false);
            (*node)[key] = value.is_discarded() ? json(raw) : value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

fairmit::Backend parse_backend(const std::string& name) {
    if (name == "expected") return fairmit::Backend::Expected;
    if (name == "sampled") return fairmit::Backend::Sampled;
    throw ConfigError("config: backend must be 'expected' or 'sampled', got '" + name + "'");
}

std::string path_in(const CliContext& ctx, const std::string& name) {
    return (fs::path(ctx.out_dir) / name).string();
}

fairmit::CampaignConfig campaign_config(const CliContext& ctx) {
    json blk = block(ctx.cfg, "campaign");
    fairmit::CampaignConfig cc;
    cc.balance = get_or(blk, "balance", cc.balance);
    cc.memory_depth = get_or<std::size_t>(blk, "memory_depth", cc.memory_depth);
    cc.capacity = get_or(blk, "capacity", 0.06);
    cc.step = get_or(blk, "step", cc.step);
    cc.epsilon = get_or(blk, "epsilon", cc.epsilon);
    cc.backend = parse_backend(get_or<std::string>(blk, "backend", "expected"));
    cc.delta_t = get_or(block(ctx.cfg, "diffusion"), "delta_t", cc.delta_t);
    cc.eval_horizon = get_or(blk, "eval_horizon", cc.eval_horizon);
    cc.loss_sample_size = get_or<std::size_t>(blk, "loss_sample_size", cc.loss_sample_size);
    cc.max_sweeps = get_or<std::size_t>(blk, "max_sweeps", cc.max_sweeps);
    cc.trajectory_stride = get_or<std::size_t>(blk, "trajectory_stride", cc.trajectory_stride);
    cc.shuffle_order = get_or(blk, "shuffle_order", cc.shuffle_order);
    return cc;
}

fairmit::NetworkSpec network_spec(const CliContext& ctx) {
    json blk = block(ctx.cfg, "network");
    fairmit::NetworkSpec spec;
    spec.n_users = get_or<std::size_t>(blk, "n_users", spec.n_users);
    std::string kase = get_or<std::string>(blk, "case", "case0");
    if (kase == "case0")
        spec.exposure = fairmit::ExposureCase::Case0;
    else if (kase == "case1")
        spec.exposure = fairmit::ExposureCase::Case1;
    else if (kase == "case2")
        spec.exposure = fairmit::ExposureCase::Case2;
    else if (kase == "custom")
        spec.exposure = fairmit::ExposureCase::Custom;
    else
        throw ConfigError("config: unknown case '" + kase + "'");
    spec.target_mis_pct = get_or(blk, "target_mis_pct", spec.target_mis_pct);
    spec.exposed_fraction = get_or(blk, "exposed_fraction", spec.exposed_fraction);
    spec.heavy_subset_fraction = get_or(blk, "heavy_subset_fraction", spec.heavy_subset_fraction);
    spec.heavy_multiplier = get_or(blk, "heavy_multiplier", spec.heavy_multiplier);
    spec.edge_density = get_or(blk, "edge_density", spec.edge_density);
    spec.total_events = get_or<std::size_t>(blk, "total_events", spec.total_events);
    spec.horizon_hours = get_or(blk, "horizon_hours", spec.horizon_hours);
    spec.seed = ctx.seed;
    return spec;
}

std::string network_label(const CliContext& ctx) {
    json blk = block(ctx.cfg, "network");
    if (blk.contains("name")) return blk.at("name").get<std::string>();
    return get_or<std::string>(blk, "scenario", get_or<std::string>(blk, "case", "custom"));
}

int cmd_generate(const CliContext& ctx) {
    fairmit::NetworkSpec spec = network_spec(ctx);
    fairmit::GeneratedNetwork net = fairmit::generate(spec);

    fairmit::write_events_csv(path_in(ctx, "events.csv"),
                              fairmit::merge_events(net.mis_log, net.true_log));
    fairmit::write_text_file(path_in(ctx, "adjacency.json"),
                             fairmit::adjacency_to_json(net.adjacency).dump(2) + "\n");
    json summary = {{"n_users", spec.n_users},
                    {"target_mis_pct", spec.target_mis_pct},
                    {"achieved_mis_pct", net.achieved_mis_pct},
                    {"mis_events", net.mis_log.events.size()},
                    {"true_events", net.true_log.events.size()},
                    {"seed", ctx.seed}};
    fairmit::write_text_file(path_in(ctx, "generate_summary.json"), summary.dump(2) + "\n");
    std::cout << "generated " << spec.n_users << " users, misinformation "
              << net.achieved_mis_pct << "%\n";
    return 0;
}

std::pair<fairmit::EventLog, fairmit::EventLog> load_logs(const CliContext& ctx) {
    json blk = block(ctx.cfg, "network");
    std::string path = get_or<std::string>(blk, "events_csv", path_in(ctx, "events.csv"));
    std::size_t n_users = get_or<std::size_t>(blk, "n_users", 200);
    return fairmit::ingest_csv(path, n_users);
}

int cmd_fit(const CliContext& ctx) {
    auto [mis_log, true_log] = load_logs(ctx);
    fairmit::FitOptions options;
    json dblk = block(ctx.cfg, "diffusion");
    options.max_iterations = get_or<std::size_t>(dblk, "fit_max_iterations", options.max_iterations);

    json report = json::object();
    bool ok = true;
    struct Job {
        const char* name;
        const fairmit::EventLog* log;
        double decay;
        const char* file;
    };
    for (const Job& job : {Job{"mis", &mis_log, ctx.decay_mis, "model_mis.json"},
                           Job{"true", &true_log, ctx.decay_true, "model_true.json"}}) {
        try {
            fairmit::FitResult fit =
                fairmit::fit_mle(*job.log, job.decay, job.log->n_users, options);
            fairmit::write_model_json(path_in(ctx, job.file), fit.model);
            report[job.name] = {{"log_likelihood", fit.log_likelihood},
                                {"iterations", fit.iterations},
                                {"converged", fit.converged},
                                {"decay", job.decay},
                                {"events", job.log->events.size()}};
        } catch (const std::exception& e) {
            report[job.name] = {{"error", e.what()}};
            ok = false;
        }
    }
    fairmit::write_text_file(path_in(ctx, "fit_report.json"), report.dump(2) + "\n");
    if (!ok) {
        std::cerr << "fit failed; partial report kept\n";
        return 1;
    }
    std::cout << "fitted models written to " << ctx.out_dir << "\n";
    return 0;
}

fairmit::EventLog clip_log(const fairmit::EventLog& log, double horizon) {
    fairmit::EventLog out;
    out.n_users = log.n_users;
    out.horizon = horizon;
    for (const fairmit::Event& e : log.events)
        if (e.timestamp < horizon) out.events.push_back(e);
    return out;
}

int cmd_simulate(const CliContext& ctx) {
    auto [mis_log, true_log] = load_logs(ctx);
    json dblk = block(ctx.cfg, "diffusion");
    double train_hours = get_or(dblk, "train_hours", 8.0);
    double delta_t = get_or(dblk, "delta_t", fairmit::kDefaultRealizationHours);
    double baseline = get_or(dblk, "error_baseline", fairmit::kSimulationErrorBaseline);

    fairmit::EventLog mis_train = clip_log(mis_log, train_hours);
    fairmit::EventLog true_train = clip_log(true_log, train_hours);
    if (mis_train.events.empty() && true_train.events.empty()) {
        std::cerr << "simulate: no events before the " << train_hours << "h training cut\n";
        return 1;
    }

    fairmit::Realization window{0, train_hours, train_hours + delta_t};
    std::vector<fairmit::Event> predicted;
    std::size_t n_users = mis_log.n_users;
    for (const auto& [train, decay] :
         {std::pair<const fairmit::EventLog*, double>{&mis_train, ctx.decay_mis},
          {&true_train, ctx.decay_true}}) {
        if (train->events.empty()) continue;
        fairmit::FitResult fit = fairmit::fit_mle(*train, decay, n_users, {});
        // A short noisy history can fit to an explosive model; shrink the
        // influence just inside the stable region before simulating forward.
        double radius = fairmit::branching_spectral_radius(fit.model);
        if (radius >= 1.0) {
            double scale = 0.95 / radius;
            for (auto& row : fit.model.influence)
                for (double& a : row) a *= scale;
        }
        fairmit::EventLog sim = fairmit::simulate_conditional(
            fit.model, fairmit::Incentives::zero(n_users), *train, window.start, window.end,
            fairmit::derive_seed(ctx.seed, "simulate"));
        predicted.insert(predicted.end(), sim.events.begin(), sim.events.end());
    }
    std::stable_sort(predicted.begin(), predicted.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });

    fairmit::EventLog actual;
    actual.n_users = n_users;
    actual.horizon = window.end;
    for (const auto& e : fairmit::merge_events(mis_log, true_log))
        if (e.timestamp >= window.start && e.timestamp < window.end) actual.events.push_back(e);

    fairmit::EventLog predicted_log{predicted, window.end, n_users};
    double error = fairmit::simulation_error(actual, predicted_log, window, n_users);

    fairmit::write_events_csv(path_in(ctx, "predicted.csv"), predicted);
    json report = {{"error", error},
                   {"baseline", baseline},
                   {"within_baseline", error <= baseline},
                   {"window_start", window.start},
                   {"window_end", window.end},
                   {"actual_events", actual.events.size()},
                   {"predicted_events", predicted.size()}};
    fairmit::write_text_file(path_in(ctx, "simulation_report.json"), report.dump(2) + "\n");
    std::cout << "simulation error " << error << " (baseline " << baseline << ")\n";
    return 0;
}

fairmit::Network load_network(const CliContext& ctx) {
    json blk = block(ctx.cfg, "network");
    std::string scenario = get_or<std::string>(blk, "scenario", "");
    std::size_t n_users = get_or<std::size_t>(blk, "n_users", 50);
    if (scenario == "case0_budget") return fairmit::case0_scenario(n_users, ctx.seed);
    if (scenario == "case1_budget") return fairmit::case1_scenario(n_users, ctx.seed);
    if (!scenario.empty()) throw ConfigError("config: unknown scenario '" + scenario + "'");

    fairmit::Network net;
    net.adjacency = fairmit::adjacency_from_json(
        json::parse(fairmit::read_text_file(path_in(ctx, "adjacency.json"))));
    net.mis_model = fairmit::read_model_json(path_in(ctx, "model_mis.json"));
    net.true_model = fairmit::read_model_json(path_in(ctx, "model_true.json"));
    auto [mis_log, true_log] = load_logs(ctx);
    net.mis_history = std::move(mis_log);
    net.true_history = std::move(true_log);
    net.validate();
    return net;
}

json result_to_json(const fairmit::CampaignResult& result, const fairmit::CampaignConfig& cc) {
    json traj = json::array();
    for (const auto& loss : result.loss_trajectory)
        traj.push_back({{"total", loss.total}, {"normalized", loss.normalized}});
    return {{"capacity", cc.capacity},
            {"step", cc.resolved_step()},
            {"memory_depth", cc.memory_depth},
            {"epsilon", cc.epsilon},
            {"incentives", result.incentives.x},
            {"per_user_states", result.per_user_states},
            {"loss_trajectory", traj},
            {"consumption", result.consumption},
            {"iterations", result.iterations},
            {"sweeps", result.sweeps},
            {"converged", result.converged}};
}

std::vector<std::string> configured_methods(const CliContext& ctx) {
    json blk = block(ctx.cfg, "eval");
    std::vector<std::string> methods =
        get_or(blk, "methods", std::vector<std::string>{"fair_la", "uniform"});
    if (methods.empty()) throw ConfigError("config: eval.methods must be nonempty");
    for (const std::string& m : methods)
        if (m != "fair_la" && m != "uniform")
            throw ConfigError("config: unknown method '" + m + "'");
    return methods;
}

int cmd_mitigate(const CliContext& ctx) {
    fairmit::Network net = load_network(ctx);
    fairmit::CampaignConfig cc = campaign_config(ctx);
    json timing = json::object();

    for (const std::string& method : configured_methods(ctx)) {
        auto t0 = std::chrono::steady_clock::now();
        fairmit::CampaignResult result;
        if (method == "uniform") {
            fairmit::CampaignConfig uc = cc;
            uc.seed = fairmit::derive_seed(ctx.seed, "campaign");
            result = fairmit::uniform_baseline(net, uc);
        } else {
            fairmit::CampaignConfig fc = cc;
            fc.seed = fairmit::derive_seed(ctx.seed, "campaign");
            std::string ckpt = path_in(ctx, "checkpoint_fair_la.json");
            fairmit::Campaign campaign =
                ctx.resume && fs::exists(ckpt)
                    ? fairmit::Campaign::resume_file(net, fc, ckpt)
                    : fairmit::Campaign(net, fc);
            while (!campaign.finished() && campaign.sweep() < fc.max_sweeps)
                campaign.step_sweep();
            campaign.save_checkpoint(ckpt);
            result = campaign.result();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        timing[method] = secs;
        fairmit::write_text_file(path_in(ctx, "campaign_" + method + ".json"),
                                 result_to_json(result, cc).dump(2) + "\n");
        std::cout << method << ": consumption " << result.consumption << ", converged "
                  << (result.converged ? "yes" : "no") << "\n";
    }
    fairmit::write_text_file(path_in(ctx, "mitigate_timing.json"), timing.dump(2) + "\n");
    return 0;
}

json metrics_to_json(const fairmit::RunMetrics& m) {
    return {{"mis_pct_before", m.mis_pct_before},
            {"mis_pct_after", m.mis_pct_after},
            {"efficiency", m.efficiency},
            {"fairness_error", m.fairness_error},
            {"consumption_ratio", m.consumption_ratio}};
}

fairmit::RunMetrics metrics_from_json(const json& doc) {
    fairmit::RunMetrics m;
    m.mis_pct_before = doc.at("mis_pct_before").get<double>();
    m.mis_pct_after = doc.at("mis_pct_after").get<double>();
    m.efficiency = doc.at("efficiency").get<double>();
    m.fairness_error = doc.at("fairness_error").get<double>();
    m.consumption_ratio = doc.at("consumption_ratio").get<double>();
    return m;
}

int cmd_evaluate(const CliContext& ctx) {
    fairmit::Network net = load_network(ctx);
    fairmit::CampaignConfig cc = campaign_config(ctx);
    json eblk = block(ctx.cfg, "eval");
    int runs = get_or(eblk, "runs", 5);
    if (runs < 1) throw ConfigError("config: eval.runs must be >= 1");

    fairmit::EvalOptions eval_options;
    eval_options.backend = parse_backend(get_or<std::string>(eblk, "backend", "sampled"));
    eval_options.horizon_hours =
        get_or(eblk, "horizon_hours", cc.delta_t * cc.eval_horizon);
    eval_options.replications = get_or(eblk, "replications", 100);
    eval_options.fairness_env.backend = fairmit::Backend::Expected;
    eval_options.fairness_env.delta_t = cc.delta_t;
    eval_options.fairness_env.realizations = cc.eval_horizon;
    eval_options.fairness_env.balance = cc.balance;

    std::vector<fairmit::ReportRow> rows;
    for (const std::string& method : configured_methods(ctx)) {
        auto one_run = [&](int r) {
            std::uint64_t run_seed = fairmit::derive_seed(ctx.seed, "evalrun",
                                                          static_cast<std::uint64_t>(r));
            fairmit::CampaignConfig rc = cc;
            rc.seed = fairmit::derive_seed(run_seed, "campaign");
            fairmit::CampaignResult result = method == "uniform"
                                                 ? fairmit::uniform_baseline(net, rc)
                                                 : fairmit::run(net, rc);
            fairmit::EvalOptions opts = eval_options;
            opts.seed = fairmit::derive_seed(run_seed, "metrics");  // matched across methods
            fairmit::RunMetrics m = fairmit::evaluate_allocation(net, result.incentives, opts);
            m.consumption_ratio = result.consumption;
            return m;
        };

        std::vector<fairmit::RunMetrics> metrics(runs);
        if (ctx.threads > 1) {
            std::vector<std::future<fairmit::RunMetrics>> futures;
            for (int r = 0; r < runs; ++r)
                futures.push_back(std::async(std::launch::async, one_run, r));
            for (int r = 0; r < runs; ++r) metrics[r] = futures[r].get();
        } else {
            for (int r = 0; r < runs; ++r) metrics[r] = one_run(r);
        }

        json detail = {{"method", method},
                       {"network", network_label(ctx)},
                       {"capacity", cc.capacity},
                       {"runs", json::array()}};
        for (const auto& m : metrics) detail["runs"].push_back(metrics_to_json(m));
        fairmit::write_text_file(path_in(ctx, "runs_" + method + ".json"), detail.dump(2) + "\n");

        rows.push_back({method, network_label(ctx), cc.capacity, fairmit::aggregate(metrics)});
    }
    fairmit::emit_report(rows, path_in(ctx, "report.csv"), path_in(ctx, "report.json"));
    std::cout << "report written to " << path_in(ctx, "report.csv") << "\n";
    return 0;
}

int cmd_report(const CliContext& ctx) {
    std::vector<fairmit::ReportRow> rows;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(ctx.out_dir))
        if (entry.path().filename().string().rfind("runs_", 0) == 0 &&
            entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        json detail = json::parse(fairmit::read_text_file(file.string()));
        std::vector<fairmit::RunMetrics> metrics;
        for (const auto& m : detail.at("runs")) metrics.push_back(metrics_from_json(m));
        rows.push_back({detail.at("method").get<std::string>(),
                        detail.at("network").get<std::string>(),
                        detail.at("capacity").get<double>(), fairmit::aggregate(metrics)});
    }
    if (rows.empty()) {
        std::cerr << "report: no runs_*.json files in " << ctx.out_dir << "\n";
        return 1;
    }
    fairmit::emit_report(rows, path_in(ctx, "report.csv"), path_in(ctx, "report.json"));
    std::cout << "report written to " << path_in(ctx, "report.csv") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hawkes-process misinformation mitigation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double decay_mis = 0.0, decay_true = 0.0;
    bool decay_mis_set = false, decay_true_set = false;
    int threads = 1;
    bool resume = false;

    app.add_option("-c,--config", config_path, "Experiment config JSON");
    app.add_option("--set", overrides, "Override a config value, key.path=value")
        ->take_all();
    app.add_option("-o,--output", output_dir, "Output directory (overrides config)");
    app.add_option("--seed", seed, "Global seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--decay-mis", decay_mis, "Misinformation kernel decay, 1/hours")
        ->each([&](const std::string&) { decay_mis_set = true; });
    app.add_option("--decay-true", decay_true, "True-content kernel decay, 1/hours")
        ->each([&](const std::string&) { decay_true_set = true; });
    app.add_option("--threads", threads, "Parallel evaluation runs (default 1)");
    app.add_flag("--resume", resume, "Resume a mitigation campaign from its checkpoint");

    auto* c_generate = app.add_subcommand("generate", "Generate a synthetic network");
    auto* c_fit = app.add_subcommand("fit", "Fit Hawkes models from event logs");
    auto* c_simulate = app.add_subcommand("simulate", "Fit on history and predict the next window");
    auto* c_mitigate = app.add_subcommand("mitigate", "Run the mitigation campaign");
    auto* c_evaluate = app.add_subcommand("evaluate", "Run and aggregate evaluation runs");
    auto* c_report = app.add_subcommand("report", "Re-aggregate existing run files");
    for (auto* sub : {c_generate, c_fit, c_simulate, c_mitigate, c_evaluate, c_report})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CliContext ctx;
    try {
        if (!config_path.empty()) {
            ctx.cfg = json::parse(fairmit::read_text_file(config_path), nullptr, false);
            if (ctx.cfg.is_discarded()) throw ConfigError("config: invalid JSON in " + config_path);
        } else {
            ctx.cfg = json::object();
        }
        for (const std::string& kv : overrides) apply_override(ctx.cfg, kv);

        if (!output_dir.empty())
            ctx.out_dir = output_dir;
        else if (ctx.cfg.contains("output") && ctx.cfg["output"].contains("dir"))
            ctx.out_dir = ctx.cfg["output"]["dir"].get<std::string>();
        else if (const char* env = std::getenv("FAIRMIT_OUT"))
            ctx.out_dir = env;
        else
            ctx.out_dir = "out";
        fs::create_directories(ctx.out_dir);

        ctx.seed = seed_set ? seed : get_or<std::uint64_t>(ctx.cfg, "seed", 0);
        json dblk = block(ctx.cfg, "diffusion");
        ctx.decay_mis =
            decay_mis_set ? decay_mis : get_or(dblk, "decay_mis", fairmit::kDecayMisinformation);
        ctx.decay_true =
            decay_true_set ? decay_true : get_or(dblk, "decay_true", fairmit::kDecayTrueContent);
        ctx.threads = std::max(1, threads);
        ctx.resume = resume;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_generate->parsed()) return cmd_generate(ctx);
        if (c_fit->parsed()) return cmd_fit(ctx);
        if (c_simulate->parsed()) return cmd_simulate(ctx);
        if (c_mitigate->parsed()) return cmd_mitigate(ctx);
        if (c_evaluate->parsed()) return cmd_evaluate(ctx);
        if (c_report->parsed()) return cmd_report(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

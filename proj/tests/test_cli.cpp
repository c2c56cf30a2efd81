#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "fairmit/eval.hpp"
#include "fairmit/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = FAIRMIT_CLI_PATH;

int run_cli(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("--no-such-flag generate") == 2);
    CHECK(run_cli("generate --config /nonexistent/config.json") == 2);
    CHECK(run_cli("generate --set keyonly") == 2);
}

TEST_CASE("help exits cleanly and lists the override flags") {
    TempDir dir("fairmit_cli_help");
    std::string out = dir.str() + "/help.txt";
    std::system((kCli + " --help > " + out + " 2>&1").c_str());
    std::string text = fairmit::read_text_file(out);
    for (const char* flag : {"--config", "--set", "--seed", "--decay-mis", "--decay-true",
                             "--threads", "--resume", "--output"})
        CHECK(text.find(flag) != std::string::npos);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("domain errors exit with code 1") {
    TempDir dir("fairmit_cli_domain");
    // fit with no event file on disk
    CHECK(run_cli("fit -o " + dir.str()) == 1);
    // infeasible generation target
    CHECK(run_cli("generate -o " + dir.str() +
                  " --set network.case=case1 --set network.target_mis_pct=5") == 1);
    // report with no run files
    CHECK(run_cli("report -o " + dir.str()) == 1);
}

TEST_CASE("generate writes the expected artifacts deterministically") {
    TempDir a("fairmit_cli_gen_a"), b("fairmit_cli_gen_b");
    std::string args = " --seed 99 --set network.n_users=40 --set network.case=case0";
    REQUIRE(run_cli("generate -o " + a.str() + args) == 0);
    REQUIRE(run_cli("generate -o " + b.str() + args) == 0);
    for (const char* f : {"events.csv", "adjacency.json", "generate_summary.json"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(a.path / f));
        CHECK(fairmit::read_text_file((a.path / f).string()) ==
              fairmit::read_text_file((b.path / f).string()));
    }
    // a different seed changes the log
    REQUIRE(run_cli("generate -o " + b.str() + " --seed 100 --set network.n_users=40") == 0);
    CHECK(fairmit::read_text_file((a.path / "events.csv").string()) !=
          fairmit::read_text_file((b.path / "events.csv").string()));
}

TEST_CASE("fit consumes generated events and writes both models") {
    TempDir dir("fairmit_cli_fit");
    REQUIRE(run_cli("generate -o " + dir.str() + " --seed 5 --set network.n_users=10") == 0);
    REQUIRE(run_cli("fit -o " + dir.str() + " --set network.n_users=10") == 0);
    for (const char* f : {"model_mis.json", "model_true.json", "fit_report.json"})
        CHECK(fs::exists(dir.path / f));
    fairmit::HawkesModel mis = fairmit::read_model_json((dir.path / "model_mis.json").string());
    CHECK(mis.n_users() == 10);
    CHECK(mis.content == fairmit::ContentType::Misinformation);
    CHECK(mis.decay == doctest::Approx(fairmit::kDecayMisinformation));
    // the decay override flows into the stored model
    REQUIRE(run_cli("fit -o " + dir.str() + " --set network.n_users=10 --decay-mis 0.5") == 0);
    CHECK(fairmit::read_model_json((dir.path / "model_mis.json").string()).decay ==
          doctest::Approx(0.5));
}

TEST_CASE("mitigate and evaluate produce reports with the pinned schema") {
    TempDir dir("fairmit_cli_eval");
    std::string scenario = " --seed 3 --set network.scenario=case1_budget"
                           " --set network.n_users=16 --set campaign.capacity=0.005"
                           " --set campaign.eval_horizon=256"
                           " --set campaign.trajectory_stride=100";
    REQUIRE(run_cli("mitigate -o " + dir.str() + scenario) == 0);
    CHECK(fs::exists(dir.path / "campaign_fair_la.json"));
    CHECK(fs::exists(dir.path / "checkpoint_fair_la.json"));

    REQUIRE(run_cli("evaluate -o " + dir.str() + scenario +
                    " --set eval.runs=2 --set eval.replications=20") == 0);
    std::string csv = fairmit::read_text_file((dir.path / "report.csv").string());
    CHECK(csv.rfind(std::string(fairmit::kReportHeader) + "\n", 0) == 0);
    CHECK(csv.find("fair_la,") != std::string::npos);
    CHECK(csv.find("uniform,") != std::string::npos);

    // the report subcommand re-aggregates to the same bytes
    std::string first = csv;
    REQUIRE(run_cli("report -o " + dir.str()) == 0);
    CHECK(fairmit::read_text_file((dir.path / "report.csv").string()) == first);
}

TEST_CASE("evaluate reruns are byte-identical") {
    TempDir a("fairmit_cli_det_a"), b("fairmit_cli_det_b");
    std::string scenario = " --seed 12 --set network.scenario=case1_budget"
                           " --set network.n_users=16 --set campaign.capacity=0.005"
                           " --set campaign.eval_horizon=256"
                           " --set campaign.trajectory_stride=100"
                           " --set eval.runs=2 --set eval.replications=20";
    REQUIRE(run_cli("evaluate -o " + a.str() + scenario) == 0);
    REQUIRE(run_cli("evaluate -o " + b.str() + scenario) == 0);
    for (const char* f : {"report.csv", "report.json", "runs_fair_la.json", "runs_uniform.json"})
        CHECK(fairmit::read_text_file((a.path / f).string()) ==
              fairmit::read_text_file((b.path / f).string()));
}

TEST_CASE("config file values apply and --set overrides them") {
    TempDir dir("fairmit_cli_cfg");
    std::string cfg = dir.str() + "/cfg.json";
    fairmit::write_text_file(cfg, R"({"seed": 4, "network": {"n_users": 12}})");
    REQUIRE(run_cli("generate -o " + dir.str() + " --config " + cfg) == 0);
    auto doc = nlohmann::json::parse(
        fairmit::read_text_file((dir.path / "generate_summary.json").string()));
    CHECK(doc["n_users"] == 12);
    CHECK(doc["seed"] == 4);
    REQUIRE(run_cli("generate -o " + dir.str() + " --config " + cfg +
                    " --set network.n_users=9") == 0);
    doc = nlohmann::json::parse(
        fairmit::read_text_file((dir.path / "generate_summary.json").string()));
    CHECK(doc["n_users"] == 9);
}

// Experiment CLI for the parc toolkit: train H-PPO or the discretized DQN
// baseline on the benchmark environments, evaluate checkpoints, aggregate
// multi-seed comparisons and plot learning curves.
//
// Exit codes: 0 ok, 1 runtime fault, 2 usage/config error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parc/parc.hpp"

namespace {

parc::FlatConfig load_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
    parc::FlatConfig cfg;
    if (!config_path.empty()) cfg = parc::FlatConfig::from_file(config_path);
    for (const auto& kv : overrides) cfg.set_kv(kv);
    return cfg;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              std::string env_name, std::string algo, std::vector<std::uint64_t> seeds,
              long long iters, const std::string& out_flag, bool quiet) {
    parc::FlatConfig cfg = load_config(config_path, overrides);
    if (env_name.empty()) env_name = cfg.get_string("env", "");
    if (algo.empty()) algo = cfg.get_string("algo", "hppo");
    if (seeds.empty())
        for (long long s : cfg.get_int_list("seeds", {0}))
            seeds.push_back(static_cast<std::uint64_t>(s));
    if (iters >= 0) cfg.set("iters", iters);
    if (env_name.empty()) throw parc::DomainError("no environment given (use --env)");

    cfg.set("env", env_name);
    cfg.set("algo", algo);
    std::string out_root = parc::resolve_out_root(cfg, out_flag);
    cfg.set("out", out_root);

    for (std::uint64_t seed : seeds) {
        parc::StatsRow last = parc::run_train(env_name, algo, seed, cfg, out_root, quiet);
        std::printf("%s %s seed %llu: iterations %lld, env_steps %lld, success_rate %.4f, "
                    "mean_ep_reward %.4f\n",
                    env_name.c_str(), algo.c_str(), static_cast<unsigned long long>(seed),
                    last.iteration + 1, last.env_steps, last.success_rate, last.mean_ep_reward);
    }
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& env_name, long long episodes,
             std::uint64_t seed, const std::string& trace_path) {
    parc::Checkpoint ck = parc::load_checkpoint(checkpoint_path);
    std::string env = env_name.empty() ? ck.env : env_name;
    if (env.empty()) throw parc::DomainError("checkpoint has no env; pass --env");
    auto e = parc::make_env(env);
    parc::EvalResult res = parc::evaluate_checkpoint(ck, *e, episodes, seed, trace_path);
    std::printf("env %s, algo %s, episodes %lld: success_rate %.4f, mean_ep_reward %.4f\n",
                env.c_str(), ck.algo.c_str(), res.episodes, res.success_rate,
                res.mean_episode_reward);
    return 0;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& overrides,
                std::vector<std::string> envs, std::vector<std::string> algos,
                std::vector<std::uint64_t> seeds, const std::string& out_flag,
                const std::string& report_path) {
    parc::FlatConfig cfg = load_config(config_path, overrides);
    if (envs.empty()) {
        std::string e = cfg.get_string("env", "");
        if (!e.empty()) envs.push_back(e);
    }
    if (envs.empty()) envs = parc::env_names();
    if (algos.empty()) algos = {"hppo", "dqn"};
    if (seeds.empty())
        for (long long s : cfg.get_int_list("seeds", {0}))
            seeds.push_back(static_cast<std::uint64_t>(s));
    std::string out_root = parc::resolve_out_root(cfg, out_flag);

    parc::ComparisonReport report = parc::compare_runs(envs, algos, seeds, out_root);
    std::string table = parc::comparison_table(report);
    std::fputs(table.c_str(), stdout);
    if (!report_path.empty()) parc::write_comparison_csv(report, report_path);
    if (!report.missing.empty())
        std::fprintf(stderr, "warning: %zu run(s) missing, report is partial\n",
                     report.missing.size());
    return 0;
}

int cmd_plot(const std::vector<std::string>& metrics, std::vector<std::string> labels,
             const std::string& out_path) {
    if (labels.empty())
        for (const auto& m : metrics)
            labels.push_back(std::filesystem::path(m).parent_path().filename().string());
    parc::plot_metrics(metrics, labels, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"parc: reinforcement learning in parameterized action spaces"};
    app.require_subcommand(1);

    std::string config_path, env_name, algo, out_flag, checkpoint_path, trace_path, report_path;
    std::string plot_out = "curves.svg";
    std::vector<std::string> overrides, envs, algos, metrics, labels;
    std::vector<std::uint64_t> seeds;
    long long iters = -1;
    long long episodes = 100;
    std::uint64_t eval_seed = 0;
    bool verbose = false;

    auto* train = app.add_subcommand("train", "train one algorithm on one environment");
    train->add_option("--config", config_path, "JSON config with flat dotted keys");
    train->add_option("--set", overrides, "override, key=value (repeatable)");
    train->add_option("--env", env_name, "environment name");
    train->add_option("--algo", algo, "hppo or dqn");
    train->add_option("--seed", seeds, "seed (repeatable)");
    train->add_option("--iters", iters, "training iterations");
    train->add_option("--out", out_flag, "output root (also PARC_OUT)");
    train->add_flag("--verbose", verbose, "progress to stderr");

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
    eval->add_option("checkpoint", checkpoint_path, "checkpoint.json path")->required();
    eval->add_option("--env", env_name, "environment (defaults to the checkpoint's)");
    eval->add_option("--episodes", episodes, "episode count");
    eval->add_option("--seed", eval_seed, "evaluation seed");
    eval->add_option("--trace", trace_path, "write JSON-lines action traces here");

    auto* compare = app.add_subcommand("compare", "aggregate completed runs into a table");
    compare->add_option("--config", config_path, "JSON config with flat dotted keys");
    compare->add_option("--set", overrides, "override, key=value (repeatable)");
    compare->add_option("--env", envs, "environment (repeatable; default all)");
    compare->add_option("--algo", algos, "algorithm (repeatable; default hppo,dqn)");
    compare->add_option("--seed", seeds, "seed (repeatable)");
    compare->add_option("--out", out_flag, "output root to scan");
    compare->add_option("--report", report_path, "also write the table as CSV");

    auto* plot = app.add_subcommand("plot", "render learning curves as SVG");
    plot->add_option("metrics", metrics, "metrics.csv files")->required();
    plot->add_option("--label", labels, "curve label (repeatable)");
    plot->add_option("--out", plot_out, "SVG output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (train->parsed())
            return cmd_train(config_path, overrides, env_name, algo, seeds, iters, out_flag,
                             !verbose);
        if (eval->parsed())
            return cmd_eval(checkpoint_path, env_name, episodes, eval_seed, trace_path);
        if (compare->parsed())
            return cmd_compare(config_path, overrides, envs, algos, seeds, out_flag, report_path);
        if (plot->parsed()) return cmd_plot(metrics, labels, plot_out);
    } catch (const parc::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fault: %s\n", e.what());
        return 1;
    }
    return 2;
}

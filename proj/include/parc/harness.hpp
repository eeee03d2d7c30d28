#pragma once
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "parc/checkpoint.hpp"
#include "parc/config.hpp"
#include "parc/dqn.hpp"
#include "parc/envs/registry.hpp"
#include "parc/hppo.hpp"
#include "parc/rollout.hpp"

namespace parc {

inline std::string run_dir_name(const std::string& env, const std::string& algo,
                                std::uint64_t seed) {
    return env + "_" + algo + "_seed" + std::to_string(seed);
}

/// Trains one (env, algo, seed) run: appends metrics.csv as iterations
/// complete, snapshots the resolved config, and writes checkpoint.json
/// (periodically and at the end). Returns the final stats row.
inline StatsRow run_train(const std::string& env_name, const std::string& algo, std::uint64_t seed,
                          const FlatConfig& config, const std::string& out_root,
                          bool quiet = true) {
    namespace fs = std::filesystem;
    auto env = make_env(env_name);
    fs::path dir = fs::path(out_root) / run_dir_name(env->name(), algo, seed);
    fs::create_directories(dir);

    FlatConfig snapshot = config;
    snapshot.set("env", env->name());
    snapshot.set("algo", algo);
    snapshot.set("seeds", std::vector<long long>{static_cast<long long>(seed)});
    snapshot.write_snapshot((dir / "config_snapshot.json").string());

    std::ofstream metrics(dir / "metrics.csv");
    if (!metrics) throw DomainError("cannot write metrics in " + dir.string());
    metrics << kMetricsHeader << "\n";

    const long long checkpoint_every = config.get_int("checkpoint_every", 50);
    const std::string ck_path = (dir / "checkpoint.json").string();
    StatsRow last;

    if (algo == "hppo") {
        TrainConfig tc = hppo_config_from(config);
        tc.seed = seed;
        auto on_iter = [&](const StatsRow& row, const HybridPolicyParams& policy,
                           const CriticParams& critic) {
            metrics << stats_row_csv(row) << "\n";
            metrics.flush();
            last = row;
            if (!quiet && row.iteration % 50 == 0)
                std::fprintf(stderr, "[%s %s seed %llu] iter %lld steps %lld success %.3f\n",
                             env_name.c_str(), algo.c_str(), static_cast<unsigned long long>(seed),
                             row.iteration, row.env_steps, row.success_rate);
            if (checkpoint_every > 0 && (row.iteration + 1) % checkpoint_every == 0) {
                Checkpoint ck;
                ck.algo = "hppo";
                ck.env = env_name;
                ck.schema = policy.schema;
                ck.schema_hash = schema_hash(policy.schema);
                ck.policy = policy;
                ck.critic = critic;
                save_checkpoint(ck, ck_path);
            }
        };
        TrainResult res = train_hppo(*env, tc, on_iter);
        Checkpoint ck;
        ck.algo = "hppo";
        ck.env = env_name;
        ck.schema = res.policy.schema;
        ck.schema_hash = schema_hash(res.policy.schema);
        ck.policy = res.policy;
        ck.critic = res.critic;
        save_checkpoint(ck, ck_path);
    } else if (algo == "dqn") {
        DqnConfig dc = dqn_config_from(config);
        dc.seed = seed;
        std::vector<std::vector<int>> bins = default_bins(env_name);
        auto on_row = [&](const StatsRow& row, const MlpParams& q) {
            metrics << stats_row_csv(row) << "\n";
            metrics.flush();
            last = row;
            if (checkpoint_every > 0 && (row.iteration + 1) % checkpoint_every == 0) {
                Checkpoint ck;
                ck.algo = "dqn";
                ck.env = env_name;
                ck.schema = env->schema();
                ck.schema_hash = schema_hash(env->schema());
                ck.q_net = q;
                ck.bins = bins;
                save_checkpoint(ck, ck_path);
            }
        };
        DqnResult res = train_dqn(*env, bins, dc, on_row);
        Checkpoint ck;
        ck.algo = "dqn";
        ck.env = env_name;
        ck.schema = env->schema();
        ck.schema_hash = schema_hash(env->schema());
        ck.q_net = res.q;
        ck.bins = bins;
        save_checkpoint(ck, ck_path);
    } else {
        throw DomainError("unknown algorithm '" + algo + "'; valid: hppo, dqn");
    }
    return last;
}

struct EvalResult {
    double success_rate = 0.0;
    double mean_episode_reward = 0.0;
    long long episodes = 0;
    long long steps = 0;
};

namespace harnessdetail {

inline void trace_line(std::ofstream& out, int t, const std::vector<double>& state, int a,
                       const std::vector<double>& x, double reward, bool done, bool win) {
    nlohmann::json j;
    j["t"] = t;
    j["state"] = state;
    j["a"] = a;
    j["x_a"] = x;
    j["reward"] = reward;
    j["done"] = done;
    j["win"] = win;
    out << j.dump() << "\n";
}

} // namespace harnessdetail

/// Runs a checkpoint's policy for N episodes; H-PPO checkpoints act
/// stochastically, DQN checkpoints act greedily. Optionally dumps JSON-lines
/// action traces.
inline EvalResult evaluate_checkpoint(const Checkpoint& ck, Env& env, long long episodes,
                                      std::uint64_t seed, const std::string& trace_path = "") {
    if (ck.schema_hash != schema_hash(env.schema()))
        throw DomainError("checkpoint schema hash " + ck.schema_hash +
                          " does not match environment '" + env.name() + "' (" +
                          schema_hash(env.schema()) + ")");
    Rng master(seed);
    Rng policy_rng = master.split();
    Rng env_rng = master.split();

    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) throw DomainError("cannot write trace: " + trace_path);
    }

    std::vector<HybridAction> atoms;
    if (ck.algo == "dqn") atoms = discretize(ck.schema, ck.bins);

    EvalResult res;
    double total_reward = 0.0;
    for (long long ep = 0; ep < episodes; ++ep) {
        std::vector<double> obs = env.reset(env_rng);
        double ep_reward = 0.0;
        int t = 0;
        while (true) {
            HybridAction action;
            if (ck.algo == "hppo") {
                PolicyOutput out = policy_forward(ck.policy, ck.critic, obs);
                action = sample_action(out, ck.schema, policy_rng).action;
            } else {
                action = atoms[argmax_q(ck.q_net, obs)];
            }
            EnvOutcome o = env.step(action, env_rng);
            if (trace.is_open())
                harnessdetail::trace_line(trace, t, obs, action.a,
                                          clamp_to_bounds(ck.schema, action.a, action.x), o.reward,
                                          o.done, o.win);
            ep_reward += o.reward;
            obs = o.obs;
            t += 1;
            res.steps += 1;
            if (o.done) {
                if (o.win) res.success_rate += 1.0;
                break;
            }
        }
        total_reward += ep_reward;
    }
    res.episodes = episodes;
    if (episodes > 0) {
        res.success_rate /= static_cast<double>(episodes);
        res.mean_episode_reward = total_reward / static_cast<double>(episodes);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Multi-seed comparison (success-rate table)
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string env;
    std::string algo;
    long long seeds = 0;
    double mean_success = 0.0;
    double sd_success = 0.0; // population SD across seeds
    double mean_reward = 0.0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> missing; // run dirs without metrics
};

/// Aggregates the final metrics row of each completed run under out_root.
inline ComparisonReport compare_runs(const std::vector<std::string>& envs,
                                     const std::vector<std::string>& algos,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::string& out_root) {
    namespace fs = std::filesystem;
    ComparisonReport report;
    for (const auto& env : envs) {
        for (const auto& algo : algos) {
            std::vector<double> succ;
            std::vector<double> rew;
            for (std::uint64_t seed : seeds) {
                fs::path p = fs::path(out_root) / run_dir_name(env, algo, seed) / "metrics.csv";
                if (!fs::exists(p)) {
                    report.missing.push_back(p.string());
                    continue;
                }
                auto rows = read_metrics_csv(p.string());
                if (rows.empty()) {
                    report.missing.push_back(p.string());
                    continue;
                }
                succ.push_back(rows.back().success_rate);
                rew.push_back(rows.back().mean_ep_reward);
            }
            if (succ.empty()) continue;
            ComparisonRow row;
            row.env = env;
            row.algo = algo;
            row.seeds = static_cast<long long>(succ.size());
            for (double s : succ) row.mean_success += s;
            row.mean_success /= static_cast<double>(succ.size());
            double var = 0.0;
            for (double s : succ) var += (s - row.mean_success) * (s - row.mean_success);
            row.sd_success = std::sqrt(var / static_cast<double>(succ.size()));
            for (double r : rew) row.mean_reward += r;
            row.mean_reward /= static_cast<double>(rew.size());
            report.rows.push_back(row);
        }
    }
    return report;
}

inline std::string comparison_table(const ComparisonReport& report) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-18s %-6s %6s %12s %14s %12s\n", "environment", "algo",
                  "seeds", "succ_rate", "sd_succ_rate", "mean_reward");
    out += buf;
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%-18s %-6s %6lld %11.2f%% %13.2f%% %12.3f\n", r.env.c_str(),
                      r.algo.c_str(), r.seeds, 100.0 * r.mean_success, 100.0 * r.sd_success,
                      r.mean_reward);
        out += buf;
    }
    for (const auto& m : report.missing) out += "missing: " + m + "\n";
    return out;
}

inline void write_comparison_csv(const ComparisonReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write report: " + path);
    out << "env,algo,seeds,mean_success_rate,sd_success_rate,mean_episode_reward\n";
    for (const auto& r : report.rows)
        out << r.env << "," << r.algo << "," << r.seeds << "," << format_double(r.mean_success)
            << "," << format_double(r.sd_success) << "," << format_double(r.mean_reward) << "\n";
}

// ---------------------------------------------------------------------------
// Self-contained SVG learning curves (success rate + mean episode reward)
// ---------------------------------------------------------------------------

namespace harnessdetail {

inline const char* curve_color(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[i % 8];
}

struct PanelSpec {
    double x0, y0, w, h; // plot area in svg coordinates
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin + 1e-12) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin + 1e-12) * h; }
};

inline void draw_panel(std::string& svg, const PanelSpec& p, const std::string& title,
                       const std::string& ylabel,
                       const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& curves) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<rect x='%.1f' y='%.1f' width='%.1f' height='%.1f' fill='none' stroke='#333'/>\n",
                  p.x0, p.y0, p.w, p.h);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%.1f' y='%.1f' font-size='14' text-anchor='middle'>%s</text>\n",
                  p.x0 + p.w / 2, p.y0 - 8, title.c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%.1f' y='%.1f' font-size='11' text-anchor='middle' "
                  "transform='rotate(-90 %.1f %.1f)'>%s</text>\n",
                  p.x0 - 38, p.y0 + p.h / 2, p.x0 - 38, p.y0 + p.h / 2, ylabel.c_str());
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        double fx = p.xmin + (p.xmax - p.xmin) * i / 4.0;
        double fy = p.ymin + (p.ymax - p.ymin) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x='%.1f' y='%.1f' font-size='10' text-anchor='middle'>%.0f</text>\n",
                      p.px(fx), p.y0 + p.h + 14, fx);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x='%.1f' y='%.1f' font-size='10' text-anchor='end'>%.2f</text>\n",
                      p.x0 - 4, p.py(fy) + 3, fy);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1='%.1f' y1='%.1f' x2='%.1f' y2='%.1f' stroke='#ddd'/>\n", p.x0,
                      p.py(fy), p.x0 + p.w, p.py(fy));
        svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x='%.1f' y='%.1f' font-size='11' text-anchor='middle'>iteration</text>\n",
                  p.x0 + p.w / 2, p.y0 + p.h + 28, "");
    svg += buf;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        std::string pts;
        for (const auto& [x, y] : curves[c].second) {
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", p.px(x), p.py(y));
            pts += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<polyline points='%s' fill='none' stroke='%s' stroke-width='1.5'/>\n",
                      pts.c_str(), curve_color(c));
        svg += buf;
    }
}

} // namespace harnessdetail

/// Writes a two-panel SVG (success rate and mean episode reward vs iteration)
/// with one curve per metrics file.
inline void plot_metrics(const std::vector<std::string>& metrics_files,
                         const std::vector<std::string>& labels, const std::string& out_path) {
    using harnessdetail::PanelSpec;
    if (metrics_files.empty()) throw DomainError("plot: no metrics files given");
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> succ, rew;
    double xmax = 1.0, rmin = 0.0, rmax = 1.0;
    for (std::size_t i = 0; i < metrics_files.size(); ++i) {
        auto rows = read_metrics_csv(metrics_files[i]);
        std::string label = i < labels.size() ? labels[i] : metrics_files[i];
        std::vector<std::pair<double, double>> s, r;
        for (const auto& row : rows) {
            s.emplace_back(static_cast<double>(row.iteration), row.success_rate);
            r.emplace_back(static_cast<double>(row.iteration), row.mean_ep_reward);
            xmax = std::max(xmax, static_cast<double>(row.iteration));
            rmin = std::min(rmin, row.mean_ep_reward);
            rmax = std::max(rmax, row.mean_ep_reward);
        }
        succ.emplace_back(label, std::move(s));
        rew.emplace_back(label, std::move(r));
    }
    std::string svg;
    svg += "<svg xmlns='http://www.w3.org/2000/svg' width='880' height='360' "
           "font-family='sans-serif'>\n";
    PanelSpec ps{60, 40, 330, 240, 0, xmax, 0, 1};
    PanelSpec pr{500, 40, 330, 240, 0, xmax, rmin, rmax + 1e-9};
    harnessdetail::draw_panel(svg, ps, "Success rate", "success rate", succ);
    harnessdetail::draw_panel(svg, pr, "Mean episode reward", "reward", rew);
    char buf[256];
    for (std::size_t c = 0; c < succ.size(); ++c) {
        std::snprintf(buf, sizeof buf,
                      "<rect x='%zu' y='330' width='14' height='3' fill='%s'/>"
                      "<text x='%zu' y='336' font-size='11'>%s</text>\n",
                      60 + c * 200, harnessdetail::curve_color(c), 78 + c * 200,
                      succ[c].first.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    std::ofstream out(out_path);
    if (!out) throw DomainError("cannot write plot: " + out_path);
    out << svg;
}

} // namespace parc

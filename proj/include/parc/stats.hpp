#pragma once
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "parc/errors.hpp"

namespace parc {

/// One metrics row per training iteration. DQN runs report their TD loss in
/// loss_v and zeros elsewhere.
struct StatsRow {
    long long iteration = 0;
    long long env_steps = 0;
    long long episodes = 0;
    double success_rate = 0.0;   // trailing-window fraction of winning episodes
    double mean_ep_reward = 0.0; // trailing-window mean episode reward
    double loss_d = 0.0;
    double loss_c = 0.0;
    double loss_v = 0.0;
    double entropy_d = 0.0;
    double entropy_c = 0.0;
};

inline const char* kMetricsHeader =
    "iteration,env_steps,episodes,success_rate_w100,mean_ep_reward_w100,"
    "loss_d,loss_c,loss_v,entropy_d,entropy_c";

/// Trailing window over completed episodes.
class EpisodeTracker {
public:
    explicit EpisodeTracker(std::size_t window = 100) : window_(window) {}

    void add_episode(double total_reward, bool win) {
        episodes_ += 1;
        recent_.push_back({total_reward, win});
        if (recent_.size() > window_) recent_.pop_front();
    }

    long long episodes() const { return episodes_; }

    double success_rate() const {
        if (recent_.empty()) return 0.0;
        std::size_t wins = 0;
        for (const auto& e : recent_) wins += e.win ? 1 : 0;
        return static_cast<double>(wins) / static_cast<double>(recent_.size());
    }

    double mean_episode_reward() const {
        if (recent_.empty()) return 0.0;
        double sum = 0.0;
        for (const auto& e : recent_) sum += e.reward;
        return sum / static_cast<double>(recent_.size());
    }

private:
    struct Episode {
        double reward;
        bool win;
    };
    std::size_t window_;
    std::deque<Episode> recent_;
    long long episodes_ = 0;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string stats_row_csv(const StatsRow& r) {
    std::string s;
    s += std::to_string(r.iteration) + "," + std::to_string(r.env_steps) + "," +
         std::to_string(r.episodes) + "," + format_double(r.success_rate) + "," +
         format_double(r.mean_ep_reward) + "," + format_double(r.loss_d) + "," +
         format_double(r.loss_c) + "," + format_double(r.loss_v) + "," +
         format_double(r.entropy_d) + "," + format_double(r.entropy_c);
    return s;
}

inline std::vector<StatsRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open metrics file: " + path);
    std::vector<StatsRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("iteration,", 0) == 0) continue; // header
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) throw DomainError("bad metrics row in " + path + ": " + line);
        StatsRow r;
        r.iteration = std::stoll(cells[0]);
        r.env_steps = std::stoll(cells[1]);
        r.episodes = std::stoll(cells[2]);
        r.success_rate = std::stod(cells[3]);
        r.mean_ep_reward = std::stod(cells[4]);
        r.loss_d = std::stod(cells[5]);
        r.loss_c = std::stod(cells[6]);
        r.loss_v = std::stod(cells[7]);
        r.entropy_d = std::stod(cells[8]);
        r.entropy_c = std::stod(cells[9]);
        rows.push_back(r);
    }
    return rows;
}

} // namespace parc

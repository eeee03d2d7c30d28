#pragma once
#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "parc/adam.hpp"
#include "parc/envs/env.hpp"
#include "parc/mlp.hpp"
#include "parc/stats.hpp"

namespace parc {

struct Transition {
    std::vector<double> state;
    int action = 0; // atomic action index
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false; // true terminal; time-limit truncations bootstrap
};

/// FIFO ring of transitions with uniform without-replacement batch sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 10000) : capacity_(capacity) {}

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& operator[](std::size_t i) const { return data_[i]; }

    /// Distinct uniform indices; batch must not exceed the current size.
    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const {
        if (batch > data_.size())
            throw DomainError("ReplayBuffer: batch " + std::to_string(batch) + " > size " +
                              std::to_string(data_.size()));
        std::vector<std::size_t> out;
        out.reserve(batch);
        while (out.size() < batch) {
            std::size_t i = static_cast<std::size_t>(rng.below(data_.size()));
            if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
        }
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

struct DqnConfig {
    int batch_size = 32;
    double gamma = 0.99;
    double eps_start = 1.0;
    double eps_end = 0.05;
    long long eps_decay_steps = 50000;
    int target_sync = 500; // updates between target-network syncs
    double lr = 3e-4;
    int update_every = 4; // env steps between gradient updates
    int warmup = 1000;    // minimum buffer fill before updates
    std::size_t replay_capacity = 10000;
    int stats_every = 64; // env steps per stats row
    int max_iterations = 100;
    std::uint64_t seed = 0;
    std::vector<std::size_t> hidden = {256, 256, 128, 64};

    double epsilon_at(long long step) const {
        if (step >= eps_decay_steps) return eps_end;
        double f = static_cast<double>(step) / static_cast<double>(eps_decay_steps);
        return eps_start + f * (eps_end - eps_start);
    }

    void check() const {
        if (batch_size < 1) throw DomainError("DqnConfig: batch_size must be >= 1");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("DqnConfig: gamma must be in (0,1]");
        if (!(lr > 0.0)) throw DomainError("DqnConfig: lr must be > 0");
        if (stats_every < 1 || max_iterations < 0 || update_every < 1 || target_sync < 1)
            throw DomainError("DqnConfig: bad loop settings");
    }
};

/// Bellman targets for a batch: y = r for terminal transitions, otherwise
/// y = r + gamma * max_a' Q_target(s', a').
inline std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                                      const MlpParams& target_q, double gamma) {
    if (batch.empty()) throw DomainError("td_targets: empty batch");
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        if (t.terminal) {
            y[i] = t.reward;
        } else {
            std::vector<double> q = mlp_forward(target_q, t.next_state);
            y[i] = t.reward + gamma * *std::max_element(q.begin(), q.end());
        }
    }
    return y;
}

/// One Adam step on the mean squared TD error over a uniform batch. Returns
/// the loss, or nothing when the buffer is still below batch size.
inline std::optional<double> dqn_update(MlpParams& q, const MlpParams& target_q,
                                        const ReplayBuffer& buffer, const DqnConfig& cfg, Rng& rng,
                                        AdamState& opt) {
    if (buffer.size() < static_cast<std::size_t>(cfg.batch_size)) return std::nullopt;
    std::vector<std::size_t> idx = buffer.sample_indices(cfg.batch_size, rng);
    std::vector<const Transition*> batch;
    batch.reserve(idx.size());
    for (std::size_t i : idx) batch.push_back(&buffer[i]);
    std::vector<double> y = td_targets(batch, target_q, cfg.gamma);

    MlpParams grads = zeros_like(q);
    double loss = 0.0;
    const double n = static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        MlpCache cache;
        std::vector<double> out = mlp_forward(q, batch[i]->state, &cache);
        double err = out[static_cast<std::size_t>(batch[i]->action)] - y[i];
        loss += err * err / n;
        std::vector<double> dout(out.size(), 0.0);
        dout[static_cast<std::size_t>(batch[i]->action)] = 2.0 * err / n;
        MlpGrads g = mlp_backward(q, cache, dout);
        accumulate(grads, g.params);
    }
    if (!std::isfinite(loss)) throw TrainingFault("dqn_update: non-finite TD loss");

    std::vector<double> p = flatten(q);
    std::vector<double> gflat = flatten(grads);
    AdamConfig acfg;
    acfg.lr = cfg.lr;
    adam_step(p, gflat, opt, acfg);
    unflatten(q, p);
    return loss;
}

inline std::size_t argmax_q(const MlpParams& q, const std::vector<double>& state) {
    std::vector<double> out = mlp_forward(q, state);
    return static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
}

struct DqnResult {
    MlpParams q;
    std::vector<HybridAction> atoms;
    std::vector<StatsRow> stats;
};

/// Epsilon-greedy interaction loop with replay and periodic target sync over
/// the discretized atomic action set.
inline DqnResult train_dqn(Env& env, const std::vector<std::vector<int>>& bins, const DqnConfig& cfg,
                           const std::function<void(const StatsRow&, const MlpParams&)>& on_row = nullptr,
                           const std::function<bool(const StatsRow&)>& stop_early = nullptr) {
    cfg.check();
    Rng master(cfg.seed);
    Rng init_rng = master.split();
    Rng act_rng = master.split();
    Rng env_rng = master.split();
    Rng update_rng = master.split();

    DqnResult res;
    res.atoms = discretize(env.schema(), bins);
    std::vector<std::size_t> sizes;
    sizes.push_back(env.obs_dim());
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(res.atoms.size());
    res.q = make_mlp(sizes, Activation::Tanh, init_rng);
    MlpParams target_q = res.q;

    ReplayBuffer buffer(cfg.replay_capacity);
    AdamState opt(res.q.param_count());
    EpisodeTracker tracker(100);

    std::vector<double> obs = env.reset(env_rng);
    double episode_reward = 0.0;
    long long step = 0;
    long long updates = 0;
    double loss_sum = 0.0;
    long long loss_count = 0;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        for (int k = 0; k < cfg.stats_every; ++k) {
            double eps = cfg.epsilon_at(step);
            std::size_t a;
            if (act_rng.uniform() < eps)
                a = static_cast<std::size_t>(act_rng.below(res.atoms.size()));
            else
                a = argmax_q(res.q, obs);

            EnvOutcome o = env.step(res.atoms[a], env_rng);
            Transition t;
            t.state = obs;
            t.action = static_cast<int>(a);
            t.reward = o.reward;
            t.next_state = o.obs;
            t.terminal = o.done && !o.truncated;
            buffer.push(std::move(t));
            episode_reward += o.reward;
            step += 1;

            if (o.done) {
                tracker.add_episode(episode_reward, o.win);
                episode_reward = 0.0;
                obs = env.reset(env_rng);
            } else {
                obs = o.obs;
            }

            if (step % cfg.update_every == 0 &&
                buffer.size() >= static_cast<std::size_t>(std::max(cfg.batch_size, cfg.warmup))) {
                auto loss = dqn_update(res.q, target_q, buffer, cfg, update_rng, opt);
                if (loss) {
                    loss_sum += *loss;
                    loss_count += 1;
                    updates += 1;
                    if (updates % cfg.target_sync == 0) target_q = res.q;
                }
            }
        }

        StatsRow row;
        row.iteration = iter;
        row.env_steps = step;
        row.episodes = tracker.episodes();
        row.success_rate = tracker.success_rate();
        row.mean_ep_reward = tracker.mean_episode_reward();
        row.loss_v = loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0;
        res.stats.push_back(row);
        loss_sum = 0.0;
        loss_count = 0;
        if (on_row) on_row(row, res.q);
        if (stop_early && stop_early(row)) break;
    }
    return res;
}

} // namespace parc

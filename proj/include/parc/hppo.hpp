#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "parc/adam.hpp"
#include "parc/rollout.hpp"

namespace parc {

struct TrainConfig {
    double gamma = 0.99;
    double clip_eps = 0.2;
    int horizon = 64;
    int epochs_per_iter = 4;
    int minibatch_size = 32;
    double lr_actor = 3e-4;
    double lr_critic = 3e-4;
    double entropy_coef_d = 0.01;
    double entropy_coef_c = 0.01;
    double value_coef = 0.5;
    int max_iterations = 100;
    std::uint64_t seed = 0;
    double grad_clip = 0.0; // global-norm clip when > 0, off by default
    bool normalize_advantages = true;
    std::vector<std::size_t> encoder_hidden = {256, 256};
    std::vector<std::size_t> head_hidden = {128, 64};

    void check() const {
        if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("TrainConfig: gamma must be in (0,1]");
        if (!(clip_eps > 0.0)) throw DomainError("TrainConfig: clip_eps must be > 0");
        if (horizon < 1) throw DomainError("TrainConfig: horizon must be >= 1");
        if (minibatch_size < 1 || minibatch_size > horizon)
            throw DomainError("TrainConfig: minibatch_size must be in [1, horizon]");
        if (!(lr_actor > 0.0 && lr_critic > 0.0)) throw DomainError("TrainConfig: lr must be > 0");
        if (epochs_per_iter < 1) throw DomainError("TrainConfig: epochs_per_iter must be >= 1");
        if (max_iterations < 0) throw DomainError("TrainConfig: max_iterations must be >= 0");
    }
};

/// The per-sample clipped surrogate term (to be maximized; losses negate it):
/// min(ratio * adv, clip(ratio, 1 - eps, 1 + eps) * adv).
inline double clip_surrogate(double ratio, double adv, double clip_eps) {
    double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    return std::min(ratio * adv, clipped * adv);
}

/// d clip_surrogate / d log(ratio): zero where the clip is active, otherwise
/// ratio * adv.
inline double clip_surrogate_dlogp(double ratio, double adv, double clip_eps) {
    if (adv >= 0.0 && ratio >= 1.0 + clip_eps) return 0.0;
    if (adv < 0.0 && ratio <= 1.0 - clip_eps) return 0.0;
    return ratio * adv;
}

struct LossResult {
    double loss = 0.0;
    double mean_entropy = 0.0;
    PolicyGrads grads;
};

namespace hppodetail {

/// Encoder forward shared by both actor losses.
inline void encode_state(const HybridPolicyParams& policy, const std::vector<double>& state,
                         PolicyCache& cache) {
    std::vector<double> enc = mlp_forward(policy.encoder, state, &cache.encoder);
    for (double& v : enc) v = std::tanh(v);
    cache.encoded = std::move(enc);
}

} // namespace hppodetail

/// Clipped-surrogate loss for the discrete policy over a minibatch:
/// mean(-min(r_d * adv, clip(r_d) * adv)) - entropy_coef * mean(entropy_d),
/// with r_d = exp(logp_d_new - logp_d_old). Gradients flow to the encoder and
/// the discrete head only.
inline LossResult discrete_loss(const HybridPolicyParams& policy, const RolloutBuffer& buf,
                                const std::vector<std::size_t>& indices,
                                const std::vector<double>& adv, double clip_eps,
                                double entropy_coef) {
    LossResult res;
    res.grads = zero_policy_grads(policy);
    const double n = static_cast<double>(indices.size());
    for (std::size_t idx : indices) {
        PolicyCache cache;
        hppodetail::encode_state(policy, buf.states[idx], cache);
        std::vector<double> logits = mlp_forward(policy.discrete_head, cache.encoded, &cache.discrete);
        std::size_t a = static_cast<std::size_t>(buf.actions[idx].a);
        double logp_new = categorical_logprob(logits, a);
        double ent = categorical_entropy(logits);
        double ratio = std::exp(logp_new - buf.logp_d[idx]);
        res.loss += (-clip_surrogate(ratio, adv[idx], clip_eps) - entropy_coef * ent) / n;
        res.mean_entropy += ent / n;
        EvalCoeffs co;
        co.c_logp_d = -clip_surrogate_dlogp(ratio, adv[idx], clip_eps) / n;
        co.c_ent_d = -entropy_coef / n;
        policy_backward_accumulate(policy, cache, buf.actions[idx], co, res.grads);
    }
    return res;
}

/// Same form for the continuous policy with r_c = exp(logp_c_new -
/// logp_c_old). Samples whose chosen action is unparameterized contribute
/// ratio 1 (zero gradient). Gradients flow to the encoder and the continuous
/// head only.
inline LossResult continuous_loss(const HybridPolicyParams& policy, const RolloutBuffer& buf,
                                  const std::vector<std::size_t>& indices,
                                  const std::vector<double>& adv, double clip_eps,
                                  double entropy_coef) {
    LossResult res;
    res.grads = zero_policy_grads(policy);
    const double n = static_cast<double>(indices.size());
    for (std::size_t idx : indices) {
        const HybridAction& action = buf.actions[idx];
        std::size_t a = static_cast<std::size_t>(action.a);
        std::size_t m = policy.schema.param_dim(a);
        if (m == 0) {
            res.loss += -clip_surrogate(1.0, adv[idx], clip_eps) / n;
            continue;
        }
        PolicyCache cache;
        hppodetail::encode_state(policy, buf.states[idx], cache);
        std::vector<double> cont = mlp_forward(policy.continuous_head, cache.encoded, &cache.continuous);
        std::size_t off = 0;
        for (std::size_t i = 0; i < a; ++i) off += 2 * policy.schema.param_dim(i);
        std::vector<double> mean(cont.begin() + off, cont.begin() + off + m);
        std::vector<double> logstd(m);
        for (std::size_t d = 0; d < m; ++d) logstd[d] = cont[off + m + d];
        double logp_new = gaussian_logprob(mean, logstd, action.x);
        double ent = gaussian_entropy(logstd);
        double ratio = std::exp(logp_new - buf.logp_c[idx]);
        res.loss += (-clip_surrogate(ratio, adv[idx], clip_eps) - entropy_coef * ent) / n;
        res.mean_entropy += ent / n;
        EvalCoeffs co;
        co.c_logp_c = -clip_surrogate_dlogp(ratio, adv[idx], clip_eps) / n;
        co.c_ent_c = -entropy_coef / n;
        policy_backward_accumulate(policy, cache, action, co, res.grads);
    }
    return res;
}

struct ValueLossResult {
    double loss = 0.0;
    MlpParams grads;
};

/// value_coef * mean((V(s) - return target)^2); gradients reach the critic
/// only.
inline ValueLossResult value_loss(const CriticParams& critic, const RolloutBuffer& buf,
                                  const std::vector<std::size_t>& indices, double value_coef) {
    ValueLossResult res;
    res.grads = zeros_like(critic.net);
    const double n = static_cast<double>(indices.size());
    for (std::size_t idx : indices) {
        CriticCache cache;
        double v = critic_forward(critic, buf.states[idx], &cache);
        double err = v - buf.returns[idx];
        res.loss += value_coef * err * err / n;
        MlpParams g = critic_backward(critic, cache, value_coef * 2.0 * err / n);
        accumulate(res.grads, g);
    }
    return res;
}

/// Adam moments per disjoint parameter group. The encoder state advances
/// twice per minibatch, once from each actor loss.
struct OptimizerState {
    AdamState encoder;
    AdamState discrete_head;
    AdamState continuous_head;
    AdamState critic;

    OptimizerState() = default;
    OptimizerState(const HybridPolicyParams& p, const CriticParams& c)
        : encoder(p.encoder.param_count()),
          discrete_head(p.discrete_head.param_count()),
          continuous_head(p.continuous_head.param_count()),
          critic(c.net.param_count()) {}
};

struct UpdateStats {
    double loss_d = 0.0;
    double loss_c = 0.0;
    double loss_v = 0.0;
    double entropy_d = 0.0;
    double entropy_c = 0.0;
};

namespace hppodetail {

inline void clip_global_norm(std::vector<std::vector<double>*> grads, double max_norm) {
    double sq = 0.0;
    for (auto* g : grads)
        for (double v : *g) sq += v * v;
    double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return;
    double scale = max_norm / norm;
    for (auto* g : grads)
        for (double& v : *g) v *= scale;
}

inline void apply_adam(MlpParams& params, const MlpParams& grads_structured, AdamState& state,
                       double lr) {
    std::vector<double> flat_p = flatten(params);
    std::vector<double> flat_g = flatten(grads_structured);
    AdamConfig cfg;
    cfg.lr = lr;
    adam_step(flat_p, flat_g, state, cfg);
    unflatten(params, flat_p);
}

inline void apply_actor_loss(HybridPolicyParams& policy, MlpParams HybridPolicyParams::*head,
                             AdamState& head_state, AdamState& enc_state, const LossResult& res,
                             const MlpParams& head_grads, double lr, double grad_clip) {
    std::vector<double> flat_enc = flatten(res.grads.encoder);
    std::vector<double> flat_head = flatten(head_grads);
    if (grad_clip > 0.0) clip_global_norm({&flat_enc, &flat_head}, grad_clip);

    std::vector<double> p = flatten(policy.encoder);
    AdamConfig cfg;
    cfg.lr = lr;
    adam_step(p, flat_enc, enc_state, cfg);
    unflatten(policy.encoder, p);

    p = flatten(policy.*head);
    adam_step(p, flat_head, head_state, cfg);
    unflatten(policy.*head, p);
}

} // namespace hppodetail

/// One H-PPO update over a collected buffer: per epoch, shuffle and walk
/// minibatches, applying the discrete surrogate, the continuous surrogate and
/// the value regression as three separate sequential Adam steps. Advantages
/// are normalized once per buffer. Deterministic given (params, buffer, rng).
inline UpdateStats update(HybridPolicyParams& policy, CriticParams& critic, const RolloutBuffer& buf,
                          const TrainConfig& cfg, Rng& rng, OptimizerState& opt) {
    if (buf.advantages.size() != buf.size())
        throw DomainError("update: advantages not computed");
    std::vector<double> adv = buf.advantages;
    if (cfg.normalize_advantages && !adv.empty()) {
        double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / adv.size();
        double var = 0.0;
        for (double a : adv) var += (a - mean) * (a - mean);
        double sd = std::sqrt(var / adv.size());
        for (double& a : adv) a = (a - mean) / (sd + 1e-8);
    }

    UpdateStats stats;
    int batches = 0;
    std::vector<std::size_t> order(buf.size());
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < cfg.epochs_per_iter; ++epoch) {
        // Fisher-Yates shuffle driven by the update rng
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t start = 0; start < order.size(); start += cfg.minibatch_size) {
            std::size_t end = std::min(order.size(), start + cfg.minibatch_size);
            std::vector<std::size_t> mb(order.begin() + start, order.begin() + end);

            LossResult ld = discrete_loss(policy, buf, mb, adv, cfg.clip_eps, cfg.entropy_coef_d);
            if (!std::isfinite(ld.loss))
                throw TrainingFault("update: non-finite discrete loss at epoch " +
                                    std::to_string(epoch) + ", minibatch " + std::to_string(start));
            hppodetail::apply_actor_loss(policy, &HybridPolicyParams::discrete_head,
                                         opt.discrete_head, opt.encoder, ld, ld.grads.discrete_head,
                                         cfg.lr_actor, cfg.grad_clip);

            LossResult lc = continuous_loss(policy, buf, mb, adv, cfg.clip_eps, cfg.entropy_coef_c);
            if (!std::isfinite(lc.loss))
                throw TrainingFault("update: non-finite continuous loss at epoch " +
                                    std::to_string(epoch) + ", minibatch " + std::to_string(start));
            hppodetail::apply_actor_loss(policy, &HybridPolicyParams::continuous_head,
                                         opt.continuous_head, opt.encoder, lc, lc.grads.continuous_head,
                                         cfg.lr_actor, cfg.grad_clip);

            ValueLossResult lv = value_loss(critic, buf, mb, cfg.value_coef);
            if (!std::isfinite(lv.loss))
                throw TrainingFault("update: non-finite value loss at epoch " +
                                    std::to_string(epoch) + ", minibatch " + std::to_string(start));
            std::vector<double> flat_g = flatten(lv.grads);
            if (cfg.grad_clip > 0.0) hppodetail::clip_global_norm({&flat_g}, cfg.grad_clip);
            std::vector<double> p = flatten(critic.net);
            AdamConfig acfg;
            acfg.lr = cfg.lr_critic;
            adam_step(p, flat_g, opt.critic, acfg);
            unflatten(critic.net, p);

            stats.loss_d += ld.loss;
            stats.loss_c += lc.loss;
            stats.loss_v += lv.loss;
            stats.entropy_d += ld.mean_entropy;
            stats.entropy_c += lc.mean_entropy;
            batches += 1;
        }
    }
    if (batches > 0) {
        stats.loss_d /= batches;
        stats.loss_c /= batches;
        stats.loss_v /= batches;
        stats.entropy_d /= batches;
        stats.entropy_c /= batches;
    }
    return stats;
}

struct TrainResult {
    HybridPolicyParams policy;
    CriticParams critic;
    std::vector<StatsRow> stats;
};

/// Full training loop: collect -> advantages -> update, one stats row per
/// iteration. `on_iteration` fires after each row; `stop_early` can end the
/// run once a criterion is met (the row is still recorded).
inline TrainResult train_hppo(Env& env, const TrainConfig& cfg,
                              const std::function<void(const StatsRow&, const HybridPolicyParams&,
                                                       const CriticParams&)>& on_iteration = nullptr,
                              const std::function<bool(const StatsRow&)>& stop_early = nullptr) {
    cfg.check();
    Rng master(cfg.seed);
    Rng init_rng = master.split();
    Rng policy_rng = master.split();
    Rng env_rng = master.split();
    Rng update_rng = master.split();

    TrainResult res;
    res.policy = make_hybrid_policy(env.obs_dim(), env.schema(), cfg.encoder_hidden,
                                    cfg.head_hidden, init_rng);
    std::vector<std::size_t> critic_hidden = cfg.encoder_hidden;
    critic_hidden.insert(critic_hidden.end(), cfg.head_hidden.begin(), cfg.head_hidden.end());
    res.critic = make_critic(env.obs_dim(), critic_hidden, init_rng);

    OptimizerState opt(res.policy, res.critic);
    CollectCursor cursor;
    EpisodeTracker tracker(100);
    long long env_steps = 0;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        RolloutBuffer buf = collect_rollout(env, res.policy, res.critic, cfg.horizon, policy_rng,
                                            env_rng, cursor, &tracker);
        compute_advantages(buf, cfg.gamma);
        UpdateStats us = update(res.policy, res.critic, buf, cfg, update_rng, opt);
        env_steps += static_cast<long long>(buf.size());

        StatsRow row;
        row.iteration = iter;
        row.env_steps = env_steps;
        row.episodes = tracker.episodes();
        row.success_rate = tracker.success_rate();
        row.mean_ep_reward = tracker.mean_episode_reward();
        row.loss_d = us.loss_d;
        row.loss_c = us.loss_c;
        row.loss_v = us.loss_v;
        row.entropy_d = us.entropy_d;
        row.entropy_c = us.entropy_c;
        res.stats.push_back(row);
        if (on_iteration) on_iteration(row, res.policy, res.critic);
        if (stop_early && stop_early(row)) break;
    }
    return res;
}

} // namespace parc

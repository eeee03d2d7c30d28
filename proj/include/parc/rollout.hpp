#pragma once
#include <cstdint>
#include <vector>

#include "parc/envs/env.hpp"
#include "parc/policy.hpp"
#include "parc/stats.hpp"

namespace parc {

/// T-step trajectory slice. Episodes continue across slices (the collector
/// auto-resets); done rows carry their own bootstrap value so the advantage
/// pass never bootstraps across an episode boundary.
struct RolloutBuffer {
    std::vector<std::vector<double>> states;
    std::vector<HybridAction> actions;
    std::vector<double> logp_d;
    std::vector<double> logp_c;
    std::vector<double> rewards;
    std::vector<double> values;
    std::vector<std::uint8_t> dones;
    std::vector<std::uint8_t> truncateds;
    std::vector<std::uint8_t> wins;
    std::vector<double> boot_values; // used when dones[t]: 0 if terminal, V(final obs) if truncated
    double bootstrap_value = 0.0;    // V(s_T) when the final row is not done

    std::vector<double> advantages;
    std::vector<double> returns;

    std::size_t size() const { return states.size(); }
};

/// Carries the live observation between successive rollouts.
struct CollectCursor {
    std::vector<double> obs;
    double episode_reward = 0.0;
    bool started = false;
};

/// Runs the stochastic hybrid policy for exactly cfg T timesteps, storing
/// sampling-time log-probs and values. Raw (unclamped) parameter samples are
/// stored; the environment clamps internally at hand-off.
inline RolloutBuffer collect_rollout(Env& env, const HybridPolicyParams& policy,
                                     const CriticParams& critic, int horizon, Rng& policy_rng,
                                     Rng& env_rng, CollectCursor& cursor,
                                     EpisodeTracker* tracker = nullptr) {
    if (horizon < 1) throw DomainError("collect_rollout: horizon must be >= 1");
    RolloutBuffer buf;
    buf.states.reserve(horizon);
    if (!cursor.started) {
        cursor.obs = env.reset(env_rng);
        cursor.episode_reward = 0.0;
        cursor.started = true;
    }
    for (int t = 0; t < horizon; ++t) {
        PolicyOutput out = policy_forward(policy, critic, cursor.obs);
        SampledAction s = sample_action(out, policy.schema, policy_rng);
        EnvOutcome o;
        try {
            o = env.step(s.action, env_rng);
        } catch (const std::exception& e) {
            throw ContractError("collect_rollout: environment fault at step " + std::to_string(t) +
                                ": " + e.what());
        }
        buf.states.push_back(cursor.obs);
        buf.actions.push_back(s.action);
        buf.logp_d.push_back(s.logp_d);
        buf.logp_c.push_back(s.logp_c);
        buf.rewards.push_back(o.reward);
        buf.values.push_back(out.value);
        buf.dones.push_back(o.done ? 1 : 0);
        buf.truncateds.push_back(o.truncated ? 1 : 0);
        buf.wins.push_back(o.win ? 1 : 0);
        cursor.episode_reward += o.reward;
        if (o.done) {
            buf.boot_values.push_back(o.truncated ? critic_forward(critic, o.obs) : 0.0);
            if (tracker) tracker->add_episode(cursor.episode_reward, o.win);
            cursor.obs = env.reset(env_rng);
            cursor.episode_reward = 0.0;
        } else {
            buf.boot_values.push_back(0.0);
            cursor.obs = o.obs;
        }
    }
    buf.bootstrap_value = buf.dones.back() ? 0.0 : critic_forward(critic, cursor.obs);
    return buf;
}

/// T-step advantage estimate: discounted rewards from t to the end of the
/// slice (or the episode boundary), bootstrapped with the stored value, minus
/// V(s_t). Return target = advantage + V(s_t). Terminal boundaries bootstrap
/// with 0, time-limit truncations with the value of the final observation.
inline void compute_advantages(RolloutBuffer& buf, double gamma) {
    const std::size_t n = buf.size();
    buf.advantages.assign(n, 0.0);
    buf.returns.assign(n, 0.0);
    double g = buf.bootstrap_value;
    for (std::size_t t = n; t-- > 0;) {
        if (buf.dones[t]) g = buf.boot_values[t];
        g = buf.rewards[t] + gamma * g;
        buf.returns[t] = g;
        buf.advantages[t] = g - buf.values[t];
    }
}

} // namespace parc

#pragma once
#include <cstddef>
#include <vector>

#include "parc/action_space.hpp"
#include "parc/distributions.hpp"
#include "parc/mlp.hpp"
#include "parc/rng.hpp"

namespace parc {

/// Hybrid actor: a shared state encoder feeding a discrete head (k logits)
/// and one continuous head that emits mean and log-std for the parameters of
/// every discrete action. The encoder output is tanh-activated before it
/// enters the heads, so the full stack keeps all hidden nonlinearities.
///
/// Continuous head output layout, per action a in schema order:
///   [mean_a (m_a values), logstd_a (m_a values)]
struct HybridPolicyParams {
    MlpParams encoder;
    MlpParams discrete_head;
    MlpParams continuous_head;
    ActionSchema schema;

    std::size_t obs_dim() const { return encoder.in_dim(); }
    std::size_t param_count() const {
        return encoder.param_count() + discrete_head.param_count() + continuous_head.param_count();
    }
};

/// Standalone state-value network; never shares layers with the actors.
struct CriticParams {
    MlpParams net;
};

struct PolicyOutput {
    std::vector<double> logits;
    std::vector<std::vector<double>> means;   // per action
    std::vector<std::vector<double>> logstds; // per action, already clamped
    double value = 0.0;
};

struct PolicyCache {
    MlpCache encoder;
    std::vector<double> encoded; // tanh(encoder output)
    MlpCache discrete;
    MlpCache continuous;
};

struct CriticCache {
    MlpCache net;
};

inline std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden,
                                            std::size_t out) {
    std::vector<std::size_t> s;
    s.push_back(in);
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(out);
    return s;
}

/// Encoder covers the first hidden sizes, heads the rest. Head output layers
/// are initialized small so the initial policy is near-uniform with log-std
/// near zero.
inline HybridPolicyParams make_hybrid_policy(std::size_t obs_dim, const ActionSchema& schema,
                                             const std::vector<std::size_t>& encoder_hidden,
                                             const std::vector<std::size_t>& head_hidden, Rng& rng) {
    schema.check();
    HybridPolicyParams p;
    p.schema = schema;
    std::vector<std::size_t> enc_sizes;
    enc_sizes.push_back(obs_dim);
    enc_sizes.insert(enc_sizes.end(), encoder_hidden.begin(), encoder_hidden.end());
    p.encoder = make_mlp(enc_sizes, Activation::Tanh, rng);
    std::size_t enc_out = p.encoder.out_dim();
    p.discrete_head = make_mlp(layer_sizes(enc_out, head_hidden, schema.k()), Activation::Tanh, rng, 0.01);
    p.continuous_head =
        make_mlp(layer_sizes(enc_out, head_hidden, 2 * schema.total_param_dim()), Activation::Tanh, rng, 0.01);
    return p;
}

inline CriticParams make_critic(std::size_t obs_dim, const std::vector<std::size_t>& hidden, Rng& rng) {
    return CriticParams{make_mlp(layer_sizes(obs_dim, hidden, 1), Activation::Tanh, rng)};
}

inline double critic_forward(const CriticParams& critic, const std::vector<double>& state,
                             CriticCache* cache = nullptr) {
    return mlp_forward(critic.net, state, cache ? &cache->net : nullptr)[0];
}

/// Deterministic forward pass through encoder and both heads plus the critic.
inline PolicyOutput policy_forward(const HybridPolicyParams& policy, const CriticParams& critic,
                                   const std::vector<double>& state, PolicyCache* cache = nullptr,
                                   CriticCache* critic_cache = nullptr) {
    PolicyOutput out;
    std::vector<double> enc = mlp_forward(policy.encoder, state, cache ? &cache->encoder : nullptr);
    for (double& v : enc) v = std::tanh(v);
    if (cache) cache->encoded = enc;
    out.logits = mlp_forward(policy.discrete_head, enc, cache ? &cache->discrete : nullptr);
    std::vector<double> cont = mlp_forward(policy.continuous_head, enc, cache ? &cache->continuous : nullptr);
    std::size_t off = 0;
    out.means.resize(policy.schema.k());
    out.logstds.resize(policy.schema.k());
    for (std::size_t a = 0; a < policy.schema.k(); ++a) {
        std::size_t m = policy.schema.param_dim(a);
        out.means[a].assign(cont.begin() + off, cont.begin() + off + m);
        out.logstds[a].resize(m);
        for (std::size_t d = 0; d < m; ++d) out.logstds[a][d] = clamp_logstd(cont[off + m + d]);
        off += 2 * m;
    }
    out.value = critic_forward(critic, state, critic_cache);
    return out;
}

struct SampledAction {
    HybridAction action;
    double logp_d = 0.0;
    double logp_c = 0.0;
};

/// Samples the discrete index from softmax(logits), then parameters for all
/// k actions from their Gaussians (one categorical draw, then Gaussian draws
/// in action order). x is the chosen action's parameters, unclamped;
/// clamping to bounds happens at environment hand-off, after log-probs.
inline SampledAction sample_action(const PolicyOutput& out, const ActionSchema& schema, Rng& rng) {
    SampledAction s;
    std::vector<double> probs = softmax(out.logits);
    std::size_t a = categorical_sample(probs, rng);
    s.action.a = static_cast<int>(a);
    s.action.full_params.resize(schema.k());
    for (std::size_t i = 0; i < schema.k(); ++i)
        s.action.full_params[i] = gaussian_sample(out.means[i], out.logstds[i], rng);
    s.action.x = s.action.full_params[a];
    s.logp_d = categorical_logprob(out.logits, a);
    s.logp_c = gaussian_logprob(out.means[a], out.logstds[a], s.action.x);
    return s;
}

struct ActionEval {
    double logp_d = 0.0;
    double logp_c = 0.0;
    double entropy_d = 0.0;
    double entropy_c = 0.0; // entropy of the selected action's Gaussian only
    double value = 0.0;
};

/// Log-probabilities of a stored action under the current parameters, for
/// ratio computation across epochs. logp_c depends only on the selected
/// action's parameters; it ignores full_params of other actions.
inline ActionEval evaluate_action(const HybridPolicyParams& policy, const CriticParams& critic,
                                  const std::vector<double>& state, const HybridAction& action,
                                  PolicyCache* cache = nullptr, PolicyOutput* out_opt = nullptr) {
    auto violations = validate(policy.schema, HybridAction{action.a, action.x, {}});
    // out-of-bounds parameters are expected here (pre-clamp samples); only
    // index/length problems are real errors
    if (action.a < 0 || static_cast<std::size_t>(action.a) >= policy.schema.k())
        throw DomainError("evaluate_action: " + violations.front());
    if (action.x.size() != policy.schema.param_dim(static_cast<std::size_t>(action.a)))
        throw DomainError("evaluate_action: parameter length mismatch");

    PolicyOutput out = policy_forward(policy, critic, state, cache);
    ActionEval ev;
    std::size_t a = static_cast<std::size_t>(action.a);
    ev.logp_d = categorical_logprob(out.logits, a);
    ev.logp_c = gaussian_logprob(out.means[a], out.logstds[a], action.x);
    ev.entropy_d = categorical_entropy(out.logits);
    ev.entropy_c = gaussian_entropy(out.logstds[a]);
    ev.value = out.value;
    if (out_opt) *out_opt = out;
    return ev;
}

struct PolicyGrads {
    MlpParams encoder;
    MlpParams discrete_head;
    MlpParams continuous_head;
};

inline PolicyGrads zero_policy_grads(const HybridPolicyParams& p) {
    return PolicyGrads{zeros_like(p.encoder), zeros_like(p.discrete_head),
                       zeros_like(p.continuous_head)};
}

inline void accumulate(MlpParams& into, const MlpParams& grads) {
    for (std::size_t l = 0; l < into.layers.size(); ++l) {
        auto& iw = into.layers[l].weight.data;
        const auto& gw = grads.layers[l].weight.data;
        for (std::size_t i = 0; i < iw.size(); ++i) iw[i] += gw[i];
        auto& ib = into.layers[l].bias;
        const auto& gb = grads.layers[l].bias;
        for (std::size_t i = 0; i < ib.size(); ++i) ib[i] += gb[i];
    }
}

/// Per-sample scalar coefficients on the four differentiable outputs of
/// evaluate_action. Gradients of (c_logp_d*logp_d + c_ent_d*entropy_d +
/// c_logp_c*logp_c + c_ent_c*entropy_c) are accumulated into `grads`.
/// Discrete coefficients touch encoder + discrete head only; continuous
/// coefficients touch encoder + continuous head only.
struct EvalCoeffs {
    double c_logp_d = 0.0;
    double c_ent_d = 0.0;
    double c_logp_c = 0.0;
    double c_ent_c = 0.0;
};

inline void policy_backward_accumulate(const HybridPolicyParams& policy, const PolicyCache& cache,
                                       const HybridAction& action, const EvalCoeffs& co,
                                       PolicyGrads& grads) {
    const std::size_t k = policy.schema.k();
    const std::size_t a = static_cast<std::size_t>(action.a);
    std::vector<double> enc_grad(cache.encoded.size(), 0.0);
    bool touched_encoder = false;

    const bool want_d = co.c_logp_d != 0.0 || co.c_ent_d != 0.0;
    if (want_d) {
        const std::vector<double>& logits = cache.discrete.post.back();
        std::vector<double> p = softmax(logits);
        double lse = logsumexp(logits);
        double ent = 0.0;
        for (std::size_t i = 0; i < k; ++i) ent -= p[i] * (logits[i] - lse);
        std::vector<double> dlogits(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            // d logp_d / d logit_i = [i == a] - p_i
            dlogits[i] += co.c_logp_d * ((i == a ? 1.0 : 0.0) - p[i]);
            // d entropy / d logit_i = -p_i (log p_i + H)
            dlogits[i] += co.c_ent_d * (-p[i] * ((logits[i] - lse) + ent));
        }
        MlpGrads hg = mlp_backward(policy.discrete_head, cache.discrete, dlogits);
        accumulate(grads.discrete_head, hg.params);
        for (std::size_t i = 0; i < enc_grad.size(); ++i) enc_grad[i] += hg.input[i];
        touched_encoder = true;
    }

    const bool want_c = (co.c_logp_c != 0.0 || co.c_ent_c != 0.0) && policy.schema.param_dim(a) > 0;
    if (want_c) {
        const std::vector<double>& cont = cache.continuous.post.back();
        std::vector<double> dcont(cont.size(), 0.0);
        std::size_t off = 0;
        for (std::size_t i = 0; i < a; ++i) off += 2 * policy.schema.param_dim(i);
        std::size_t m = policy.schema.param_dim(a);
        for (std::size_t d = 0; d < m; ++d) {
            double raw_ls = cont[off + m + d];
            double ls = clamp_logstd(raw_ls);
            double inv_sigma = std::exp(-ls);
            double z = (action.x[d] - cont[off + d]) * inv_sigma;
            // d logp_c / d mean_d = z / sigma
            dcont[off + d] += co.c_logp_c * z * inv_sigma;
            // through the clamp: zero slope where it binds
            double pass = (raw_ls > kLogStdMin && raw_ls < kLogStdMax) ? 1.0 : 0.0;
            // d logp_c / d logstd_d = z^2 - 1; d entropy_c / d logstd_d = 1
            dcont[off + m + d] += pass * (co.c_logp_c * (z * z - 1.0) + co.c_ent_c);
        }
        MlpGrads hg = mlp_backward(policy.continuous_head, cache.continuous, dcont);
        accumulate(grads.continuous_head, hg.params);
        for (std::size_t i = 0; i < enc_grad.size(); ++i) enc_grad[i] += hg.input[i];
        touched_encoder = true;
    }

    if (touched_encoder) {
        // back through the tanh at the encoder junction
        for (std::size_t i = 0; i < enc_grad.size(); ++i)
            enc_grad[i] *= 1.0 - cache.encoded[i] * cache.encoded[i];
        MlpGrads eg = mlp_backward(policy.encoder, cache.encoder, enc_grad);
        accumulate(grads.encoder, eg.params);
    }
}

/// d value / d critic params, scaled by `dvalue`.
inline MlpParams critic_backward(const CriticParams& critic, const CriticCache& cache, double dvalue) {
    return mlp_backward(critic.net, cache.net, {dvalue}).params;
}

} // namespace parc

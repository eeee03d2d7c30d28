#pragma once
#include <cstddef>
#include <utility>
#include <vector>

#include "parc/action_space.hpp"
#include "parc/distributions.hpp"
#include "parc/mlp.hpp"
#include "parc/policy.hpp"

namespace parc {

/// Generalization of the hybrid actor to an arbitrary action tree: one actor
/// head per selection sub-problem (discrete heads on branch nodes, Gaussian
/// heads on continuous leaves), all reading the same tanh-encoded state.
struct ActorSet {
    MlpParams encoder;
    ActionTree tree;
    std::vector<MlpParams> heads; // aligned with tree.nodes; unused for empty leaves
};

struct ActorSetCache {
    MlpCache encoder;
    std::vector<double> encoded;
    std::vector<MlpCache> heads;
    std::vector<char> head_used;
};

struct TreeSample {
    std::vector<std::pair<int, int>> choices; // (branch node, chosen child slot) along the path
    int leaf = -1;                            // arena index of the reached leaf
    std::vector<double> leaf_params;          // chosen continuous leaf's draw (may be empty)
    std::vector<int> cont_leaves;             // continuous leaves in depth-first order
    std::vector<std::vector<double>> leaf_emissions; // Gaussian draw per continuous leaf
    double logp_path = 0.0;                   // sum of the path's categorical log-probs
    double logp_leaf = 0.0;                   // Gaussian log-prob of the chosen leaf draw
    std::vector<std::pair<int, double>> node_logprobs; // per sampled selection node
};

inline void collect_continuous_leaves(const ActionTree& tree, int node, std::vector<int>& out) {
    const auto& n = tree.at(node);
    if (n.kind == ActionTree::Kind::Continuous) out.push_back(node);
    for (int c : n.children) collect_continuous_leaves(tree, c, out);
}

/// Fresh random heads for every selection node over a new encoder.
inline ActorSet build_actor_set(const ActionTree& tree, std::size_t obs_dim,
                                const std::vector<std::size_t>& encoder_hidden,
                                const std::vector<std::size_t>& head_hidden, Rng& rng) {
    tree.check();
    ActorSet set;
    set.tree = tree;
    std::vector<std::size_t> enc_sizes;
    enc_sizes.push_back(obs_dim);
    enc_sizes.insert(enc_sizes.end(), encoder_hidden.begin(), encoder_hidden.end());
    set.encoder = make_mlp(enc_sizes, Activation::Tanh, rng);
    std::size_t enc_out = set.encoder.out_dim();
    set.heads.resize(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        if (n.kind == ActionTree::Kind::Branch)
            set.heads[i] = make_mlp(layer_sizes(enc_out, head_hidden, n.children.size()),
                                    Activation::Tanh, rng, 0.01);
        else if (n.kind == ActionTree::Kind::Continuous)
            set.heads[i] = make_mlp(layer_sizes(enc_out, head_hidden, 2 * n.params.size()),
                                    Activation::Tanh, rng, 0.01);
    }
    return set;
}

/// Rebuilds a depth-2 hybrid policy as an actor set with identical weights:
/// the root head is the discrete head, and each continuous leaf duplicates
/// the continuous head's hidden layers with only its own slice of the output
/// layer. Row-sliced output layers compute the exact same floating-point
/// values, so sampling stays bit-identical.
inline ActorSet actor_set_from_hybrid(const HybridPolicyParams& policy) {
    ActorSet set;
    set.tree = tree_from_schema(policy.schema);
    set.encoder = policy.encoder;
    set.heads.resize(set.tree.nodes.size());
    set.heads[static_cast<std::size_t>(set.tree.root)] = policy.discrete_head;
    const auto& root = set.tree.at(set.tree.root);
    std::size_t off = 0;
    for (std::size_t slot = 0; slot < root.children.size(); ++slot) {
        int leaf = root.children[slot];
        std::size_t m = policy.schema.param_dim(slot);
        if (m == 0) continue;
        MlpParams head = policy.continuous_head;
        MlpParams::Layer& last = head.layers.back();
        Matrix sliced(2 * m, last.weight.cols);
        std::vector<double> sliced_bias(2 * m);
        for (std::size_t r = 0; r < 2 * m; ++r) {
            for (std::size_t c = 0; c < last.weight.cols; ++c)
                sliced(r, c) = last.weight(off + r, c);
            sliced_bias[r] = last.bias[off + r];
        }
        last.weight = std::move(sliced);
        last.bias = std::move(sliced_bias);
        set.heads[static_cast<std::size_t>(leaf)] = std::move(head);
        off += 2 * m;
    }
    return set;
}

/// Root-to-leaf traversal: one categorical draw per branch node on the path,
/// then a Gaussian draw for every continuous leaf of the tree in depth-first
/// order (the full parameter emission). The executed parameters are the
/// reached leaf's draw.
inline TreeSample sample_tree_action(const ActorSet& set, const std::vector<double>& state, Rng& rng,
                                     ActorSetCache* cache = nullptr) {
    TreeSample out;
    std::vector<double> enc = mlp_forward(set.encoder, state, cache ? &cache->encoder : nullptr);
    for (double& v : enc) v = std::tanh(v);
    if (cache) {
        cache->encoded = enc;
        cache->heads.assign(set.tree.nodes.size(), {});
        cache->head_used.assign(set.tree.nodes.size(), 0);
    }
    auto head_out = [&](int node) {
        if (!cache) return mlp_forward(set.heads[static_cast<std::size_t>(node)], enc, nullptr);
        cache->head_used[static_cast<std::size_t>(node)] = 1;
        return mlp_forward(set.heads[static_cast<std::size_t>(node)], enc,
                           &cache->heads[static_cast<std::size_t>(node)]);
    };

    int node = set.tree.root;
    while (set.tree.at(node).kind == ActionTree::Kind::Branch) {
        std::vector<double> logits = head_out(node);
        std::size_t slot = categorical_sample(softmax(logits), rng);
        double lp = categorical_logprob(logits, slot);
        out.choices.emplace_back(node, static_cast<int>(slot));
        out.node_logprobs.emplace_back(node, lp);
        out.logp_path += lp;
        node = set.tree.at(node).children[slot];
    }
    out.leaf = node;

    collect_continuous_leaves(set.tree, set.tree.root, out.cont_leaves);
    for (int leaf : out.cont_leaves) {
        std::vector<double> o = head_out(leaf);
        std::size_t m = o.size() / 2;
        std::vector<double> mean(o.begin(), o.begin() + m);
        std::vector<double> logstd(o.begin() + m, o.end());
        std::vector<double> draw = gaussian_sample(mean, logstd, rng);
        if (leaf == out.leaf) {
            out.leaf_params = draw;
            out.logp_leaf = gaussian_logprob(mean, logstd, draw);
            out.node_logprobs.emplace_back(leaf, out.logp_leaf);
        }
        out.leaf_emissions.push_back(std::move(draw));
    }
    return out;
}

struct ActorSetGrads {
    MlpParams encoder;
    std::vector<MlpParams> heads;
};

inline ActorSetGrads zero_actor_set_grads(const ActorSet& set) {
    ActorSetGrads g;
    g.encoder = zeros_like(set.encoder);
    g.heads.resize(set.heads.size());
    for (std::size_t i = 0; i < set.heads.size(); ++i)
        if (!set.heads[i].layers.empty()) g.heads[i] = zeros_like(set.heads[i]);
    return g;
}

/// Accumulates gradients of coeff * logprob for each sampled selection node
/// (path categoricals, and the chosen continuous leaf when present).
inline void actor_set_backward_accumulate(const ActorSet& set, const ActorSetCache& cache,
                                          const TreeSample& sample, double coeff,
                                          ActorSetGrads& grads) {
    if (coeff == 0.0) return;
    std::vector<double> enc_grad(cache.encoded.size(), 0.0);
    for (const auto& [node, slot] : sample.choices) {
        const auto& hcache = cache.heads[static_cast<std::size_t>(node)];
        const std::vector<double>& logits = hcache.post.back();
        std::vector<double> p = softmax(logits);
        std::vector<double> dlogits(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            dlogits[i] = coeff * ((static_cast<int>(i) == slot ? 1.0 : 0.0) - p[i]);
        MlpGrads hg = mlp_backward(set.heads[static_cast<std::size_t>(node)], hcache, dlogits);
        accumulate(grads.heads[static_cast<std::size_t>(node)], hg.params);
        for (std::size_t i = 0; i < enc_grad.size(); ++i) enc_grad[i] += hg.input[i];
    }
    if (!sample.leaf_params.empty()) {
        int leaf = sample.leaf;
        const auto& hcache = cache.heads[static_cast<std::size_t>(leaf)];
        const std::vector<double>& o = hcache.post.back();
        std::size_t m = o.size() / 2;
        std::vector<double> dout(o.size(), 0.0);
        for (std::size_t d = 0; d < m; ++d) {
            double raw_ls = o[m + d];
            double ls = clamp_logstd(raw_ls);
            double inv_sigma = std::exp(-ls);
            double z = (sample.leaf_params[d] - o[d]) * inv_sigma;
            dout[d] = coeff * z * inv_sigma;
            double pass = (raw_ls > kLogStdMin && raw_ls < kLogStdMax) ? 1.0 : 0.0;
            dout[m + d] = pass * coeff * (z * z - 1.0);
        }
        MlpGrads hg = mlp_backward(set.heads[static_cast<std::size_t>(leaf)], hcache, dout);
        accumulate(grads.heads[static_cast<std::size_t>(leaf)], hg.params);
        for (std::size_t i = 0; i < enc_grad.size(); ++i) enc_grad[i] += hg.input[i];
    }
    for (std::size_t i = 0; i < enc_grad.size(); ++i)
        enc_grad[i] *= 1.0 - cache.encoded[i] * cache.encoded[i];
    MlpGrads eg = mlp_backward(set.encoder, cache.encoder, enc_grad);
    accumulate(grads.encoder, eg.params);
}

/// Probability of reaching `leaf` under the current heads (product of the
/// path's categorical probabilities).
inline double tree_leaf_probability(const ActorSet& set, const std::vector<double>& state, int leaf) {
    // recover the root-to-leaf path by parent scan
    std::vector<int> parent(set.tree.nodes.size(), -1);
    std::vector<int> slot_of(set.tree.nodes.size(), -1);
    for (std::size_t i = 0; i < set.tree.nodes.size(); ++i) {
        const auto& n = set.tree.nodes[i];
        for (std::size_t s = 0; s < n.children.size(); ++s) {
            parent[static_cast<std::size_t>(n.children[s])] = static_cast<int>(i);
            slot_of[static_cast<std::size_t>(n.children[s])] = static_cast<int>(s);
        }
    }
    std::vector<double> enc = mlp_forward(set.encoder, state, nullptr);
    for (double& v : enc) v = std::tanh(v);
    double prob = 1.0;
    int node = leaf;
    while (parent[static_cast<std::size_t>(node)] >= 0) {
        int par = parent[static_cast<std::size_t>(node)];
        std::vector<double> logits = mlp_forward(set.heads[static_cast<std::size_t>(par)], enc, nullptr);
        prob *= softmax(logits)[static_cast<std::size_t>(slot_of[static_cast<std::size_t>(node)])];
        node = par;
    }
    return prob;
}

} // namespace parc

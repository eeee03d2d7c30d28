#pragma once
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "parc/matrix.hpp"
#include "parc/rng.hpp"

namespace parc {

enum class Activation { Tanh, Relu };

/// Fully connected net: hidden layers use `activation`, output layer is linear.
struct MlpParams {
    struct Layer {
        Matrix weight; // [out x in]
        std::vector<double> bias;
    };
    std::vector<Layer> layers;
    Activation activation = Activation::Tanh;

    std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().weight.cols; }
    std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().weight.rows; }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += l.weight.size() + l.bias.size();
        return n;
    }
};

/// Checks that adjacent layer dimensions chain.
inline void check_chain(const MlpParams& p, const std::string& who) {
    for (std::size_t i = 1; i < p.layers.size(); ++i) {
        if (p.layers[i].weight.cols != p.layers[i - 1].weight.rows)
            throw ShapeError(who + ": layer " + std::to_string(i) + " expects input " +
                             std::to_string(p.layers[i].weight.cols) + " but layer " +
                             std::to_string(i - 1) + " outputs " +
                             std::to_string(p.layers[i - 1].weight.rows));
    }
}

/// sizes = {in, h1, ..., out}. Xavier-uniform weights, zero bias.
/// `out_scale` shrinks the output layer (small initial heads keep early
/// policies close to uniform).
inline MlpParams make_mlp(const std::vector<std::size_t>& sizes, Activation act, Rng& rng,
                          double out_scale = 1.0) {
    MlpParams p;
    p.activation = act;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        MlpParams::Layer l;
        l.weight = Matrix(sizes[i + 1], sizes[i]);
        l.bias.assign(sizes[i + 1], 0.0);
        double limit = std::sqrt(6.0 / static_cast<double>(sizes[i] + sizes[i + 1]));
        if (i + 2 == sizes.size()) limit *= out_scale;
        for (double& w : l.weight.data) w = rng.uniform(-limit, limit);
        p.layers.push_back(std::move(l));
    }
    return p;
}

/// Zero-valued parameters shaped like `like` (gradient / moment accumulators).
inline MlpParams zeros_like(const MlpParams& like) {
    MlpParams z;
    z.activation = like.activation;
    z.layers.reserve(like.layers.size());
    for (const auto& l : like.layers) {
        MlpParams::Layer zl;
        zl.weight = Matrix(l.weight.rows, l.weight.cols);
        zl.bias.assign(l.bias.size(), 0.0);
        z.layers.push_back(std::move(zl));
    }
    return z;
}

/// Per-layer pre/post activations kept from a forward pass; enough for an
/// exact backward pass.
struct MlpCache {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;  // pre-activation per layer
    std::vector<std::vector<double>> post; // post-activation per layer (last = output)
};

inline std::vector<double> mlp_forward(const MlpParams& p, const std::vector<double>& input,
                                       MlpCache* cache = nullptr) {
    if (p.layers.empty()) throw ShapeError("mlp_forward: empty network");
    if (input.size() != p.in_dim())
        throw ShapeError("mlp_forward: layer 0 expects input of length " +
                         std::to_string(p.in_dim()) + ", got " + std::to_string(input.size()));
    if (cache) {
        cache->input = input;
        cache->pre.assign(p.layers.size(), {});
        cache->post.assign(p.layers.size(), {});
    }
    std::vector<double> h = input;
    std::vector<double> z;
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        affine(p.layers[i].weight, p.layers[i].bias, h, z, "mlp_forward: layer " + std::to_string(i));
        if (cache) cache->pre[i] = z;
        if (i + 1 < p.layers.size()) {
            if (p.activation == Activation::Tanh)
                for (double& v : z) v = std::tanh(v);
            else
                for (double& v : z) v = v > 0.0 ? v : 0.0;
        }
        if (cache) cache->post[i] = z;
        h.swap(z);
    }
    return h;
}

struct MlpGrads {
    MlpParams params; // gradient w.r.t. every weight and bias
    std::vector<double> input; // gradient w.r.t. the input vector
};

/// Reverse-mode gradients of (output . output_grad) w.r.t. all parameters and
/// the input. `cache` must come from mlp_forward on the same params.
inline MlpGrads mlp_backward(const MlpParams& p, const MlpCache& cache,
                             const std::vector<double>& output_grad) {
    if (cache.post.size() != p.layers.size() || cache.input.size() != p.in_dim())
        throw ShapeError("mlp_backward: cache does not match network");
    if (output_grad.size() != p.out_dim())
        throw ShapeError("mlp_backward: output_grad length " + std::to_string(output_grad.size()) +
                         " != output dim " + std::to_string(p.out_dim()));

    MlpGrads g;
    g.params = zeros_like(p);
    std::vector<double> delta = output_grad; // grad w.r.t. layer post-activation
    for (std::size_t li = p.layers.size(); li-- > 0;) {
        // through activation (output layer is linear)
        if (li + 1 < p.layers.size()) {
            const auto& post = cache.post[li];
            if (p.activation == Activation::Tanh)
                for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= 1.0 - post[i] * post[i];
            else
                for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= post[i] > 0.0 ? 1.0 : 0.0;
        }
        const auto& in = li == 0 ? cache.input : cache.post[li - 1];
        Matrix& dw = g.params.layers[li].weight;
        auto& db = g.params.layers[li].bias;
        const Matrix& w = p.layers[li].weight;
        for (std::size_t i = 0; i < w.rows; ++i) {
            double d = delta[i];
            db[i] = d;
            double* dwr = dw.row(i);
            for (std::size_t j = 0; j < w.cols; ++j) dwr[j] = d * in[j];
        }
        // grad w.r.t. this layer's input
        std::vector<double> next(w.cols, 0.0);
        for (std::size_t i = 0; i < w.rows; ++i) {
            double d = delta[i];
            const double* wr = w.row(i);
            for (std::size_t j = 0; j < w.cols; ++j) next[j] += d * wr[j];
        }
        delta.swap(next);
    }
    g.input = std::move(delta);
    return g;
}

inline void flatten_into(const MlpParams& p, std::vector<double>& out) {
    for (const auto& l : p.layers) {
        out.insert(out.end(), l.weight.data.begin(), l.weight.data.end());
        out.insert(out.end(), l.bias.begin(), l.bias.end());
    }
}

inline std::vector<double> flatten(const MlpParams& p) {
    std::vector<double> v;
    v.reserve(p.param_count());
    flatten_into(p, v);
    return v;
}

/// Writes flat values back into the structured parameters. Returns the number
/// of values consumed.
inline std::size_t unflatten(MlpParams& p, const std::vector<double>& flat, std::size_t offset = 0) {
    for (auto& l : p.layers) {
        for (double& w : l.weight.data) w = flat[offset++];
        for (double& b : l.bias) b = flat[offset++];
    }
    return offset;
}

/// Central-difference gradient of a scalar function, one coordinate at a time.
/// Pure evaluation; the independence from any backward pass is the point.
inline std::vector<double> finite_diff_grad(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> params, double h) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        double orig = params[i];
        params[i] = orig + h;
        double fp = f(params);
        params[i] = orig - h;
        double fm = f(params);
        params[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

} // namespace parc

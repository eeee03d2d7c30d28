#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "parc/adam.hpp"
#include "parc/distributions.hpp"
#include "parc/mlp.hpp"
#include "parc/rng.hpp"

using namespace parc;

namespace {

MlpParams single_layer(const Matrix& w, const std::vector<double>& b) {
    MlpParams p;
    p.layers.push_back({w, b});
    return p;
}

} // namespace

TEST_CASE("rng determinism and serialization") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(7);
    c.next_u64();
    Rng d = Rng::from_bytes(c.to_bytes());
    for (int i = 0; i < 100; ++i) CHECK(c.next_u64() == d.next_u64());

    Rng e(1), f(2);
    CHECK(e.next_u64() != f.next_u64());
}

TEST_CASE("mlp_forward identity and affine cases") {
    Matrix eye(2, 2);
    eye(0, 0) = 1.0;
    eye(1, 1) = 1.0;
    MlpParams id = single_layer(eye, {0.0, 0.0});
    auto out = mlp_forward(id, {1.5, -2.0});
    CHECK(out[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(-2.0).epsilon(1e-15));

    Matrix w(1, 2);
    w(0, 0) = 1.0;
    w(0, 1) = 1.0;
    MlpParams affine_net = single_layer(w, {0.5});
    CHECK(mlp_forward(affine_net, {2.0, 3.0})[0] == doctest::Approx(5.5).epsilon(1e-15));
}

TEST_CASE("mlp_forward shape errors name the layer") {
    Rng rng(3);
    MlpParams p = make_mlp({4, 3, 2}, Activation::Tanh, rng);
    CHECK_THROWS_WITH_AS(mlp_forward(p, {1.0, 2.0}), doctest::Contains("layer 0"), ShapeError);
}

TEST_CASE("2-layer linear forward matches triple-loop matmul oracle") {
    // linear chain (identity activation not available, so keep pre-activation
    // ranges in the linear output layer only): use a 2-layer net where the
    // hidden activation is exercised separately below; here both layers act
    // linearly because we compare a 1-hidden-layer net with tanh undone.
    Rng rng(11);
    // W2 * (W1 x + b1) + b2 with the hidden activation skipped is exactly the
    // matmul composition; emulate by a single product: oracle checks the
    // output layer of a net whose hidden layer is the identity-free input.
    Matrix w1(3, 4), w2(2, 3);
    for (double& v : w1.data) v = rng.uniform(-1, 1);
    for (double& v : w2.data) v = rng.uniform(-1, 1);
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-1, 1);

    // library path: tanh(W1 x) then W2 *
    MlpParams p;
    p.layers.push_back({w1, {0, 0, 0}});
    p.layers.push_back({w2, {0, 0}});
    auto out = mlp_forward(p, x);

    // oracle: same computation with the naive product and std::tanh
    auto h = oracles::matmul(w1.data, 3, 4, x, 4, 1);
    for (double& v : h) v = std::tanh(v);
    auto expect = oracles::matmul(w2.data, 2, 3, h, 3, 1);
    for (int i = 0; i < 2; ++i) CHECK(out[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("mlp_backward linear and zero cases") {
    Matrix w(1, 2);
    w(0, 0) = 0.3;
    w(0, 1) = -0.7;
    MlpParams p = single_layer(w, {0.1});
    MlpCache cache;
    mlp_forward(p, {2.0, 5.0}, &cache);

    MlpGrads g = mlp_backward(p, cache, {1.0});
    CHECK(g.params.layers[0].weight(0, 0) == doctest::Approx(2.0));
    CHECK(g.params.layers[0].weight(0, 1) == doctest::Approx(5.0));
    CHECK(g.params.layers[0].bias[0] == doctest::Approx(1.0));

    MlpGrads z = mlp_backward(p, cache, {0.0});
    for (double v : z.params.layers[0].weight.data) CHECK(v == 0.0);
    CHECK(z.params.layers[0].bias[0] == 0.0);
    for (double v : z.input) CHECK(v == 0.0);
}

TEST_CASE("mlp_backward matches finite differences on a random 3-layer tanh net") {
    Rng rng(99);
    MlpParams p = make_mlp({5, 8, 6, 3}, Activation::Tanh, rng);
    std::vector<double> x(5), og(3);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : og) v = rng.uniform(-1, 1);

    MlpCache cache;
    mlp_forward(p, x, &cache);
    MlpGrads g = mlp_backward(p, cache, og);

    auto f = [&](const std::vector<double>& flat) {
        MlpParams q = p;
        unflatten(q, flat);
        auto out = mlp_forward(q, x);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * og[i];
        return s;
    };
    std::vector<double> fd = finite_diff_grad(f, flatten(p), 1e-5);
    std::vector<double> an = flatten(g.params);
    REQUIRE(fd.size() == an.size());
    for (std::size_t i = 0; i < fd.size(); ++i) CHECK(oracles::grad_close(an[i], fd[i]));

    // input gradient too
    auto fx = [&](const std::vector<double>& xin) {
        auto out = mlp_forward(p, xin);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * og[i];
        return s;
    };
    std::vector<double> fdx = finite_diff_grad(fx, x, 1e-5);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(oracles::grad_close(g.input[i], fdx[i]));
}

TEST_CASE("mlp_backward matches finite differences with relu") {
    Rng rng(123);
    MlpParams p = make_mlp({4, 6, 2}, Activation::Relu, rng);
    std::vector<double> x = {0.4, -0.2, 0.9, 0.1};
    MlpCache cache;
    mlp_forward(p, x, &cache);
    MlpGrads g = mlp_backward(p, cache, {1.0, -0.5});
    auto f = [&](const std::vector<double>& flat) {
        MlpParams q = p;
        unflatten(q, flat);
        auto out = mlp_forward(q, x);
        return out[0] - 0.5 * out[1];
    };
    std::vector<double> fd = finite_diff_grad(f, flatten(p), 1e-5);
    std::vector<double> an = flatten(g.params);
    int ok = 0;
    for (std::size_t i = 0; i < fd.size(); ++i)
        if (oracles::grad_close(an[i], fd[i])) ok += 1;
    // relu kinks can put single coordinates on the boundary; nearly all must match
    CHECK(ok >= static_cast<int>(fd.size()) - 1);
}

TEST_CASE("finite_diff_grad trivial cases") {
    auto sq = [](const std::vector<double>& p) { return p[0] * p[0]; };
    auto g = finite_diff_grad(sq, {3.0}, 1e-5);
    CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-8));

    auto constant = [](const std::vector<double>&) { return 4.2; };
    for (double v : finite_diff_grad(constant, {1.0, 2.0, 3.0}, 1e-5)) CHECK(v == 0.0);

    auto sum = [](const std::vector<double>& p) {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
    };
    for (double v : finite_diff_grad(sum, {1.0, -2.0, 0.5}, 1e-5))
        CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adam zero-gradient identity and first-step size") {
    std::vector<double> p = {1.0, -2.0, 0.5};
    AdamState st(p.size());
    std::vector<double> orig = p;
    adam_step(p, {0.0, 0.0, 0.0}, st, {});
    CHECK(p == orig);
    CHECK(st.t == 1);

    std::vector<double> q = {1.0};
    AdamState st2(1);
    AdamConfig cfg;
    cfg.lr = 0.1;
    adam_step(q, {2.0}, st2, cfg);
    CHECK(q[0] == doctest::Approx(1.0 - 0.1).epsilon(1e-7)); // first step moves lr * g/|g|
}

TEST_CASE("adam drives a quadratic near zero in 100 steps") {
    // independent scalar recursion gives p = -0.00421 after 100 steps
    std::vector<double> p = {1.0};
    AdamState st(1);
    AdamConfig cfg;
    cfg.lr = 0.05;
    for (int i = 0; i < 100; ++i) adam_step(p, {2.0 * p[0]}, st, cfg);
    CHECK(std::fabs(p[0]) < 0.1);
    CHECK(p[0] == doctest::Approx(-0.00421140038463886).epsilon(1e-9));
}

TEST_CASE("adam shape mismatch throws") {
    std::vector<double> p = {1.0, 2.0};
    AdamState st(2);
    CHECK_THROWS_AS(adam_step(p, {1.0}, st, {}), ShapeError);
}

TEST_CASE("softmax examples and stability") {
    auto u = softmax({0, 0, 0, 0});
    for (double v : u) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

    auto p = softmax({std::log(2.0), 0.0});
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    auto s = softmax({1000.0, 0.0});
    CHECK(std::isfinite(s[0]));
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(softmax({}), DomainError);
}

TEST_CASE("softmax is a probability vector and shift-invariant") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.below(8);
        std::vector<double> logits(n);
        for (double& v : logits) v = rng.uniform(-30, 30);
        auto p = softmax(logits);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

        double c = rng.uniform(-50, 50);
        std::vector<double> shifted = logits;
        for (double& v : shifted) v += c;
        auto q = softmax(shifted);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(p[i] - q[i]) <= 1e-12);
    }
}

TEST_CASE("categorical logprob, entropy and sampling frequencies") {
    CHECK(categorical_logprob({0.0, 0.0}, 0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(categorical_entropy({1.0, 1.0, 1.0, 1.0}) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(categorical_logprob({0.0, 0.0}, 5), DomainError);

    // exp(logprob) sums to one
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng.below(6);
        std::vector<double> logits(n);
        for (double& v : logits) v = rng.uniform(-10, 10);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += std::exp(categorical_logprob(logits, i));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }

    // sample frequency of index 0 under probs (2/3, 1/3): 5-sigma binomial band
    std::vector<double> probs = softmax({std::log(2.0), 0.0});
    Rng srng(2024);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        if (categorical_sample(probs, srng) == 0) hits += 1;
    double freq = static_cast<double>(hits) / n;
    CHECK(freq > 0.66);
    CHECK(freq < 0.674);
}

TEST_CASE("gaussian logprob, mode and moments") {
    CHECK(gaussian_logprob({0.0}, {0.0}, {0.0}) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-12));

    // x = mean maximizes the log-density
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        double mean = rng.uniform(-3, 3);
        double logstd = rng.uniform(-2, 1);
        double at_mode = gaussian_logprob({mean}, {logstd}, {mean});
        double off = rng.uniform(0.01, 2.0);
        CHECK(at_mode > gaussian_logprob({mean}, {logstd}, {mean + off}));
        CHECK(at_mode > gaussian_logprob({mean}, {logstd}, {mean - off}));
    }

    // CLT bounds on 100000 draws from N(1, 1)
    Rng srng(77);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = gaussian_sample({1.0}, {0.0}, srng)[0];
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / n;
    double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sd == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gaussian entropy formula and logstd clamping") {
    CHECK(gaussian_entropy({0.0}) == doctest::Approx(0.5 * (kLn2Pi + 1.0)).epsilon(1e-12));
    CHECK(gaussian_entropy({1.0, -1.0}) == doctest::Approx(kLn2Pi + 1.0).epsilon(1e-12));
    // clamp: insane logstd values behave like the clamp boundary
    CHECK(gaussian_entropy({100.0}) == doctest::Approx(gaussian_entropy({kLogStdMax})));
    CHECK(gaussian_logprob({0.0}, {-100.0}, {0.0}) ==
          doctest::Approx(gaussian_logprob({0.0}, {kLogStdMin}, {0.0})));
}

TEST_CASE("gaussian sampling is deterministic per seed") {
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) {
        auto xa = gaussian_sample({0.0, 1.0}, {0.0, -1.0}, a);
        auto xb = gaussian_sample({0.0, 1.0}, {0.0, -1.0}, b);
        CHECK(xa == xb); // bit-identical
    }
}

TEST_CASE("gradient check across the hidden sizes used in the repo") {
    // full-coverage finite differences on small/medium nets; the acceptance
    // suite additionally spot-checks the (256,256,128,64) size
    Rng rng(555);
    std::vector<std::vector<std::size_t>> shapes = {
        {3, 16, 1}, {5, 32, 16, 2}, {7, 64, 32, 16, 3}};
    for (const auto& shape : shapes) {
        MlpParams p = make_mlp(shape, Activation::Tanh, rng);
        std::vector<double> x(shape.front());
        for (double& v : x) v = rng.uniform(-1, 1);
        std::vector<double> og(shape.back());
        for (double& v : og) v = rng.uniform(-1, 1);
        MlpCache cache;
        mlp_forward(p, x, &cache);
        MlpGrads g = mlp_backward(p, cache, og);
        auto f = [&](const std::vector<double>& flat) {
            MlpParams q = p;
            unflatten(q, flat);
            auto out = mlp_forward(q, x);
            double s = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * og[i];
            return s;
        };
        std::vector<double> fd = finite_diff_grad(f, flatten(p), 1e-5);
        std::vector<double> an = flatten(g.params);
        for (std::size_t i = 0; i < fd.size(); ++i) REQUIRE(oracles::grad_close(an[i], fd[i]));
    }
}

#pragma once
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "parc/errors.hpp"
#include "parc/rng.hpp"

namespace parc {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kLn2Pi = 1.8378770664093453; // ln(2*pi)

inline double clamp_logstd(double logstd) {
    return logstd < kLogStdMin ? kLogStdMin : (logstd > kLogStdMax ? kLogStdMax : logstd);
}

/// Max-subtracted softmax; entries positive, sum 1.
inline std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw DomainError("softmax: empty logits");
    double mx = logits[0];
    for (double l : logits) mx = std::max(mx, l);
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

inline double logsumexp(const std::vector<double>& logits) {
    if (logits.empty()) throw DomainError("logsumexp: empty input");
    double mx = logits[0];
    for (double l : logits) mx = std::max(mx, l);
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - mx);
    return mx + std::log(sum);
}

/// Inverse-CDF walk over the probability vector; consumes one uniform.
inline std::size_t categorical_sample(const std::vector<double>& probs, Rng& rng) {
    if (probs.empty()) throw DomainError("categorical_sample: empty probabilities");
    double u = rng.uniform();
    double c = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        c += probs[i];
        if (u < c) return i;
    }
    return probs.size() - 1; // guard against rounding in the cumulative sum
}

/// log softmax(logits)[index], computed in log-space.
inline double categorical_logprob(const std::vector<double>& logits, std::size_t index) {
    if (index >= logits.size())
        throw DomainError("categorical_logprob: index " + std::to_string(index) +
                          " out of range for " + std::to_string(logits.size()) + " logits");
    return logits[index] - logsumexp(logits);
}

inline double categorical_entropy(const std::vector<double>& logits) {
    std::vector<double> p = softmax(logits);
    double lse = logsumexp(logits);
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) h -= p[i] * (logits[i] - lse);
    return h;
}

/// Diagonal Gaussian sample; logstd clamped to [-5, 2] before use.
inline std::vector<double> gaussian_sample(const std::vector<double>& mean,
                                           const std::vector<double>& logstd, Rng& rng) {
    if (mean.size() != logstd.size())
        throw ShapeError("gaussian_sample: mean/logstd length mismatch");
    std::vector<double> x(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i)
        x[i] = mean[i] + std::exp(clamp_logstd(logstd[i])) * rng.gaussian();
    return x;
}

/// Log-density summed over dimensions. Zero-dimensional vectors give 0.
inline double gaussian_logprob(const std::vector<double>& mean, const std::vector<double>& logstd,
                               const std::vector<double>& x) {
    if (mean.size() != logstd.size() || mean.size() != x.size())
        throw ShapeError("gaussian_logprob: length mismatch");
    double lp = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        double ls = clamp_logstd(logstd[i]);
        double z = (x[i] - mean[i]) / std::exp(ls);
        lp += -ls - 0.5 * kLn2Pi - 0.5 * z * z;
    }
    return lp;
}

/// Sum over dimensions of logstd + 0.5*ln(2*pi*e).
inline double gaussian_entropy(const std::vector<double>& logstd) {
    double h = 0.0;
    for (double ls : logstd) h += clamp_logstd(ls) + 0.5 * (kLn2Pi + 1.0);
    return h;
}

} // namespace parc

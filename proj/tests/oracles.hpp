// Independent reference implementations used only by tests. These stay
// deliberately separate from the library code paths they check.
#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

// plain triple-loop matrix product, row-major
inline std::vector<double> matmul(const std::vector<double>& a, std::size_t ar, std::size_t ac,
                                  const std::vector<double>& b, std::size_t br, std::size_t bc) {
    std::vector<double> c(ar * bc, 0.0);
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < bc; ++j)
            for (std::size_t k = 0; k < ac && k < br; ++k)
                c[i * bc + j] += a[i * ac + k] * b[k * bc + j];
    return c;
}

// T-step advantage by direct evaluation of the discounted sum, truncating at
// episode boundaries; boot[t] is used when done[t] is set, and tail_value
// bootstraps an unfinished slice
inline std::vector<double> advantages_direct_sum(const std::vector<double>& rewards,
                                                 const std::vector<double>& values,
                                                 const std::vector<char>& done,
                                                 const std::vector<double>& boot, double tail_value,
                                                 double gamma) {
    const std::size_t n = rewards.size();
    std::vector<double> adv(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        double g = 1.0;
        std::size_t j = t;
        for (; j < n; ++j) {
            acc += g * rewards[j];
            g *= gamma;
            if (done[j]) break;
        }
        if (j < n)
            acc += g * boot[j]; // episode boundary inside the slice
        else
            acc += g * tail_value; // ran off the end of the slice
        adv[t] = acc - values[t];
    }
    return adv;
}

// same quantity via one-step TD residual accumulation
inline std::vector<double> advantages_delta_accum(const std::vector<double>& rewards,
                                                  const std::vector<double>& values,
                                                  const std::vector<char>& done,
                                                  const std::vector<double>& boot,
                                                  double tail_value, double gamma) {
    const std::size_t n = rewards.size();
    std::vector<double> adv(n, 0.0);
    double acc = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        double next_v = done[t] ? boot[t] : (t + 1 < n ? values[t + 1] : tail_value);
        double delta = rewards[t] + gamma * next_v - values[t];
        acc = done[t] ? delta : delta + gamma * acc;
        adv[t] = acc;
    }
    return adv;
}

// independent diagonal Gaussian log-density
inline double gaussian_logpdf(const std::vector<double>& mean, const std::vector<double>& sigma,
                              const std::vector<double>& x) {
    double lp = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        double z = (x[i] - mean[i]) / sigma[i];
        lp += -std::log(sigma[i]) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
    }
    return lp;
}

// relative/absolute tolerance check used by all gradient suites
inline bool grad_close(double analytic, double fd, double rel = 1e-4, double abs = 1e-7) {
    double diff = std::fabs(analytic - fd);
    double scale = std::max(std::fabs(analytic), std::fabs(fd));
    return diff <= std::max(abs, rel * scale);
}

} // namespace oracles

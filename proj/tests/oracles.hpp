#pragma once

// Independent reference implementations used only by tests. They follow
// the model definitions literally (bitmask subsets, per-subset products)
// and share no code with the library's evaluation path.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

struct Params {
  double gamma, alpha, b, g;
};

inline double sigmoid(const Params& q, double t) {
  return q.gamma / (1.0 + std::exp(-q.alpha * (t - q.b)));
}

struct Result {
  double test = 0.0;
  double mass = 0.0;
};

inline Result brute_force_test(const std::vector<Params>& ps, std::optional<std::size_t> preferred,
                               double baseline, double t) {
  const std::size_t n = ps.size();
  Result r;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double prob = 1.0;
    double g_sum = 0.0;
    int members = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = sigmoid(ps[i], t);
      if (mask >> i & 1u) {
        prob *= pi;
        g_sum += ps[i].g;
        ++members;
      } else {
        prob *= 1.0 - pi;
      }
    }
    double G = baseline;
    if (preferred && (mask >> *preferred & 1u)) {
      G = ps[*preferred].g;
    } else if (members > 0) {
      G = g_sum / members;
    }
    r.test += prob * G;
    r.mass += prob;
  }
  return r;
}

inline double brute_force_train(const std::vector<Params>& ps, double t) {
  // 1 - P(no pattern succeeds), computed as the sum over nonempty subsets.
  const std::size_t n = ps.size();
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = sigmoid(ps[i], t);
      prob *= (mask >> i & 1u) ? pi : 1.0 - pi;
    }
    total += prob;
  }
  return total;
}

}  // namespace oracle

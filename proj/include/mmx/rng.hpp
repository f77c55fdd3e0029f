#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace mmx {

/// Derives an independent stream seed from a master seed (splitmix64 mix).
/// Stage seeds in the pipeline all come from one master seed through this.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// mt19937_64 with hand-coded draw helpers. <random> distributions are
/// implementation-defined, so sampling goes through these to keep results
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  /// Uniform integer in [0, bound).
  int next_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::next_int: bound must be positive");
    int r = static_cast<int>(next_double() * static_cast<double>(bound));
    return r < bound ? r : bound - 1;
  }

  /// Standard normal via Box-Muller (one value per call; partner discarded).
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Index drawn proportionally to the (non-negative) weights.
  /// All-zero weights fall back to uniform.
  int pick_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return next_int(static_cast<int>(weights.size()));
    double target = next_double() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (target < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// k distinct indices from [0, n), ascending order (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int n, int k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + next_int(n - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mmx

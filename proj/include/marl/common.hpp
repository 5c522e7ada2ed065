#ifndef MARL_COMMON_HPP
#define MARL_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace marl {

inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void check(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

/// Deterministic RNG used everywhere randomness is needed. Sampling is
/// implemented on top of raw 53-bit uniforms so that results do not depend
/// on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // xorshift* generator; fixed algorithm keeps streams portable.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Index sampled from an (unnormalized is not allowed) categorical
  /// distribution. Ties and rounding resolve toward the lowest index.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    check(last_positive >= 0, "categorical: no positive mass");
    return last_positive;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform point on the probability simplex (Dirichlet(1,...,1)).
  std::vector<double> simplex_point(int dim) {
    std::vector<double> x(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
      double u = uniform();
      if (u <= 0.0) u = std::numeric_limits<double>::min();
      x[i] = -std::log(u);
      total += x[i];
    }
    for (double& v : x) v /= total;
    return x;
  }

 private:
  std::uint64_t state_;
};

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  check(a.size() == b.size(), "l1_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

inline bool is_distribution(std::span<const double> p, double tolerance = kProbTolerance) {
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) return false;
    total += v;
  }
  return std::abs(total - 1.0) <= tolerance;
}

inline double clamp_to(double x, double lo, double hi) { return std::max(lo, std::min(hi, x)); }

/// FNV-1a 64-bit hash, used to fingerprint serialized artifacts.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace marl

#endif  // MARL_COMMON_HPP

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace graphband {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// splitmix64 step, used to derive independent child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t s = master ^ (0xd1b54a32d192ed03ULL * (salt + 1));
  return splitmix64(s);
}

// Deterministic random stream.  The engine is std::mt19937_64 (whose output
// sequence is fixed by the standard) and every distribution is implemented
// explicitly here, so identical seeds give identical draws on any conforming
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller transform, cosine branch; u1 is shifted into (0, 1].
  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  int uniform_int(int n) {  // uniform over {0, ..., n-1}
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return static_cast<int>(uniform01() * n) % n;
  }

  // Sample an index from a probability vector by inverse CDF.  Falls back to
  // the last index with positive mass if rounding pushes u past the total.
  int categorical(const Vec& p) {
    if (p.size() == 0) throw std::invalid_argument("categorical: empty vector");
    const double u = uniform01() * p.sum();
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < p.size(); ++i) {
      if (p[i] < 0.0) throw std::invalid_argument("categorical: negative mass");
      if (p[i] > 0.0) last_positive = i;
      acc += p[i];
      if (u < acc) return i;
    }
    if (last_positive < 0)
      throw std::invalid_argument("categorical: all-zero vector");
    return last_positive;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// True when p is entrywise nonnegative and sums to 1 within tol.
inline bool is_distribution(const Vec& p, double tol = 1e-9) {
  if (p.size() == 0) return false;
  for (int i = 0; i < p.size(); ++i)
    if (p[i] < -tol) return false;
  return std::abs(p.sum() - 1.0) <= tol;
}

}  // namespace graphband

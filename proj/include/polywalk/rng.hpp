#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace pw {

// All randomness in the library flows through this wrapper. The engine is
// std::mt19937_64 (bit-exact everywhere), but the double-valued transforms are
// our own: std::uniform_real_distribution / std::normal_distribution are
// implementation-defined, which would break the reproducibility contract
// (identical trajectories for identical seeds, independent of platform and of
// thread count).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Canonical double in [0, 1): top 53 bits of one engine draw.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

  Eigen::VectorXd gauss_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss();
    return v;
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Splittable stream derivation: chain i of a run seeded with `master` uses
// Rng(chain_seed(master, i)). This is the splitmix64 output function applied to
// master + (i+1)*golden, i.e. independent, scheduling-free streams.
inline std::uint64_t chain_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace pw

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace rfm {

// Stable 64-bit child-seed derivation (FNV-1a over the master seed, a purpose
// tag and a run index).  Every random stream in the project is derived this
// way from a single master seed, so runs are reproducible and streams with
// different purposes never collide.  Well-known tags: "signals", "inputs",
// "features", "labels-noise", "test-inputs", "poly-noise".
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) {
  constexpr std::uint64_t offset = 0xcbf29ce484222325ull;
  constexpr std::uint64_t prime = 0x100000001b3ull;
  std::uint64_t h = offset;
  auto mix_byte = [&](std::uint8_t b) {
    h ^= b;
    h *= prime;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<std::uint8_t>(master >> (8 * i)));
  for (char c : tag) mix_byte(static_cast<std::uint8_t>(c));
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<std::uint8_t>(index >> (8 * i)));
  // One extra scramble so nearby indices do not produce nearby seeds.
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

// mt19937_64 plus explicit Box-Muller.  std::normal_distribution is not used
// because the standard leaves its algorithm unspecified and experiment output
// must be byte-for-byte reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Row-major fill so the draw order is part of the reproducibility contract.
inline void fill_normal(Eigen::Ref<Eigen::MatrixXd> m, Rng& rng) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
}

inline Eigen::VectorXd normal_vector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace rfm

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dlab {

/// Seeded, splittable random stream. Built only from pieces whose output the
/// C++ standard pins down (mt19937_64 and seed_seq), plus an explicit
/// 53-bit uniform conversion, so results are identical across platforms.
class RandomStream {
 public:
  static constexpr std::string_view kName = "mt19937_64/seed_seq/v1";

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent child stream identified by `index`.
  RandomStream split(std::uint64_t index) const;

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to (seed, index): a child seed for
/// independent sub-computations.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace dlab

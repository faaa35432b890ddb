#pragma once

#include <cstdint>

namespace osga {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Draw i of stream (seed, stream) is mix(seed, stream, i), so a value depends
/// only on its coordinates and not on how many draws other streams consumed.
/// All arithmetic is on fixed-width integers plus IEEE doubles, which keeps
/// sequences identical across compilers and standard libraries (unlike
/// std::uniform_real_distribution / std::normal_distribution).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent seed from a parent seed and a label (trial id, etc).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) noexcept;

}  // namespace osga

#include "osga/random.hpp"

#include <cmath>
#include <numbers>

namespace osga {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) noexcept {
  return splitmix64(splitmix64(parent) ^ (label * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(derive_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t c = counter_++;
  return splitmix64(key_ ^ splitmix64(c));
}

double CounterRng::uniform() noexcept {
  // 53 random bits, shifted by half an ulp so 0 is never produced
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace osga

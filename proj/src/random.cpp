#include "scorelab/random.hpp"

#include "scorelab/numerics.hpp"

namespace scorelab {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t key = mix64(seed ^ 0x5DEECE66DULL);
  const std::uint64_t bits = mix64(mix64(counter) ^ key);
  // 53 random bits, shifted by half an ulp so that 0 and 1 are excluded.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t counter) {
  return numerics::normal_quantile(counter_uniform(seed, counter));
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace scorelab

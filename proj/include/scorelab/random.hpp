#pragma once

#include <cstdint>
#include <random>

namespace scorelab {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based uniform variate in the open interval (0, 1), a pure function
/// of (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Standard normal variate by inversion of counter_uniform.
double counter_normal(std::uint64_t seed, std::uint64_t counter);

/// Independent generator for one trial of a randomized audit.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

}  // namespace scorelab

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace macwt {

// mt19937_64 is fully specified by the standard, so streams are identical on
// every platform. The distribution helpers below avoid <random> distributions,
// whose output is implementation-defined.
using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for the stream identified by (root, tags...). Distinct tag tuples give
// unrelated seeds.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) noexcept;

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

// Index drawn from a probability vector (entries need not sum exactly to 1;
// rounding slack goes to the last index with positive mass).
std::size_t draw_index(std::span<const double> probs, Rng& rng);

}  // namespace macwt

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops of the exact enumerator. Each kernel has a scalar reference and,
// on x86-64, an AVX2 variant; the variant is picked once at runtime from CPUID and can be
// pinned with PERCOLAB_SIMD=scalar|avx2. Variants are bit-identical: the scalar reductions
// use the same four-lane accumulation order as the vector code.

namespace percolab::simd {

enum class Level : std::uint8_t { scalar, avx2 };

[[nodiscard]] std::string_view level_name(Level level) noexcept;
[[nodiscard]] bool level_supported(Level level) noexcept;
/// Best level the host supports, ignoring overrides.
[[nodiscard]] Level detected_level() noexcept;
[[nodiscard]] Level active_level() noexcept;
/// Pin the level used by the dispatching entry points (tests, benchmarks). Throws if unsupported.
void set_active_level(Level level);

// Vertex sets are 32-bit masks; `endpoints[e]` has the two endpoint bits of edge e.
// Edge e is open in an item iff bit e of its open mask is set. The output is the closure of
// the seed set under open edges.

/// out[i] = closure(seed, open = first_config + i).
using ClosureEnumerateFn = void (*)(std::span<const std::uint32_t> endpoints, std::uint32_t seed,
                                    std::uint32_t first_config, std::span<std::uint32_t> out);
/// out[i] = closure(seeds[i], open_masks[i]).
using ClosureFn = void (*)(std::span<const std::uint32_t> endpoints, std::span<const std::uint32_t> open_masks,
                           std::span<const std::uint32_t> seeds, std::span<std::uint32_t> out);
using DotFn = double (*)(std::span<const double> a, std::span<const double> b);
/// out[i] = a[i] * b[i].
using MultiplyFn = void (*)(std::span<const double> a, std::span<const double> b, std::span<double> out);

struct KernelTable {
  ClosureEnumerateFn closure_enumerate;
  ClosureFn closure;
  DotFn dot;
  MultiplyFn multiply;
};

[[nodiscard]] const KernelTable& table(Level level);

// Dispatching entry points.
void closure_enumerate(std::span<const std::uint32_t> endpoints, std::uint32_t seed, std::uint32_t first_config,
                       std::span<std::uint32_t> out);
void closure(std::span<const std::uint32_t> endpoints, std::span<const std::uint32_t> open_masks,
             std::span<const std::uint32_t> seeds, std::span<std::uint32_t> out);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);

namespace scalar {
void closure_enumerate(std::span<const std::uint32_t>, std::uint32_t, std::uint32_t, std::span<std::uint32_t>);
void closure(std::span<const std::uint32_t>, std::span<const std::uint32_t>, std::span<const std::uint32_t>,
             std::span<std::uint32_t>);
double dot(std::span<const double>, std::span<const double>);
void multiply(std::span<const double>, std::span<const double>, std::span<double>);
}  // namespace scalar

namespace avx2 {
void closure_enumerate(std::span<const std::uint32_t>, std::uint32_t, std::uint32_t, std::span<std::uint32_t>);
void closure(std::span<const std::uint32_t>, std::span<const std::uint32_t>, std::span<const std::uint32_t>,
             std::span<std::uint32_t>);
double dot(std::span<const double>, std::span<const double>);
void multiply(std::span<const double>, std::span<const double>, std::span<double>);
}  // namespace avx2

}  // namespace percolab::simd

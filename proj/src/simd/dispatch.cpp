#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "percolab/simd/kernels.hpp"

namespace percolab::simd {

namespace {

constexpr KernelTable kScalar{&scalar::closure_enumerate, &scalar::closure, &scalar::dot, &scalar::multiply};

#if defined(PERCOLAB_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::closure_enumerate, &avx2::closure, &avx2::dot, &avx2::multiply};
#endif

Level initial_level() {
  Level level = detected_level();
  if (const char* env = std::getenv("PERCOLAB_SIMD")) {
    const std::string value(env);
    if (value == "scalar") {
      level = Level::scalar;
    } else if (value == "avx2" && level_supported(Level::avx2)) {
      level = Level::avx2;
    }
  }
  return level;
}

std::atomic<Level>& active() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
  }
  return "?";
}

bool level_supported(Level level) noexcept {
  switch (level) {
    case Level::scalar: return true;
    case Level::avx2:
#if defined(PERCOLAB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Level detected_level() noexcept { return level_supported(Level::avx2) ? Level::avx2 : Level::scalar; }

Level active_level() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
  if (!level_supported(level)) {
    throw std::invalid_argument("SIMD level " + std::string(level_name(level)) + " is not supported on this host");
  }
  active().store(level, std::memory_order_relaxed);
}

const KernelTable& table(Level level) {
#if defined(PERCOLAB_HAVE_AVX2)
  if (level == Level::avx2) {
    if (!level_supported(level)) throw std::invalid_argument("AVX2 is not supported on this host");
    return kAvx2;
  }
#endif
  if (level != Level::scalar) throw std::invalid_argument("SIMD level not compiled in");
  return kScalar;
}

void closure_enumerate(std::span<const std::uint32_t> endpoints, std::uint32_t seed, std::uint32_t first_config,
                       std::span<std::uint32_t> out) {
  table(active_level()).closure_enumerate(endpoints, seed, first_config, out);
}

void closure(std::span<const std::uint32_t> endpoints, std::span<const std::uint32_t> open_masks,
             std::span<const std::uint32_t> seeds, std::span<std::uint32_t> out) {
  table(active_level()).closure(endpoints, open_masks, seeds, out);
}

double dot(std::span<const double> a, std::span<const double> b) { return table(active_level()).dot(a, b); }

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  table(active_level()).multiply(a, b, out);
}

}  // namespace percolab::simd

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace percolab {

/// Fixed-length bit vector. Hex form: digit j (left to right) carries bits 4j..4j+3,
/// least significant bit first within the digit.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n, bool value = false);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  [[nodiscard]] bool operator[](std::size_t i) const noexcept { return get(i); }

  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] bool none() const noexcept { return count() == 0; }
  [[nodiscard]] bool all() const noexcept { return count() == size_; }

  /// Pointwise order: every set bit of *this is set in `other`.
  [[nodiscard]] bool is_subset_of(const BitVector& other) const;

  /// Low 64 bits as an integer (bit i -> bit i); requires size() <= 64.
  [[nodiscard]] std::uint64_t to_mask() const;
  static BitVector from_mask(std::uint64_t mask, std::size_t n);

  [[nodiscard]] std::string to_hex() const;
  static BitVector from_hex(std::string_view hex, std::size_t n);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// ω ∈ {0,1}^E, 1 = open.
struct EdgeConfig {
  BitVector bits;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

/// η ∈ {0,1}^V, 1 = green.
struct GhostConfig {
  BitVector bits;
  friend bool operator==(const GhostConfig&, const GhostConfig&) = default;
};

}  // namespace percolab

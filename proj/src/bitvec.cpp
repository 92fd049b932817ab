#include "percolab/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace percolab {

BitVector::BitVector(std::size_t n, bool value) : size_(n), words_((n + 63) / 64, 0) {
  if (value) {
    for (std::size_t i = 0; i < n; ++i) set(i, true);
  }
}

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::is_subset_of(const BitVector& other) const {
  if (other.size_ != size_) throw std::invalid_argument("bit vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

std::uint64_t BitVector::to_mask() const {
  if (size_ > 64) throw std::invalid_argument("bit vector longer than 64 bits");
  return words_.empty() ? 0 : words_[0];
}

BitVector BitVector::from_mask(std::uint64_t mask, std::size_t n) {
  if (n > 64) throw std::invalid_argument("mask longer than 64 bits");
  BitVector out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, (mask >> i) & 1U);
  return out;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((size_ + 3) / 4, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) {
      const auto d = static_cast<unsigned>(out[i / 4] >= 'a' ? out[i / 4] - 'a' + 10 : out[i / 4] - '0');
      out[i / 4] = kDigits[d | (1U << (i % 4))];
    }
  }
  return out;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t n) {
  if (hex.size() != (n + 3) / 4) throw std::invalid_argument("hex length does not match bit count");
  BitVector out(n);
  for (std::size_t j = 0; j < hex.size(); ++j) {
    const char c = hex[j];
    unsigned d = 0;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      d = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("invalid hex digit");
    }
    for (unsigned b = 0; b < 4; ++b) {
      const std::size_t i = 4 * j + b;
      if ((d >> b) & 1U) {
        if (i >= n) throw std::invalid_argument("hex sets bits past the end");
        out.set(i, true);
      }
    }
  }
  return out;
}

}  // namespace percolab

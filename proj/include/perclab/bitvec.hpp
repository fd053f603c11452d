#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "perclab/error.hpp"

namespace perclab {

// Fixed-length bit vector. Hex form: byte j carries bits 8j..8j+7 with bit 8j
// as the least significant bit; bytes are written in increasing j as two
// lowercase hex digits each.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(size) {
    trim();
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const noexcept { return test(i); }

  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void reset(std::size_t i) noexcept { set(i, false); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t bytes = (size_ + 7) / 8;
    std::string out;
    out.reserve(2 * bytes);
    for (std::size_t j = 0; j < bytes; ++j) {
      const auto byte = static_cast<unsigned>((words_[j / 8] >> (8 * (j % 8))) & 0xffu);
      out.push_back(kDigits[byte >> 4]);
      out.push_back(kDigits[byte & 0xf]);
    }
    return out;
  }

  static BitVector from_hex(std::string_view hex, std::size_t size) {
    const std::size_t bytes = (size + 7) / 8;
    if (hex.size() != 2 * bytes) {
      throw InvalidInput("hex bitstring has " + std::to_string(hex.size()) +
                         " digits, expected " + std::to_string(2 * bytes));
    }
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw InvalidInput(std::string("bad hex digit '") + c + "'");
    };
    BitVector bv(size);
    for (std::size_t j = 0; j < bytes; ++j) {
      const std::uint64_t byte = (nibble(hex[2 * j]) << 4) | nibble(hex[2 * j + 1]);
      bv.words_[j / 8] |= byte << (8 * (j % 8));
    }
    const std::size_t before = bv.count();
    bv.trim();
    if (bv.count() != before) throw InvalidInput("hex bitstring sets bits past its length");
    return bv;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace perclab

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tkdx/serialize.hpp"

namespace tkdx {

/// Number of bits needed to write any value in [0, max_value]; at least 1.
std::uint32_t bits_for(std::uint64_t max_value);

/// ceil(log2(x)) for x >= 1, 0 for x <= 1.
std::uint32_t ceil_log2(std::uint64_t x);

/// Static bit vector with constant-time rank and logarithmic select.
///
/// Positions are 1-based: `get(p)` for 1 <= p <= size(). `rank1(i)` counts the
/// set bits among positions 1..i, so `rank1(0) == 0`. `select1(j)` returns the
/// smallest i with `rank1(i) == j`.
class BitVector {
 public:
  BitVector() = default;

  /// All-zero vector of `n` bits.
  explicit BitVector(std::size_t n);

  /// Parses a string of '0'/'1' characters, position 1 first.
  static BitVector from_string(std::string_view bits);

  void push_back(bool bit);
  /// Sets position p (1-based). Invalidates the rank directory until `build_index`.
  void set(std::size_t p, bool bit = true);
  /// Builds the rank/select directory. Must be called after the last mutation.
  void build_index();

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool get(std::size_t p) const;

  std::size_t rank1(std::size_t i) const;
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }
  std::size_t ones() const { return ones_; }
  std::size_t zeros() const { return size_ - ones_; }

  /// Throws std::out_of_range unless 1 <= j <= ones().
  std::size_t select1(std::size_t j) const;
  /// Throws std::out_of_range unless 1 <= j <= zeros().
  std::size_t select0(std::size_t j) const;

  std::string to_string() const;

  /// Raw bits plus rank directory.
  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static BitVector load(Reader& r);

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  static constexpr std::size_t kWordsPerBlock = 8;  // 512-bit superblocks

  std::size_t checked_rank(std::size_t i) const;
  template <bool kOnes>
  std::size_t select_impl(std::size_t j) const;

  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> block_rank_ = {0};  // ones before each superblock; matches build_index() when empty
  std::vector<std::uint16_t> word_rank_;   // ones before each word inside its superblock
  std::size_t size_ = 0;
  std::size_t ones_ = 0;
  bool indexed_ = true;
};

/// Fixed-width packed unsigned integers, 0-based like a std::vector.
class IntVector {
 public:
  IntVector() = default;
  IntVector(std::size_t n, std::uint32_t width);

  /// Packs `values` with the smallest width that holds their maximum.
  static IntVector pack(std::span<const std::uint32_t> values);

  std::size_t size() const { return size_; }
  std::uint32_t width() const { return width_; }
  std::uint64_t get(std::size_t i) const;
  void set(std::size_t i, std::uint64_t value);
  std::uint64_t operator[](std::size_t i) const { return get(i); }

  std::uint64_t size_in_bits() const { return static_cast<std::uint64_t>(size_) * width_; }

  void save(Writer& w) const;
  static IntVector load(Reader& r);

 private:
  std::vector<std::uint64_t> words_ = {0};  // one spare word for straddling reads
  std::size_t size_ = 0;
  std::uint32_t width_ = 1;
};

}  // namespace tkdx

#include "tkdx/bits.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace tkdx {

std::uint32_t bits_for(std::uint64_t max_value) {
  return max_value == 0 ? 1u : static_cast<std::uint32_t>(std::bit_width(max_value));
}

std::uint32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0u : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

namespace {

// Position (0-based) of the r-th set bit of w, r >= 1.
inline unsigned select_in_word(std::uint64_t w, unsigned r) {
  for (unsigned k = 1; k < r; ++k) w &= w - 1;
  return static_cast<unsigned>(std::countr_zero(w));
}

}  // namespace

BitVector::BitVector(std::size_t n) : words_((n + 63) / 64, 0), size_(n) { build_index(); }

BitVector BitVector::from_string(std::string_view bits) {
  BitVector bv;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0/1");
    bv.push_back(c == '1');
  }
  bv.build_index();
  return bv;
}

void BitVector::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ % 64);
  ++size_;
  indexed_ = false;
}

void BitVector::set(std::size_t p, bool bit) {
  if (p < 1 || p > size_) throw std::out_of_range("BitVector::set position out of range");
  std::size_t i = p - 1;
  auto mask = std::uint64_t{1} << (i % 64);
  if (bit) {
    words_[i / 64] |= mask;
  } else {
    words_[i / 64] &= ~mask;
  }
  indexed_ = false;
}

void BitVector::build_index() {
  std::size_t blocks = (words_.size() + kWordsPerBlock - 1) / kWordsPerBlock;
  block_rank_.assign(blocks + 1, 0);
  word_rank_.assign(words_.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    block_rank_[b] = total;
    std::uint16_t inner = 0;
    for (std::size_t w = b * kWordsPerBlock; w < std::min(words_.size(), (b + 1) * kWordsPerBlock); ++w) {
      word_rank_[w] = inner;
      inner = static_cast<std::uint16_t>(inner + std::popcount(words_[w]));
    }
    total += inner;
  }
  block_rank_[blocks] = total;
  ones_ = total;
  indexed_ = true;
}

bool BitVector::get(std::size_t p) const {
  if (p < 1 || p > size_) throw std::out_of_range("BitVector::get position out of range");
  std::size_t i = p - 1;
  return (words_[i / 64] >> (i % 64)) & 1u;
}

std::size_t BitVector::rank1(std::size_t i) const {
  if (i > size_) throw std::out_of_range("BitVector::rank1 position out of range");
  return checked_rank(i);
}

std::size_t BitVector::checked_rank(std::size_t i) const {
  if (!indexed_) throw std::logic_error("BitVector used before build_index()");
  if (i == 0) return 0;
  std::size_t w = i / 64;
  std::size_t r = block_rank_[w / kWordsPerBlock];
  if (w < words_.size()) {
    r += word_rank_[w];
    std::size_t off = i % 64;
    if (off) r += std::popcount(words_[w] & ((std::uint64_t{1} << off) - 1));
  } else {
    // i == size_ and size_ is a multiple of 64
    r = ones_;
  }
  return r;
}

template <bool kOnes>
std::size_t BitVector::select_impl(std::size_t j) const {
  if (!indexed_) throw std::logic_error("BitVector used before build_index()");
  std::size_t have = kOnes ? ones_ : size_ - ones_;
  if (j < 1 || j > have) throw std::out_of_range("BitVector::select ordinal out of range");
  auto count_before_block = [&](std::size_t b) -> std::size_t {
    std::size_t ones = block_rank_[b];
    if constexpr (kOnes) return ones;
    return b * kWordsPerBlock * 64 - ones;
  };
  // last superblock whose prefix count is < j
  std::size_t lo = 0, hi = block_rank_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (count_before_block(mid) < j) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::size_t remaining = j - count_before_block(lo);
  for (std::size_t w = lo * kWordsPerBlock; w < words_.size(); ++w) {
    std::uint64_t word = kOnes ? words_[w] : ~words_[w];
    if constexpr (!kOnes) {
      if (w == words_.size() - 1 && size_ % 64) word &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
    auto c = static_cast<std::size_t>(std::popcount(word));
    if (remaining <= c) return w * 64 + select_in_word(word, static_cast<unsigned>(remaining)) + 1;
    remaining -= c;
  }
  throw std::logic_error("BitVector::select directory inconsistent");
}

std::size_t BitVector::select1(std::size_t j) const { return select_impl<true>(j); }
std::size_t BitVector::select0(std::size_t j) const { return select_impl<false>(j); }

std::string BitVector::to_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t p = 1; p <= size_; ++p) s.push_back(get(p) ? '1' : '0');
  return s;
}

std::uint64_t BitVector::size_in_bits() const {
  return 64ull * words_.size() + 64ull * block_rank_.size() + 16ull * word_rank_.size();
}

void BitVector::save(Writer& w) const {
  auto at = w.begin_section(Tag::kBitVector);
  w.put<std::uint64_t>(size_);
  w.put_vector(words_);
  w.end_section(at);
}

BitVector BitVector::load(Reader& r) {
  Reader s = r.section(Tag::kBitVector);
  BitVector bv;
  bv.size_ = s.get<std::uint64_t>();
  bv.words_ = s.get_vector<std::uint64_t>();
  if (bv.words_.size() != (bv.size_ + 63) / 64) throw FormatError("bit vector length mismatch");
  bv.build_index();
  return bv;
}

IntVector::IntVector(std::size_t n, std::uint32_t width)
    : words_((n * width + 63) / 64 + 1, 0), size_(n), width_(width) {
  if (width < 1 || width > 64) throw std::invalid_argument("IntVector width must be in [1,64]");
}

IntVector IntVector::pack(std::span<const std::uint32_t> values) {
  std::uint32_t mx = 0;
  for (auto v : values) mx = std::max(mx, v);
  IntVector iv(values.size(), bits_for(mx));
  for (std::size_t i = 0; i < values.size(); ++i) iv.set(i, values[i]);
  return iv;
}

std::uint64_t IntVector::get(std::size_t i) const {
  std::uint64_t bit = static_cast<std::uint64_t>(i) * width_;
  std::size_t w = bit / 64, off = bit % 64;
  std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
  std::uint64_t v = words_[w] >> off;
  if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
  return v & mask;
}

void IntVector::set(std::size_t i, std::uint64_t value) {
  if (i >= size_) throw std::out_of_range("IntVector::set index out of range");
  std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
  if (value & ~mask) throw std::out_of_range("IntVector::set value exceeds width");
  std::uint64_t bit = static_cast<std::uint64_t>(i) * width_;
  std::size_t w = bit / 64, off = bit % 64;
  words_[w] = (words_[w] & ~(mask << off)) | (value << off);
  if (off + width_ > 64) {
    std::size_t spill = off + width_ - 64;
    std::uint64_t hi_mask = (std::uint64_t{1} << spill) - 1;
    words_[w + 1] = (words_[w + 1] & ~hi_mask) | (value >> (64 - off));
  }
}

void IntVector::save(Writer& w) const {
  auto at = w.begin_section(Tag::kIntVector);
  w.put<std::uint64_t>(size_);
  w.put<std::uint32_t>(width_);
  w.put_vector(words_);
  w.end_section(at);
}

IntVector IntVector::load(Reader& r) {
  Reader s = r.section(Tag::kIntVector);
  IntVector iv;
  iv.size_ = s.get<std::uint64_t>();
  iv.width_ = s.get<std::uint32_t>();
  iv.words_ = s.get_vector<std::uint64_t>();
  if (iv.width_ < 1 || iv.width_ > 64 || iv.words_.size() != (iv.size_ * iv.width_ + 63) / 64 + 1) {
    throw FormatError("int vector shape mismatch");
  }
  return iv;
}

}  // namespace tkdx

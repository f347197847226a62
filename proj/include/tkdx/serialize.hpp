#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace tkdx {

/// Raised when a snapshot or payload cannot be decoded.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-byte type tags that prefix every serialized payload.
enum class Tag : std::uint8_t {
  kBitVector = 0x01,
  kIntVector = 0x02,
  kRmq = 0x03,
  kMonotone = 0x04,
  kPredecessor = 0x05,
  kWaveletTree = 0x06,
  kWaveletTopk = 0x07,
  kArray = 0x08,
  kCorpus = 0x10,
  kSuffixStructures = 0x11,
  kGst = 0x12,
  kDocArrayPlain = 0x13,
  kDocArrayWavelet = 0x14,
  kDocArrayCsaSim = 0x15,
  kSampledDocArray = 0x16,
  kMarkedTree = 0x17,
  kChainListing = 0x18,
  kLinearIndex = 0x20,
  kEntryTable = 0x21,
  kEncodedIndex = 0x22,
  kEncodedTable = 0x23,
  kGroupedIndex = 0x24,
};

/// Little-endian byte sink. Payloads are written as
/// `tag:u8 | length:u64 | bytes[length]`.
class Writer {
 public:
  template <class T>
    requires std::is_integral_v<T>
  void put(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      bytes_.push_back(static_cast<char>((u >> (8 * b)) & 0xFFu));
    }
  }

  void put_bytes(std::string_view s) {
    put<std::uint64_t>(s.size());
    bytes_.append(s);
  }

  template <class T>
    requires std::is_integral_v<T>
  void put_vector(std::span<const T> v) {
    put<std::uint64_t>(v.size());
    if constexpr (std::endian::native == std::endian::little) {
      bytes_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    } else {
      for (T x : v) put(x);
    }
  }
  template <class T>
  void put_vector(const std::vector<T>& v) {
    put_vector(std::span<const T>(v));
  }

  /// Opens a tagged section; returns a handle for `end_section`.
  std::size_t begin_section(Tag tag) {
    put(static_cast<std::uint8_t>(tag));
    std::size_t at = bytes_.size();
    put<std::uint64_t>(0);
    return at;
  }
  void end_section(std::size_t at) {
    std::uint64_t len = bytes_.size() - at - 8;
    for (std::size_t b = 0; b < 8; ++b) {
      bytes_[at + b] = static_cast<char>((len >> (8 * b)) & 0xFFu);
    }
  }

  const std::string& bytes() const { return bytes_; }
  std::string take() { return std::move(bytes_); }

 private:
  std::string bytes_;
};

/// Cursor over a byte buffer written by `Writer`.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
    requires std::is_integral_v<T>
  T get() {
    need(sizeof(T));
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      u |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::string get_bytes() {
    auto n = get<std::uint64_t>();
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  template <class T>
    requires std::is_integral_v<T>
  std::vector<T> get_vector() {
    auto n = get<std::uint64_t>();
    if (n > (bytes_.size() - pos_) / sizeof(T)) throw FormatError("truncated array payload");
    std::vector<T> v(n);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(v.data(), bytes_.data() + pos_, n * sizeof(T));
      pos_ += n * sizeof(T);
    } else {
      for (auto& x : v) x = get<T>();
    }
    return v;
  }

  /// Reads a section header, checks the tag and returns a reader over its payload.
  Reader section(Tag expected) {
    auto tag = get<std::uint8_t>();
    if (tag != static_cast<std::uint8_t>(expected)) {
      throw FormatError("unexpected payload tag " + std::to_string(tag) + ", wanted " +
                        std::to_string(static_cast<unsigned>(expected)));
    }
    auto len = get<std::uint64_t>();
    need(len);
    Reader sub(bytes_.substr(pos_, len));
    pos_ += len;
    return sub;
  }

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (n > bytes_.size() - pos_) throw FormatError("truncated payload");
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace tkdx

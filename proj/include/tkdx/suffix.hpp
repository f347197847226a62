#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tkdx/serialize.hpp"

namespace tkdx {

/// Suffix array of an integer string (values in [0, alphabet)), 0-based output.
/// Induced sorting (SA-IS), linear time.
std::vector<std::uint32_t> suffix_array_sais(std::span<const std::uint32_t> s, std::uint32_t alphabet);

/// Byte string -> integer string where `separator` maps below every other byte.
std::vector<std::uint32_t> remap_with_separator(std::string_view text, char separator);

/// SA, ISA and LCP of T, all 1-based (index 0 unused).
///
/// sa[i]  : text position of the i-th smallest suffix
/// isa[j] : rank of the suffix starting at j
/// lcp[i] : longest common prefix of suffixes sa[i-1] and sa[i]; lcp[1] = 0
struct SuffixStructures {
  std::vector<std::uint32_t> sa;
  std::vector<std::uint32_t> isa;
  std::vector<std::uint32_t> lcp;

  std::size_t size() const { return sa.empty() ? 0 : sa.size() - 1; }

  static SuffixStructures build(std::string_view text, char separator);

  std::uint64_t size_in_bits() const { return 32ull * (sa.size() + isa.size() + lcp.size()); }

  void save(Writer& w) const;
  static SuffixStructures load(Reader& r);
};

}  // namespace tkdx

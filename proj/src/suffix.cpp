#include "tkdx/suffix.hpp"

#include <algorithm>
#include <stdexcept>

namespace tkdx {

namespace {

// Induced sorting after Nong, Zhang and Chan; values of s lie in [0, upper].
std::vector<std::int32_t> sais(const std::vector<std::int32_t>& s, std::int32_t upper) {
  const auto n = static_cast<std::int32_t>(s.size());
  if (n == 0) return {};
  if (n == 1) return {0};
  if (n == 2) return s[0] < s[1] ? std::vector<std::int32_t>{0, 1} : std::vector<std::int32_t>{1, 0};

  std::vector<std::int32_t> sa(n);
  std::vector<char> is_s(n, 0);
  for (std::int32_t i = n - 2; i >= 0; --i) {
    is_s[i] = s[i] == s[i + 1] ? is_s[i + 1] : static_cast<char>(s[i] < s[i + 1]);
  }
  std::vector<std::int32_t> sum_l(upper + 1), sum_s(upper + 1);
  for (std::int32_t i = 0; i < n; ++i) {
    if (!is_s[i]) {
      ++sum_s[s[i]];
    } else {
      ++sum_l[s[i] + 1];
    }
  }
  for (std::int32_t c = 0; c <= upper; ++c) {
    sum_s[c] += sum_l[c];
    if (c < upper) sum_l[c + 1] += sum_s[c];
  }

  auto induce = [&](const std::vector<std::int32_t>& lms) {
    std::fill(sa.begin(), sa.end(), -1);
    std::vector<std::int32_t> buf(sum_s);
    for (auto d : lms) {
      if (d != n) sa[buf[s[d]]++] = d;
    }
    buf = sum_l;
    sa[buf[s[n - 1]]++] = n - 1;
    for (std::int32_t i = 0; i < n; ++i) {
      std::int32_t v = sa[i];
      if (v >= 1 && !is_s[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
    }
    buf = sum_l;
    for (std::int32_t i = n - 1; i >= 0; --i) {
      std::int32_t v = sa[i];
      if (v >= 1 && is_s[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
    }
  };

  std::vector<std::int32_t> lms_map(n + 1, -1);
  std::vector<std::int32_t> lms;
  for (std::int32_t i = 1; i < n; ++i) {
    if (!is_s[i - 1] && is_s[i]) {
      lms_map[i] = static_cast<std::int32_t>(lms.size());
      lms.push_back(i);
    }
  }
  const auto m = static_cast<std::int32_t>(lms.size());
  induce(lms);

  if (m) {
    std::vector<std::int32_t> sorted_lms;
    sorted_lms.reserve(m);
    for (std::int32_t v : sa) {
      if (lms_map[v] != -1) sorted_lms.push_back(v);
    }
    std::vector<std::int32_t> rec(m);
    std::int32_t rec_upper = 0;
    rec[lms_map[sorted_lms[0]]] = 0;
    for (std::int32_t i = 1; i < m; ++i) {
      std::int32_t l = sorted_lms[i - 1], r = sorted_lms[i];
      std::int32_t end_l = lms_map[l] + 1 < m ? lms[lms_map[l] + 1] : n;
      std::int32_t end_r = lms_map[r] + 1 < m ? lms[lms_map[r] + 1] : n;
      bool same = true;
      if (end_l - l != end_r - r) {
        same = false;
      } else {
        while (l < end_l && s[l] == s[r]) {
          ++l;
          ++r;
        }
        if (l == n || s[l] != s[r]) same = false;
      }
      if (!same) ++rec_upper;
      rec[lms_map[sorted_lms[i]]] = rec_upper;
    }
    auto rec_sa = sais(rec, rec_upper);
    for (std::int32_t i = 0; i < m; ++i) sorted_lms[i] = lms[rec_sa[i]];
    induce(sorted_lms);
  }
  return sa;
}

}  // namespace

std::vector<std::uint32_t> suffix_array_sais(std::span<const std::uint32_t> s, std::uint32_t alphabet) {
  if (s.size() >= 0x7FFFFFFFull) throw std::length_error("suffix array input too long");
  std::vector<std::int32_t> in(s.begin(), s.end());
  for (auto v : in) {
    if (v < 0 || static_cast<std::uint32_t>(v) >= alphabet) throw std::invalid_argument("symbol outside alphabet");
  }
  auto sa = sais(in, static_cast<std::int32_t>(alphabet) - 1);
  return {sa.begin(), sa.end()};
}

std::vector<std::uint32_t> remap_with_separator(std::string_view text, char separator) {
  std::vector<std::uint32_t> out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    out[i] = text[i] == separator ? 0u : 1u + static_cast<unsigned char>(text[i]);
  }
  return out;
}

SuffixStructures SuffixStructures::build(std::string_view text, char separator) {
  const std::size_t n = text.size();
  SuffixStructures ss;
  auto mapped = remap_with_separator(text, separator);
  auto sa0 = suffix_array_sais(mapped, 257);
  ss.sa.assign(n + 1, 0);
  ss.isa.assign(n + 1, 0);
  ss.lcp.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ss.sa[i + 1] = sa0[i] + 1;
    ss.isa[sa0[i] + 1] = static_cast<std::uint32_t>(i + 1);
  }
  // Kasai et al.
  std::size_t h = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t r = ss.isa[j];
    if (r > 1) {
      std::size_t k = ss.sa[r - 1];
      while (j + h <= n && k + h <= n && mapped[j + h - 1] == mapped[k + h - 1]) ++h;
      ss.lcp[r] = static_cast<std::uint32_t>(h);
      if (h > 0) --h;
    } else {
      h = 0;
    }
  }
  return ss;
}

void SuffixStructures::save(Writer& w) const {
  auto at = w.begin_section(Tag::kSuffixStructures);
  w.put_vector(sa);
  w.put_vector(lcp);
  w.end_section(at);
}

SuffixStructures SuffixStructures::load(Reader& r) {
  Reader s = r.section(Tag::kSuffixStructures);
  SuffixStructures ss;
  ss.sa = s.get_vector<std::uint32_t>();
  ss.lcp = s.get_vector<std::uint32_t>();
  if (ss.sa.empty() || ss.lcp.size() != ss.sa.size()) throw FormatError("suffix array payload shape mismatch");
  ss.isa.assign(ss.sa.size(), 0);
  for (std::size_t i = 1; i < ss.sa.size(); ++i) {
    if (ss.sa[i] < 1 || ss.sa[i] >= ss.sa.size()) throw FormatError("suffix array entry out of range");
    ss.isa[ss.sa[i]] = static_cast<std::uint32_t>(i);
  }
  return ss;
}

}  // namespace tkdx

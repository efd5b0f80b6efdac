#pragma once

// Bit strings, codebooks, and the three distances everything else is built
// on: Hamming, relative Hamming, and Chebyshev on the unit cube.  A length-L
// bit string is stored as the low L bits of a 32-bit word; bit i of the word
// is coordinate i, so the textual form "b3 b2 b1 b0" prints most significant
// coordinate first.

#include "racforge/rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace racforge {

inline constexpr int kMaxBits = 24;

inline void check_length(int length) {
  if (length < 1 || length > kMaxBits)
    throw std::invalid_argument("bit string length must be in [1, 24], got " +
                                std::to_string(length));
}

class bit_string {
 public:
  bit_string(std::uint32_t value, int length) : value_(value), length_(length) {
    check_length(length);
    if (length < 32 && (value >> length) != 0)
      throw std::invalid_argument("bit string value does not fit in its length");
  }

  // Parses "0111" (leftmost character is the most significant coordinate).
  static bit_string parse(std::string_view text) {
    check_length(static_cast<int>(text.size()));
    std::uint32_t v = 0;
    for (char c : text) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("bit string may contain only 0 and 1: " +
                                    std::string(text));
      v = (v << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return bit_string(v, static_cast<int>(text.size()));
  }

  int length() const { return length_; }
  std::uint32_t value() const { return value_; }

  int bit(int i) const {
    if (i < 0 || i >= length_)
      throw std::out_of_range("bit index " + std::to_string(i) + " out of range");
    return static_cast<int>((value_ >> i) & 1u);
  }

  std::string str() const {
    std::string out(static_cast<size_t>(length_), '0');
    for (int i = 0; i < length_; ++i)
      if ((value_ >> i) & 1u) out[static_cast<size_t>(length_ - 1 - i)] = '1';
    return out;
  }

  friend bool operator==(const bit_string& a, const bit_string& b) {
    return a.length_ == b.length_ && a.value_ == b.value_;
  }

 private:
  std::uint32_t value_;
  int length_;
};

inline void check_same_length(const bit_string& a, const bit_string& b) {
  if (a.length() != b.length())
    throw std::invalid_argument("bit strings have different lengths (" +
                                std::to_string(a.length()) + " vs " +
                                std::to_string(b.length()) + ")");
}

inline int hamming(const bit_string& a, const bit_string& b) {
  check_same_length(a, b);
  return std::popcount(a.value() ^ b.value());
}

inline Rat relative_hamming(const bit_string& a, const bit_string& b) {
  return Rat(hamming(a, b), a.length());
}

inline int parity(const bit_string& b) { return std::popcount(b.value()) & 1; }

// A point of [0,1]^L.  Construction rejects coordinates outside the cube by
// more than 1e-12 and clamps the rest, so downstream code can assume the box
// constraint holds exactly.
class real_point {
 public:
  explicit real_point(std::vector<double> coords) : coords_(std::move(coords)) {
    check_length(static_cast<int>(coords_.size()));
    for (double& c : coords_) {
      if (!(c > -1e-12) || !(c < 1.0 + 1e-12))
        throw std::invalid_argument("coordinate outside [0,1]: " + format_real(c));
      c = std::min(1.0, std::max(0.0, c));
    }
  }

  // Embeds a bit string with coordinate i of the string as coordinate i of
  // the point.
  explicit real_point(const bit_string& b)
      : coords_(static_cast<size_t>(b.length())) {
    for (int i = 0; i < b.length(); ++i) coords_[static_cast<size_t>(i)] = b.bit(i);
  }

  int dimension() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<size_t>(i)]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

inline double chebyshev(const real_point& x, const real_point& y) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("points have different dimensions");
  double m = 0.0;
  for (int i = 0; i < x.dimension(); ++i)
    m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

// A set of distinct equal-length bit strings, kept sorted by value so that
// equality, hashing and serialization are canonical per set.
class codebook {
 public:
  codebook(int length, std::vector<std::uint32_t> elements)
      : length_(length), elements_(std::move(elements)) {
    check_length(length);
    if (elements_.empty()) throw std::invalid_argument("codebook must be nonempty");
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
      throw std::invalid_argument("codebook contains duplicate elements");
    const std::uint32_t limit = (length_ < 32) ? (1u << length_) : 0xffffffffu;
    if (elements_.back() >= limit && length_ < 32)
      throw std::invalid_argument("codebook element does not fit in its length");
  }

  static codebook from_strings(const std::vector<std::string>& strings) {
    if (strings.empty()) throw std::invalid_argument("codebook must be nonempty");
    std::vector<std::uint32_t> vals;
    vals.reserve(strings.size());
    int length = static_cast<int>(strings.front().size());
    for (const auto& s : strings) {
      bit_string b = bit_string::parse(s);
      if (b.length() != length)
        throw std::invalid_argument("codebook strings have mixed lengths");
      vals.push_back(b.value());
    }
    return codebook(length, std::move(vals));
  }

  int length() const { return length_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<std::uint32_t>& elements() const { return elements_; }
  bit_string element(std::size_t j) const { return bit_string(elements_[j], length_); }

  bool contains(std::uint32_t v) const {
    return std::binary_search(elements_.begin(), elements_.end(), v);
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    out.reserve(elements_.size());
    for (auto v : elements_) out.push_back(bit_string(v, length_).str());
    return out;
  }

  friend bool operator==(const codebook& a, const codebook& b) {
    return a.length_ == b.length_ && a.elements_ == b.elements_;
  }
  friend bool operator<(const codebook& a, const codebook& b) {
    return a.elements_ < b.elements_;
  }

 private:
  int length_;
  std::vector<std::uint32_t> elements_;
};

inline codebook even_parity_class(int L) {
  check_length(L);
  std::vector<std::uint32_t> elems;
  for (std::uint32_t v = 0; v < (1u << L); ++v)
    if ((std::popcount(v) & 1) == 0) elems.push_back(v);
  return codebook(L, std::move(elems));
}

inline codebook full_cube(int L) {
  check_length(L);
  std::vector<std::uint32_t> elems(static_cast<size_t>(1) << L);
  std::iota(elems.begin(), elems.end(), 0u);
  return codebook(L, std::move(elems));
}

// Lexicographically least member of the orbit of S under coordinate
// permutations and XOR translations, comparing sorted element lists.  The
// minimal member always contains the all-zero string (translating by any
// element produces a smaller-or-equal set), so only |S| translations need to
// be tried; the permutation factor is explored exhaustively, which caps the
// supported length.
inline constexpr int kMaxCanonicalBits = 8;

inline codebook canonical_form(const codebook& S) {
  const int L = S.length();
  if (L > kMaxCanonicalBits)
    throw std::invalid_argument(
        "canonical_form explores all coordinate permutations and supports "
        "length <= 8");
  std::vector<int> perm(static_cast<size_t>(L));
  std::vector<std::uint32_t> best;
  std::vector<std::uint32_t> scratch(S.size());
  for (std::uint32_t t : S.elements()) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // perm[i] = destination coordinate of source coordinate i.
      for (size_t j = 0; j < S.size(); ++j) {
        const std::uint32_t e = S.elements()[j] ^ t;
        std::uint32_t mapped = 0;
        for (int i = 0; i < L; ++i)
          mapped |= ((e >> i) & 1u) << perm[static_cast<size_t>(i)];
        scratch[j] = mapped;
      }
      std::sort(scratch.begin(), scratch.end());
      if (best.empty() || scratch < best) best = scratch;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return codebook(L, std::move(best));
}

}  // namespace racforge

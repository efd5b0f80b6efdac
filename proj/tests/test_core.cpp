#include "racforge/core.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>
#include <set>

using namespace racforge;

namespace {

bit_string bs(const char* text) { return bit_string::parse(text); }

// Independent distance count used to cross-check the popcount implementation.
int slow_hamming(const bit_string& a, const bit_string& b) {
  int d = 0;
  for (int i = 0; i < a.length(); ++i) d += a.bit(i) != b.bit(i);
  return d;
}

}  // namespace

TEST_CASE("bit strings parse and print with the most significant bit first", "[core]") {
  bit_string b = bs("0111");
  CHECK(b.length() == 4);
  CHECK(b.value() == 7);
  CHECK(b.bit(0) == 1);
  CHECK(b.bit(3) == 0);
  CHECK(b.str() == "0111");
  CHECK(bit_string(7, 4) == b);

  CHECK_THROWS_AS(bit_string::parse("01x1"), std::invalid_argument);
  CHECK_THROWS_AS(bit_string(16, 4), std::invalid_argument);
  CHECK_THROWS_AS(bit_string(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(bit_string(0, 25), std::invalid_argument);
  CHECK_THROWS_AS(b.bit(4), std::out_of_range);
}

TEST_CASE("hamming distance", "[core]") {
  CHECK(hamming(bs("000"), bs("000")) == 0);
  CHECK(hamming(bs("000"), bs("011")) == 2);
  CHECK(hamming(bs("0000100"), bs("1010111")) == 4);
  CHECK_THROWS_AS(hamming(bs("00"), bs("000")), std::invalid_argument);
}

TEST_CASE("hamming agrees with a bitwise count and is a metric", "[core]") {
  const int L = 4;
  for (std::uint32_t x = 0; x < (1u << L); ++x)
    for (std::uint32_t y = 0; y < (1u << L); ++y) {
      bit_string a(x, L), b(y, L);
      const int d = hamming(a, b);
      CHECK(d == slow_hamming(a, b));
      CHECK(d == hamming(b, a));
      CHECK((d == 0) == (x == y));
      for (std::uint32_t z = 0; z < (1u << L); ++z) {
        bit_string c(z, L);
        CHECK(d <= hamming(a, c) + hamming(c, b));
      }
    }
}

TEST_CASE("relative hamming distance is exact", "[core]") {
  CHECK(relative_hamming(bs("000"), bs("011")) == Rat(2, 3));
  CHECK(relative_hamming(bs("01"), bs("01")) == 0);
  CHECK(relative_hamming(bs("0000011"), bs("0000100")) == Rat(3, 7));
  for (std::uint32_t x = 0; x < 16; ++x)
    for (std::uint32_t y = 0; y < 16; ++y) {
      const Rat r = relative_hamming(bit_string(x, 4), bit_string(y, 4));
      CHECK(r >= 0);
      CHECK(r <= 1);
      CHECK(r == Rat(hamming(bit_string(x, 4), bit_string(y, 4)), 4));
    }
}

TEST_CASE("parity", "[core]") {
  CHECK(parity(bs("0111")) == 1);
  CHECK(parity(bs("0000")) == 0);
  CHECK(parity(bs("1")) == 1);
  CHECK(parity(bs("110")) == 0);
}

TEST_CASE("real points validate and clamp the unit cube", "[core]") {
  real_point p({0.0, 1.0, 0.5});
  CHECK(p.dimension() == 3);
  CHECK(p[2] == 0.5);
  CHECK_THROWS_AS(real_point(std::vector<double>{0.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(real_point({-0.2}), std::invalid_argument);
  // Tiny overshoot from rounding is tolerated and clamped.
  real_point q({1.0 + 1e-13});
  CHECK(q[0] == 1.0);
}

TEST_CASE("chebyshev distance", "[core]") {
  CHECK(chebyshev(real_point({1, 0, 0}), real_point({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        Catch::Approx(2.0 / 3).margin(1e-15));
  CHECK(chebyshev(real_point(bs("01")), real_point(bs("01"))) == 0.0);
  CHECK_THROWS_AS(chebyshev(real_point({0.5}), real_point(std::vector<double>{0.5, 0.5})),
                  std::invalid_argument);
}

TEST_CASE("chebyshev restricted to bit strings is the disagreement indicator", "[core]") {
  const int L = 4;
  for (std::uint32_t x = 0; x < (1u << L); ++x)
    for (std::uint32_t y = 0; y < (1u << L); ++y) {
      const double d = chebyshev(real_point(bit_string(x, L)), real_point(bit_string(y, L)));
      CHECK(d == (x == y ? 0.0 : 1.0));
    }
}

TEST_CASE("codebooks are canonical containers", "[core]") {
  codebook S = codebook::from_strings({"11", "00"});
  CHECK(S.size() == 2);
  CHECK(S.elements() == std::vector<std::uint32_t>{0, 3});
  CHECK(S.strings() == std::vector<std::string>{"00", "11"});
  CHECK(S.contains(3));
  CHECK(!S.contains(1));
  CHECK_THROWS_AS(codebook(2, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(codebook(2, {4}), std::invalid_argument);
  CHECK_THROWS_AS(codebook::from_strings({"01", "001"}), std::invalid_argument);
  CHECK(even_parity_class(3).strings() ==
        std::vector<std::string>{"000", "011", "101", "110"});
  CHECK(full_cube(2).size() == 4);
}

namespace {

codebook apply_group_element(const codebook& S, const std::vector<int>& perm,
                             std::uint32_t translation) {
  std::vector<std::uint32_t> mapped;
  for (std::uint32_t e : S.elements()) {
    std::uint32_t v = 0;
    for (int i = 0; i < S.length(); ++i)
      v |= ((e >> i) & 1u) << perm[static_cast<size_t>(i)];
    mapped.push_back(v ^ translation);
  }
  return codebook(S.length(), std::move(mapped));
}

}  // namespace

TEST_CASE("canonical form of small sets", "[core]") {
  CHECK(canonical_form(codebook::from_strings({"11", "00"})).strings() ==
        std::vector<std::string>{"00", "11"});
  CHECK(canonical_form(codebook::from_strings({"01", "10"})).strings() ==
        std::vector<std::string>{"00", "11"});
  CHECK(canonical_form(even_parity_class(3)) == even_parity_class(3));
  CHECK_THROWS_AS(canonical_form(codebook(9, {0, 1})), std::invalid_argument);
}

TEST_CASE("canonical form is orbit-invariant and lexicographically least", "[core]") {
  // Exhaustively over the full symmetry group at L = 3, for a spread of sets.
  const int L = 3;
  std::vector<int> perm{0, 1, 2};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::set<std::uint32_t> pick;
    const int size = 1 + static_cast<int>(rng() % 5);
    while (static_cast<int>(pick.size()) < size) pick.insert(rng() % 8);
    codebook S(L, std::vector<std::uint32_t>(pick.begin(), pick.end()));
    codebook canon = canonical_form(S);
    CHECK(canon.elements() <= S.elements());
    CHECK(canonical_form(canon) == canon);
    std::sort(perm.begin(), perm.end());
    do {
      for (std::uint32_t t = 0; t < 8; ++t) {
        codebook moved = apply_group_element(S, perm, t);
        CHECK(canonical_form(moved) == canon);
        CHECK(canon.elements() <= moved.elements());
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("canonical form under random group elements at L = 6", "[core]") {
  const int L = 6;
  std::mt19937 rng(11);
  std::vector<int> perm{0, 1, 2, 3, 4, 5};
  for (int trial = 0; trial < 10; ++trial) {
    std::set<std::uint32_t> pick;
    const int size = 2 + static_cast<int>(rng() % 7);
    while (static_cast<int>(pick.size()) < size) pick.insert(rng() % 64);
    codebook S(L, std::vector<std::uint32_t>(pick.begin(), pick.end()));
    codebook canon = canonical_form(S);
    for (int g = 0; g < 5; ++g) {
      std::shuffle(perm.begin(), perm.end(), rng);
      codebook moved = apply_group_element(S, perm, rng() % 64);
      CHECK(canonical_form(moved) == canon);
    }
  }
}

#include "racforge/lp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace racforge;

namespace {

bit_string bs(const char* text) { return bit_string::parse(text); }

codebook random_codebook(int L, int size, std::mt19937& rng) {
  size = std::min(size, 1 << L);
  std::set<std::uint32_t> pick;
  while (static_cast<int>(pick.size()) < size)
    pick.insert(rng() % (1u << L));
  return codebook(L, std::vector<std::uint32_t>(pick.begin(), pick.end()));
}

double direct_hull_distance(const real_point& b, const codebook& S,
                            const std::vector<double>& w) {
  std::vector<double> y(static_cast<size_t>(S.length()), 0.0);
  for (size_t j = 0; j < S.size(); ++j) {
    const bit_string s = S.element(j);
    for (int i = 0; i < S.length(); ++i)
      y[static_cast<size_t>(i)] += w[j] * s.bit(i);
  }
  double m = 0.0;
  for (int i = 0; i < S.length(); ++i)
    m = std::max(m, std::abs(y[static_cast<size_t>(i)] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("simplex solves tiny double programs", "[lp]") {
  {
    // minimize t subject to t >= 1
    lp_problem<double> p;
    p.objective = {1.0};
    p.rows = {{-1.0}};
    p.rhs = {-1.0};
    p.senses = {row_sense::le};
    auto s = solve_lp(p);
    REQUIRE(s.status == lp_status::optimal);
    CHECK(s.objective == Catch::Approx(1.0).margin(1e-12));
  }
  {
    // maximize x subject to x <= 5
    lp_problem<double> p;
    p.maximize = true;
    p.objective = {1.0};
    p.rows = {{1.0}};
    p.rhs = {5.0};
    p.senses = {row_sense::le};
    auto s = solve_lp(p);
    REQUIRE(s.status == lp_status::optimal);
    CHECK(s.objective == Catch::Approx(5.0).margin(1e-12));
    CHECK(s.x[0] == Catch::Approx(5.0).margin(1e-12));
  }
  {
    // x <= -1 with x >= 0 is infeasible
    lp_problem<double> p;
    p.objective = {1.0};
    p.rows = {{1.0}};
    p.rhs = {-1.0};
    p.senses = {row_sense::le};
    CHECK(solve_lp(p).status == lp_status::infeasible);
  }
  {
    // maximize x subject to x >= 1 is unbounded
    lp_problem<double> p;
    p.maximize = true;
    p.objective = {1.0};
    p.rows = {{-1.0}};
    p.rhs = {-1.0};
    p.senses = {row_sense::le};
    CHECK(solve_lp(p).status == lp_status::unbounded);
  }
}

TEST_CASE("simplex in exact rational arithmetic", "[lp]") {
  lp_problem<Rat> p;
  p.objective = {Rat(1), Rat(1)};
  p.rows = {{Rat(-1), Rat(-2)}};
  p.rhs = {Rat(-3)};
  p.senses = {row_sense::le};
  auto s = solve_lp(p);
  REQUIRE(s.status == lp_status::optimal);
  CHECK(s.objective == Rat(3, 2));
  CHECK(s.x[1] == Rat(3, 2));

  // Equality constraints route through phase 1.
  lp_problem<Rat> q;
  q.objective = {Rat(2), Rat(3)};
  q.rows = {{Rat(1), Rat(1)}};
  q.rhs = {Rat(1)};
  q.senses = {row_sense::eq};
  auto t = solve_lp(q);
  REQUIRE(t.status == lp_status::optimal);
  CHECK(t.objective == Rat(2));
  CHECK(t.x[0] == Rat(1));
}

TEST_CASE("hull distance of a member point is zero with a point mass", "[lp]") {
  codebook S = codebook::from_strings({"000", "011", "101", "110"});
  for (size_t j = 0; j < S.size(); ++j) {
    auto r = cheb_dist_to_hull(real_point(S.element(j)), S);
    CHECK(r.distance == Catch::Approx(0.0).margin(1e-10));
    CHECK(r.weights[j] == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("hull distance from an odd vertex to the even parity class", "[lp]") {
  codebook S = even_parity_class(3);
  auto r = cheb_dist_to_hull(real_point(bs("100")), S);
  CHECK(r.distance == Catch::Approx(1.0 / 3).margin(1e-10));
  // The optimum is unique: equal thirds on 000, 101, 110 and nothing on 011.
  REQUIRE(r.weights.size() == 4);
  CHECK(r.weights[0] == Catch::Approx(1.0 / 3).margin(1e-9));
  CHECK(r.weights[1] == Catch::Approx(0.0).margin(1e-9));
  CHECK(r.weights[2] == Catch::Approx(1.0 / 3).margin(1e-9));
  CHECK(r.weights[3] == Catch::Approx(1.0 / 3).margin(1e-9));

  auto e = cheb_dist_to_hull_exact(bs("100"), S);
  CHECK(e.distance == Rat(1, 3));
  CHECK(e.weights[0] == Rat(1, 3));
  CHECK(e.weights[1] == 0);
}

TEST_CASE("odd vertices sit at distance 1/L from the even parity hull", "[lp]") {
  for (int L = 2; L <= 8; ++L) {
    codebook S = even_parity_class(L);
    for (std::uint32_t v = 0; v < (1u << L); ++v) {
      if ((std::popcount(v) & 1) == 0) continue;
      auto r = cheb_dist_to_hull(real_point(bit_string(v, L)), S);
      REQUIRE(r.distance == Catch::Approx(1.0 / L).margin(1e-10));
    }
  }
  // Exact confirmation on the smaller lengths.
  for (int L = 2; L <= 5; ++L) {
    codebook S = even_parity_class(L);
    for (std::uint32_t v = 0; v < (1u << L); ++v) {
      if ((std::popcount(v) & 1) == 0) continue;
      REQUIRE(cheb_dist_to_hull_exact(bit_string(v, L), S).distance == Rat(1, L));
    }
  }
}

TEST_CASE("hull distance solutions are consistent convex combinations", "[lp]") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int L = 2 + static_cast<int>(rng() % 4);
    codebook S = random_codebook(L, 1 + static_cast<int>(rng() % 6), rng);
    bit_string b(rng() % (1u << L), L);
    auto r = cheb_dist_to_hull(real_point(b), S);

    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w >= -1e-9);
      wsum += w;
    }
    CHECK(wsum == Catch::Approx(1.0).margin(1e-9));
    CHECK(r.distance ==
          Catch::Approx(chebyshev(real_point(b), r.witness)).margin(1e-9));
    CHECK(direct_hull_distance(real_point(b), S, r.weights) ==
          Catch::Approx(r.distance).margin(1e-9));

    // Membership characterization for cube vertices.
    CHECK((r.distance < 1e-9) == S.contains(b.value()));

    // Exact arithmetic agrees with the double solve.
    auto e = cheb_dist_to_hull_exact(b, S);
    CHECK(std::abs(to_double(e.distance) - r.distance) < 1e-9);
  }
}

TEST_CASE("adding hull points never increases the distance", "[lp]") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int L = 3 + static_cast<int>(rng() % 3);
    codebook S = random_codebook(L, 2 + static_cast<int>(rng() % 4), rng);
    bit_string b(rng() % (1u << L), L);
    const double before = cheb_dist_to_hull(real_point(b), S).distance;

    std::vector<std::uint32_t> grown = S.elements();
    std::uint32_t extra = rng() % (1u << L);
    while (S.contains(extra)) extra = (extra + 1) % (1u << L);
    grown.push_back(extra);
    const double after =
        cheb_dist_to_hull(real_point(b), codebook(L, grown)).distance;
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("optimal hull weights pass an edge perturbation certificate", "[lp]") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    const int L = 3 + static_cast<int>(rng() % 3);
    codebook S = random_codebook(L, 3 + static_cast<int>(rng() % 4), rng);
    bit_string b(rng() % (1u << L), L);
    auto r = cheb_dist_to_hull(real_point(b), S);

    const double eps = 1e-4;
    for (size_t from = 0; from < S.size(); ++from) {
      if (r.weights[from] < eps) continue;
      for (size_t to = 0; to < S.size(); ++to) {
        if (to == from) continue;
        std::vector<double> w = r.weights;
        w[from] -= eps;
        w[to] += eps;
        const double moved = direct_hull_distance(real_point(b), S, w);
        CHECK(moved >= r.distance - 1e-8);
      }
    }
  }
}

#pragma once

// A small dense two-phase primal simplex, templated on the scalar so the same
// pivoting code runs in double precision (fast search inner loops) and in
// exact rational arithmetic (certification of final answers).  Problems here
// are tiny, at most a few hundred variables, so no sparsity or factorization
// is attempted.  On top of it sits the one geometric query the design theory
// needs: Chebyshev distance from a point to the convex hull of a codebook.

#include "racforge/core.hpp"
#include "racforge/rational.hpp"

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace racforge {

enum class lp_status { optimal, infeasible, unbounded, iteration_limit };

enum class row_sense { le, eq };

template <class Scalar>
struct lp_problem {
  bool maximize = false;
  std::vector<Scalar> objective;
  std::vector<std::vector<Scalar>> rows;
  std::vector<Scalar> rhs;
  std::vector<row_sense> senses;
};

template <class Scalar>
struct lp_solution {
  lp_status status = lp_status::infeasible;
  Scalar objective{};
  std::vector<Scalar> x;
};

namespace detail {

// Comparison tolerances per scalar.  Rationals compare exactly; doubles get
// the usual simplex epsilons.
template <class Scalar>
struct lp_tol {
  static Scalar reduced_cost() { return Scalar(0); }
  static Scalar pivot() { return Scalar(0); }
  static Scalar feasibility() { return Scalar(0); }
};

template <>
struct lp_tol<double> {
  static double reduced_cost() { return 1e-9; }
  static double pivot() { return 1e-11; }
  static double feasibility() { return 1e-8; }
};

}  // namespace detail

template <class Scalar>
lp_solution<Scalar> solve_lp(const lp_problem<Scalar>& prob) {
  const std::size_t n = prob.objective.size();
  const std::size_t m = prob.rows.size();
  if (prob.rhs.size() != m || prob.senses.size() != m)
    throw std::invalid_argument("lp problem has inconsistent row counts");
  for (const auto& row : prob.rows)
    if (row.size() != n)
      throw std::invalid_argument("lp row width does not match objective length");

  const Scalar zero(0), one(1);
  const Scalar rc_tol = detail::lp_tol<Scalar>::reduced_cost();
  const Scalar pv_tol = detail::lp_tol<Scalar>::pivot();

  // Normalize to nonnegative rhs; a flipped 'le' becomes 'ge'.
  enum class sense3 { le, ge, eq };
  std::vector<sense3> senses(m);
  std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(n, zero));
  std::vector<Scalar> b(m, zero);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = prob.rhs[i] < zero;
    b[i] = flip ? Scalar(-prob.rhs[i]) : prob.rhs[i];
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = flip ? Scalar(-prob.rows[i][j]) : prob.rows[i][j];
    if (prob.senses[i] == row_sense::eq)
      senses[i] = sense3::eq;
    else
      senses[i] = flip ? sense3::ge : sense3::le;
  }

  // Column layout: structural | slack or surplus | artificial | rhs.
  std::size_t slack_count = 0, art_count = 0;
  for (auto s : senses) {
    if (s != sense3::eq) ++slack_count;
    if (s != sense3::le) ++art_count;
  }
  const std::size_t slack0 = n;
  const std::size_t art0 = n + slack_count;
  const std::size_t total = art0 + art_count;
  const std::size_t rhs_col = total;

  // Constraint rows plus one cost row at index m; cost rhs holds the negated
  // running objective.
  std::vector<std::vector<Scalar>> t(m + 1, std::vector<Scalar>(total + 1, zero));
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_artificial(total, false);

  std::size_t next_slack = slack0, next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][rhs_col] = b[i];
    switch (senses[i]) {
      case sense3::le:
        t[i][next_slack] = one;
        basis[i] = next_slack++;
        break;
      case sense3::ge:
        t[i][next_slack] = Scalar(-1);
        ++next_slack;
        t[i][next_art] = one;
        is_artificial[next_art] = true;
        basis[i] = next_art++;
        break;
      case sense3::eq:
        t[i][next_art] = one;
        is_artificial[next_art] = true;
        basis[i] = next_art++;
        break;
    }
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const Scalar p = t[pr][pc];
    for (std::size_t j = 0; j <= total; ++j) t[pr][j] = t[pr][j] / p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const Scalar f = t[i][pc];
      if (f == zero) continue;
      for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  };

  const std::size_t dantzig_limit = 10 * (m + total);
  const std::size_t iter_limit = 50 * (m + total) + 200;

  // Runs the pivot loop on whatever cost row is currently installed.
  enum class phase_result { optimal, unbounded, out_of_iterations };
  std::size_t iterations = 0;
  auto optimize = [&](const std::vector<bool>& allowed) -> phase_result {
    for (;;) {
      if (++iterations > iter_limit) return phase_result::out_of_iterations;
      const bool bland = iterations > dantzig_limit;
      std::size_t enter = total;
      Scalar best = -rc_tol;
      for (std::size_t j = 0; j < total; ++j) {
        if (!allowed[j]) continue;
        const Scalar c = t[m][j];
        if (bland) {
          if (c < -rc_tol) {
            enter = j;
            break;
          }
        } else if (c < best) {
          best = c;
          enter = j;
        }
      }
      if (enter == total) return phase_result::optimal;

      std::size_t leave = m;
      Scalar best_ratio = zero;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= pv_tol) continue;
        const Scalar ratio = t[i][rhs_col] / t[i][enter];
        if (leave == m || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == m) return phase_result::unbounded;
      pivot(leave, enter);
    }
  };

  lp_solution<Scalar> out;
  if (art_count > 0) {
    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j <= total; ++j) t[m][j] = zero;
    for (std::size_t j = art0; j < total; ++j) t[m][j] = one;
    for (std::size_t i = 0; i < m; ++i)
      if (is_artificial[basis[i]])
        for (std::size_t j = 0; j <= total; ++j) t[m][j] -= t[i][j];
    std::vector<bool> allowed(total, true);
    const auto r1 = optimize(allowed);
    if (r1 == phase_result::out_of_iterations) {
      out.status = lp_status::iteration_limit;
      return out;
    }
    if (r1 == phase_result::unbounded)
      throw std::logic_error("phase 1 of the simplex cannot be unbounded");
    const Scalar residual = -t[m][rhs_col];
    if (residual > detail::lp_tol<Scalar>::feasibility()) {
      out.status = lp_status::infeasible;
      return out;
    }
    // Kick artificials out of the basis where possible; rows where no
    // pivot exists are redundant and harmless since the artificial sits
    // at zero and is barred from re-entering.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial[basis[i]]) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (t[i][j] > pv_tol || t[i][j] < -pv_tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 cost row: install the real objective (negated for maximize)
  // and price out the basic columns.
  for (std::size_t j = 0; j <= total; ++j) t[m][j] = zero;
  for (std::size_t j = 0; j < n; ++j)
    t[m][j] = prob.maximize ? Scalar(-prob.objective[j]) : prob.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const Scalar c = t[m][basis[i]];
    if (c == zero) continue;
    for (std::size_t j = 0; j <= total; ++j) t[m][j] -= c * t[i][j];
  }
  std::vector<bool> allowed(total, true);
  for (std::size_t j = art0; j < total; ++j) allowed[j] = false;
  const auto r2 = optimize(allowed);
  if (r2 == phase_result::out_of_iterations) {
    out.status = lp_status::iteration_limit;
    return out;
  }
  if (r2 == phase_result::unbounded) {
    out.status = lp_status::unbounded;
    return out;
  }

  out.status = lp_status::optimal;
  out.x.assign(n, zero);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = t[i][rhs_col];
  Scalar val = zero;
  for (std::size_t j = 0; j < n; ++j) val += prob.objective[j] * out.x[j];
  out.objective = val;
  return out;
}

// Distance in the Chebyshev norm from a point of the unit cube to the convex
// hull of a finite point set, together with optimal hull weights and the
// witness point they define.  Solved as: minimize t subject to
// |sum_j w_j s_j[i] - b[i]| <= t per coordinate and sum_j w_j = 1, w >= 0.
template <class Scalar>
struct hull_distance_result_t {
  Scalar distance{};
  std::vector<Scalar> weights;
  std::vector<Scalar> witness;
};

template <class Scalar>
hull_distance_result_t<Scalar> cheb_dist_to_hull_impl(
    const std::vector<Scalar>& target, const std::vector<std::vector<Scalar>>& points) {
  if (points.empty()) throw std::invalid_argument("hull of an empty point set");
  const std::size_t dim = target.size();
  for (const auto& p : points)
    if (p.size() != dim)
      throw std::invalid_argument("hull point dimension mismatch");
  const std::size_t npts = points.size();

  lp_problem<Scalar> prob;
  prob.objective.assign(npts + 1, Scalar(0));
  prob.objective[npts] = Scalar(1);
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Scalar> up(npts + 1, Scalar(0)), down(npts + 1, Scalar(0));
    for (std::size_t j = 0; j < npts; ++j) {
      up[j] = points[j][i];
      down[j] = Scalar(-points[j][i]);
    }
    up[npts] = Scalar(-1);
    down[npts] = Scalar(-1);
    prob.rows.push_back(std::move(up));
    prob.rhs.push_back(target[i]);
    prob.senses.push_back(row_sense::le);
    prob.rows.push_back(std::move(down));
    prob.rhs.push_back(Scalar(-target[i]));
    prob.senses.push_back(row_sense::le);
  }
  std::vector<Scalar> sum_row(npts + 1, Scalar(1));
  sum_row[npts] = Scalar(0);
  prob.rows.push_back(std::move(sum_row));
  prob.rhs.push_back(Scalar(1));
  prob.senses.push_back(row_sense::eq);

  const auto sol = solve_lp(prob);
  if (sol.status != lp_status::optimal)
    throw std::runtime_error("hull distance LP did not reach an optimum");

  hull_distance_result_t<Scalar> out;
  out.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(npts));
  out.distance = sol.x[npts];
  out.witness.assign(dim, Scalar(0));
  for (std::size_t j = 0; j < npts; ++j)
    for (std::size_t i = 0; i < dim; ++i)
      out.witness[i] += out.weights[j] * points[j][i];
  return out;
}

struct hull_distance_result {
  double distance = 0.0;
  std::vector<double> weights;
  real_point witness;
};

inline hull_distance_result cheb_dist_to_hull(const real_point& b,
                                              const std::vector<real_point>& points) {
  std::vector<std::vector<double>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(p.coords());
  auto r = cheb_dist_to_hull_impl<double>(b.coords(), pts);
  // The witness is a convex combination of cube points; snap float dust back
  // into the cube before wrapping it.
  for (double& c : r.witness) c = std::min(1.0, std::max(0.0, c));
  return hull_distance_result{r.distance, std::move(r.weights), real_point(r.witness)};
}

inline hull_distance_result cheb_dist_to_hull(const real_point& b, const codebook& S) {
  if (b.dimension() != S.length())
    throw std::invalid_argument("point and codebook dimensions differ");
  std::vector<real_point> pts;
  pts.reserve(S.size());
  for (std::size_t j = 0; j < S.size(); ++j) pts.emplace_back(S.element(j));
  return cheb_dist_to_hull(b, pts);
}

inline hull_distance_result_t<Rat> cheb_dist_to_hull_exact(const bit_string& b,
                                                           const codebook& S) {
  if (b.length() != S.length())
    throw std::invalid_argument("point and codebook dimensions differ");
  std::vector<Rat> target(static_cast<std::size_t>(b.length()));
  for (int i = 0; i < b.length(); ++i) target[static_cast<std::size_t>(i)] = b.bit(i);
  std::vector<std::vector<Rat>> pts(S.size(),
                                    std::vector<Rat>(static_cast<std::size_t>(S.length())));
  for (std::size_t j = 0; j < S.size(); ++j) {
    const bit_string s = S.element(j);
    for (int i = 0; i < S.length(); ++i) pts[j][static_cast<std::size_t>(i)] = s.bit(i);
  }
  return cheb_dist_to_hull_impl<Rat>(target, pts);
}

}  // namespace racforge

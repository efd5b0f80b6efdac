#pragma once

// Codebook design.  Two objectives are supported, both minimized over size
// 2^k subsets of the length-L hypercube:
//
//   average    expected fractional Hamming distance from a uniform input to
//              its nearest codeword; 1 minus this is the best average
//              decoding success any code over that codebook can reach
//   worst-case largest Chebyshev distance from an input vertex to the convex
//              hull of the codebook; 1 minus this is the best worst-case
//              success, and restricting to binary codebooks is only known to
//              be optimal conditionally, so results carry a flag
//
// Both objectives are invariant under coordinate permutations and XOR
// translations, so every search fixes the all-zero word into the codebook,
// and the pruned searches additionally force the smallest nonzero codeword
// into the form 2^w - 1 (any minimum-weight element can be permuted there).

#include "racforge/core.hpp"
#include "racforge/lp.hpp"
#include "racforge/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace racforge {

// Enumeration state is O(2^L) per search node; beyond this the searches are
// hopeless anyway and the formula layer in bounds.hpp is the right tool.
inline constexpr int kMaxSearchBits = 16;

// --- objective evaluation ---------------------------------------------------

namespace detail {

inline std::uint64_t nearest_distance_total(int L, const std::vector<std::uint32_t>& set) {
  std::uint64_t total = 0;
  for (std::uint32_t b = 0; b < (1u << L); ++b) {
    int dmin = L;
    for (std::uint32_t s : set) dmin = std::min(dmin, std::popcount(b ^ s));
    total += static_cast<std::uint64_t>(dmin);
  }
  return total;
}

}  // namespace detail

// (1/2^L) sum_b min_{s in S} d_H(b,s) / L
inline Rat mean_min_distance(const codebook& S) {
  const int L = S.length();
  return Rat(Int(detail::nearest_distance_total(L, S.elements())),
             Int(L) * (Int(1) << L));
}

struct hull_scan_result {
  double value = 0.0;
  std::uint32_t witness = 0;  // word attaining the maximum
};

// max_b chebyshev distance from b to conv(S), by LP per word.  Words are
// visited by decreasing nearest-codeword distance (hull distance is at least
// d_H/L, so these force the maximum early); a word whose distance to the
// column-mean mixture is already below the running maximum cannot raise it
// and skips its LP.  If `abort_at` is finite, the scan stops once the running
// maximum reaches it and the result is only a lower bound.
inline hull_scan_result max_hull_distance_scan(
    const codebook& S, double abort_at = std::numeric_limits<double>::infinity()) {
  const int L = S.length();
  const std::uint32_t universe = 1u << L;
  std::vector<double> mean(static_cast<std::size_t>(L), 0.0);
  for (std::uint32_t s : S.elements())
    for (int i = 0; i < L; ++i) mean[static_cast<std::size_t>(i)] += (s >> i) & 1u;
  for (double& m : mean) m /= static_cast<double>(S.size());

  std::vector<std::pair<int, std::uint32_t>> order;
  order.reserve(universe);
  for (std::uint32_t b = 0; b < universe; ++b) {
    int dmin = L;
    for (std::uint32_t s : S.elements()) dmin = std::min(dmin, std::popcount(b ^ s));
    if (dmin > 0) order.emplace_back(dmin, b);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  hull_scan_result out;
  out.witness = S.elements().front();
  for (const auto& [dh, b] : order) {
    if (out.value >= abort_at) break;
    double ub = 0.0;
    for (int i = 0; i < L; ++i)
      ub = std::max(ub, std::abs(static_cast<double>((b >> i) & 1u) -
                                 mean[static_cast<std::size_t>(i)]));
    if (ub <= out.value) continue;
    const auto r = cheb_dist_to_hull(real_point(bit_string(b, L)), S);
    if (r.distance > out.value) {
      out.value = r.distance;
      out.witness = b;
    }
  }
  return out;
}

inline double max_hull_distance(const codebook& S) {
  return max_hull_distance_scan(S).value;
}

inline Rat max_hull_distance_exact(const codebook& S) {
  const int L = S.length();
  Rat best = 0;
  for (std::uint32_t b = 0; b < (1u << L); ++b) {
    if (S.contains(b)) continue;
    const auto r = cheb_dist_to_hull_exact(bit_string(b, L), S);
    if (r.distance > best) best = r.distance;
  }
  return best;
}

// --- search configuration ----------------------------------------------------

enum class design_objective { average, worst_case };
enum class search_strategy { exhaustive, branch_and_bound, local };

inline const char* design_objective_name(design_objective o) {
  return o == design_objective::average ? "average" : "worst-case";
}

inline const char* search_strategy_name(search_strategy s) {
  switch (s) {
    case search_strategy::exhaustive: return "exhaustive";
    case search_strategy::branch_and_bound: return "branch-and-bound";
    case search_strategy::local: return "local";
  }
  return "?";
}

inline design_objective parse_design_objective(std::string_view s) {
  if (s == "average" || s == "avg") return design_objective::average;
  if (s == "worst-case" || s == "worst") return design_objective::worst_case;
  throw std::invalid_argument("unknown objective '" + std::string(s) +
                              "' (want average or worst-case)");
}

inline search_strategy parse_search_strategy(std::string_view s) {
  if (s == "exhaustive") return search_strategy::exhaustive;
  if (s == "bnb" || s == "branch-and-bound") return search_strategy::branch_and_bound;
  if (s == "local") return search_strategy::local;
  throw std::invalid_argument("unknown strategy '" + std::string(s) +
                              "' (want exhaustive, bnb, or local)");
}

struct search_budget {
  std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
  double time_limit_seconds = 0.0;  // <= 0 disables the time limit
};

struct design_result {
  design_objective objective = design_objective::average;
  search_strategy strategy = search_strategy::exhaustive;
  int L = 0;
  int k = 0;
  bool found = false;
  std::optional<codebook> S;  // canonicalized when L allows it
  numeric_value dissimilarity;
  numeric_value success;
  bool proven = false;  // search space fully covered within budget
  bool conditional_on_conjecture = false;
  bool budget_exhausted = false;
  std::uint64_t nodes = 0;
  std::uint64_t seed = 0;
  int starts = 0;
  double seconds = 0.0;
};

// --- search internals ---------------------------------------------------------

namespace detail {

inline std::vector<std::uint64_t> hamming_shell_sizes(int L) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(L) + 1, 1);
  for (int h = 1; h <= L; ++h)
    row[static_cast<std::size_t>(h)] =
        row[static_cast<std::size_t>(h - 1)] * static_cast<std::uint64_t>(L - h + 1) /
        static_cast<std::uint64_t>(h);
  return row;
}

struct search_clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double limit = 0.0;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  bool expired() const { return limit > 0.0 && elapsed() >= limit; }
};

struct search_counters {
  std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
  const search_clock* clock = nullptr;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> exhausted{false};

  bool tick() {
    if (exhausted.load(std::memory_order_relaxed)) return false;
    const std::uint64_t n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > node_limit || ((n & 1023u) == 0 && clock != nullptr && clock->expired())) {
      exhausted.store(true, std::memory_order_relaxed);
      return false;
    }
    return true;
  }

  std::uint64_t visited() const {
    return std::min(nodes.load(std::memory_order_relaxed), node_limit);
  }
};

// Runs fn(0..count-1), spreading the calls over `jobs` threads.
template <typename Fn>
inline void run_indexed_tasks(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> head{0};
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&head, count, &fn] {
      for (;;) {
        const std::size_t i = head.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

inline bool low_block_word(std::uint32_t c) { return c > 0 && (c & (c + 1)) == 0; }

// Greedy relaxation bound: r additional codewords can place at most
// r * C(L,h) words at distance exactly h, so pair the currently farthest
// words with the smallest shells and sum what remains.
inline std::uint64_t avg_completion_bound(const std::vector<std::uint8_t>& d,
                                          std::size_t r, int L,
                                          const std::vector<std::uint64_t>& shell) {
  std::uint64_t total = 0;
  std::array<std::uint64_t, kMaxSearchBits + 1> hist{};
  for (std::uint8_t v : d) {
    ++hist[v];
    total += v;
  }
  if (r == 0) return total;
  std::uint64_t reduction = 0;
  int h = 0;
  std::uint64_t cap = r * shell[0];
  int v = L;
  std::uint64_t avail = hist[static_cast<std::size_t>(L)];
  while (v > h) {
    if (avail == 0) {
      --v;
      avail = hist[static_cast<std::size_t>(v)];
      continue;
    }
    if (cap == 0) {
      ++h;
      if (h >= v) break;
      cap = r * shell[static_cast<std::size_t>(h)];
      continue;
    }
    const std::uint64_t take = std::min(avail, cap);
    reduction += take * static_cast<std::uint64_t>(v - h);
    avail -= take;
    cap -= take;
  }
  return total - reduction;
}

// Hull distance from a vertex is at least its fractional Hamming distance to
// the codebook, and r extra codewords cover at most r * ball(h) words within
// radius h; if more words than that are farther, some completion vertex stays
// at distance h+1 or more.
inline double worst_completion_bound(const std::vector<std::uint8_t>& d, std::size_t r,
                                     int L, const std::vector<std::uint64_t>& ball) {
  std::array<std::uint64_t, kMaxSearchBits + 1> hist{};
  for (std::uint8_t v : d) ++hist[v];
  std::uint64_t beyond = 0;  // words with distance > h, filled from the top
  int best = 0;
  for (int h = L - 1; h >= 0; --h) {
    beyond += hist[static_cast<std::size_t>(h) + 1];
    if (beyond > r * ball[static_cast<std::size_t>(h)]) {
      best = h + 1;
      break;
    }
  }
  return static_cast<double>(best) / static_cast<double>(L);
}

struct avg_shared {
  int L = 0;
  std::size_t target = 0;
  bool prune = false;
  std::vector<std::uint64_t> shell;
  search_counters* counters = nullptr;
  std::mutex mtx;
  std::atomic<std::uint64_t> best_total{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::uint32_t> best_set;

  void offer(std::uint64_t total, const std::vector<std::uint32_t>& set) {
    std::lock_guard<std::mutex> g(mtx);
    if (total < best_total.load(std::memory_order_relaxed)) {
      best_set = set;
      std::sort(best_set.begin(), best_set.end());
      best_total.store(total, std::memory_order_relaxed);
    }
  }
};

inline void refine_distances(const std::vector<std::uint8_t>& d, std::uint32_t c,
                             std::vector<std::uint8_t>& out, std::uint64_t& total) {
  out = d;
  for (std::uint32_t b = 0; b < out.size(); ++b) {
    const int nd = std::popcount(b ^ c);
    if (nd < out[b]) {
      total -= static_cast<std::uint64_t>(out[b] - nd);
      out[b] = static_cast<std::uint8_t>(nd);
    }
  }
}

inline void avg_dfs(avg_shared& sh, std::uint32_t next, std::vector<std::uint32_t>& chosen,
                    const std::vector<std::uint8_t>& d, std::uint64_t total) {
  if (!sh.counters->tick()) return;
  const std::size_t need = sh.target - chosen.size();
  if (sh.prune &&
      avg_completion_bound(d, need, sh.L, sh.shell) >=
          sh.best_total.load(std::memory_order_relaxed))
    return;
  if (need == 0) {
    sh.offer(total, chosen);
    return;
  }
  const std::uint32_t universe = 1u << sh.L;
  for (std::uint32_t c = next; c < universe; ++c) {
    if (universe - c < need) break;
    if (sh.prune && chosen.size() == 1 && !low_block_word(c)) continue;
    std::vector<std::uint8_t> d2;
    std::uint64_t t2 = total;
    refine_distances(d, c, d2, t2);
    chosen.push_back(c);
    avg_dfs(sh, c + 1, chosen, d2, t2);
    chosen.pop_back();
    if (sh.counters->exhausted.load(std::memory_order_relaxed)) return;
  }
}

struct worst_shared {
  int L = 0;
  std::size_t target = 0;
  bool prune = false;
  std::vector<std::uint64_t> ball;  // cumulative shell sizes
  search_counters* counters = nullptr;
  std::mutex mtx;
  std::atomic<double> best_value{2.0};
  bool have = false;
  std::vector<std::uint32_t> best_set;

  void offer(double v, const std::vector<std::uint32_t>& set) {
    std::lock_guard<std::mutex> g(mtx);
    if (!have || v < best_value.load(std::memory_order_relaxed) - 1e-9) {
      have = true;
      best_set = set;
      std::sort(best_set.begin(), best_set.end());
      best_value.store(v, std::memory_order_relaxed);
    }
  }
};

inline void worst_dfs(worst_shared& sh, std::uint32_t next,
                      std::vector<std::uint32_t>& chosen,
                      const std::vector<std::uint8_t>& d) {
  if (!sh.counters->tick()) return;
  const std::size_t need = sh.target - chosen.size();
  const double inc = sh.best_value.load(std::memory_order_relaxed);
  if (sh.prune || need == 0) {
    // At a leaf this is just max d / L: skipping the LP sweep for leaves that
    // cannot beat the incumbent, so it applies in exhaustive mode too.
    if (worst_completion_bound(d, need, sh.L, sh.ball) >= inc - 1e-9) return;
  }
  if (need == 0) {
    const auto scan = max_hull_distance_scan(codebook(sh.L, chosen), inc - 1e-9);
    if (scan.value < inc - 1e-9) sh.offer(scan.value, chosen);
    return;
  }
  const std::uint32_t universe = 1u << sh.L;
  for (std::uint32_t c = next; c < universe; ++c) {
    if (universe - c < need) break;
    if (sh.prune && chosen.size() == 1 && !low_block_word(c)) continue;
    std::vector<std::uint8_t> d2;
    std::uint64_t ignored = 0;
    refine_distances(d, c, d2, ignored);
    chosen.push_back(c);
    worst_dfs(sh, c + 1, chosen, d2);
    chosen.pop_back();
    if (sh.counters->exhausted.load(std::memory_order_relaxed)) return;
  }
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::size_t start) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(start) + 1));
}

// Gaussian binomial: number of k-dimensional subspaces of F_2^L.
inline Int linear_codebook_count(int L, int k) {
  Int num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (Int(1) << (L - i)) - 1;
    den *= (Int(1) << (k - i)) - 1;
  }
  return num / den;
}

// Enumerates every k-dimensional subspace of F_2^L exactly once, as the 2^k
// codewords spanned by a generator matrix in reduced row echelon form
// (pivot columns chosen from the high bit down, free entries exhausted).
template <typename Fn>
struct linear_codebook_enum {
  int L;
  int k;
  Fn& fn;
  std::vector<std::uint32_t> rows;
  std::vector<int> pivots;

  void choose_pivots(int col, int row) {
    if (row == k) {
      fill_free(0);
      return;
    }
    if (col < 0 || col + 1 < k - row) return;
    pivots.push_back(col);
    choose_pivots(col - 1, row + 1);
    pivots.pop_back();
    choose_pivots(col - 1, row);
  }

  void fill_free(int r) {
    if (r == k) {
      emit();
      return;
    }
    std::vector<int> cols;
    for (int c = pivots[static_cast<std::size_t>(r)] - 1; c >= 0; --c)
      if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) cols.push_back(c);
    for (std::uint32_t bits = 0; bits < (1u << cols.size()); ++bits) {
      std::uint32_t w = 1u << pivots[static_cast<std::size_t>(r)];
      for (std::size_t j = 0; j < cols.size(); ++j)
        if ((bits >> j) & 1u) w |= 1u << cols[j];
      rows[static_cast<std::size_t>(r)] = w;
      fill_free(r + 1);
    }
  }

  void emit() {
    std::vector<std::uint32_t> words(std::size_t{1} << k, 0u);
    for (std::uint32_t m = 1; m < (1u << k); ++m) {
      std::uint32_t w = 0;
      for (int i = 0; i < k; ++i)
        if ((m >> i) & 1u) w ^= rows[static_cast<std::size_t>(i)];
      words[m] = w;
    }
    fn(words);
  }
};

template <typename Fn>
inline void for_each_linear_codebook(int L, int k, Fn&& fn) {
  linear_codebook_enum<Fn> e{L, k, fn, std::vector<std::uint32_t>(
                                           static_cast<std::size_t>(k), 0u), {}};
  e.pivots.reserve(static_cast<std::size_t>(k));
  e.choose_pivots(L - 1, 0);
}

// Best linear codebook under the worst-case objective; used as a structured
// seed where the subspace count is small enough to sweep.
inline std::optional<std::vector<std::uint32_t>> best_linear_worst_seed(
    int L, int k, search_counters& counters) {
  if (linear_codebook_count(L, k) > 20000) return std::nullopt;
  double best = 2.0;
  std::vector<std::uint32_t> best_set;
  for_each_linear_codebook(L, k, [&](const std::vector<std::uint32_t>& words) {
    if (!counters.tick()) return;
    const auto scan = max_hull_distance_scan(codebook(L, words), best - 1e-9);
    if (scan.value < best - 1e-9) {
      best = scan.value;
      best_set = words;
      std::sort(best_set.begin(), best_set.end());
    }
  });
  if (best_set.empty()) return std::nullopt;
  return best_set;
}

inline std::vector<std::uint32_t> random_subset(int L, std::size_t target,
                                                std::mt19937_64& rng) {
  const std::uint32_t universe = 1u << L;
  std::vector<std::uint32_t> pool(universe);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (universe - i));
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(target)};
}

struct local_outcome {
  bool have = false;
  std::uint64_t total = std::numeric_limits<std::uint64_t>::max();  // average runs
  double value = 2.0;                                               // worst-case runs
  std::vector<std::uint32_t> set;
};

// Steepest-descent swap search on the average objective.  A swap that removes
// s and inserts t is scored exactly from three per-word statistics of the
// current codebook: the nearest distance, its multiplicity, and the second
// nearest distance.  Sideways (zero-gain) moves are taken uniformly at random
// up to a cap to slide along plateaus.
inline local_outcome avg_local_one(int L, std::size_t target, std::uint64_t seed,
                                   search_counters& counters,
                                   const std::vector<std::uint32_t>* init = nullptr) {
  if (!counters.tick()) return {};
  const std::uint32_t universe = 1u << L;
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> S = init ? *init : random_subset(L, target, rng);
  std::vector<char> member(universe, 0);
  for (std::uint32_t s : S) member[s] = 1;

  const int faraway = L + 1;
  std::vector<int> d1(universe), d2(universe), cnt(universe);
  std::uint64_t total = 0;
  auto rebuild = [&] {
    total = 0;
    for (std::uint32_t b = 0; b < universe; ++b) {
      int b1 = faraway, b2 = faraway, c = 0;
      for (std::uint32_t s : S) {
        const int dd = std::popcount(b ^ s);
        if (dd < b1) {
          b2 = b1;
          b1 = dd;
          c = 1;
        } else if (dd == b1) {
          ++c;
        } else if (dd < b2) {
          b2 = dd;
        }
      }
      d1[b] = b1;
      d2[b] = b2;
      cnt[b] = c;
      total += static_cast<std::uint64_t>(b1);
    }
  };
  rebuild();

  local_outcome best;
  auto snapshot = [&] {
    if (!best.have || total < best.total) {
      best.have = true;
      best.total = total;
      best.set = S;
      std::sort(best.set.begin(), best.set.end());
    }
  };
  snapshot();

  std::vector<int> alt(universe);
  int sideways = 0;
  while (counters.tick()) {
    std::uint64_t best_nt = std::numeric_limits<std::uint64_t>::max();
    std::size_t best_si = 0;
    std::uint32_t best_t = 0;
    std::uint64_t zero_seen = 0;
    std::size_t zero_si = 0;
    std::uint32_t zero_t = 0;
    for (std::size_t si = 0; si < S.size(); ++si) {
      const std::uint32_t s = S[si];
      for (std::uint32_t b = 0; b < universe; ++b)
        alt[b] = (std::popcount(b ^ s) == d1[b] && cnt[b] == 1) ? d2[b] : d1[b];
      for (std::uint32_t t = 0; t < universe; ++t) {
        if (member[t]) continue;
        std::uint64_t nt = 0;
        for (std::uint32_t b = 0; b < universe; ++b)
          nt += static_cast<std::uint64_t>(std::min(alt[b], std::popcount(b ^ t)));
        if (nt < best_nt) {
          best_nt = nt;
          best_si = si;
          best_t = t;
        }
        if (nt == total) {
          ++zero_seen;
          if (rng() % zero_seen == 0) {
            zero_si = si;
            zero_t = t;
          }
        }
      }
    }
    std::size_t si;
    std::uint32_t t;
    if (best_nt < total) {
      si = best_si;
      t = best_t;
      sideways = 0;
    } else if (zero_seen > 0 && sideways < 100) {
      si = zero_si;
      t = zero_t;
      ++sideways;
    } else {
      break;
    }
    member[S[si]] = 0;
    member[t] = 1;
    S[si] = t;
    rebuild();
    snapshot();
  }
  return best;
}

// First-improvement swap search on the worst-case objective.  Insertion
// candidates are ordered toward the current worst word; every trial is a full
// objective evaluation that aborts as soon as it provably fails to improve.
inline local_outcome worst_local_one(int L, std::size_t target, std::uint64_t seed,
                                     search_counters& counters,
                                     const std::vector<std::uint32_t>* init = nullptr) {
  if (!counters.tick()) return {};
  const std::uint32_t universe = 1u << L;
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> S = init ? *init : random_subset(L, target, rng);
  std::vector<char> member(universe, 0);
  for (std::uint32_t s : S) member[s] = 1;

  hull_scan_result cur = max_hull_distance_scan(codebook(L, S));
  std::uint32_t undo_s = universe, undo_t = universe;  // forbid immediate reversal
  constexpr int kMoveCap = 150;
  for (int move = 0; move < kMoveCap && counters.tick(); ++move) {
    if (cur.value <= 1e-12) break;
    std::vector<std::uint32_t> inserts;
    inserts.reserve(universe - target);
    for (std::uint32_t t = 0; t < universe; ++t)
      if (!member[t]) inserts.push_back(t);
    std::sort(inserts.begin(), inserts.end(), [&](std::uint32_t a, std::uint32_t b) {
      const int da = std::popcount(a ^ cur.witness);
      const int db = std::popcount(b ^ cur.witness);
      return da != db ? da < db : a < b;
    });
    if (inserts.size() > 48) inserts.resize(48);
    std::vector<std::size_t> removals(S.size());
    std::iota(removals.begin(), removals.end(), std::size_t{0});
    std::sort(removals.begin(), removals.end(), [&](std::size_t a, std::size_t b) {
      const int da = std::popcount(S[a] ^ cur.witness);
      const int db = std::popcount(S[b] ^ cur.witness);
      return da != db ? da > db : S[a] < S[b];
    });

    bool improved = false;
    for (std::uint32_t t : inserts) {
      for (std::size_t si : removals) {
        const std::uint32_t s = S[si];
        if (s == undo_t && t == undo_s) continue;
        member[s] = 0;
        member[t] = 1;
        S[si] = t;
        const auto trial = max_hull_distance_scan(codebook(L, S), cur.value - 1e-9);
        if (trial.value < cur.value - 1e-9) {
          cur = trial;
          undo_s = s;
          undo_t = t;
          improved = true;
          break;
        }
        member[t] = 0;
        member[s] = 1;
        S[si] = s;
      }
      if (improved) break;
    }
    if (!improved) break;
  }

  local_outcome out;
  out.have = true;
  out.value = cur.value;
  out.set = S;
  std::sort(out.set.begin(), out.set.end());
  return out;
}

// Multistart driver; start i always gets the same derived seed, and merging
// prefers better objective then lexicographically smaller codebook, so the
// result is independent of thread scheduling.
inline local_outcome run_local_phase(design_objective objective, int L,
                                     std::size_t target, std::uint64_t seed, int starts,
                                     int jobs, search_counters& counters,
                                     const std::vector<std::vector<std::uint32_t>>& inits) {
  std::vector<local_outcome> slots(inits.size() + static_cast<std::size_t>(starts));
  run_indexed_tasks(slots.size(), jobs, [&](std::size_t i) {
    if (counters.exhausted.load(std::memory_order_relaxed)) return;
    const std::vector<std::uint32_t>* init = i < inits.size() ? &inits[i] : nullptr;
    slots[i] = objective == design_objective::average
                   ? avg_local_one(L, target, mix_seed(seed, i), counters, init)
                   : worst_local_one(L, target, mix_seed(seed, i), counters, init);
  });
  local_outcome best;
  for (const auto& s : slots) {
    if (!s.have) continue;
    const bool better =
        !best.have ||
        (objective == design_objective::average
             ? (s.total < best.total || (s.total == best.total && s.set < best.set))
             : (s.value < best.value - 1e-9 ||
                (std::abs(s.value - best.value) <= 1e-9 && s.set < best.set)));
    if (better) best = s;
  }
  return best;
}

}  // namespace detail

// --- the search entry point ---------------------------------------------------

inline design_result design_search(int L, int k, design_objective objective,
                                   search_strategy strategy,
                                   const search_budget& budget = {},
                                   std::uint64_t seed = 1, int starts = 64,
                                   int jobs = 1) {
  if (L < 1 || L > kMaxSearchBits)
    throw std::invalid_argument("search length must be in [1, 16]");
  if (k < 1 || k > L) throw std::invalid_argument("need 1 <= k <= L");
  if (starts < 1) throw std::invalid_argument("starts must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");

  detail::search_clock clock;
  clock.limit = budget.time_limit_seconds;
  detail::search_counters counters;
  counters.node_limit = budget.node_limit;
  counters.clock = &clock;

  design_result res;
  res.objective = objective;
  res.strategy = strategy;
  res.L = L;
  res.k = k;
  res.seed = seed;
  res.starts = strategy == search_strategy::exhaustive ? 0 : starts;
  res.conditional_on_conjecture = objective == design_objective::worst_case;

  const std::uint32_t universe = 1u << L;
  const std::size_t target = static_cast<std::size_t>(1) << k;

  auto finish = [&](bool found, std::vector<std::uint32_t> set) {
    res.found = found;
    res.budget_exhausted = counters.exhausted.load();
    res.nodes = counters.visited();
    res.proven = strategy != search_strategy::local && !res.budget_exhausted;
    if (found) {
      codebook S(L, std::move(set));
      if (L <= kMaxCanonicalBits) S = canonical_form(S);
      if (objective == design_objective::average) {
        const Rat dis = mean_min_distance(S);
        res.dissimilarity = numeric_value(dis);
        res.success = numeric_value(Rat(1 - dis));
      } else if (L <= 10) {
        const Rat dis = max_hull_distance_exact(S);
        res.dissimilarity = numeric_value(dis);
        res.success = numeric_value(Rat(1 - dis));
      } else {
        const double dis = max_hull_distance(S);
        res.dissimilarity = numeric_value(dis);
        res.success = numeric_value(1.0 - dis);
      }
      res.S = std::move(S);
    }
    res.seconds = clock.elapsed();
    return res;
  };

  if (target == universe) {
    // Only one codebook exists and it decodes perfectly.
    res.proven = true;
    res.found = true;
    res.S = full_cube(L);
    res.dissimilarity = numeric_value(Rat(0));
    res.success = numeric_value(Rat(1));
    res.seconds = clock.elapsed();
    return res;
  }

  // Structured codebooks known to be strong: they start the local walks and
  // give the pruned search free incumbents.
  std::vector<std::vector<std::uint32_t>> structured;
  if (strategy != search_strategy::exhaustive) {
    if (target == 2) structured.push_back({0u, universe - 1});
    if (k == L - 1) structured.push_back(even_parity_class(L).elements());
    if (objective == design_objective::worst_case)
      if (auto lin = detail::best_linear_worst_seed(L, k, counters))
        structured.push_back(std::move(*lin));
  }

  detail::local_outcome seed_best;
  if (strategy != search_strategy::exhaustive)
    seed_best = detail::run_local_phase(objective, L, target, seed, starts, jobs,
                                        counters, structured);
  if (strategy == search_strategy::local)
    return finish(seed_best.have, seed_best.set);

  const bool prune = strategy == search_strategy::branch_and_bound;
  std::vector<std::uint8_t> d0(universe);
  std::uint64_t total0 = 0;
  for (std::uint32_t b = 0; b < universe; ++b) {
    d0[b] = static_cast<std::uint8_t>(std::popcount(b));
    total0 += d0[b];
  }
  std::vector<std::uint32_t> roots;
  for (std::uint32_t c = 1; c < universe; ++c) {
    if (universe - c < target - 1) break;
    if (prune && !detail::low_block_word(c)) continue;
    roots.push_back(c);
  }

  if (objective == design_objective::average) {
    detail::avg_shared sh;
    sh.L = L;
    sh.target = target;
    sh.prune = prune;
    sh.shell = detail::hamming_shell_sizes(L);
    sh.counters = &counters;
    if (seed_best.have) sh.offer(seed_best.total, seed_best.set);
    for (const auto& set : structured)
      sh.offer(detail::nearest_distance_total(L, set), set);

    bool root_pruned = false;
    if (counters.tick()) {
      root_pruned = prune && detail::avg_completion_bound(d0, target - 1, L, sh.shell) >=
                                 sh.best_total.load();
    } else {
      root_pruned = true;
    }
    if (!root_pruned)
      detail::run_indexed_tasks(roots.size(), jobs, [&](std::size_t i) {
        std::vector<std::uint8_t> d2;
        std::uint64_t t2 = total0;
        detail::refine_distances(d0, roots[i], d2, t2);
        std::vector<std::uint32_t> chosen{0u, roots[i]};
        detail::avg_dfs(sh, roots[i] + 1, chosen, d2, t2);
      });
    const bool found = sh.best_total.load() != std::numeric_limits<std::uint64_t>::max();
    return finish(found, sh.best_set);
  }

  detail::worst_shared sh;
  sh.L = L;
  sh.target = target;
  sh.prune = prune;
  sh.ball = detail::hamming_shell_sizes(L);
  for (std::size_t h = 1; h < sh.ball.size(); ++h) sh.ball[h] += sh.ball[h - 1];
  sh.counters = &counters;
  if (seed_best.have) sh.offer(seed_best.value, seed_best.set);
  for (const auto& set : structured)
    sh.offer(max_hull_distance(codebook(L, set)), set);

  bool root_pruned = false;
  if (counters.tick()) {
    root_pruned = prune && detail::worst_completion_bound(d0, target - 1, L, sh.ball) >=
                               sh.best_value.load() - 1e-9;
  } else {
    root_pruned = true;
  }
  if (!root_pruned)
    detail::run_indexed_tasks(roots.size(), jobs, [&](std::size_t i) {
      std::vector<std::uint8_t> d2;
      std::uint64_t ignored = 0;
      detail::refine_distances(d0, roots[i], d2, ignored);
      std::vector<std::uint32_t> chosen{0u, roots[i]};
      detail::worst_dfs(sh, roots[i] + 1, chosen, d2);
    });
  return finish(sh.have, sh.best_set);
}

// --- serialization --------------------------------------------------------------

inline nlohmann::ordered_json design_result_to_json(const design_result& r) {
  nlohmann::ordered_json j;
  j["type"] = "design";
  j["objective"] = design_objective_name(r.objective);
  j["strategy"] = search_strategy_name(r.strategy);
  j["L"] = r.L;
  j["k"] = r.k;
  j["found"] = r.found;
  if (r.found && r.S) {
    j["codebook"] = r.S->strings();
    j["dissimilarity"] = r.dissimilarity.is_exact()
                             ? nlohmann::ordered_json(r.dissimilarity.str())
                             : nlohmann::ordered_json(r.dissimilarity.approx);
    j["success"] = r.success.is_exact() ? nlohmann::ordered_json(r.success.str())
                                        : nlohmann::ordered_json(r.success.approx);
  }
  j["proven"] = r.proven;
  j["conditional_on_conjecture"] = r.conditional_on_conjecture;
  j["budget_exhausted"] = r.budget_exhausted;
  j["nodes"] = r.nodes;
  j["seed"] = r.seed;
  j["starts"] = r.starts;
  j["seconds"] = r.seconds;
  return j;
}

}  // namespace racforge

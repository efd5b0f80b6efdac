#pragma once

// Classical random access codes: a stochastic encoder from L-bit inputs to
// k-bit messages plus an independent per-bit decoder.  Probability tables are
// stored as exact rationals throughout; codes built from floating-point data
// carry an `exact = false` flag that only affects how they serialize (decimal
// instead of "p/q") and how strictly input files are checked.

#include "racforge/core.hpp"
#include "racforge/lp.hpp"
#include "racforge/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace racforge {

namespace detail {

inline std::size_t table_rows(int bits) { return static_cast<std::size_t>(1) << bits; }

inline void check_table_shape(const std::vector<std::vector<Rat>>& table,
                              std::size_t rows, std::size_t cols, const char* what) {
  if (table.size() != rows)
    throw std::invalid_argument(std::string(what) + " has " +
                                std::to_string(table.size()) + " rows, expected " +
                                std::to_string(rows));
  for (std::size_t r = 0; r < rows; ++r)
    if (table[r].size() != cols)
      throw std::invalid_argument(std::string(what) + " row " + std::to_string(r) +
                                  " has " + std::to_string(table[r].size()) +
                                  " entries, expected " + std::to_string(cols));
}

}  // namespace detail

// P(M = m | B = b); rows indexed by input value b, columns by message m.
struct stochastic_encoder {
  int L = 0;
  int k = 0;
  std::vector<std::vector<Rat>> table;
  bool exact = true;

  void validate() const {
    check_length(L);
    if (k < 0 || k > kMaxBits) throw std::invalid_argument("encoder k out of range");
    detail::check_table_shape(table, detail::table_rows(L), detail::table_rows(k),
                              "encoder table");
    for (std::size_t b = 0; b < table.size(); ++b) {
      Rat sum = 0;
      for (const Rat& p : table[b]) {
        if (p < 0 || p > 1)
          throw std::invalid_argument("encoder row " + std::to_string(b) +
                                      " has an entry outside [0,1]");
        sum += p;
      }
      if (sum != 1)
        throw std::invalid_argument("encoder row " + std::to_string(b) +
                                    " sums to " + to_fraction_string(sum) +
                                    ", expected exactly 1");
    }
  }
};

// P(B'_i = 1 | M = m); rows indexed by message m, one column per source bit.
struct bitwise_decoder {
  int L = 0;
  int k = 0;
  std::vector<std::vector<Rat>> table;
  bool exact = true;

  bool deterministic() const {
    for (const auto& row : table)
      for (const Rat& p : row)
        if (p != 0 && p != 1) return false;
    return true;
  }

  void validate() const {
    check_length(L);
    if (k < 0 || k > kMaxBits) throw std::invalid_argument("decoder k out of range");
    detail::check_table_shape(table, detail::table_rows(k),
                              static_cast<std::size_t>(L), "decoder table");
    for (std::size_t m = 0; m < table.size(); ++m)
      for (const Rat& p : table[m])
        if (p < 0 || p > 1)
          throw std::invalid_argument("decoder row " + std::to_string(m) +
                                      " has an entry outside [0,1]");
  }
};

struct classical_code {
  stochastic_encoder encoder;
  bitwise_decoder decoder;
  std::string construction;  // free-form label recorded in files

  int L() const { return encoder.L; }
  int k() const { return encoder.k; }
  bool exact() const { return encoder.exact && decoder.exact; }

  void validate() const {
    encoder.validate();
    decoder.validate();
    if (encoder.L != decoder.L || encoder.k != decoder.k)
      throw std::invalid_argument("encoder and decoder disagree on (L,k)");
  }
};

// Probability that bit i of b survives the encode/decode round trip.
inline Rat bit_success_prob(const classical_code& code, const bit_string& b, int i) {
  if (b.length() != code.L())
    throw std::invalid_argument("input length does not match the code");
  if (i < 0 || i >= code.L()) throw std::out_of_range("bit index out of range");
  const auto& enc_row = code.encoder.table[b.value()];
  const bool want_one = b.bit(i) == 1;
  Rat p = 0;
  for (std::size_t m = 0; m < enc_row.size(); ++m) {
    if (enc_row[m] == 0) continue;
    Rat q = code.decoder.table[m][static_cast<std::size_t>(i)];
    if (!want_one) q = 1 - q;
    p += enc_row[m] * q;
  }
  return p;
}

// Uniform average over inputs and queried bits.
inline Rat avg_success(const classical_code& code) {
  const int L = code.L();
  Rat total = 0;
  for (std::uint32_t b = 0; b < detail::table_rows(L); ++b)
    for (int i = 0; i < L; ++i)
      total += bit_success_prob(code, bit_string(b, L), i);
  return total / (Rat(L) * Rat(Int(1) << L));
}

inline Rat worst_success(const classical_code& code) {
  const int L = code.L();
  Rat worst = 1;
  for (std::uint32_t b = 0; b < detail::table_rows(L); ++b)
    for (int i = 0; i < L; ++i) {
      const Rat p = bit_success_prob(code, bit_string(b, L), i);
      if (p < worst) worst = p;
    }
  return worst;
}

// The decoder every codebook-based construction shares: message j decodes to
// the j-th codebook element; surplus messages (|S| < 2^k) repeat element 0 and
// are never emitted by the matching encoders.
inline bitwise_decoder codebook_decoder(const codebook& S, int k) {
  if (S.size() > detail::table_rows(k))
    throw std::invalid_argument("codebook larger than the message space");
  bitwise_decoder dec;
  dec.L = S.length();
  dec.k = k;
  dec.table.assign(detail::table_rows(k),
                   std::vector<Rat>(static_cast<std::size_t>(S.length()), 0));
  for (std::size_t m = 0; m < dec.table.size(); ++m) {
    const bit_string target = S.element(m < S.size() ? m : 0);
    for (int i = 0; i < S.length(); ++i)
      dec.table[m][static_cast<std::size_t>(i)] = target.bit(i);
  }
  return dec;
}

enum class tie_break { lowest_index, highest_index, uniform };

// Average-optimal code for a fixed codebook: map each input to a nearest
// codebook element in Hamming distance.  Every tie policy gives the same
// average success; the policy only picks which optimum.
inline classical_code build_avg_code(const codebook& S, int k,
                                     tie_break ties = tie_break::lowest_index) {
  classical_code code;
  code.decoder = codebook_decoder(S, k);
  code.encoder.L = S.length();
  code.encoder.k = k;
  code.encoder.table.assign(detail::table_rows(S.length()),
                            std::vector<Rat>(detail::table_rows(k), 0));
  for (std::uint32_t b = 0; b < detail::table_rows(S.length()); ++b) {
    int dmin = S.length() + 1;
    std::vector<std::size_t> winners;
    for (std::size_t j = 0; j < S.size(); ++j) {
      const int d = std::popcount(b ^ S.elements()[j]);
      if (d < dmin) {
        dmin = d;
        winners.clear();
      }
      if (d == dmin) winners.push_back(j);
    }
    auto& row = code.encoder.table[b];
    switch (ties) {
      case tie_break::lowest_index:
        row[winners.front()] = 1;
        break;
      case tie_break::highest_index:
        row[winners.back()] = 1;
        break;
      case tie_break::uniform:
        for (std::size_t j : winners) row[j] = Rat(Int(1), Int(winners.size()));
        break;
    }
  }
  code.construction = "codebook-avg";
  code.validate();
  return code;
}

// Worst-case code for a fixed codebook: encode each input with the hull
// weights that minimize the Chebyshev distance to it.  With `exact_lp` the
// weights come from the rational simplex; otherwise from the double solver,
// cleaned up and renormalized exactly.
inline classical_code build_worst_code(const codebook& S, int k, bool exact_lp = true) {
  classical_code code;
  code.decoder = codebook_decoder(S, k);
  code.encoder.L = S.length();
  code.encoder.k = k;
  code.encoder.exact = exact_lp;
  code.encoder.table.assign(detail::table_rows(S.length()),
                            std::vector<Rat>(detail::table_rows(k), 0));
  for (std::uint32_t b = 0; b < detail::table_rows(S.length()); ++b) {
    auto& row = code.encoder.table[b];
    const bit_string input(b, S.length());
    if (exact_lp) {
      auto r = cheb_dist_to_hull_exact(input, S);
      for (std::size_t j = 0; j < S.size(); ++j) row[j] = r.weights[j];
      // The simplex returns a basic feasible solution: exact simplex sum is 1.
    } else {
      auto r = cheb_dist_to_hull(real_point(input), S);
      Rat sum = 0;
      for (std::size_t j = 0; j < S.size(); ++j) {
        const double w = std::max(0.0, r.weights[j]);
        row[j] = Rat(w);
        sum += row[j];
      }
      if (sum == 0)
        throw std::runtime_error("hull weights degenerated to zero mass");
      for (std::size_t j = 0; j < S.size(); ++j) row[j] /= sum;
    }
  }
  code.construction = "codebook-worst";
  code.validate();
  return code;
}

// Exact average-optimal (L,1) code: majority vote toward the all-zero or
// all-one codeword with uniform tie splitting.
inline classical_code optimal_L1_code(int L) {
  check_length(L);
  const std::uint32_t ones = (L < 32) ? ((1u << L) - 1) : 0xffffffffu;
  classical_code code = build_avg_code(codebook(L, {0u, ones}), 1, tie_break::uniform);
  code.construction = "l1-rac";
  return code;
}

// Exact (L,L-1) construction: drop the top bit, and when the input has odd
// parity spread the message uniformly over the Hamming ball of radius one
// around the truncation.  Bits below the top decode from the message
// directly; the top bit decodes as the message parity.
inline classical_code optimal_LLm1_code(int L) {
  check_length(L);
  if (L < 2) throw std::invalid_argument("the k = L-1 construction needs L >= 2");
  const int k = L - 1;
  classical_code code;
  code.encoder.L = L;
  code.encoder.k = k;
  code.encoder.table.assign(detail::table_rows(L),
                            std::vector<Rat>(detail::table_rows(k), 0));
  const std::uint32_t mask = (1u << k) - 1;
  for (std::uint32_t b = 0; b < detail::table_rows(L); ++b) {
    const std::uint32_t m = b & mask;
    auto& row = code.encoder.table[b];
    if ((std::popcount(b) & 1) == 0) {
      row[m] = 1;
    } else {
      const Rat share(Int(1), Int(L));
      row[m] = share;
      for (int j = 0; j < k; ++j) row[m ^ (1u << j)] = share;
    }
  }
  code.decoder.L = L;
  code.decoder.k = k;
  code.decoder.table.assign(detail::table_rows(k),
                            std::vector<Rat>(static_cast<std::size_t>(L), 0));
  for (std::uint32_t m = 0; m < detail::table_rows(k); ++m) {
    for (int i = 0; i < k; ++i)
      code.decoder.table[m][static_cast<std::size_t>(i)] = (m >> i) & 1u;
    code.decoder.table[m][static_cast<std::size_t>(k)] = std::popcount(m) & 1;
  }
  code.construction = "llm1-rac";
  code.validate();
  return code;
}

inline classical_code identity_code(int L) {
  check_length(L);
  classical_code code;
  code.encoder.L = code.decoder.L = L;
  code.encoder.k = code.decoder.k = L;
  code.encoder.table.assign(detail::table_rows(L),
                            std::vector<Rat>(detail::table_rows(L), 0));
  code.decoder.table.assign(detail::table_rows(L),
                            std::vector<Rat>(static_cast<std::size_t>(L), 0));
  for (std::uint32_t b = 0; b < detail::table_rows(L); ++b) {
    code.encoder.table[b][b] = 1;
    for (int i = 0; i < L; ++i)
      code.decoder.table[b][static_cast<std::size_t>(i)] = (b >> i) & 1u;
  }
  code.construction = "identity";
  code.validate();
  return code;
}

// --- serialization ---------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json table_to_json(const std::vector<std::vector<Rat>>& table,
                                            bool exact) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const Rat& p : row) {
      if (exact)
        jrow.push_back(to_fraction_string(p));
      else
        jrow.push_back(to_double(p));
    }
    rows.push_back(std::move(jrow));
  }
  return rows;
}

// Accepts "p/q" strings, decimal strings, and JSON numbers (converted from
// their exact binary value).  Returns whether every entry was an exact
// rational literal.
inline bool table_from_json(const nlohmann::json& j,
                            std::vector<std::vector<Rat>>& table, const char* what) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(what) + " table must be an array");
  bool exact = true;
  table.clear();
  for (const auto& jrow : j) {
    if (!jrow.is_array())
      throw std::invalid_argument(std::string(what) + " rows must be arrays");
    std::vector<Rat> row;
    for (const auto& cell : jrow) {
      if (cell.is_string()) {
        row.push_back(parse_fraction(cell.get<std::string>()));
      } else if (cell.is_number()) {
        row.push_back(Rat(cell.get<double>()));
        exact = false;
      } else {
        throw std::invalid_argument(std::string(what) +
                                    " entries must be strings or numbers");
      }
    }
    table.push_back(std::move(row));
  }
  return exact;
}

}  // namespace detail

inline nlohmann::ordered_json code_to_json(const classical_code& code) {
  nlohmann::ordered_json j;
  j["type"] = "classical";
  j["L"] = code.L();
  j["k"] = code.k();
  j["metadata"] = {{"construction", code.construction}};
  j["encoder"] = detail::table_to_json(code.encoder.table, code.encoder.exact);
  j["decoder"] = detail::table_to_json(code.decoder.table, code.decoder.exact);
  return j;
}

inline classical_code code_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("type", "") != std::string("classical"))
    throw std::invalid_argument("not a classical code document");
  classical_code code;
  code.encoder.L = code.decoder.L = j.at("L").get<int>();
  code.encoder.k = code.decoder.k = j.at("k").get<int>();
  if (j.contains("metadata") && j["metadata"].contains("construction"))
    code.construction = j["metadata"]["construction"].get<std::string>();
  code.encoder.exact =
      detail::table_from_json(j.at("encoder"), code.encoder.table, "encoder");
  code.decoder.exact =
      detail::table_from_json(j.at("decoder"), code.decoder.table, "decoder");

  const Rat tol(Int(1), Int(1000000000));
  if (!code.encoder.exact) {
    // Floating-point rows may be off by rounding dust; accept up to 1e-9 and
    // renormalize exactly so downstream arithmetic sees true distributions.
    for (std::size_t b = 0; b < code.encoder.table.size(); ++b) {
      auto& row = code.encoder.table[b];
      Rat sum = 0;
      for (auto& p : row) {
        if (p < 0 && -p < tol) p = 0;
        sum += p;
      }
      Rat gap = sum - 1;
      if (gap < 0) gap = -gap;
      if (gap > tol)
        throw std::invalid_argument("encoder row " + std::to_string(b) +
                                    " sums to " + format_real(to_double(sum)) +
                                    ", outside the 1e-9 tolerance");
      if (sum != 0)
        for (auto& p : row) p /= sum;
    }
  }
  if (!code.decoder.exact) {
    for (auto& row : code.decoder.table)
      for (auto& p : row) {
        if (p < 0 && -p < tol) p = 0;
        if (p > 1 && p - 1 < tol) p = 1;
      }
  }
  code.validate();
  return code;
}

inline void save_code(const classical_code& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << code_to_json(code).dump(2) << '\n';
}

inline classical_code load_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return code_from_json(j);
}

}  // namespace racforge

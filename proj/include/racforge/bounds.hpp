#pragma once

// Known limits on decoding success probabilities, exact closed forms for the
// families where the optimum is known, and a per-(L,k) report that gathers
// everything with provenance labels for CSV/JSON output.

#include "racforge/core.hpp"
#include "racforge/rational.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace racforge {

// The formula layer has no 24-bit word restriction; it only needs a sane
// parameter range.  Anything that manipulates actual bit strings revalidates
// through the core types.
inline void check_lk(int L, int k) {
  if (k < 1 || L < k)
    throw std::invalid_argument("need 1 <= k <= L, got L=" + std::to_string(L) +
                                " k=" + std::to_string(k));
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument("binary entropy argument outside [0,1]: " +
                                format_real(p));
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Upper branch of the inverse: the unique p in [1/2, 1] with H2(p) = y.
// H2 decreases from 1 to 0 on that interval, so plain bisection suffices.
inline double entropy_inverse_upper(double y) {
  if (!(y >= 0.0) || !(y <= 1.0))
    throw std::invalid_argument("entropy value outside [0,1]: " + format_real(y));
  double lo = 0.5, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) > y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Worst-case upper bound, identical for classical and quantum codes:
// H2^{-1}(1 - k/L) on the upper branch.
inline double nayak_bound(int L, int k) {
  check_lk(L, k);
  return entropy_inverse_upper(1.0 - static_cast<double>(k) / L);
}

// The weaker explicit form 1/2 + sqrt(2 ln2 * k/L)/2, clamped into [., 1].
inline double nayak_bound_explicit(int L, int k) {
  check_lk(L, k);
  const double raw =
      0.5 + 0.5 * std::sqrt(2.0 * std::log(2.0) * static_cast<double>(k) / L);
  return std::min(1.0, raw);
}

// Average-case quantum upper bound 1/2 + sqrt(2^{k-1}/L)/2; classical codes
// are a subset of quantum ones, so it applies to both.  Clamped into [., 1].
inline double mancinska_avg_bound(int L, int k) {
  check_lk(L, k);
  const double raw = 0.5 + 0.5 * std::sqrt(std::ldexp(1.0, k - 1) / L);
  return std::min(1.0, raw);
}

// Conjectured worst-case quantum bound 1/2 + sqrt(k/L)/2.
inline double conjectured_worst_qrac_bound(int L, int k) {
  check_lk(L, k);
  return 0.5 + 0.5 * std::sqrt(static_cast<double>(k) / L);
}

// Smallest Hamming-ball radius h such that 2^k balls of radius h can hold
// all of {0,1}^L by counting alone.
inline int covering_radius_H(int L, int k) {
  check_lk(L, k);
  const Int need = Int(1) << (L - k);
  Int have = 0;
  for (int h = 0; h <= L; ++h) {
    have += binomial(static_cast<unsigned>(L), static_cast<unsigned>(h));
    if (have >= need) return h;
  }
  throw std::logic_error("covering radius search exhausted all radii");
}

// Exact counting upper bound on the average success of a classical code:
// fill distance layers of an ideal non-overlapping covering up to the
// covering radius and charge the leftover mass at the radius itself.
inline Rat closed_form_avg_rac_bound(int L, int k) {
  check_lk(L, k);
  const int H = covering_radius_H(L, k);
  const Int total = Int(1) << (L - k);
  Int weighted = 0, filled = 0;
  for (int h = 0; h < H; ++h) {
    const Int layer = binomial(static_cast<unsigned>(L), static_cast<unsigned>(h));
    weighted += Int(h) * layer;
    filled += layer;
  }
  weighted += Int(H) * (total - filled);
  return 1 - Rat(weighted, Int(L) * total);
}

// Exact average optimum for k = 1.
inline Rat l1_avg_optimum(int L) {
  check_lk(L, 1);
  const Int top = binomial(static_cast<unsigned>(L - 1), static_cast<unsigned>(L / 2));
  return Rat(1, 2) + Rat(top, Int(1) << L);
}

// Closed-form values of the k = L-1 family: exact classical average and
// worst case plus the quantum value that the induced QRAC reaches.
struct llm1_value_set {
  Rat average;
  Rat worst;
  double quantum;
};

inline llm1_value_set llm1_values(int L) {
  if (L < 2) throw std::invalid_argument("the k = L-1 family needs L >= 2");
  llm1_value_set v;
  v.average = 1 - Rat(1, 2 * L);
  v.worst = 1 - Rat(1, L);
  v.quantum = 0.5 + 0.5 * std::sqrt(static_cast<double>(L - 1) / L);
  return v;
}

// Success probability of the Pauli-frame construction, identical for all four
// (average/worst, classical/quantum) readings where it applies.
inline double liabotro_value(int L, int k) {
  check_lk(L, k);
  return 0.5 + 0.5 / std::sqrt((std::ldexp(1.0, k) - 1.0) * L);
}

// The classical variant draws its L frame operators from {I,Z}^k minus
// identity, the quantum one from the full Pauli strings; either way L may
// not exceed the alphabet.
inline bool liabotro_classical_applicable(int L, int k) {
  check_lk(L, k);
  return Int(L) <= (Int(1) << k) - 1;
}

inline bool liabotro_quantum_applicable(int L, int k) {
  check_lk(L, k);
  return Int(L) <= (Int(1) << (2 * k)) - 1;
}

struct bound_entry {
  std::string label;
  std::string kind;  // proved-upper | conjectured-upper | closed-form-optimum | achievable-value
  numeric_value value;
  bool clamped = false;
  std::string note;
};

struct bound_report {
  int L = 0;
  int k = 0;
  int covering_radius = 0;
  std::vector<bound_entry> entries;

  const bound_entry* find(const std::string& label) const {
    for (const auto& e : entries)
      if (e.label == label) return &e;
    return nullptr;
  }
};

inline bound_report make_bound_report(int L, int k) {
  check_lk(L, k);
  bound_report r;
  r.L = L;
  r.k = k;
  r.covering_radius = covering_radius_H(L, k);

  auto add = [&](std::string label, std::string kind, numeric_value v,
                 bool clamped = false, std::string note = "") {
    r.entries.push_back({std::move(label), std::move(kind), std::move(v), clamped,
                         std::move(note)});
  };

  add("nayak", "proved-upper", numeric_value(nayak_bound(L, k)));
  {
    const double raw =
        0.5 + 0.5 * std::sqrt(2.0 * std::log(2.0) * static_cast<double>(k) / L);
    add("nayak-explicit", "proved-upper", numeric_value(nayak_bound_explicit(L, k)),
        raw > 1.0);
  }
  {
    const double raw = 0.5 + 0.5 * std::sqrt(std::ldexp(1.0, k - 1) / L);
    add("mancinska-avg", "proved-upper", numeric_value(mancinska_avg_bound(L, k)),
        raw > 1.0);
  }
  add("conjectured-worst-qrac", "conjectured-upper",
      numeric_value(conjectured_worst_qrac_bound(L, k)));
  add("closed-form-avg-rac", "proved-upper",
      numeric_value(closed_form_avg_rac_bound(L, k)));
  if (k == 1)
    add("l1-avg-optimum", "closed-form-optimum", numeric_value(l1_avg_optimum(L)));
  if (k == L - 1 && L >= 2) {
    const auto v = llm1_values(L);
    add("llm1-avg-optimum", "closed-form-optimum", numeric_value(v.average));
    add("llm1-worst-optimum", "closed-form-optimum", numeric_value(v.worst), false,
        "optimality conditional on the worst-case design conjecture");
    add("llm1-qrac-value", "achievable-value", numeric_value(v.quantum), false,
        "attains the conjectured worst-case quantum bound");
  }
  {
    const bool c = liabotro_classical_applicable(L, k);
    const bool q = liabotro_quantum_applicable(L, k);
    std::string note;
    if (c && q)
      note = "classical and quantum variants applicable";
    else if (q)
      note = "quantum variant only (L exceeds the classical frame alphabet)";
    else
      note = "not applicable at this (L,k); value is formal";
    add("liabotro-value", "achievable-value", numeric_value(liabotro_value(L, k)),
        false, note);
  }
  return r;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string bound_report_csv(const bound_report& r) {
  std::string out = "L,k,covering_radius,label,kind,value,clamped,note\n";
  for (const auto& e : r.entries) {
    out += std::to_string(r.L) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.covering_radius) + ',' + e.label + ',' + e.kind + ',' +
           e.value.str() + ',' + (e.clamped ? "true" : "false") + ',' +
           csv_escape(e.note) + '\n';
  }
  return out;
}

inline nlohmann::ordered_json bound_report_json(const bound_report& r) {
  nlohmann::ordered_json j;
  j["L"] = r.L;
  j["k"] = r.k;
  j["covering_radius"] = r.covering_radius;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json je;
    je["label"] = e.label;
    je["kind"] = e.kind;
    if (e.value.is_exact())
      je["value"] = e.value.str();
    else
      je["value"] = e.value.approx;
    je["clamped"] = e.clamped;
    if (!e.note.empty()) je["note"] = e.note;
    j["entries"].push_back(je);
  }
  return j;
}

}  // namespace racforge

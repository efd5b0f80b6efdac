#pragma once

// Dense complex linear algebra for up to 7 qubits and the quantum code model:
// density matrices indexed by the L-bit input, one two-outcome POVM per bit.
// Ships the three constructions the toolkit needs (the Pauli-string family
// for L < 4^k - 1, the (L,L-1) family built on a unitary spreading map, and
// tensor composition) plus a diagonal embedding of any classical code.
//
// Conventions: qubit j carries bit j of a message, so basis index m is the
// message value itself.  A Pauli string prints like a bit string, leftmost
// letter on the highest qubit; "XZ" therefore applies X to qubit 1 and Z to
// qubit 0, mapping |00> to |10>.

#include "racforge/codes.hpp"
#include "racforge/core.hpp"
#include "racforge/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace racforge {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 7;
inline constexpr int kMaxMatrixDim = 1 << kMaxQubits;

// Square complex matrix, column-major, dimension a power of two up to 128.
class cmatrix {
 public:
  cmatrix() : n_(1), a_(1, cplx(0.0, 0.0)) {}

  explicit cmatrix(int n) : n_(n) {
    if (n < 1 || n > kMaxMatrixDim || (n & (n - 1)) != 0)
      throw std::invalid_argument("matrix dimension must be a power of two in [1, " +
                                  std::to_string(kMaxMatrixDim) + "], got " +
                                  std::to_string(n));
    a_.assign(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  }

  static cmatrix identity(int n) {
    cmatrix m(n);
    for (int j = 0; j < n; ++j) m.at(j, j) = 1.0;
    return m;
  }

  int dim() const { return n_; }

  cplx& at(int r, int c) { return a_[static_cast<std::size_t>(c) * n_ + r]; }
  const cplx& at(int r, int c) const {
    return a_[static_cast<std::size_t>(c) * n_ + r];
  }

  cmatrix& operator+=(const cmatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  cmatrix& operator-=(const cmatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  cmatrix& operator*=(cplx s) {
    for (cplx& v : a_) v *= s;
    return *this;
  }

  friend cmatrix operator+(cmatrix a, const cmatrix& b) { return a += b; }
  friend cmatrix operator-(cmatrix a, const cmatrix& b) { return a -= b; }
  friend cmatrix operator*(cplx s, cmatrix a) { return a *= s; }

  friend cmatrix operator*(const cmatrix& a, const cmatrix& b) {
    a.check_same_dim(b);
    const int n = a.n_;
    cmatrix c(n);
    for (int col = 0; col < n; ++col)
      for (int l = 0; l < n; ++l) {
        const cplx f = b.at(l, col);
        if (f == cplx(0.0, 0.0)) continue;
        const cplx* src = &a.a_[static_cast<std::size_t>(l) * n];
        cplx* dst = &c.a_[static_cast<std::size_t>(col) * n];
        for (int r = 0; r < n; ++r) dst[r] += src[r] * f;
      }
    return c;
  }

  cmatrix dagger() const {
    cmatrix d(n_);
    for (int c = 0; c < n_; ++c)
      for (int r = 0; r < n_; ++r) d.at(c, r) = std::conj(at(r, c));
    return d;
  }

  cplx trace() const {
    cplx t(0.0, 0.0);
    for (int j = 0; j < n_; ++j) t += at(j, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double hermiticity_defect() const {
    double m = 0.0;
    for (int c = 0; c < n_; ++c)
      for (int r = 0; r <= c; ++r)
        m = std::max(m, std::abs(at(r, c) - std::conj(at(c, r))));
    return m;
  }

  bool finite() const {
    for (const cplx& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  void check_same_dim(const cmatrix& o) const {
    if (n_ != o.n_)
      throw std::invalid_argument("matrix dimensions differ (" + std::to_string(n_) +
                                  " vs " + std::to_string(o.n_) + ")");
  }

  int n_;
  std::vector<cplx> a_;
};

inline cmatrix kron(const cmatrix& a, const cmatrix& b) {
  const int na = a.dim(), nb = b.dim();
  cmatrix k(na * nb);
  for (int ca = 0; ca < na; ++ca)
    for (int ra = 0; ra < na; ++ra) {
      const cplx f = a.at(ra, ca);
      if (f == cplx(0.0, 0.0)) continue;
      for (int cb = 0; cb < nb; ++cb)
        for (int rb = 0; rb < nb; ++rb)
          k.at(ra * nb + rb, ca * nb + cb) = f * b.at(rb, cb);
    }
  return k;
}

inline double trace_product_real(const cmatrix& a, const cmatrix& b) {
  // tr(ab) = sum_{r,c} a(r,c) b(c,r); real part only, callers pass Hermitians
  const int n = a.dim();
  double t = 0.0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const cplx& x = a.at(r, c);
      const cplx& y = b.at(c, r);
      t += x.real() * y.real() - x.imag() * y.imag();
    }
  return t;
}

// Pauli string: one letter per qubit, leftmost letter = highest qubit, plus a
// unit phase.  Hermitian exactly when the phase is real.
struct pauli_string {
  std::string letters;
  cplx phase = cplx(1.0, 0.0);

  int qubits() const { return static_cast<int>(letters.size()); }

  void validate() const {
    if (letters.empty() || qubits() > kMaxQubits)
      throw std::invalid_argument("pauli string must have 1 to " +
                                  std::to_string(kMaxQubits) + " letters, got \"" +
                                  letters + "\"");
    for (char ch : letters)
      if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
        throw std::invalid_argument("pauli letter must be one of I X Y Z, got '" +
                                    std::string(1, ch) + "' in \"" + letters + "\"");
    if (std::abs(std::abs(phase) - 1.0) > 1e-12)
      throw std::invalid_argument("pauli phase must have unit modulus");
  }
};

namespace detail {

inline cmatrix single_pauli(char letter) {
  cmatrix m(2);
  switch (letter) {
    case 'I': m.at(0, 0) = 1.0; m.at(1, 1) = 1.0; break;
    case 'X': m.at(0, 1) = 1.0; m.at(1, 0) = 1.0; break;
    case 'Y': m.at(0, 1) = cplx(0.0, -1.0); m.at(1, 0) = cplx(0.0, 1.0); break;
    case 'Z': m.at(0, 0) = 1.0; m.at(1, 1) = -1.0; break;
    default:
      throw std::invalid_argument("pauli letter must be one of I X Y Z, got '" +
                                  std::string(1, letter) + "'");
  }
  return m;
}

// Kronecker chain over per-qubit factors indexed by qubit; qubit k-1 ends up
// most significant, matching the bit-string value convention.
inline cmatrix kron_by_qubit(const std::vector<cmatrix>& factor) {
  cmatrix m = factor.back();
  for (int j = static_cast<int>(factor.size()) - 2; j >= 0; --j)
    m = kron(m, factor[static_cast<std::size_t>(j)]);
  return m;
}

}  // namespace detail

inline cmatrix pauli_matrix(const pauli_string& p) {
  p.validate();
  cmatrix m = detail::single_pauli(p.letters.front());
  for (std::size_t j = 1; j < p.letters.size(); ++j)
    m = kron(m, detail::single_pauli(p.letters[j]));
  return m *= p.phase;
}

namespace detail {

struct eigensystem {
  std::vector<double> values;  // ascending
  cmatrix vectors;             // column j pairs with values[j]
};

// Cyclic Jacobi for Hermitian matrices: repeatedly zero the (p,q) entry with
// a complex plane rotation until the off-diagonal Frobenius mass is gone.
inline eigensystem hermitian_eigensystem(cmatrix m, double hermitian_tol = 1e-8) {
  const int n = m.dim();
  if (!m.finite()) throw std::invalid_argument("eigensolver input has non-finite entries");
  const double defect = m.hermiticity_defect();
  const double scale = std::max(1.0, m.max_abs());
  if (defect > hermitian_tol * scale)
    throw std::invalid_argument("eigensolver input is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  // symmetrize away the representation noise before iterating
  for (int c = 0; c < n; ++c) {
    m.at(c, c) = cplx(m.at(c, c).real(), 0.0);
    for (int r = 0; r < c; ++r) {
      const cplx v = 0.5 * (m.at(r, c) + std::conj(m.at(c, r)));
      m.at(r, c) = v;
      m.at(c, r) = std::conj(v);
    }
  }

  cmatrix v = cmatrix::identity(n);
  const double stop = 1e-12 * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < c; ++r) off += std::norm(m.at(r, c));
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = m.at(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) continue;
        const cplx phase = apq / mag;
        const double app = m.at(p, p).real();
        const double aqq = m.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = [[c, s*phase], [-s*conj(phase), c]] acting on columns (p, q)
        const cplx gpq = s * phase;
        for (int r = 0; r < n; ++r) {
          const cplx mp = m.at(r, p), mq = m.at(r, q);
          m.at(r, p) = c * mp - std::conj(gpq) * mq;
          m.at(r, q) = gpq * mp + c * mq;
          const cplx vp = v.at(r, p), vq = v.at(r, q);
          v.at(r, p) = c * vp - std::conj(gpq) * vq;
          v.at(r, q) = gpq * vp + c * vq;
        }
        for (int col = 0; col < n; ++col) {
          const cplx mp = m.at(p, col), mq = m.at(q, col);
          m.at(p, col) = c * mp - gpq * mq;
          m.at(q, col) = std::conj(gpq) * mp + c * mq;
        }
        m.at(p, q) = cplx(0.0, 0.0);
        m.at(q, p) = cplx(0.0, 0.0);
      }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return m.at(a, a).real() < m.at(b, b).real(); });

  eigensystem out;
  out.values.reserve(static_cast<std::size_t>(n));
  out.vectors = cmatrix(n);
  for (int j = 0; j < n; ++j) {
    out.values.push_back(m.at(order[j], order[j]).real());
    for (int r = 0; r < n; ++r) out.vectors.at(r, j) = v.at(r, order[j]);
  }
  return out;
}

// Positive-semidefiniteness within `floor`: Cholesky of m + floor*I.  Every
// pivot of a positive definite matrix is at least its smallest eigenvalue,
// so a nonpositive pivot certifies min eig(m) < -floor up to rounding.
inline bool psd_within(const cmatrix& m, double floor) {
  const int n = m.dim();
  cmatrix h = m;
  for (int j = 0; j < n; ++j) h.at(j, j) += floor;
  std::vector<cplx> l(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  auto lower = [&](int r, int c) -> cplx& {
    return l[static_cast<std::size_t>(c) * n + r];
  };
  for (int j = 0; j < n; ++j) {
    double d = h.at(j, j).real();
    for (int c = 0; c < j; ++c) d -= std::norm(lower(j, c));
    if (d <= 0.0) return false;
    const double root = std::sqrt(d);
    lower(j, j) = root;
    for (int r = j + 1; r < n; ++r) {
      cplx sum = h.at(r, j);
      for (int c = 0; c < j; ++c) sum -= lower(r, c) * std::conj(lower(j, c));
      lower(r, j) = sum / root;
    }
  }
  return true;
}

}  // namespace detail

inline std::vector<double> hermitian_eigenvalues(const cmatrix& m) {
  return detail::hermitian_eigensystem(m).values;
}

// Two-outcome POVM for one bit: e0 decodes the bit as 0, e1 as 1.
struct povm_pair {
  cmatrix e0, e1;
};

// Quantum code: a density matrix per L-bit input and a POVM pair per bit.
struct quantum_code {
  int L = 0;
  int k = 0;
  std::string family;
  std::vector<cmatrix> states;    // 2^L entries, dimension 2^k
  std::vector<povm_pair> povms;   // L entries

  void validate() const {
    if (L < 1 || L > 24 || k < 1 || k > kMaxQubits)
      throw std::invalid_argument("quantum code needs 1 <= L <= 24 and 1 <= k <= " +
                                  std::to_string(kMaxQubits));
    const int dim = 1 << k;
    if (states.size() != (std::size_t{1} << L))
      throw std::invalid_argument("quantum code needs one state per input, expected " +
                                  std::to_string(std::size_t{1} << L) + ", got " +
                                  std::to_string(states.size()));
    if (povms.size() != static_cast<std::size_t>(L))
      throw std::invalid_argument("quantum code needs one POVM pair per bit");
    for (std::uint32_t b = 0; b < states.size(); ++b) {
      const cmatrix& rho = states[b];
      const std::string name = bit_string(b, L).str();
      if (rho.dim() != dim)
        throw std::invalid_argument("state " + name + " has dimension " +
                                    std::to_string(rho.dim()) + ", expected " +
                                    std::to_string(dim));
      if (!rho.finite())
        throw std::invalid_argument("state " + name + " has non-finite entries");
      if (rho.hermiticity_defect() > 1e-10)
        throw std::invalid_argument("state " + name + " is not Hermitian");
      if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-10)
        throw std::invalid_argument("state " + name + " does not have unit trace");
      if (!detail::psd_within(rho, 1e-9))
        throw std::invalid_argument("state " + name + " is not positive semidefinite");
    }
    for (int i = 0; i < L; ++i) {
      const povm_pair& pv = povms[static_cast<std::size_t>(i)];
      const std::string name = "POVM for bit " + std::to_string(i);
      for (const cmatrix* e : {&pv.e0, &pv.e1}) {
        if (e->dim() != dim)
          throw std::invalid_argument(name + " has dimension " +
                                      std::to_string(e->dim()) + ", expected " +
                                      std::to_string(dim));
        if (!e->finite())
          throw std::invalid_argument(name + " has non-finite entries");
        if (e->hermiticity_defect() > 1e-10)
          throw std::invalid_argument(name + " is not Hermitian");
        if (!detail::psd_within(*e, 1e-9))
          throw std::invalid_argument(name + " is not positive semidefinite");
      }
      cmatrix sum = pv.e0;
      sum += pv.e1;
      sum -= cmatrix::identity(dim);
      if (sum.max_abs() > 1e-10)
        throw std::invalid_argument("POVM for bit " + std::to_string(i) +
                                    " does not sum to the identity");
    }
  }
};

inline double bit_success_prob(const quantum_code& code, std::uint32_t b, int i) {
  if (i < 0 || i >= code.L)
    throw std::out_of_range("bit index " + std::to_string(i) + " out of range");
  if (b >= (std::uint32_t{1} << code.L))
    throw std::out_of_range("input does not fit in " + std::to_string(code.L) + " bits");
  const povm_pair& pv = code.povms[static_cast<std::size_t>(i)];
  const cmatrix& effect = ((b >> i) & 1u) ? pv.e1 : pv.e0;
  double p = trace_product_real(effect, code.states[b]);
  if (p < 0.0 || p > 1.0) {
    if (p < -1e-9 || p > 1.0 + 1e-9)
      throw std::runtime_error("trace for input " + bit_string(b, code.L).str() +
                               ", bit " + std::to_string(i) + " is " +
                               std::to_string(p) + ", outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
  }
  return p;
}

struct qrac_evaluation {
  double average = 0.0;
  double worst = 0.0;
};

inline qrac_evaluation qrac_success(const quantum_code& code) {
  const std::uint32_t inputs = std::uint32_t{1} << code.L;
  double total = 0.0;
  double worst = 1.0;
  for (std::uint32_t b = 0; b < inputs; ++b)
    for (int i = 0; i < code.L; ++i) {
      const double p = bit_success_prob(code, b, i);
      total += p;
      worst = std::min(worst, p);
    }
  return {total / (static_cast<double>(code.L) * inputs), worst};
}

// ---------------------------------------------------------------------------
// Pauli-string construction for L < 2^k (classical alphabet) or L < 4^k
// (full alphabet): states I/2^k + sum_i (-1)^{b_i} xi_i / (2^k sqrt((2^k-1)L)),
// effects (I +- xi_i)/2.  Both success probabilities come out at
// 1/2 + 1/2 sqrt(1/((2^k-1)L)) for any choice of distinct non-identity
// strings, so the strings are a free parameter with a lexicographic default.

enum class pauli_alphabet { classical, quantum };

inline std::vector<pauli_string> pauli_alphabet_strings(int k, pauli_alphabet mode) {
  if (k < 1 || k > kMaxQubits)
    throw std::invalid_argument("alphabet needs 1 <= k <= " +
                                std::to_string(kMaxQubits));
  const std::string letters = mode == pauli_alphabet::classical ? "IZ" : "IXYZ";
  const std::size_t base = letters.size();
  std::size_t count = 1;
  for (int j = 0; j < k; ++j) count *= base;
  std::vector<pauli_string> out;
  out.reserve(count - 1);
  for (std::size_t code = 1; code < count; ++code) {
    std::string s(static_cast<std::size_t>(k), 'I');
    std::size_t rest = code;
    for (int j = k - 1; j >= 0; --j) {
      s[static_cast<std::size_t>(j)] = letters[rest % base];
      rest /= base;
    }
    out.push_back({s, cplx(1.0, 0.0)});
  }
  // base-N counting with the most significant letter leftmost already emits
  // lexicographic order under I < X < Y < Z
  return out;
}

inline quantum_code liabotro_qrac(int L, int k, pauli_alphabet mode,
                               std::vector<std::string> custom = {}) {
  if (k < 1 || k > kMaxQubits)
    throw std::invalid_argument("pauli construction needs 1 <= k <= " +
                                std::to_string(kMaxQubits));
  const std::vector<pauli_string> alphabet = pauli_alphabet_strings(k, mode);
  if (L < 1 || static_cast<std::size_t>(L) > alphabet.size())
    throw std::invalid_argument(
        "pauli construction needs 1 <= L <= " + std::to_string(alphabet.size()) +
        " for k = " + std::to_string(k) +
        (mode == pauli_alphabet::classical ? " (classical alphabet)" : ""));

  std::vector<pauli_string> chosen;
  if (custom.empty()) {
    chosen.assign(alphabet.begin(), alphabet.begin() + L);
  } else {
    if (custom.size() != static_cast<std::size_t>(L))
      throw std::invalid_argument("expected " + std::to_string(L) +
                                  " pauli strings, got " + std::to_string(custom.size()));
    for (const std::string& s : custom) {
      pauli_string p{s, cplx(1.0, 0.0)};
      p.validate();
      if (p.qubits() != k)
        throw std::invalid_argument("pauli string \"" + s + "\" does not have " +
                                    std::to_string(k) + " letters");
      if (s.find_first_not_of('I') == std::string::npos)
        throw std::invalid_argument("the identity string is not allowed");
      if (mode == pauli_alphabet::classical &&
          s.find_first_not_of("IZ") != std::string::npos)
        throw std::invalid_argument("classical mode allows only I and Z letters, got \"" +
                                    s + "\"");
      chosen.push_back(p);
    }
    for (std::size_t a = 0; a < chosen.size(); ++a)
      for (std::size_t b = a + 1; b < chosen.size(); ++b)
        if (chosen[a].letters == chosen[b].letters)
          throw std::invalid_argument("pauli strings must be distinct, \"" +
                                      chosen[a].letters + "\" repeats");
  }

  const int dim = 1 << k;
  std::vector<cmatrix> xi;
  xi.reserve(chosen.size());
  for (const pauli_string& p : chosen) xi.push_back(pauli_matrix(p));

  quantum_code code;
  code.L = L;
  code.k = k;
  code.family = mode == pauli_alphabet::classical ? "liabotro-rac" : "liabotro-qrac";
  const double coef = 1.0 / (dim * std::sqrt((dim - 1.0) * L));
  const std::uint32_t inputs = std::uint32_t{1} << L;
  code.states.reserve(inputs);
  for (std::uint32_t b = 0; b < inputs; ++b) {
    cmatrix rho(dim);
    for (int j = 0; j < dim; ++j) rho.at(j, j) = 1.0 / dim;
    for (int i = 0; i < L; ++i) {
      const double sign = ((b >> i) & 1u) ? -coef : coef;
      cmatrix term = xi[static_cast<std::size_t>(i)];
      term *= sign;
      rho += term;
    }
    code.states.push_back(std::move(rho));
  }
  code.povms.reserve(chosen.size());
  for (const cmatrix& x : xi) {
    povm_pair pv{cmatrix::identity(dim), cmatrix::identity(dim)};
    pv.e0 += x;
    pv.e0 *= 0.5;
    pv.e1 -= x;
    pv.e1 *= 0.5;
    code.povms.push_back(std::move(pv));
  }
  code.validate();
  return code;
}

// ---------------------------------------------------------------------------
// (L,L-1) construction: parity-0 inputs encode as the basis state of their
// first L-1 bits, parity-1 inputs as U times that state, where U spreads a
// basis state uniformly over itself and its L-1 single-bit flips.

namespace detail {

// X on qubit j times Z on qubits 0..j (Z_j included); a signed permutation.
inline cmatrix spread_term(int qubits, int j) {
  std::vector<cmatrix> factor;
  factor.reserve(static_cast<std::size_t>(qubits));
  for (int l = 0; l < qubits; ++l) {
    if (l < j) {
      factor.push_back(single_pauli('Z'));
    } else if (l == j) {
      factor.push_back(single_pauli('X') * single_pauli('Z'));
    } else {
      factor.push_back(single_pauli('I'));
    }
  }
  return kron_by_qubit(factor);
}

inline cmatrix all_z(int qubits) {
  std::vector<cmatrix> factor(static_cast<std::size_t>(qubits), single_pauli('Z'));
  return kron_by_qubit(factor);
}

}  // namespace detail

inline cmatrix llm1_spreading_unitary(int L) {
  if (L < 2 || L > kMaxQubits + 1)
    throw std::invalid_argument("spreading unitary needs 2 <= L <= " +
                                std::to_string(kMaxQubits + 1));
  const int qubits = L - 1;
  cmatrix u = cmatrix::identity(1 << qubits);
  for (int j = 0; j < qubits; ++j) u += detail::spread_term(qubits, j);
  u *= 1.0 / std::sqrt(static_cast<double>(L));
  cmatrix residue = u.dagger() * u;
  residue -= cmatrix::identity(1 << qubits);
  if (residue.max_abs() > 1e-9)
    throw std::runtime_error("spreading map failed the unitarity check (residue " +
                             std::to_string(residue.max_abs()) + ")");
  return u;
}

inline quantum_code llm1_qrac(int L) {
  if (L < 2 || L > kMaxQubits + 1)
    throw std::invalid_argument("(L,L-1) construction needs 2 <= L <= " +
                                std::to_string(kMaxQubits + 1));
  const int k = L - 1;
  const int dim = 1 << k;
  const cmatrix u = llm1_spreading_unitary(L);
  const cmatrix udag = u.dagger();

  quantum_code code;
  code.L = L;
  code.k = k;
  code.family = "llm1-qrac";

  const std::uint32_t inputs = std::uint32_t{1} << L;
  const std::uint32_t mask = (std::uint32_t{1} << k) - 1;
  code.states.reserve(inputs);
  for (std::uint32_t b = 0; b < inputs; ++b) {
    const std::uint32_t c = b & mask;
    const bool odd = (std::popcount(b) & 1) != 0;
    std::vector<cplx> psi(static_cast<std::size_t>(dim), cplx(0.0, 0.0));
    if (odd) {
      for (int r = 0; r < dim; ++r) psi[static_cast<std::size_t>(r)] = u.at(r, static_cast<int>(c));
    } else {
      psi[c] = 1.0;
    }
    cmatrix rho(dim);
    for (int col = 0; col < dim; ++col) {
      const cplx f = std::conj(psi[static_cast<std::size_t>(col)]);
      if (f == cplx(0.0, 0.0)) continue;
      for (int r = 0; r < dim; ++r) rho.at(r, col) = psi[static_cast<std::size_t>(r)] * f;
    }
    code.states.push_back(std::move(rho));
  }

  const double gain = 0.5 * std::sqrt(static_cast<double>(L) / (L - 1.0));
  code.povms.reserve(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    cmatrix xi(dim);
    if (i < k) {
      std::vector<cmatrix> factor(static_cast<std::size_t>(k), detail::single_pauli('I'));
      factor[static_cast<std::size_t>(i)] = detail::single_pauli('Z');
      const cmatrix z = detail::kron_by_qubit(factor);
      xi = z + u * z * udag;
    } else {
      const cmatrix z = detail::all_z(k);
      xi = z - u * z * udag;
    }
    xi *= gain;
    povm_pair pv{cmatrix::identity(dim), cmatrix::identity(dim)};
    pv.e0 += xi;
    pv.e0 *= 0.5;
    pv.e1 -= xi;
    pv.e1 *= 0.5;
    code.povms.push_back(std::move(pv));
  }
  code.validate();
  return code;
}

// ---------------------------------------------------------------------------
// Tensor composition: each block encodes its own slice of the input.  Blocks
// are listed most significant first, matching how the input prints.

inline quantum_code tensor_compose(const std::vector<std::pair<quantum_code, int>>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor composition needs at least one block");
  int total_bits = 0, total_qubits = 0;
  for (const auto& [part, bits] : parts) {
    if (bits != part.L)
      throw std::invalid_argument("block declared " + std::to_string(bits) +
                                  " bits but its code encodes " + std::to_string(part.L));
    total_bits += part.L;
    total_qubits += part.k;
  }
  if (total_bits > 24)
    throw std::invalid_argument("composed code exceeds 24 bits");
  if (total_qubits > kMaxQubits)
    throw std::invalid_argument("composed code exceeds " + std::to_string(kMaxQubits) +
                                " qubits");

  quantum_code code;
  code.L = total_bits;
  code.k = total_qubits;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (j) code.family += "(x)";
    code.family += parts[j].first.family;
  }

  // bit/qubit offsets from the low end; the last-listed block sits at offset 0
  const std::size_t count = parts.size();
  std::vector<int> bit_off(count), qubit_off(count);
  int boff = 0, qoff = 0;
  for (std::size_t j = count; j-- > 0;) {
    bit_off[j] = boff;
    qubit_off[j] = qoff;
    boff += parts[j].first.L;
    qoff += parts[j].first.k;
  }

  const std::uint32_t inputs = std::uint32_t{1} << total_bits;
  code.states.reserve(inputs);
  for (std::uint32_t b = 0; b < inputs; ++b) {
    cmatrix rho = cmatrix::identity(1);
    for (std::size_t j = 0; j < count; ++j) {
      const quantum_code& part = parts[j].first;
      const std::uint32_t slice =
          (b >> bit_off[j]) & ((std::uint32_t{1} << part.L) - 1);
      rho = kron(rho, part.states[slice]);
    }
    code.states.push_back(std::move(rho));
  }

  code.povms.resize(static_cast<std::size_t>(total_bits));
  for (std::size_t j = 0; j < count; ++j) {
    const quantum_code& part = parts[j].first;
    const int hi = total_qubits - qubit_off[j] - part.k;
    for (int i = 0; i < part.L; ++i) {
      const povm_pair& pv = part.povms[static_cast<std::size_t>(i)];
      povm_pair lifted{
          kron(kron(cmatrix::identity(1 << hi), pv.e0), cmatrix::identity(1 << qubit_off[j])),
          kron(kron(cmatrix::identity(1 << hi), pv.e1), cmatrix::identity(1 << qubit_off[j]))};
      code.povms[static_cast<std::size_t>(bit_off[j] + i)] = std::move(lifted);
    }
  }
  code.validate();
  return code;
}

// ---------------------------------------------------------------------------
// Diagonal embedding of a classical code: encoder rows become diagonal
// density matrices, decoder columns become diagonal effects.

inline quantum_code classical_as_quantum(const classical_code& classical) {
  classical.validate();
  const int L = classical.L();
  const int k = classical.k();
  if (k > kMaxQubits)
    throw std::invalid_argument("classical code needs k <= " +
                                std::to_string(kMaxQubits) + " to embed, got " +
                                std::to_string(k));
  const int dim = 1 << k;

  quantum_code code;
  code.L = L;
  code.k = k;
  code.family = "diag(" + classical.construction + ")";
  const std::uint32_t inputs = std::uint32_t{1} << L;
  code.states.reserve(inputs);
  for (std::uint32_t b = 0; b < inputs; ++b) {
    cmatrix rho(dim);
    for (int m = 0; m < dim; ++m)
      rho.at(m, m) = to_double(classical.encoder.table[b][static_cast<std::size_t>(m)]);
    code.states.push_back(std::move(rho));
  }
  code.povms.reserve(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    povm_pair pv{cmatrix(dim), cmatrix(dim)};
    for (int m = 0; m < dim; ++m) {
      const double one = to_double(classical.decoder.table[static_cast<std::size_t>(m)]
                                                          [static_cast<std::size_t>(i)]);
      pv.e1.at(m, m) = one;
      pv.e0.at(m, m) = 1.0 - one;
    }
    code.povms.push_back(std::move(pv));
  }
  code.validate();
  return code;
}

// ---------------------------------------------------------------------------
// JSON: matrices as row-major nested arrays of [re, im] pairs.

namespace detail {

inline nlohmann::ordered_json matrix_to_json(const cmatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < m.dim(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.dim(); ++c) {
      const cplx& v = m.at(r, c);
      row.push_back({v.real(), v.imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline cmatrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(what + " must be a non-empty array of rows");
  const int n = static_cast<int>(j.size());
  cmatrix m(n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument(what + " row " + std::to_string(r) +
                                  " does not have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number())
        throw std::invalid_argument(what + " entry (" + std::to_string(r) + ", " +
                                    std::to_string(c) + ") must be an [re, im] pair");
      m.at(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

}  // namespace detail

inline nlohmann::ordered_json quantum_code_to_json(const quantum_code& code) {
  nlohmann::ordered_json j;
  j["type"] = "quantum";
  j["L"] = code.L;
  j["k"] = code.k;
  j["family"] = code.family;
  nlohmann::ordered_json states = nlohmann::ordered_json::array();
  for (const cmatrix& rho : code.states) states.push_back(detail::matrix_to_json(rho));
  j["states"] = std::move(states);
  nlohmann::ordered_json povms = nlohmann::ordered_json::array();
  for (const povm_pair& pv : code.povms) {
    nlohmann::ordered_json pair;
    pair["e0"] = detail::matrix_to_json(pv.e0);
    pair["e1"] = detail::matrix_to_json(pv.e1);
    povms.push_back(std::move(pair));
  }
  j["povms"] = std::move(povms);
  return j;
}

inline quantum_code quantum_code_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("type", "") != std::string("quantum"))
    throw std::invalid_argument("document is not a quantum code (missing type)");
  for (const char* key : {"L", "k", "family", "states", "povms"})
    if (!j.contains(key))
      throw std::invalid_argument("quantum code document lacks \"" + std::string(key) +
                                  "\"");
  quantum_code code;
  code.L = j.at("L").get<int>();
  code.k = j.at("k").get<int>();
  code.family = j.at("family").get<std::string>();
  const auto& states = j.at("states");
  if (!states.is_array())
    throw std::invalid_argument("\"states\" must be an array");
  for (std::size_t b = 0; b < states.size(); ++b)
    code.states.push_back(
        detail::matrix_from_json(states[b], "state " + std::to_string(b)));
  const auto& povms = j.at("povms");
  if (!povms.is_array())
    throw std::invalid_argument("\"povms\" must be an array");
  for (std::size_t i = 0; i < povms.size(); ++i) {
    const auto& pair = povms[i];
    if (!pair.is_object() || !pair.contains("e0") || !pair.contains("e1"))
      throw std::invalid_argument("POVM " + std::to_string(i) +
                                  " must be an object with \"e0\" and \"e1\"");
    code.povms.push_back(
        {detail::matrix_from_json(pair.at("e0"), "POVM " + std::to_string(i) + " e0"),
         detail::matrix_from_json(pair.at("e1"), "POVM " + std::to_string(i) + " e1")});
  }
  code.validate();
  return code;
}

inline void save_quantum_code(const quantum_code& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << quantum_code_to_json(code).dump(2) << '\n';
}

inline quantum_code load_quantum_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return quantum_code_from_json(j);
}

}  // namespace racforge

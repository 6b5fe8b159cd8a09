#pragma once

// Exact arithmetic in O_F / p^N for F/Q_p unramified of degree f, realised as
// (Z/p^N)[x]/(m(x)) with m monic and irreducible mod p.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/error.hpp"

namespace iwahori_gr {

inline constexpr int kMaxDegree = 8;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t int_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

namespace detail {

// Dense polynomials over F_p, lowest degree first.
using FpPoly = std::vector<std::int64_t>;

inline void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::int64_t inv_mod_prime(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = mod_floor(a, p);
  for (std::int64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return r;
}

inline FpPoly poly_rem(FpPoly a, const FpPoly& b, std::int64_t p) {
  trim(a);
  const std::int64_t lead_inv = inv_mod_prime(b.back(), p);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::int64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = mod_floor(a[shift + i] - c * b[i], p);
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool irreducible_mod_p(const FpPoly& m, std::int64_t p) {
  const int deg = static_cast<int>(m.size()) - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    const std::int64_t count = int_pow(p, d);
    for (std::int64_t code = 0; code < count; ++code) {
      FpPoly g(d + 1, 0);
      std::int64_t c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      if (poly_rem(m, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Parameters of the truncated ring O_F/p^N.
struct RingSpec {
  std::int64_t p = 0;
  int f = 0;
  int N = 0;
  std::int64_t pN = 0;                // p^N
  std::int64_t q = 0;                 // p^f, size of the residue field
  std::vector<std::int64_t> modulus;  // monic, degree f, coefficients in [0, p)

  std::int64_t p_power(int e) const { return int_pow(p, e); }
};

using Ring = std::shared_ptr<const RingSpec>;

/// Smallest monic irreducible of degree f over F_p, ordered by the base-p code
/// c_0 + c_1 p + ... + c_{f-1} p^{f-1} of its non-leading coefficients.
inline std::vector<std::int64_t> smallest_irreducible(std::int64_t p, int f) {
  const std::int64_t count = int_pow(p, f);
  for (std::int64_t code = 0; code < count; ++code) {
    std::vector<std::int64_t> m(f + 1, 0);
    std::int64_t c = code;
    for (int i = 0; i < f; ++i) {
      m[i] = c % p;
      c /= p;
    }
    m[f] = 1;
    if (detail::irreducible_mod_p(m, p)) return m;
  }
  throw Error(ErrorCode::BadDegree, "no irreducible polynomial found");
}

inline Ring make_ring(std::int64_t p, int f, int N) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (f < 1 || f > kMaxDegree) throw Error(ErrorCode::BadDegree, "degree must lie in [1, 8]");
  if (N < 1) throw Error(ErrorCode::BadDegree, "truncation level must be >= 1");
  long double bound = 1;
  for (int i = 0; i < N; ++i) bound *= static_cast<long double>(p);
  if (bound > 2147483648.0L) throw Error(ErrorCode::BadDegree, "p^N must not exceed 2^31");
  auto spec = std::make_shared<RingSpec>();
  spec->p = p;
  spec->f = f;
  spec->N = N;
  spec->pN = int_pow(p, N);
  spec->q = int_pow(p, f);
  spec->modulus = smallest_irreducible(p, f);
  return spec;
}

/// The same residue field and modulus at a different truncation level.
inline Ring with_precision(const Ring& ring, int N) {
  auto spec = std::make_shared<RingSpec>(*ring);
  spec->N = N;
  spec->pN = int_pow(ring->p, N);
  return spec;
}

/// p-adic valuation of a truncated element; zero is reported as "at least N".
class Valuation {
 public:
  static Valuation finite(int v) { return Valuation(v, false); }
  static Valuation at_least(int n) { return Valuation(n, true); }

  bool is_infinite() const { return infinite_; }
  /// Exact value when finite, the truncation level otherwise.
  int value() const { return value_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  Valuation(int v, bool inf) : value_(v), infinite_(inf) {}
  int value_;
  bool infinite_;
};

/// Element of k_F = F_{p^f} in the power basis of xi (the class of x).
struct Residue {
  std::vector<std::int64_t> coeffs;
  friend bool operator==(const Residue&, const Residue&) = default;
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](std::int64_t c) { return c == 0; });
  }
};

class TruncatedUnramified {
 public:
  TruncatedUnramified() = default;
  explicit TruncatedUnramified(Ring ring) : ring_(std::move(ring)) { coeffs_.fill(0); }

  static TruncatedUnramified zero(const Ring& ring) { return TruncatedUnramified(ring); }
  static TruncatedUnramified one(const Ring& ring) { return from_int(ring, 1); }
  static TruncatedUnramified from_int(const Ring& ring, std::int64_t v) {
    TruncatedUnramified r(ring);
    r.coeffs_[0] = mod_floor(v, ring->pN);
    return r;
  }
  /// The class of x, i.e. a lift of xi.
  static TruncatedUnramified generator(const Ring& ring) {
    TruncatedUnramified r(ring);
    if (ring->f == 1) {
      r.coeffs_[0] = mod_floor(-ring->modulus[0], ring->pN);
    } else {
      r.coeffs_[1] = 1;
    }
    return r;
  }
  static TruncatedUnramified from_coeffs(const Ring& ring, const std::vector<std::int64_t>& c) {
    if (static_cast<int>(c.size()) != ring->f) throw Error(ErrorCode::BadDegree, "coefficient count must equal f");
    TruncatedUnramified r(ring);
    for (int i = 0; i < ring->f; ++i) r.coeffs_[i] = mod_floor(c[i], ring->pN);
    return r;
  }

  const Ring& ring() const { return ring_; }
  std::int64_t coeff(int i) const { return coeffs_[i]; }
  std::vector<std::int64_t> coeffs() const {
    return std::vector<std::int64_t>(coeffs_.begin(), coeffs_.begin() + ring_->f);
  }

  bool is_zero() const {
    for (int i = 0; i < ring_->f; ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }
  bool is_one() const {
    if (coeffs_[0] != 1) return false;
    for (int i = 1; i < ring_->f; ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }

  Valuation valuation() const {
    const auto& R = *ring_;
    int best = R.N;
    for (int i = 0; i < R.f; ++i) {
      std::int64_t c = coeffs_[i];
      if (c == 0) continue;
      int v = 0;
      while (c % R.p == 0) {
        c /= R.p;
        ++v;
      }
      best = std::min(best, v);
    }
    return best >= R.N ? Valuation::at_least(R.N) : Valuation::finite(best);
  }

  bool is_unit() const { return !residue().is_zero(); }

  TruncatedUnramified operator-() const {
    TruncatedUnramified r(ring_);
    for (int i = 0; i < ring_->f; ++i) r.coeffs_[i] = coeffs_[i] == 0 ? 0 : ring_->pN - coeffs_[i];
    return r;
  }

  TruncatedUnramified& operator+=(const TruncatedUnramified& o) {
    for (int i = 0; i < ring_->f; ++i) {
      coeffs_[i] += o.coeffs_[i];
      if (coeffs_[i] >= ring_->pN) coeffs_[i] -= ring_->pN;
    }
    return *this;
  }
  TruncatedUnramified& operator-=(const TruncatedUnramified& o) {
    for (int i = 0; i < ring_->f; ++i) {
      coeffs_[i] -= o.coeffs_[i];
      if (coeffs_[i] < 0) coeffs_[i] += ring_->pN;
    }
    return *this;
  }
  friend TruncatedUnramified operator+(TruncatedUnramified a, const TruncatedUnramified& b) { return a += b; }
  friend TruncatedUnramified operator-(TruncatedUnramified a, const TruncatedUnramified& b) { return a -= b; }

  friend TruncatedUnramified operator*(const TruncatedUnramified& a, const TruncatedUnramified& b) {
    const auto& R = *a.ring_;
    const int f = R.f;
    if (f == 1) {
      TruncatedUnramified r(a.ring_);
      r.coeffs_[0] = static_cast<std::int64_t>(static_cast<__int128>(a.coeffs_[0]) * b.coeffs_[0] % R.pN);
      return r;
    }
    std::array<__int128, 2 * kMaxDegree> prod{};
    for (int i = 0; i < f; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (int j = 0; j < f; ++j) prod[i + j] += static_cast<__int128>(a.coeffs_[i]) * b.coeffs_[j];
    }
    for (int k = 0; k < 2 * f - 1; ++k) prod[k] %= R.pN;
    for (int k = 2 * f - 2; k >= f; --k) {
      const __int128 c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (int i = 0; i < f; ++i) prod[k - f + i] = (prod[k - f + i] - c * R.modulus[i]) % R.pN;
    }
    TruncatedUnramified r(a.ring_);
    for (int i = 0; i < f; ++i) r.coeffs_[i] = mod_floor(static_cast<std::int64_t>(prod[i]), R.pN);
    return r;
  }
  TruncatedUnramified& operator*=(const TruncatedUnramified& o) { return *this = *this * o; }

  TruncatedUnramified scaled(std::int64_t c) const { return *this * from_int(ring_, c); }

  TruncatedUnramified pow(std::uint64_t e) const {
    TruncatedUnramified r = one(ring_), b = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r *= b;
      b *= b;
    }
    return r;
  }

  /// Inverse of a unit; the unit group of O_F/p^N has order (q-1) q^{N-1}.
  TruncatedUnramified inv_unit() const {
    if (!is_unit())
      throw Error(ErrorCode::NotAUnit, "element has positive valuation");
    std::uint64_t order = static_cast<std::uint64_t>(ring_->q - 1);
    for (int i = 1; i < ring_->N; ++i) order *= static_cast<std::uint64_t>(ring_->q);
    return pow(order - 1);
  }

  /// Division by p^e, defined when the valuation is at least e; the result is
  /// only meaningful modulo p^{N-e}.
  TruncatedUnramified divided_by_p_power(int e) const {
    const std::int64_t pe = ring_->p_power(e);
    TruncatedUnramified r(ring_);
    for (int i = 0; i < ring_->f; ++i) {
      if (coeffs_[i] % pe != 0) throw Error(ErrorCode::NotAUnit, "not divisible by requested power of p");
      r.coeffs_[i] = coeffs_[i] / pe;
    }
    return r;
  }

  Residue residue() const {
    Residue r;
    r.coeffs.resize(ring_->f);
    for (int i = 0; i < ring_->f; ++i) r.coeffs[i] = coeffs_[i] % ring_->p;
    return r;
  }

  /// Reduction modulo p^e (e <= N), keeping the same ring.
  TruncatedUnramified reduced_mod_p_power(int e) const {
    const std::int64_t pe = ring_->p_power(e);
    TruncatedUnramified r(ring_);
    for (int i = 0; i < ring_->f; ++i) r.coeffs_[i] = coeffs_[i] % pe;
    return r;
  }

  friend bool operator==(const TruncatedUnramified& a, const TruncatedUnramified& b) {
    return a.coeffs_ == b.coeffs_ && a.ring_->p == b.ring_->p && a.ring_->N == b.ring_->N;
  }

  friend std::ostream& operator<<(std::ostream& os, const TruncatedUnramified& a) {
    os << '[';
    for (int i = 0; i < a.ring_->f; ++i) os << (i ? "," : "") << a.coeffs_[i];
    return os << ']';
  }

 private:
  Ring ring_;
  std::array<std::int64_t, kMaxDegree> coeffs_{};
};

inline TruncatedUnramified p_power_element(const Ring& ring, int e) {
  if (e >= ring->N) return TruncatedUnramified::zero(ring);
  return TruncatedUnramified::from_int(ring, ring->p_power(e));
}

/// The unique t with t^q = t and t = a mod p.
inline TruncatedUnramified teichmuller_lift(const TruncatedUnramified& a) {
  TruncatedUnramified t = a;
  const auto q = static_cast<std::uint64_t>(a.ring()->q);
  for (int i = 0; i <= a.ring()->N + 1; ++i) {
    TruncatedUnramified next = t.pow(q);
    if (next == t) return t;
    t = next;
  }
  return t;
}

/// [xi]^r for 0 <= r < f.
inline TruncatedUnramified teichmuller(int r, const Ring& ring) {
  if (r < 0 || r >= ring->f) throw Error(ErrorCode::BadIndex, "twist exponent out of range");
  if (r == 0) return TruncatedUnramified::one(ring);
  return teichmuller_lift(TruncatedUnramified::generator(ring).pow(static_cast<std::uint64_t>(r)));
}

/// Multiplication in k_F = F_p[x]/(m mod p), used for twist bookkeeping.
class ResidueField {
 public:
  explicit ResidueField(const Ring& ring) : ring_(with_precision(ring, 1)) {}

  std::int64_t p() const { return ring_->p; }
  int degree() const { return ring_->f; }

  Residue mul(const Residue& a, const Residue& b) const {
    return (TruncatedUnramified::from_coeffs(ring_, a.coeffs) * TruncatedUnramified::from_coeffs(ring_, b.coeffs))
        .residue();
  }

  /// xi^e expanded in the power basis 1, xi, ..., xi^{f-1}.
  Residue xi_power(int e) const { return TruncatedUnramified::generator(ring_).pow(static_cast<std::uint64_t>(e)).residue(); }

  Residue basis_vector(int r) const {
    Residue v;
    v.coeffs.assign(ring_->f, 0);
    v.coeffs[r] = 1;
    return v;
  }

 private:
  Ring ring_;
};

inline nlohmann::json element_to_json(const TruncatedUnramified& a) {
  return {{"p", a.ring()->p}, {"f", a.ring()->f}, {"N", a.ring()->N}, {"coeffs", a.coeffs()}};
}

inline TruncatedUnramified element_from_json(const Ring& ring, const nlohmann::json& j) {
  if (j.at("p").get<std::int64_t>() != ring->p || j.at("f").get<int>() != ring->f || j.at("N").get<int>() != ring->N)
    throw Error(ErrorCode::BadDegree, "ring parameters do not match");
  return TruncatedUnramified::from_coeffs(ring, j.at("coeffs").get<std::vector<std::int64_t>>());
}

}  // namespace iwahori_gr

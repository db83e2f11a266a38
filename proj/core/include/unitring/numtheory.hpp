#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>

#include "unitring/common.hpp"

namespace unitring {

// ---------------------------------------------------------------------------
// Modular arithmetic on u64 (all moduli fit in 63 bits).

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

i64 egcd(i64 a, i64 b, i64& x, i64& y);  // returns g = gcd(a,b) >= 0, ax+by=g
u64 inverse_mod(u64 a, u64 m);           // throws NoSolution if gcd != 1

// ---------------------------------------------------------------------------
// Primality and factorization.

// Deterministic Miller-Rabin for the full u64 range.
bool is_prime(u64 n);

// Prime factorization, primes ascending with exponents. Trial division below
// 10^4, then Pollard rho (Brent variant) on the remaining cofactors. The seed
// only influences rho's internal walks, never the returned factorization.
using Factorization = std::vector<std::pair<u64, u32>>;
Factorization factor(u64 n, u64 seed = 2);

// ---------------------------------------------------------------------------
// Finite fields F_{p^m}, elements as coefficient vectors of length m over F_p
// (little-endian in the power basis of a fixed irreducible modulus).

using FFElem = std::vector<u64>;

class FiniteField {
 public:
  // Explicit modulus: monic of degree m, coefficients < p.
  FiniteField(u64 p, std::vector<u64> modulus);

  // Searches monic polynomials of degree m for an irreducible one; for m = 1
  // the modulus is x. Deterministic given the seed.
  static std::shared_ptr<const FiniteField> make(u64 p, u32 m, u64 seed = 1);

  u64 p() const { return p_; }
  u32 m() const { return m_; }
  u64 q() const { return q_; }
  const std::vector<u64>& modulus() const { return modulus_; }
  const Factorization& unit_order_factors() const { return qm1_factors_; }

  FFElem zero() const { return FFElem(m_, 0); }
  FFElem one() const;
  FFElem from_u64(u64 c) const;
  bool is_zero(const FFElem& a) const;
  bool is_one(const FFElem& a) const;

  FFElem add(const FFElem& a, const FFElem& b) const;
  FFElem sub(const FFElem& a, const FFElem& b) const;
  FFElem neg(const FFElem& a) const;
  FFElem mul(const FFElem& a, const FFElem& b) const;
  FFElem inv(const FFElem& a) const;
  FFElem pow(const FFElem& a, u64 e) const;
  FFElem pow_signed(const FFElem& a, i64 e) const;

  // Enumeration: index in [0, q) <-> element, base-p digit encoding.
  FFElem element_at(u64 idx) const;
  u64 index_of(const FFElem& a) const;

  FFElem random(Rng& rng) const;

  // Multiplicative order of a nonzero element.
  u64 order(const FFElem& a) const;

 private:
  u64 p_;
  u32 m_;
  u64 q_;
  std::vector<u64> modulus_;   // degree m monic, size m+1
  Factorization qm1_factors_;  // factorization of q-1
};

using FieldPtr = std::shared_ptr<const FiniteField>;

// Smallest generator of k* in enumeration order; order verified against the
// stored factorization of q-1.
FFElem primitive_root(const FiniteField& k);

// x = discrete_log(k, g, a) with g^x = a, 0 <= x < order(g).
// Pohlig-Hellman over the factorization of order(g), baby-step/giant-step in
// each prime-power layer. Throws NotInSubgroup if a is outside <g>.
u64 discrete_log(const FiniteField& k, const FFElem& g, const FFElem& a);

// ---------------------------------------------------------------------------
// Polynomials over a finite field: coefficient vectors, low degree first,
// normalized so the leading coefficient is nonzero (zero polynomial = {}).

using FFPoly = std::vector<FFElem>;

int poly_deg(const FFPoly& f);
FFPoly poly_normalize(FFPoly f, const FiniteField& k);
FFPoly poly_x(const FiniteField& k);
FFPoly poly_const(const FiniteField& k, const FFElem& c);
FFPoly poly_add(const FiniteField& k, const FFPoly& a, const FFPoly& b);
FFPoly poly_sub(const FiniteField& k, const FFPoly& a, const FFPoly& b);
FFPoly poly_mul(const FiniteField& k, const FFPoly& a, const FFPoly& b);
// Requires b != 0; returns quotient, stores remainder.
FFPoly poly_divmod(const FiniteField& k, const FFPoly& a, const FFPoly& b, FFPoly& rem);
FFPoly poly_mod(const FiniteField& k, const FFPoly& a, const FFPoly& b);
FFPoly poly_gcd(const FiniteField& k, FFPoly a, FFPoly b);  // monic
FFPoly poly_monic(const FiniteField& k, const FFPoly& a);
FFPoly poly_derivative(const FiniteField& k, const FFPoly& a);
FFPoly poly_powmod(const FiniteField& k, FFPoly base, u128 e, const FFPoly& mod);
FFElem poly_eval(const FiniteField& k, const FFPoly& f, const FFElem& x);
bool poly_eq(const FFPoly& a, const FFPoly& b);

bool poly_irreducible(const FiniteField& k, const FFPoly& f);

// Complete factorization into monic irreducibles with multiplicities,
// canonically ordered (degree, then coefficient enumeration indices).
// Squarefree split, distinct-degree split, then Cantor-Zassenhaus
// equal-degree split driven by the seed.
std::vector<std::pair<FFPoly, u32>> factor_poly(const FiniteField& k, const FFPoly& f,
                                                u64 seed = 7);

// ---------------------------------------------------------------------------
// Dense matrices over a finite field (row major, n x n).

struct FFMatrix {
  u32 n = 0;
  std::vector<FFElem> e;  // size n*n

  FFElem& at(u32 i, u32 j) { return e[i * n + j]; }
  const FFElem& at(u32 i, u32 j) const { return e[i * n + j]; }
  bool operator==(const FFMatrix& o) const = default;
};

FFMatrix ff_mat_id(const FiniteField& k, u32 n);
FFMatrix ff_mat_zero(const FiniteField& k, u32 n);
FFMatrix ff_mat_mul(const FiniteField& k, const FFMatrix& a, const FFMatrix& b);
FFMatrix ff_mat_inv(const FiniteField& k, const FFMatrix& a);  // NoSolution if singular
FFElem ff_mat_det(const FiniteField& k, const FFMatrix& a);
u64 ff_mat_hash(const FFMatrix& a);

}  // namespace unitring

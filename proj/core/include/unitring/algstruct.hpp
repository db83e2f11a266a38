#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "unitring/common.hpp"
#include "unitring/finring.hpp"
#include "unitring/numtheory.hpp"

namespace unitring {

struct AlgebraBridge;
AlgebraBridge algebra_from_pring(RingPtr R);

// Finite dimensional unital algebra over the prime field F_p. Elements are
// coordinate vectors in the chosen basis, reduced to [0, p).
class FpAlgebra {
 public:
  // c has d*d entries, c[i*d + j] holding the coordinates of b_i * b_j.
  // Validates that p is prime and that the table is an associative unital
  // multiplication (BadSpec otherwise).
  FpAlgebra(u64 p, u32 d, const std::vector<RingElement>& c, RingElement unity);

  u64 p() const { return p_; }
  u32 dim() const { return R_->rank(); }
  RingElement table(u32 i, u32 j) const;

  // The underlying coordinate ring; all d_i equal p.
  const FinRing& ring() const { return *R_; }
  RingPtr ring_ptr() const { return R_; }

  RingElement zero() const { return R_->zero(); }
  RingElement unity() const { return R_->unity(); }
  RingElement basis(u32 i) const { return R_->basis(i); }
  RingElement add(const RingElement& a, const RingElement& b) const { return R_->add(a, b); }
  RingElement sub(const RingElement& a, const RingElement& b) const { return R_->sub(a, b); }
  RingElement smul(i64 c, const RingElement& a) const { return R_->smul(c, a); }
  RingElement mul(const RingElement& a, const RingElement& b) const { return R_->mul(a, b); }
  bool eq(const RingElement& a, const RingElement& b) const { return R_->eq(a, b); }
  bool is_zero(const RingElement& a) const { return R_->is_zero(a); }
  RingElement random(Rng& rng) const { return R_->random(rng); }

 private:
  FpAlgebra(u64 p, RingPtr R) : p_(p), R_(std::move(R)) {}
  friend AlgebraBridge algebra_from_pring(RingPtr R);

  u64 p_;
  RingPtr R_;
};

// A ring annihilated by a prime p, viewed as an F_p-algebra, together with
// mutually inverse coordinate maps (coordinates of additive order 1 in the
// ring are dropped on the algebra side).
struct AlgebraBridge {
  RingPtr src;
  FpAlgebra A;
  std::function<RingElement(const RingElement&)> to_alg;
  std::function<RingElement(const RingElement&)> from_alg;
};

// Requires p * R = 0 for the prime p = additive exponent of R; throws
// NotPAnnihilated when the exponent is 1 or composite.
AlgebraBridge algebra_from_pring(RingPtr R);

// Characteristic polynomial of a square matrix over F_p, via a Hessenberg
// reduction. rows[i][j] is the (i, j) entry; returns the coefficients of
// det(lambda*I - M), lowest degree first, length n + 1, monic.
std::vector<u64> fp_charpoly(u64 p, std::vector<std::vector<u64>> rows);

// Basis of the Jacobson radical of A as a subspace, in reduced row echelon
// form (empty when A is semisimple). Iterated trace-coefficient chain: level
// i cuts by the coefficient of lambda^(d - p^i) in the characteristic
// polynomial of left multiplication, for p^i <= d.
std::vector<RingElement> radical_fp(const FpAlgebra& A);

// Basis of {x : xb = bx for every basis element b}, reduced row echelon form.
std::vector<RingElement> center(const FpAlgebra& A);

// Jacobson radical of a finite ring of prime power order: the preimage of
// radical_fp(R/pR) under the reduction map. Verified nilpotent by repeated
// squaring. Throws NotPRing unless every additive order is a power of one
// prime.
Ideal jacobson_radical(RingPtr R);

// One simple factor of a semisimple algebra: the two-sided ideal cut out by
// the central idempotent idem, isomorphic to n x n matrices over k. to_matrix
// is defined on the whole algebra (it kills the other factors); from_matrix
// is its inverse on this factor, landing in A * idem.
struct WedderburnComponent {
  FieldPtr k;
  u32 n = 0;
  RingElement idem;
  std::function<FFMatrix(const RingElement&)> to_matrix;
  std::function<RingElement(const FFMatrix&)> from_matrix;
};

struct WedderburnData {
  u32 dim = 0;  // dimension of the algebra that was split
  std::vector<WedderburnComponent> components;
};

// Explicit Wedderburn decomposition of a semisimple F_p-algebra. Components
// are sorted by (|k|, n, idempotent coordinates). Throws NotSemisimple when
// the input has a radical (detected through the output checks, not a
// pre-pass) and SplitFailure if the randomized idempotent search exceeds its
// retry budget.
WedderburnData wedderburn(const FpAlgebra& A, u64 seed = 1);

}  // namespace unitring

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "unitring/abgrp.hpp"
#include "unitring/bigint.hpp"
#include "unitring/numtheory.hpp"

namespace unitring {

// A finite unital ring, given as a finite abelian group prod Z/d_i with a
// bilinear multiplication. Elements are dense coordinate rows reduced into
// [0, d_i). The d_i need not be prime powers or form a chain, but must all
// be >= 2 (the zero ring is rank 0).

using RingElement = std::vector<i64>;

struct SparseTerm {
  u32 idx;
  i64 c;
};

class FinRing {
 public:
  // table has rank*rank rows, row i*rank+j holding the coordinates of
  // b_i * b_j. Validates bilinearity against the additive orders,
  // associativity on all generator triples, and the two-sided unity.
  FinRing(std::vector<i64> add_orders, std::vector<std::vector<SparseTerm>> table,
          RingElement unity);

  // Same, skipping validation: for ring constructions whose tables are
  // consistent by construction (quotients, matrix and product rings).
  static FinRing unchecked(std::vector<i64> add_orders,
                           std::vector<std::vector<SparseTerm>> table, RingElement unity);

  u32 rank() const { return n_; }
  const std::vector<i64>& add_orders() const { return d_; }
  u64 size_u64() const;  // throws TooLarge above 2^62
  BigInt size() const;
  // Exponent of the additive group (lcm of the d_i).
  u64 add_exponent() const;

  const RingElement& unity() const { return one_; }
  RingElement zero() const { return RingElement(n_, 0); }
  RingElement basis(u32 i) const;
  RingElement from_u64(u64 c) const;  // c * 1
  RingElement reduce(RingElement x) const;

  RingElement add(const RingElement& a, const RingElement& b) const;
  RingElement sub(const RingElement& a, const RingElement& b) const;
  RingElement neg(const RingElement& a) const;
  RingElement smul(i64 c, const RingElement& a) const;
  RingElement mul(const RingElement& a, const RingElement& b) const;
  RingElement pow(const RingElement& a, u64 e) const;
  bool is_zero(const RingElement& a) const;
  bool eq(const RingElement& a, const RingElement& b) const { return a == b; }
  RingElement random(Rng& rng) const;
  std::vector<RingElement> all_elements(u64 limit = 1u << 20) const;

  // Matrix of y |-> x*y (resp. y*x) acting on coordinate rows from the
  // right: row j holds the coordinates of x * b_j (resp. b_j * x).
  IMat left_mul_matrix(const RingElement& x) const;
  IMat right_mul_matrix(const RingElement& x) const;

  // Two-sided inverse, or nullopt. Solves an integer linear system; prefer
  // structure-aware inverses in hot paths.
  std::optional<RingElement> unit_inverse(const RingElement& x) const;
  bool is_unit(const RingElement& x) const { return unit_inverse(x).has_value(); }

  std::vector<SparseTerm> table_row(u32 i, u32 j) const;

 private:
  FinRing() = default;
  void init(std::vector<i64> d, std::vector<std::vector<SparseTerm>> table, RingElement unity,
            bool validate);

  u32 n_ = 0;
  std::vector<i64> d_;
  RingElement one_;
  bool small_ = true;  // n^2 max(d)^3 fits i64: plain accumulation cannot overflow
  std::vector<u64> toff_;
  std::vector<SparseTerm> tdata_;
  // Characteristic-2 fast path: row (i*n + j) of the table packed into bits.
  bool gf2_ = false;
  u32 gf2w_ = 0;
  std::vector<u64> gf2t_;
};

using RingPtr = std::shared_ptr<const FinRing>;

// ---------------------------------------------------------------------------
// Standard constructions.

RingPtr zmod_ring(u64 m);
RingPtr gf_ring(u64 p, u32 m, u64 seed = 1);
RingPtr product_ring(const std::vector<FinRing>& factors);

// Mat_n(R) with basis e_{ab} tensor b_i, index (a*n + b)*rank + i.
struct MatrixRing {
  RingPtr ring;
  RingPtr base;
  u32 n = 0;
  RingElement embed(const std::vector<RingElement>& entries) const;  // n*n row-major
  std::vector<RingElement> entries(const RingElement& x) const;
  RingElement scalar(const RingElement& r) const;  // r * identity matrix
};
MatrixRing matrix_ring(RingPtr R, u32 n);

// B[x]/(f) for a commutative base and monic f (coefficients low to high,
// leading coefficient the unity). Basis b_s x^i, index i*rank + s.
RingPtr poly_quotient_ring(RingPtr B, const std::vector<RingElement>& f);

// ---------------------------------------------------------------------------
// Two-sided ideals, held as full-rank sublattices of the coordinate lattice
// (always containing diag(d) Z^n).

class Ideal {
 public:
  Ideal(RingPtr R, Lattice lat);
  // Two-sided ideal generated by elements.
  static Ideal span(RingPtr R, const std::vector<RingElement>& gens);

  const RingPtr& ring() const { return R_; }
  const Lattice& lattice() const { return lat_; }
  bool contains(const RingElement& x) const { return lat_.contains(IRow(x.begin(), x.end())); }
  RingElement reduce(const RingElement& x) const;
  BigInt size() const;
  bool is_zero_ideal() const;
  // Additive generators (the nonzero canonical basis rows, as elements).
  std::vector<RingElement> add_generators() const;

  Ideal add(const Ideal& o) const;
  Ideal mul(const Ideal& o) const;
  Ideal pow_2k(u32 k) const;  // I^(2^k) by k squarings
  bool operator==(const Ideal& o) const { return lat_ == o.lat_; }

 private:
  RingPtr R_;
  Lattice lat_;
};

// Quotient ring R/I with both maps. The quotient's additive coordinates are
// the invariant factors of the quotient group.

struct QuotientRing {
  RingPtr ring;
  std::function<RingElement(const RingElement&)> project;
  std::function<RingElement(const RingElement&)> lift;
};

QuotientRing quotient_ring(RingPtr R, const Ideal& I);

// ---------------------------------------------------------------------------
// Ring homomorphisms as value maps, and the canonical splitting into rings of
// prime-power order.

struct RingHom {
  RingPtr src;
  RingPtr dst;
  std::function<RingElement(const RingElement&)> forward;
  std::function<RingElement(const RingElement&)> preimage;
};

struct PComponent {
  u64 p;
  RingPtr ring;  // p-power order
  RingHom map;   // projection R -> ring, with a section as preimage
};

// R = R_{p_1} x ... x R_{p_r} via the idempotents of the CRT decomposition of
// the additive exponent. Empty for the zero ring.
std::vector<PComponent> p_decomposition(RingPtr R);

// ---------------------------------------------------------------------------
// Exhaustive oracles. Guarded: these enumerate the whole ring.

// All units, by scanning every element. Throws TooLarge above 2^16.
std::vector<RingElement> brute_force_units(const FinRing& R);

// The Jacobson radical via quasi-regularity: x lies in the radical exactly
// when 1 - a*x is a unit for every a. Throws TooLarge above 2^12.
Ideal brute_force_radical(RingPtr R);

}  // namespace unitring

#pragma once

#include <string>
#include <utility>

#include "unitring/algstruct.hpp"
#include "unitring/fpgrp.hpp"

namespace unitring {

// ---------------------------------------------------------------------------
// Unit groups of finite rings as black box groups. Elements carry their
// inverse so that no structure map ever solves a linear system.

struct UnitPair {
  RingElement v, vi;
};

// Wraps x as a unit element; throws NotAUnit.
Elem unit_elem(const FinRing& R, const RingElement& x);
const UnitPair& unit_cast(const Elem& e);
BBGroup ring_units_group(RingPtr R);

// Inverse of u = 1 + x with x nilpotent, by telescoped squaring.
RingElement unipotent_inverse(const FinRing& R, const RingElement& u);

// ---------------------------------------------------------------------------
// Matrix groups over finite fields. Black box elements are FFMatrix (for
// GL_n and SL_n) or FFElem (for the multiplicative group of the field).

// k^x as <x | x^(q-1)> on a primitive root; F_2 yields the empty
// presentation. dlog is a discrete logarithm, exp a power.
EffectivePresentation field_units_presentation(FieldPtr k);

// The elementary matrices e_ij(alpha^r) in the generator order used by
// sl_n_presentation and elementary_word: ordered pairs (i, j), i != j,
// lexicographic, each with powers r = 0..m-1 of the field's power basis.
std::vector<FFMatrix> elementary_generators(FieldPtr k, u32 n);

// Writes M as a word in the elementary generators by row reduction.
// Throws NotDeterminantOne.
Word elementary_word(FieldPtr k, const FFMatrix& M);

// Effective presentation of SL_n(k), n >= 2. For n >= 3 the generators are
// the elementary matrices; for n = 2 they are the transvection tau, the
// diagonal torus generator delta and the Weyl element U.
EffectivePresentation sl_n_presentation(FieldPtr k, u32 n);

// Effective presentation of GL_n(k), n >= 1: the determinant sequence
// 1 -> SL_n(k) -> GL_n(k) -> k^x -> 1 patched together; n = 1 delegates to
// field_units_presentation.
EffectivePresentation gl_n_presentation(FieldPtr k, u32 n);

// |GL_n(q)| = prod_{i<n} (q^n - q^i).
BigInt gl_order(u64 q, u32 n);

// ---------------------------------------------------------------------------
// Unipotent units. I must be a nilpotent two-sided ideal; both operations
// throw NotNilpotent otherwise.

// (1 + I)/(1 + I^2), abelian, via a |-> 1 - a. Black box elements are
// UnitPair representatives compared modulo 1 + I^2; at most rank(R)
// generators and rank(R)^2 relators.
EffectivePresentation unipotent_layer(RingPtr R, const Ideal& I);

// 1 + I, through the filtration by I^(2^j).
EffectivePresentation unipotent_presentation(RingPtr R, const Ideal& I);

// ---------------------------------------------------------------------------
// Assembled unit groups.

struct TraceEntry {
  std::string label;
  u64 ngens = 0;
  u64 nrels = 0;
  BigInt size;  // order of the layer or component group
};

struct UnitGroupResult {
  RingPtr ring;
  EffectivePresentation pres;  // black box elements are UnitPair
  BigInt order;
  std::vector<TraceEntry> trace;
};

// Units of a semisimple ring of prime-power order: Wedderburn components
// mapped to GL_{n_i}(k_i) and multiplied back together.
EffectivePresentation semisimple_units(RingPtr R, u64 seed = 1);

// Units of a ring of prime-power order via 1 -> 1+J -> R^x -> (R/J)^x -> 1.
// The second form takes a precomputed Jacobson radical.
UnitGroupResult pring_units(RingPtr R, u64 seed = 1);
UnitGroupResult pring_units(RingPtr R, const Ideal& radical, u64 seed = 1);

// Units of an arbitrary finite ring: primary decomposition, pring_units per
// component, internal product.
UnitGroupResult unit_group(RingPtr R, u64 seed = 1);

// Exact |R^x| from radical sizes and Wedderburn data; no unit enumeration.
BigInt unit_group_order(RingPtr R, u64 seed = 1);

// ---------------------------------------------------------------------------
// Abelian quotients of the unit group.

struct AbelianQuotientResult {
  FinAbGroup group;
  std::function<AbElement(const RingElement&)> forward;   // throws NotAUnit
  std::function<RingElement(const AbElement&)> preimage;  // a section
  std::string kernel;  // which subgroup the surjection kills
  // Invariants of the kernel when it is itself abelian: for k1 this is
  // ker(ab(R^x) -> K_1(R)), the "quotient" column of the batch report.
  // Empty for unit_abelianization, whose kernel is the commutator subgroup.
  std::vector<i64> kernel_invariants;
};

// R^x -> R^x / [R^x, R^x], read off the presentation's relators.
AbelianQuotientResult unit_abelianization(RingPtr R, u64 seed = 1);

// K_1(R) as ab(R^x)/ker(f) for the stabilization f(a) = diag(a, 1, 1) into
// the units of the 3x3 matrix ring over R, computed per prime component.
AbelianQuotientResult k1(RingPtr R, u64 seed = 1);

}  // namespace unitring

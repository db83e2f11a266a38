#pragma once

#include <any>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "unitring/abgrp.hpp"

namespace unitring {

// ---------------------------------------------------------------------------
// Words in a free group: freely reduced syllable lists (gen, exp) with
// 1-based generator indices and nonzero exponents.

struct Word {
  std::vector<std::pair<u32, i64>> syl;
  bool operator==(const Word& o) const { return syl == o.syl; }
};

Word word_one();
Word word_gen(u32 i, i64 e = 1);
Word word_mul(const Word& a, const Word& b);
Word word_inv(const Word& a);
Word word_pow(const Word& a, i64 e);
u64 word_length(const Word& a);  // sum of |exp|
Word word_shift(const Word& a, u32 offset);  // generator i -> i + offset
// Exponent-sum row of the word in Z^ngens (its image in the free abelian
// quotient).
IRow word_exponents(const Word& w, u32 ngens);

// ---------------------------------------------------------------------------

struct FpGroup {
  u32 ngens = 0;
  std::vector<Word> relators;
};

// Invariant factors of the abelianized group; throws InfiniteAbelianization
// when that quotient is infinite.
std::vector<i64> fp_abelian_invariants(const FpGroup& G);

// ---------------------------------------------------------------------------
// Coset enumeration on the trivial subgroup (HLT with coincidences).
// Success gives the regular action; nullopt means the coset cap was hit.

class CosetTable {
 public:
  u32 ngens = 0;
  u64 size = 0;
  // Row-major live table: entry for coset c and column g in [0, 2*ngens),
  // where column 2i is generator i+1 and column 2i+1 its inverse.
  std::vector<u64> act;
  // Definition edge for each coset (parent coset, column), parent of 0 is 0.
  std::vector<std::pair<u64, u32>> def;

  u64 apply(u64 c, u32 col) const { return act[c * 2 * ngens + col]; }
  u64 apply_word(u64 c, const Word& w) const;
  // Word in the generators carrying coset 0 to c.
  Word rep(u64 c) const;
};

std::optional<CosetTable> coset_enumeration(const FpGroup& G, u64 max_cosets);
std::optional<u64> todd_coxeter_order(const FpGroup& G, u64 max_cosets);

// ---------------------------------------------------------------------------
// Black-box groups: opaque elements with callable structure maps.

using Elem = std::any;

struct BBGroup {
  Elem id;
  std::function<Elem(const Elem&, const Elem&)> mul;
  std::function<Elem(const Elem&)> inv;
  std::function<bool(const Elem&, const Elem&)> eq;
};

Elem bbg_pow(const BBGroup& G, const Elem& x, i64 e);
Elem bbg_eval(const BBGroup& G, const Word& w, const std::vector<Elem>& gens);

struct GroupMap {
  std::function<Elem(const Elem&)> forward;
  std::function<Elem(const Elem&)> preimage;
};

// Short exact sequence 1 -> N -> G -> H -> 1. incl.preimage sections G -> N
// on the image of incl; proj.preimage is any set-theoretic section H -> G.
struct ExactSequence {
  BBGroup N, G, H;
  GroupMap incl, proj;
};

// ---------------------------------------------------------------------------
// A finite presentation of a black-box group together with mutually inverse
// evaluation (exp, via bbg_eval on gens) and rewriting (dlog) maps.

struct EffectivePresentation {
  BBGroup grp;
  FpGroup pres;
  std::vector<Elem> gens;
  std::function<Word(const Elem&)> dlog;

  Elem exp(const Word& w) const { return bbg_eval(grp, w, gens); }
};

// Presentation of the trivial group on no generators.
EffectivePresentation trivial_presentation(BBGroup G);

// Presentation of a finite abelian group on its invariant generators; black
// box elements are AbElement coordinate vectors.
EffectivePresentation abelian_presentation(const FinAbGroup& A);

// Carry a presentation along an isomorphism fwd: G -> G2 (with inverse bwd).
EffectivePresentation transport(const EffectivePresentation& P, BBGroup G2,
                                std::function<Elem(const Elem&)> fwd,
                                std::function<Elem(const Elem&)> bwd);

// Presentation of G from presentations of N and H in 1 -> N -> G -> H -> 1.
// Generators of H come first, then generators of N. Generator and relator
// counts obey |Z| <= |X| + |Y| and |V| <= |T| + |U| + |X||Y|.
EffectivePresentation extend_presentation(const ExactSequence& seq,
                                          const EffectivePresentation& presN,
                                          const EffectivePresentation& presH);

// Spot-check an extension: relators die in the group and dlog inverts exp on
// random words. Throws NotExact on a failed check.
void check_presentation(const EffectivePresentation& P, u32 samples, Rng& rng,
                        u64 word_length_cap = 40);

// One step of a subnormal chain G_{i-1} <| G_i: the sequence
// 1 -> G_{i-1} -> G_i -> A_i -> 1 together with a presentation of A_i.
struct ChainLayer {
  ExactSequence seq;
  EffectivePresentation quotient;
};

// Fold extend_presentation along a chain 1 = G_0 <| G_1 <| ... <| G_c,
// bottom layer first. bottom is the common black box group of the G_i.
EffectivePresentation chain_extensions(BBGroup bottom,
                                       const std::vector<ChainLayer>& layers);

// Internal direct product: factors embed in G with commuting images that
// generate G, and project maps recover each factor.
struct ProductFactor {
  EffectivePresentation pres;
  std::function<Elem(const Elem&)> embed;
  std::function<Elem(const Elem&)> project;
};

EffectivePresentation internal_product(BBGroup G, std::vector<ProductFactor> factors);

}  // namespace unitring

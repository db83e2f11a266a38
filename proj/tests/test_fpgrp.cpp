#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>

#include "unitring/fpgrp.hpp"

using namespace unitring;

namespace {

Word W(std::initializer_list<std::pair<u32, i64>> syls) {
  Word w;
  for (auto [g, e] : syls) w = word_mul(w, word_gen(g, e));
  return w;
}

// Commutator [a, b] = a b a^-1 b^-1.
Word comm(const Word& a, const Word& b) {
  return word_mul(word_mul(a, b), word_mul(word_inv(a), word_inv(b)));
}

// Permutations of {0..n-1} as a black-box group, for oracle groups.
using Perm = std::vector<u32>;

BBGroup perm_group(u32 n) {
  BBGroup G;
  Perm id(n);
  for (u32 i = 0; i < n; ++i) id[i] = i;
  G.id = id;
  G.mul = [](const Elem& a, const Elem& b) {
    const Perm& p = std::any_cast<const Perm&>(a);
    const Perm& q = std::any_cast<const Perm&>(b);
    Perm r(p.size());
    for (u32 i = 0; i < p.size(); ++i) r[i] = q[p[i]];
    return Elem(r);
  };
  G.inv = [](const Elem& a) {
    const Perm& p = std::any_cast<const Perm&>(a);
    Perm r(p.size());
    for (u32 i = 0; i < p.size(); ++i) r[p[i]] = i;
    return Elem(r);
  };
  G.eq = [](const Elem& a, const Elem& b) {
    return std::any_cast<const Perm&>(a) == std::any_cast<const Perm&>(b);
  };
  return G;
}

}  // namespace

TEST_CASE("word algebra") {
  Word ab = W({{1, 1}, {2, 1}});
  Word ba_inv = W({{2, -1}, {1, 1}});
  CHECK(word_mul(ab, ba_inv) == W({{1, 2}}));
  CHECK(word_inv(ab) == W({{2, -1}, {1, -1}}));
  CHECK(word_mul(ab, word_inv(ab)) == word_one());
  CHECK(word_pow(ab, 3) == W({{1, 1}, {2, 1}, {1, 1}, {2, 1}, {1, 1}, {2, 1}}));
  CHECK(word_pow(word_gen(2), -4) == word_gen(2, -4));
  CHECK(word_length(W({{1, 3}, {2, -2}})) == 5);
  CHECK(word_shift(ab, 5) == W({{6, 1}, {7, 1}}));
  CHECK(word_exponents(W({{1, 3}, {2, -2}, {1, -1}}), 3) == IRow{2, -2, 0});
}

TEST_CASE("abelianized invariants of presentations") {
  FpGroup g1{2, {word_gen(1, 2), word_gen(2, 3), comm(word_gen(1), word_gen(2))}};
  CHECK(fp_abelian_invariants(g1) == std::vector<i64>{6});
  // Dihedral of order 8.
  FpGroup d4{2, {word_gen(1, 4), word_gen(2, 2), word_pow(word_mul(word_gen(1), word_gen(2)), 2)}};
  CHECK(fp_abelian_invariants(d4) == std::vector<i64>{2, 2});
  FpGroup free2{2, {}};
  CHECK_THROWS_AS(fp_abelian_invariants(free2), InfiniteAbelianization);
}

TEST_CASE("coset enumeration: classic orders") {
  auto order = [](const FpGroup& g) { return todd_coxeter_order(g, 100000); };
  CHECK(order(FpGroup{1, {word_gen(1, 1)}}) == 1);
  CHECK(order(FpGroup{1, {word_gen(1, 6)}}) == 6);
  CHECK(order(FpGroup{0, {}}) == 1);
  // S3 = <a,b | a^3, b^2, (ab)^2>
  FpGroup s3{2, {word_gen(1, 3), word_gen(2, 2), word_pow(word_mul(word_gen(1), word_gen(2)), 2)}};
  CHECK(order(s3) == 6);
  // Quaternion group <a,b | a^4, a^2 b^-2, b^-1 a b a>
  FpGroup q8{2, {word_gen(1, 4), word_mul(word_gen(1, 2), word_gen(2, -2)),
                 W({{2, -1}, {1, 1}, {2, 1}, {1, 1}})}};
  CHECK(order(q8) == 8);
  // Rotation triangle groups (2,3,4) and (2,3,5).
  FpGroup s4{2, {word_gen(1, 2), word_gen(2, 3), word_pow(word_mul(word_gen(1), word_gen(2)), 4)}};
  CHECK(order(s4) == 24);
  FpGroup a5{2, {word_gen(1, 2), word_gen(2, 3), word_pow(word_mul(word_gen(1), word_gen(2)), 5)}};
  CHECK(order(a5) == 60);
  // (2,3,7) is infinite: the cap must trip.
  FpGroup hyp{2, {word_gen(1, 2), word_gen(2, 3), word_pow(word_mul(word_gen(1), word_gen(2)), 7)}};
  CHECK_FALSE(todd_coxeter_order(hyp, 20000).has_value());
}

TEST_CASE("coset table representatives act correctly") {
  FpGroup s4{2, {word_gen(1, 2), word_gen(2, 3), word_pow(word_mul(word_gen(1), word_gen(2)), 4)}};
  auto T = coset_enumeration(s4, 100000);
  REQUIRE(T.has_value());
  CHECK(T->size == 24);
  for (u64 c = 0; c < T->size; ++c) CHECK(T->apply_word(0, T->rep(c)) == c);
  // Multiplication through representatives is associative on samples.
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    u64 a = rng.below(T->size), b = rng.below(T->size), c = rng.below(T->size);
    u64 ab_c = T->apply_word(T->apply_word(a, T->rep(b)), T->rep(c));
    u64 a_bc = T->apply_word(a, T->rep(T->apply_word(b, T->rep(c))));
    CHECK(ab_c == a_bc);
  }
}

TEST_CASE("black box evaluation") {
  BBGroup G = perm_group(4);
  Perm a{1, 2, 3, 0};  // 4-cycle
  Perm b{1, 0, 2, 3};  // transposition
  std::vector<Elem> gens{a, b};
  CHECK(G.eq(bbg_pow(G, Elem(a), 4), G.id));
  CHECK(G.eq(bbg_pow(G, Elem(a), -1), bbg_pow(G, Elem(a), 3)));
  Elem w = bbg_eval(G, W({{1, 2}, {2, 1}, {1, -2}}), gens);
  Perm expect = std::any_cast<Perm>(
      G.mul(G.mul(bbg_pow(G, Elem(a), 2), Elem(b)), bbg_pow(G, Elem(a), -2)));
  CHECK(std::any_cast<Perm>(w) == expect);
}

TEST_CASE("abelian presentation") {
  FinAbGroup A({2, 4, 3});
  EffectivePresentation P = abelian_presentation(A);
  CHECK(P.pres.ngens == 3);
  CHECK(P.pres.relators.size() == 3 + 3);
  Rng rng(5);
  check_presentation(P, 30, rng);
  AbElement x{1, 3, 2};
  CHECK(std::any_cast<AbElement>(P.exp(P.dlog(Elem(x)))) == x);
  // Z2 x Z4 x Z3 in invariant-factor form.
  CHECK(fp_abelian_invariants(P.pres) == std::vector<i64>{2, 12});
}

TEST_CASE("extension: cyclic on cyclic") {
  // 1 -> Z2 -> Z4 -> Z2 -> 1 with black box Z4.
  FinAbGroup z4({4}), z2({2});
  EffectivePresentation presN = abelian_presentation(z2);
  EffectivePresentation presH = abelian_presentation(z2);
  BBGroup G = abelian_presentation(z4).grp;

  ExactSequence seq;
  seq.N = presN.grp;
  seq.G = G;
  seq.H = presH.grp;
  seq.incl.forward = [](const Elem& n) {
    return Elem(AbElement{2 * std::any_cast<const AbElement&>(n)[0]});
  };
  seq.incl.preimage = [](const Elem& g) {
    i64 v = std::any_cast<const AbElement&>(g)[0];
    if (v % 2) throw NotInSubgroup("not in 2Z/4");
    return Elem(AbElement{v / 2});
  };
  seq.proj.forward = [](const Elem& g) {
    return Elem(AbElement{std::any_cast<const AbElement&>(g)[0] % 2});
  };
  seq.proj.preimage = [](const Elem& h) {
    return Elem(AbElement{std::any_cast<const AbElement&>(h)[0]});
  };

  EffectivePresentation P = extend_presentation(seq, presN, presH);
  CHECK(P.pres.ngens == 2);
  CHECK(P.pres.relators.size() <= 1 + 1 + 1);
  CHECK(todd_coxeter_order(P.pres, 10000) == 4);
  Rng rng(7);
  check_presentation(P, 40, rng);
  for (i64 v = 0; v < 4; ++v) {
    Elem g = Elem(AbElement{v});
    CHECK(P.grp.eq(P.exp(P.dlog(g)), g));
  }
}

TEST_CASE("extension: S3 as C3 by C2") {
  BBGroup S3 = perm_group(3);
  Perm three{1, 2, 0}, swap01{1, 0, 2}, id{0, 1, 2};
  FinAbGroup z3({3}), z2({2});
  // N = <(012)> presented as Z3, mapped into S3.
  EffectivePresentation presN3 = abelian_presentation(z3);
  EffectivePresentation presN = transport(
      presN3, S3,
      [&](const Elem& n) {
        i64 v = std::any_cast<const AbElement&>(n)[0];
        Perm p = id;
        for (i64 i = 0; i < v; ++i) p = std::any_cast<Perm>(S3.mul(p, three));
        return Elem(p);
      },
      [&](const Elem& g) {
        const Perm& p = std::any_cast<const Perm&>(g);
        Perm cur = id;
        for (i64 v = 0; v < 3; ++v) {
          if (cur == p) return Elem(AbElement{v});
          cur = std::any_cast<Perm>(S3.mul(cur, three));
        }
        throw NotInSubgroup("not in A3");
      });
  EffectivePresentation presH = abelian_presentation(z2);

  auto parity = [](const Perm& p) {
    i64 s = 0;
    for (u32 i = 0; i < p.size(); ++i)
      for (u32 j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++s;
    return s % 2;
  };
  ExactSequence seq;
  seq.N = presN.grp;
  seq.G = S3;
  seq.H = presH.grp;
  seq.incl.forward = [](const Elem& n) { return n; };
  seq.incl.preimage = [parity](const Elem& g) {
    if (parity(std::any_cast<const Perm&>(g))) throw NotInSubgroup("odd");
    return g;
  };
  seq.proj.forward = [parity](const Elem& g) {
    return Elem(AbElement{parity(std::any_cast<const Perm&>(g))});
  };
  seq.proj.preimage = [=](const Elem& h) {
    return Elem(std::any_cast<const AbElement&>(h)[0] ? swap01 : id);
  };

  EffectivePresentation P = extend_presentation(seq, presN, presH);
  CHECK(P.pres.ngens == 2);
  CHECK(todd_coxeter_order(P.pres, 10000) == 6);
  Rng rng(11);
  check_presentation(P, 60, rng);
  // dlog returns a word for every group element.
  std::vector<Perm> all{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  for (const Perm& p : all) CHECK(P.grp.eq(P.exp(P.dlog(Elem(p))), Elem(p)));
}

TEST_CASE("internal product") {
  // Z6 as the internal product of <3> and <2>.
  FinAbGroup z6({6}), z2({2}), z3({3});
  BBGroup G = abelian_presentation(z6).grp;
  ProductFactor f2, f3;
  f2.pres = abelian_presentation(z2);
  f2.embed = [](const Elem& e) { return Elem(AbElement{3 * std::any_cast<const AbElement&>(e)[0]}); };
  f2.project = [](const Elem& g) {
    return Elem(AbElement{std::any_cast<const AbElement&>(g)[0] % 2});
  };
  f3.pres = abelian_presentation(z3);
  f3.embed = [](const Elem& e) { return Elem(AbElement{(2 * std::any_cast<const AbElement&>(e)[0]) % 6}); };
  f3.project = [](const Elem& g) {
    i64 v = std::any_cast<const AbElement&>(g)[0] % 3;
    // inverse of multiplication by 2 mod 3 is multiplication by 2
    return Elem(AbElement{(2 * v) % 3});
  };
  EffectivePresentation P = internal_product(G, {f2, f3});
  CHECK(P.pres.ngens == 2);
  CHECK(P.pres.relators.size() == 2 + 1);
  CHECK(todd_coxeter_order(P.pres, 1000) == 6);
  Rng rng(13);
  check_presentation(P, 50, rng);
  for (i64 v = 0; v < 6; ++v)
    CHECK(P.grp.eq(P.exp(P.dlog(Elem(AbElement{v}))), Elem(AbElement{v})));
}

TEST_CASE("trivial presentation patches cleanly") {
  FinAbGroup z5({5});
  EffectivePresentation presH = abelian_presentation(z5);
  BBGroup G = presH.grp;
  ExactSequence seq;
  seq.N = G;  // trivial subgroup uses the same element type
  seq.G = G;
  seq.H = G;
  seq.incl.forward = [](const Elem& e) { return e; };
  seq.incl.preimage = [](const Elem& e) { return e; };
  seq.proj.forward = [](const Elem& e) { return e; };
  seq.proj.preimage = [](const Elem& e) { return e; };
  EffectivePresentation P = extend_presentation(seq, trivial_presentation(G), presH);
  CHECK(P.pres.ngens == 1);
  CHECK(todd_coxeter_order(P.pres, 100) == 5);
  Rng rng(17);
  check_presentation(P, 30, rng);
}

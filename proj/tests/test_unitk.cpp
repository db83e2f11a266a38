#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "unitring/unitk.hpp"

using namespace unitring;

namespace {

const FFMatrix& mat_of(const Elem& e) { return std::any_cast<const FFMatrix&>(e); }

// Group algebra F_p[G] from a Cayley table over {0..n-1} with identity 0.
RingPtr group_algebra(u64 p, const std::vector<std::vector<u32>>& cay) {
  u32 n = static_cast<u32>(cay.size());
  std::vector<i64> d(n, static_cast<i64>(p));
  std::vector<std::vector<SparseTerm>> table(n * n);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) table[i * n + j] = {{cay[i][j], 1}};
  RingElement one(n, 0);
  one[0] = 1;
  return std::make_shared<FinRing>(FinRing(d, table, one));
}

std::vector<std::vector<u32>> cyclic_table(u32 n) {
  std::vector<std::vector<u32>> c(n, std::vector<u32>(n));
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) c[i][j] = (i + j) % n;
  return c;
}

// Dihedral group of order 2n: index a + n*b for r^a s^b.
std::vector<std::vector<u32>> dihedral_table(u32 n) {
  u32 N = 2 * n;
  std::vector<std::vector<u32>> c(N, std::vector<u32>(N));
  for (u32 x = 0; x < N; ++x)
    for (u32 y = 0; y < N; ++y) {
      u32 a = x % n, b = x / n, cc = y % n, dd = y / n;
      u32 e = b ? (a + n - cc) % n : (a + cc) % n;
      c[x][y] = e + n * ((b + dd) % 2);
    }
  return c;
}

std::vector<i64> inv(const FinAbGroup& g) { return g.invariants(); }

// Closure of the presentation's generator images under multiplication.
std::set<RingElement> generator_closure(const FinRing& R, const EffectivePresentation& P) {
  std::vector<RingElement> gens;
  for (u32 i = 1; i <= P.pres.ngens; ++i) {
    UnitPair u = unit_cast(P.exp(word_gen(i)));
    gens.push_back(u.v);
    gens.push_back(u.vi);
  }
  std::set<RingElement> seen{R.unity()};
  std::vector<RingElement> frontier{R.unity()};
  while (!frontier.empty()) {
    std::vector<RingElement> next;
    for (const RingElement& x : frontier)
      for (const RingElement& g : gens) {
        RingElement y = R.mul(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen;
}

void check_units_pipeline(RingPtr R, bool closure = true) {
  auto units = brute_force_units(*R);
  UnitGroupResult ug = unit_group(R, 1);
  CHECK(ug.order == BigInt(units.size()));
  CHECK(unit_group_order(R) == BigInt(units.size()));

  // every relator evaluates to 1 in the unit group
  for (const Word& r : ug.pres.pres.relators) {
    UnitPair u = unit_cast(ug.pres.exp(r));
    CHECK(R->eq(u.v, R->unity()));
  }

  // dlog and exp invert each other on every unit
  for (const RingElement& u : units) {
    Word w = ug.pres.dlog(unit_elem(*R, u));
    UnitPair back = unit_cast(ug.pres.exp(w));
    CHECK(R->eq(back.v, u));
  }

  if (closure) {
    std::set<RingElement> gen_span = generator_closure(*R, ug.pres);
    std::set<RingElement> unit_set(units.begin(), units.end());
    CHECK(gen_span == unit_set);
  }
}

}  // namespace

TEST_CASE("multiplicative groups of fields") {
  for (auto [p, m] : std::vector<std::pair<u64, u32>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
    auto k = FiniteField::make(p, m);
    u64 q = k->q();
    EffectivePresentation P = field_units_presentation(k);
    CHECK(P.pres.ngens == (q == 2 ? 0u : 1u));
    auto n = todd_coxeter_order(P.pres, 1000);
    REQUIRE(n.has_value());
    CHECK(*n == q - 1);
    // dlog inverts exp on every nonzero field element
    for (u64 c = 1; c < q; ++c) {
      FFElem x = k->element_at(c);
      Word w = P.dlog(Elem(x));
      CHECK(std::any_cast<const FFElem&>(P.exp(w)) == x);
    }
  }
}

TEST_CASE("elementary generators and row reduction words") {
  Rng rng(41);
  for (auto [p, m, n] : std::vector<std::tuple<u64, u32, u32>>{
           {2, 1, 2}, {3, 1, 2}, {2, 2, 3}, {5, 1, 3}}) {
    auto k = FiniteField::make(p, m);
    std::vector<FFMatrix> gens = elementary_generators(k, n);
    CHECK(gens.size() == static_cast<size_t>(n) * (n - 1) * m);
    // random products of elementary matrices round-trip through the word
    for (u32 trial = 0; trial < 20; ++trial) {
      FFMatrix M = ff_mat_id(*k, n);
      for (u32 s = 0; s < 8; ++s) M = ff_mat_mul(*k, M, gens[rng.below(gens.size())]);
      Word w = elementary_word(k, M);
      FFMatrix back = ff_mat_id(*k, n);
      for (auto [g, e] : w.syl) {
        REQUIRE(g >= 1);
        REQUIRE(g <= gens.size());
        FFMatrix fac = e >= 0 ? gens[g - 1] : ff_mat_inv(*k, gens[g - 1]);
        i64 reps = e >= 0 ? e : -e;
        for (i64 t = 0; t < reps; ++t) back = ff_mat_mul(*k, back, fac);
      }
      CHECK(back == M);
    }
  }
  // determinant != 1 is rejected
  auto k5 = FiniteField::make(5, 1);
  FFMatrix bad = ff_mat_id(*k5, 2);
  bad.at(0, 0) = k5->element_at(2);
  CHECK_THROWS_AS(elementary_word(k5, bad), NotDeterminantOne);
}

TEST_CASE("special linear group presentations enumerate to the right order") {
  Rng rng(7);
  for (u64 q : {2, 3, 4, 5, 7, 9}) {
    u64 p = (q == 4 || q == 8) ? 2 : (q == 9 ? 3 : q);
    u32 m = (q == 4 || q == 9) ? 2 : (q == 8 ? 3 : 1);
    auto k = FiniteField::make(p, m);
    EffectivePresentation P = sl_n_presentation(k, 2);
    CHECK(P.pres.relators.size() <= 10);
    auto n = todd_coxeter_order(P.pres, 40000);
    REQUIRE(n.has_value());
    CHECK(*n == q * (q * q - 1));
    CHECK_NOTHROW(check_presentation(P, 12, rng));
  }

  auto f2 = FiniteField::make(2, 1);
  auto f3 = FiniteField::make(3, 1);
  auto n32 = todd_coxeter_order(sl_n_presentation(f2, 3).pres, 40000);
  REQUIRE(n32.has_value());
  CHECK(*n32 == 168);
  auto n33 = todd_coxeter_order(sl_n_presentation(f3, 3).pres, 200000);
  REQUIRE(n33.has_value());
  CHECK(*n33 == 5616);

  CHECK_THROWS_AS(sl_n_presentation(f2, 1), BadSpec);
}

TEST_CASE("general linear group presentations") {
  Rng rng(19);
  auto f2 = FiniteField::make(2, 1);
  auto f3 = FiniteField::make(3, 1);
  auto f4 = FiniteField::make(2, 2);
  auto f5 = FiniteField::make(5, 1);
  std::vector<std::pair<EffectivePresentation, u64>> cases;
  cases.emplace_back(gl_n_presentation(f5, 1), 4);
  cases.emplace_back(gl_n_presentation(f2, 2), 6);
  cases.emplace_back(gl_n_presentation(f3, 2), 48);
  cases.emplace_back(gl_n_presentation(f4, 2), 180);
  cases.emplace_back(gl_n_presentation(f2, 3), 168);
  for (auto& [P, order] : cases) {
    auto n = todd_coxeter_order(P.pres, 40000);
    REQUIRE(n.has_value());
    CHECK(*n == order);
    CHECK_NOTHROW(check_presentation(P, 10, rng));
  }
  // dlog round trip on every element of GL_2(F_3)
  EffectivePresentation P = gl_n_presentation(f3, 2);
  u32 checked = 0;
  for (u64 a = 0; a < 81; ++a) {
    FFMatrix M{2, {f3->element_at(a % 3), f3->element_at(a / 3 % 3),
                   f3->element_at(a / 9 % 3), f3->element_at(a / 27 % 3)}};
    if (f3->is_zero(ff_mat_det(*f3, M))) continue;
    Word w = P.dlog(Elem(M));
    CHECK(mat_of(P.exp(w)) == M);
    ++checked;
  }
  CHECK(checked == 48);
}

TEST_CASE("gl order formula") {
  CHECK(gl_order(2, 1) == 1);
  CHECK(gl_order(2, 2) == 6);
  CHECK(gl_order(3, 2) == 48);
  CHECK(gl_order(4, 2) == 180);
  CHECK(gl_order(2, 3) == 168);
  CHECK(gl_order(2, 2) == BigInt(brute_force_units(*matrix_ring(gf_ring(2, 1), 2).ring).size()));
  CHECK(gl_order(3, 2) == BigInt(brute_force_units(*matrix_ring(zmod_ring(3), 2).ring).size()));
}

TEST_CASE("unit elements and unipotent inverses") {
  auto R = zmod_ring(8);
  CHECK_THROWS_AS(unit_elem(*R, RingElement{2}), NotAUnit);
  CHECK_THROWS_AS(unit_elem(*R, R->zero()), NotAUnit);
  UnitPair u = unit_cast(unit_elem(*R, RingElement{3}));
  CHECK(R->eq(R->mul(u.v, u.vi), R->unity()));

  // 1 + 2 is invertible by telescoping because 2 is nilpotent mod 8
  RingElement w = unipotent_inverse(*R, R->add(R->unity(), RingElement{2}));
  CHECK(R->eq(R->mul(RingElement{3}, w), R->unity()));
  // 1 + 1: the increment is not nilpotent
  CHECK_THROWS_AS(unipotent_inverse(*R, RingElement{2}), NotNilpotent);

  BBGroup G = ring_units_group(R);
  Elem a = unit_elem(*R, RingElement{3});
  Elem b = unit_elem(*R, RingElement{5});
  CHECK(R->eq(unit_cast(G.mul(a, b)).v, RingElement{7}));
  CHECK(R->eq(unit_cast(G.inv(a)).v, RingElement{3}));
  CHECK(G.eq(G.mul(a, G.inv(a)), G.id));
}

TEST_CASE("unipotent towers over chain rings") {
  auto R = zmod_ring(256);
  Ideal J = jacobson_radical(R);
  EffectivePresentation layer = unipotent_layer(R, J);
  CHECK(layer.pres.ngens <= R->rank());
  CHECK(layer.pres.relators.size() <= static_cast<size_t>(R->rank()) * R->rank());

  EffectivePresentation P = unipotent_presentation(R, J);
  auto n = todd_coxeter_order(P.pres, 4000);
  REQUIRE(n.has_value());
  CHECK(*n == 128);  // |1 + 2Z/256|
  Rng rng(3);
  CHECK_NOTHROW(check_presentation(P, 10, rng));

  // the whole ring is not a nilpotent ideal
  Lattice full(R->add_orders());
  IRow e0(R->rank(), 0);
  e0[0] = 1;
  full.add_row(e0);
  CHECK_THROWS_AS(unipotent_presentation(R, Ideal(R, full)), NotNilpotent);
}

TEST_CASE("unit groups match brute force enumeration") {
  check_units_pipeline(zmod_ring(8));
  check_units_pipeline(zmod_ring(9));
  check_units_pipeline(zmod_ring(12));
  check_units_pipeline(gf_ring(2, 2));
  check_units_pipeline(matrix_ring(gf_ring(2, 1), 2).ring);
  check_units_pipeline(matrix_ring(zmod_ring(3), 2).ring, false);
  check_units_pipeline(matrix_ring(zmod_ring(4), 2).ring, false);
  check_units_pipeline(group_algebra(2, cyclic_table(4)));
  check_units_pipeline(group_algebra(3, cyclic_table(3)));
  check_units_pipeline(group_algebra(2, dihedral_table(3)));
}

TEST_CASE("unit group presentations enumerate to the unit count") {
  for (RingPtr R : {zmod_ring(8), matrix_ring(gf_ring(2, 1), 2).ring,
                    group_algebra(2, cyclic_table(4)), matrix_ring(zmod_ring(4), 2).ring}) {
    UnitGroupResult ug = unit_group(R, 1);
    auto n = todd_coxeter_order(ug.pres.pres, 40000);
    REQUIRE(n.has_value());
    CHECK(BigInt(*n) == ug.order);
  }
}

TEST_CASE("prime power and semisimple guards") {
  CHECK_THROWS_AS(pring_units(zmod_ring(6)), NotPRing);
  CHECK_THROWS_AS(semisimple_units(zmod_ring(4)), NotSemisimple);
  CHECK_THROWS_AS(semisimple_units(zmod_ring(8)), NotSemisimple);

  // genuinely semisimple: F_4 x M_2(F_2) has units of order 3 * 6
  std::vector<FinRing> parts;
  parts.push_back(*gf_ring(2, 2));
  parts.push_back(*matrix_ring(gf_ring(2, 1), 2).ring);
  RingPtr Rp = product_ring(parts);
  EffectivePresentation P = semisimple_units(Rp, 1);
  auto n = todd_coxeter_order(P.pres, 2000);
  REQUIRE(n.has_value());
  CHECK(*n == 18);
}

TEST_CASE("trace accounting covers the assembled presentation") {
  auto R = matrix_ring(zmod_ring(4), 2).ring;
  UnitGroupResult ug = unit_group(R, 1);
  u64 gen_total = 0;
  BigInt size_prod = 1;
  for (const TraceEntry& t : ug.trace) {
    gen_total += t.ngens;
    size_prod *= t.size;
    CHECK(!t.label.empty());
  }
  CHECK(ug.pres.pres.ngens <= gen_total);
  CHECK(size_prod == ug.order);

  // two p-components: trace entries are tagged with their primes
  UnitGroupResult ug12 = unit_group(zmod_ring(12), 1);
  bool saw2 = false, saw3 = false;
  for (const TraceEntry& t : ug12.trace) {
    if (t.label.find("p=2") != std::string::npos) saw2 = true;
    if (t.label.find("p=3") != std::string::npos) saw3 = true;
  }
  CHECK(saw2);
  CHECK(saw3);
}

TEST_CASE("unit abelianization") {
  auto R = zmod_ring(8);
  AbelianQuotientResult ab = unit_abelianization(R, 1);
  CHECK(inv(ab.group) == std::vector<i64>{2, 2});
  CHECK(ab.kernel == "commutator subgroup of the unit group");

  // forward is a homomorphism and preimage a section
  auto M = matrix_ring(zmod_ring(3), 2).ring;
  AbelianQuotientResult mab = unit_abelianization(M, 1);
  CHECK(inv(mab.group) == std::vector<i64>{2});
  auto units = brute_force_units(*M);
  Rng rng(11);
  for (u32 t = 0; t < 100; ++t) {
    const RingElement& a = units[rng.below(units.size())];
    const RingElement& b = units[rng.below(units.size())];
    AbElement lhs = mab.forward(M->mul(a, b));
    AbElement rhs = mab.group.add(mab.forward(a), mab.forward(b));
    CHECK(lhs == rhs);
  }
  for (const AbElement& a : mab.group.all_elements()) {
    CHECK(mab.forward(mab.preimage(a)) == a);
  }
  CHECK_THROWS_AS(mab.forward(M->zero()), NotAUnit);
}

TEST_CASE("k1 of small rings") {
  // commutative: K_1 is the unit group itself
  AbelianQuotientResult k8 = k1(zmod_ring(8), 1);
  CHECK(inv(k8.group) == std::vector<i64>{2, 2});
  CHECK(k8.kernel_invariants.empty());
  for (RingPtr R : {zmod_ring(9), zmod_ring(12), gf_ring(2, 2)}) {
    CHECK(inv(k1(R, 1).group) == inv(unit_abelianization(R, 1).group));
  }

  // 2x2 matrices over F_2: ab(GL_2) = [2] dies under stabilization
  AbelianQuotientResult km = k1(matrix_ring(gf_ring(2, 1), 2).ring, 1);
  CHECK(inv(km.group) == std::vector<i64>{});
  CHECK(km.kernel_invariants == std::vector<i64>{2});

  // Morita invariance: K_1(M_2(F_3)) = K_1(F_3)
  AbelianQuotientResult k3 = k1(matrix_ring(zmod_ring(3), 2).ring, 1);
  CHECK(inv(k3.group) == std::vector<i64>{2});
  CHECK(k3.kernel_invariants.empty());

  // group algebra of S_3 over F_2: ab [2,2] with kernel [2]
  auto RS3 = group_algebra(2, dihedral_table(3));
  CHECK(inv(unit_abelianization(RS3, 1).group) == std::vector<i64>{2, 2});
  AbelianQuotientResult ks = k1(RS3, 1);
  CHECK(inv(ks.group) == std::vector<i64>{2});
  CHECK(ks.kernel_invariants == std::vector<i64>{2});
}

TEST_CASE("k1 maps and seed independence") {
  auto R = zmod_ring(12);
  AbelianQuotientResult k = k1(R, 1);
  for (const AbElement& a : k.group.all_elements()) {
    CHECK(k.forward(k.preimage(a)) == a);
  }
  // forward is multiplicative-to-additive
  auto units = brute_force_units(*R);
  for (const RingElement& a : units)
    for (const RingElement& b : units) {
      CHECK(k.forward(R->mul(a, b)) == k.group.add(k.forward(a), k.forward(b)));
    }

  auto RS3 = group_algebra(2, dihedral_table(3));
  CHECK(inv(k1(RS3, 1).group) == inv(k1(RS3, 9).group));
  CHECK(inv(k1(matrix_ring(gf_ring(2, 1), 2).ring, 5).group) == std::vector<i64>{});
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "unitring/algstruct.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

using namespace unitring;

namespace {

// Group algebra F_p[G] from a Cayley table: basis g_0..g_{n-1}, g_0 = id.
RingPtr group_algebra(u64 p, const std::vector<std::vector<u32>>& cayley) {
  u32 n = cayley.size();
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(n) * n);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) table[static_cast<size_t>(i) * n + j] = {{cayley[i][j], 1}};
  RingElement unity(n, 0);
  unity[0] = 1;
  FinRing R(std::vector<i64>(n, static_cast<i64>(p)), std::move(table), std::move(unity));
  return std::make_shared<const FinRing>(std::move(R));
}

// S3 as permutations of {0,1,2}, identity first.
std::vector<std::vector<u32>> s3_table() {
  std::vector<std::vector<u32>> perms{{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                      {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  u32 n = perms.size();
  std::vector<std::vector<u32>> t(n, std::vector<u32>(n));
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) {
      std::vector<u32> c(3);
      for (u32 x = 0; x < 3; ++x) c[x] = perms[i][perms[j][x]];
      for (u32 k = 0; k < n; ++k)
        if (perms[k] == c) t[i][j] = k;
    }
  return t;
}

// Dihedral group of order 2n: elements r^a s^b, index a + n*b.
std::vector<std::vector<u32>> dihedral_table(u32 n) {
  auto idx = [n](u32 a, u32 b) { return a + n * b; };
  std::vector<std::vector<u32>> t(2 * n, std::vector<u32>(2 * n));
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < 2; ++b)
      for (u32 c = 0; c < n; ++c)
        for (u32 d2 = 0; d2 < 2; ++d2) {
          // (r^a s^b)(r^c s^d) = r^(a + c or a - c) s^(b+d)
          u32 e = b ? (a + n - c) % n : (a + c) % n;
          t[idx(a, b)][idx(c, d2)] = idx(e, (b + d2) % 2);
        }
  return t;
}

// F_p[x]/(f), f given low order first.
RingPtr fpx_mod(u64 p, std::vector<i64> f) {
  auto B = zmod_ring(p);
  std::vector<RingElement> fe;
  for (i64 c : f) fe.push_back(RingElement{c});
  return poly_quotient_ring(B, fe);
}

std::vector<std::vector<u64>> to_rows(u64 p, const std::vector<RingElement>& v) {
  std::vector<std::vector<u64>> out;
  for (const auto& x : v) {
    std::vector<u64> r;
    for (i64 c : x) r.push_back(static_cast<u64>(mod_floor(c, static_cast<i64>(p))));
    out.push_back(std::move(r));
  }
  return out;
}

// Canonical reduced echelon form for subspace comparison.
std::vector<std::vector<u64>> echelon(u64 p, std::vector<std::vector<u64>> rows) {
  std::vector<std::vector<u64>> out;
  std::vector<u32> piv;
  for (auto& v : rows) {
    if (v.empty()) continue;
    u32 cols = v.size();
    for (size_t r = 0; r < out.size(); ++r) {
      u64 c = v[piv[r]];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) v[j] = (v[j] + (p - c) * out[r][j]) % p;
    }
    u32 pc = cols;
    for (u32 j = 0; j < cols; ++j)
      if (v[j]) {
        pc = j;
        break;
      }
    if (pc == cols) continue;
    u64 inv = inverse_mod(v[pc], p);
    for (u32 j = 0; j < cols; ++j) v[j] = v[j] * inv % p;
    for (size_t r = 0; r < out.size(); ++r) {
      u64 c = out[r][pc];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) out[r][j] = (out[r][j] + (p - c) * v[j]) % p;
    }
    out.push_back(v);
    piv.push_back(pc);
  }
  std::vector<size_t> ord(out.size());
  for (size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return piv[a] < piv[b]; });
  std::vector<std::vector<u64>> s;
  for (size_t i : ord) s.push_back(out[i]);
  return s;
}

// Radical of a p-annihilated ring by the two routes, compared as subspaces.
void check_radical_against_oracle(RingPtr R) {
  AlgebraBridge br = algebra_from_pring(R);
  auto fast = radical_fp(br.A);
  Ideal slow = brute_force_radical(R);
  std::vector<RingElement> slow_alg;
  for (const auto& g : slow.add_generators()) slow_alg.push_back(br.to_alg(g));
  CHECK(echelon(br.A.p(), to_rows(br.A.p(), fast)) ==
        echelon(br.A.p(), to_rows(br.A.p(), slow_alg)));
}

}  // namespace

TEST_CASE("bridge to an F_p algebra and back") {
  auto R = matrix_ring(zmod_ring(3), 2);
  AlgebraBridge br = algebra_from_pring(R.ring);
  CHECK(br.A.p() == 3);
  CHECK(br.A.dim() == 4);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto x = R.ring->random(rng);
    auto y = R.ring->random(rng);
    // mutually inverse and multiplicative
    CHECK(R.ring->eq(br.from_alg(br.to_alg(x)), x));
    CHECK(br.A.eq(br.to_alg(R.ring->mul(x, y)), br.A.mul(br.to_alg(x), br.to_alg(y))));
    CHECK(br.A.eq(br.to_alg(R.ring->add(x, y)), br.A.add(br.to_alg(x), br.to_alg(y))));
  }
  CHECK(br.A.eq(br.to_alg(R.ring->unity()), br.A.unity()));
}

TEST_CASE("bridge rejects rings not annihilated by a prime") {
  CHECK_THROWS_AS(algebra_from_pring(zmod_ring(4)), NotPAnnihilated);
  CHECK_THROWS_AS(algebra_from_pring(zmod_ring(6)), NotPAnnihilated);
  CHECK_THROWS_AS(algebra_from_pring(zmod_ring(1)), NotPAnnihilated);
}

TEST_CASE("bridge of a group algebra") {
  auto R = group_algebra(2, dihedral_table(2));  // F2[C2 x C2]
  AlgebraBridge br = algebra_from_pring(R);
  CHECK(br.A.dim() == 4);
  CHECK(br.A.p() == 2);
}

TEST_CASE("characteristic polynomial: companion matrix") {
  // companion of x^3 + x + 1 over F2
  std::vector<std::vector<u64>> C{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
  CHECK(fp_charpoly(2, C) == std::vector<u64>{1, 1, 0, 1});
}

TEST_CASE("characteristic polynomial: Cayley-Hamilton and invariants") {
  Rng rng(11);
  for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
    for (int trial = 0; trial < 6; ++trial) {
      u32 n = 1 + rng.below(5);
      std::vector<std::vector<u64>> M(n, std::vector<u64>(n));
      for (auto& r : M)
        for (auto& x : r) x = rng.below(p);
      auto cp = fp_charpoly(p, M);
      REQUIRE(cp.size() == n + 1);
      CHECK(cp[n] == 1);

      // trace sits at the subleading coefficient with a sign
      u64 tr = 0;
      for (u32 i = 0; i < n; ++i) tr = (tr + M[i][i]) % p;
      CHECK(cp[n - 1] == (p - tr) % p);

      // determinant from the constant term: det(-M) = (-1)^n det M
      auto k = FiniteField::make(p, 1);
      FFMatrix F = ff_mat_zero(*k, n);
      for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j) F.at(i, j) = FFElem{M[i][j]};
      u64 det = ff_mat_det(*k, F)[0];
      u64 expect = n % 2 ? (p - det) % p : det;
      CHECK(cp[0] == expect);

      // Cayley-Hamilton: the matrix satisfies its own polynomial
      auto matmul = [&](const std::vector<std::vector<u64>>& A,
                        const std::vector<std::vector<u64>>& B) {
        std::vector<std::vector<u64>> C2(n, std::vector<u64>(n, 0));
        for (u32 i = 0; i < n; ++i)
          for (u32 l = 0; l < n; ++l)
            for (u32 j = 0; j < n; ++j) C2[i][j] = (C2[i][j] + A[i][l] * B[l][j]) % p;
        return C2;
      };
      std::vector<std::vector<u64>> acc(n, std::vector<u64>(n, 0)),
          pw(n, std::vector<u64>(n, 0));
      for (u32 i = 0; i < n; ++i) pw[i][i] = 1;
      for (u32 t = 0; t <= n; ++t) {
        for (u32 i = 0; i < n; ++i)
          for (u32 j = 0; j < n; ++j) acc[i][j] = (acc[i][j] + cp[t] * pw[i][j]) % p;
        if (t < n) pw = matmul(pw, M);
      }
      for (u32 i = 0; i < n; ++i)
        for (u32 j = 0; j < n; ++j) CHECK(acc[i][j] == 0);
    }
  }
}

TEST_CASE("radical of a simple algebra is zero") {
  auto M = matrix_ring(zmod_ring(2), 2);
  AlgebraBridge br = algebra_from_pring(M.ring);
  CHECK(radical_fp(br.A).empty());
}

TEST_CASE("radical of F2[C2]") {
  auto R = fpx_mod(2, {1, 0, 1});  // x^2 + 1 = (x+1)^2
  AlgebraBridge br = algebra_from_pring(R);
  auto J = radical_fp(br.A);
  REQUIRE(J.size() == 1);
  CHECK(J[0] == RingElement{1, 1});  // 1 + g
}

TEST_CASE("radical of upper triangular matrices") {
  // basis e11, e12, e22 over F3
  std::vector<RingElement> c(9, RingElement(3, 0));
  auto at = [&](u32 i, u32 j) -> RingElement& { return c[i * 3 + j]; };
  at(0, 0) = {1, 0, 0};  // e11 e11
  at(0, 1) = {0, 1, 0};  // e11 e12
  at(1, 2) = {0, 1, 0};  // e12 e22
  at(2, 2) = {0, 0, 1};  // e22 e22
  FpAlgebra A(3, 3, c, RingElement{1, 0, 1});
  auto J = radical_fp(A);
  REQUIRE(J.size() == 1);
  CHECK(J[0] == RingElement{0, 1, 0});
}

TEST_CASE("radical matches the brute force oracle") {
  check_radical_against_oracle(fpx_mod(2, {1, 0, 1}));           // F2[C2]
  check_radical_against_oracle(fpx_mod(2, {1, 0, 0, 0, 1}));     // F2[C4]
  check_radical_against_oracle(fpx_mod(3, {2, 0, 0, 1}));        // F3[C3], x^3 - 1
  check_radical_against_oracle(fpx_mod(2, {1, 1, 1}));           // F4, a field
  check_radical_against_oracle(matrix_ring(zmod_ring(2), 2).ring);
  check_radical_against_oracle(gf_ring(3, 2));
  check_radical_against_oracle(group_algebra(2, s3_table()));    // F2[S3]
  check_radical_against_oracle(group_algebra(2, dihedral_table(4)));  // F2[D8]
  check_radical_against_oracle(group_algebra(3, s3_table()));    // F3[S3]
}

TEST_CASE("radical is idempotent") {
  auto R = fpx_mod(2, {1, 0, 0, 0, 1});  // F2[C4], radical dimension 3
  AlgebraBridge br = algebra_from_pring(R);
  auto J = radical_fp(br.A);
  CHECK(J.size() == 3);
  std::vector<RingElement> lifted;
  for (const auto& v : J) lifted.push_back(br.from_alg(v));
  QuotientRing Q = quotient_ring(R, Ideal::span(R, lifted));
  AlgebraBridge br2 = algebra_from_pring(Q.ring);
  CHECK(radical_fp(br2.A).empty());
}

TEST_CASE("center computations") {
  auto M = matrix_ring(zmod_ring(2), 2);
  AlgebraBridge br = algebra_from_pring(M.ring);
  auto Z = center(br.A);
  REQUIRE(Z.size() == 1);
  CHECK(br.A.eq(Z[0], br.A.unity()));

  auto C3 = fpx_mod(2, {1, 0, 0, 1});  // F2[C3]
  AlgebraBridge br2 = algebra_from_pring(C3);
  CHECK(center(br2.A).size() == 3);

  // class sums of S3: dimension 3
  AlgebraBridge br3 = algebra_from_pring(group_algebra(2, s3_table()));
  CHECK(center(br3.A).size() == 3);
}

TEST_CASE("jacobson radical of Z8") {
  auto R = zmod_ring(8);
  Ideal J = jacobson_radical(R);
  CHECK(J.size() == BigInt(4));
  CHECK(J.contains(RingElement{2}));
  CHECK(J.contains(RingElement{6}));
  CHECK(!J.contains(RingElement{1}));
}

TEST_CASE("jacobson radical of F2[D8] has codimension 1") {
  auto R = group_algebra(2, dihedral_table(4));
  Ideal J = jacobson_radical(R);
  CHECK(J.size() == BigInt(128));  // dimension 7 of 8

  // matches the brute force oracle at order 256
  Ideal O = brute_force_radical(R);
  CHECK(J.size() == O.size());
  for (const auto& g : O.add_generators()) CHECK(J.contains(g));

  // nilpotency witness: (D8 augmentation-style radical)^8 = 0
  CHECK(J.pow_2k(3).is_zero_ideal());
}

TEST_CASE("jacobson radical oracle sweep") {
  std::vector<RingPtr> rings{zmod_ring(4),  zmod_ring(27), gf_ring(2, 3),
                             fpx_mod(2, {1, 0, 0, 0, 0, 0, 1}),  // F2[C6]
                             matrix_ring(zmod_ring(4), 2).ring};
  for (const auto& R : rings) {
    Ideal J = jacobson_radical(R);
    Ideal O = brute_force_radical(R);
    CHECK(J.size() == O.size());
    for (const auto& g : O.add_generators()) CHECK(J.contains(g));
  }
}

TEST_CASE("jacobson radical rejects mixed characteristic") {
  CHECK_THROWS_AS(jacobson_radical(zmod_ring(12)), NotPRing);
  CHECK_THROWS_AS(jacobson_radical(zmod_ring(6)), NotPRing);
}

TEST_CASE("jacobson radical of degenerate rings") {
  CHECK(jacobson_radical(zmod_ring(1)).is_zero_ideal());
  CHECK(jacobson_radical(matrix_ring(zmod_ring(2), 2).ring).is_zero_ideal());
}

TEST_CASE("wedderburn: F2[C3] splits as F2 x F4") {
  AlgebraBridge br = algebra_from_pring(fpx_mod(2, {1, 0, 0, 1}));
  WedderburnData W = wedderburn(br.A, 3);
  REQUIRE(W.components.size() == 2);
  CHECK(W.components[0].k->q() == 2);
  CHECK(W.components[0].n == 1);
  CHECK(W.components[1].k->q() == 4);
  CHECK(W.components[1].n == 1);
}

TEST_CASE("wedderburn: Mat2(F3)") {
  auto M = matrix_ring(zmod_ring(3), 2);
  AlgebraBridge br = algebra_from_pring(M.ring);
  WedderburnData W = wedderburn(br.A, 1);
  REQUIRE(W.components.size() == 1);
  const auto& c = W.components[0];
  CHECK(c.k->q() == 3);
  CHECK(c.n == 2);
  CHECK(br.A.eq(c.idem, br.A.unity()));

  // the isomorphism respects products and roundtrips
  Rng rng(7);
  for (int t = 0; t < 15; ++t) {
    auto x = br.A.random(rng);
    auto y = br.A.random(rng);
    auto mx = c.to_matrix(x);
    auto my = c.to_matrix(y);
    CHECK(c.to_matrix(br.A.mul(x, y)) == ff_mat_mul(*c.k, mx, my));
    CHECK(br.A.eq(c.from_matrix(mx), x));
  }
}

TEST_CASE("wedderburn: semisimple quotient of F2[S3]") {
  auto R = group_algebra(2, s3_table());
  Ideal J = jacobson_radical(R);
  QuotientRing Q = quotient_ring(R, J);
  AlgebraBridge br = algebra_from_pring(Q.ring);
  WedderburnData W = wedderburn(br.A, 5);
  REQUIRE(W.components.size() == 2);
  CHECK(W.components[0].k->q() == 2);
  CHECK(W.components[0].n == 1);
  CHECK(W.components[1].k->q() == 2);
  CHECK(W.components[1].n == 2);
  u32 dimsum = 0;
  for (const auto& c : W.components) dimsum += c.n * c.n * c.k->m();
  CHECK(dimsum == br.A.dim());
}

TEST_CASE("wedderburn: F5[C4] splits into four copies of F5") {
  AlgebraBridge br = algebra_from_pring(fpx_mod(5, {4, 0, 0, 0, 1}));  // x^4 - 1
  WedderburnData W = wedderburn(br.A, 2);
  REQUIRE(W.components.size() == 4);
  for (const auto& c : W.components) {
    CHECK(c.k->q() == 5);
    CHECK(c.n == 1);
  }
}

TEST_CASE("wedderburn: Mat2(F4) keeps its field structure") {
  auto M = matrix_ring(gf_ring(2, 2), 2);
  AlgebraBridge br = algebra_from_pring(M.ring);
  WedderburnData W = wedderburn(br.A, 9);
  REQUIRE(W.components.size() == 1);
  CHECK(W.components[0].k->q() == 4);
  CHECK(W.components[0].n == 2);

  const auto& c = W.components[0];
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    auto x = br.A.random(rng);
    auto y = br.A.random(rng);
    CHECK(c.to_matrix(br.A.mul(x, y)) ==
          ff_mat_mul(*c.k, c.to_matrix(x), c.to_matrix(y)));
  }
}

TEST_CASE("wedderburn: product of a field and a matrix ring") {
  std::vector<FinRing> parts{*fpx_mod(2, {1, 1}), *matrix_ring(zmod_ring(2), 2).ring};
  auto R = product_ring(parts);
  AlgebraBridge br = algebra_from_pring(R);
  WedderburnData W = wedderburn(br.A, 4);
  REQUIRE(W.components.size() == 2);
  CHECK(W.components[0].n == 1);
  CHECK(W.components[1].n == 2);
  // orthogonal idempotents summing to 1
  auto s = br.A.add(W.components[0].idem, W.components[1].idem);
  CHECK(br.A.eq(s, br.A.unity()));
  CHECK(br.A.is_zero(br.A.mul(W.components[0].idem, W.components[1].idem)));
}

TEST_CASE("wedderburn rejects algebras with a radical") {
  AlgebraBridge br = algebra_from_pring(fpx_mod(3, {2, 0, 0, 1}));  // F3[C3], local
  CHECK_THROWS_AS(wedderburn(br.A, 1), NotSemisimple);
}

TEST_CASE("wedderburn is deterministic in the seed") {
  auto R = group_algebra(2, s3_table());
  QuotientRing Q = quotient_ring(R, jacobson_radical(R));
  AlgebraBridge br = algebra_from_pring(Q.ring);
  WedderburnData W1 = wedderburn(br.A, 17);
  WedderburnData W2 = wedderburn(br.A, 17);
  REQUIRE(W1.components.size() == W2.components.size());
  for (size_t i = 0; i < W1.components.size(); ++i) {
    CHECK(W1.components[i].k->q() == W2.components[i].k->q());
    CHECK(W1.components[i].n == W2.components[i].n);
    CHECK(W1.components[i].idem == W2.components[i].idem);
  }
}

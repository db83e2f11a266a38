#include <tuple>
#include <utility>
#include <vector>

#include "unitring/unitk.hpp"

namespace unitring {

namespace {

// Ordered pairs (i, j), i != j, 0-based, lexicographic; the generator order
// of elementary_generators and elementary_word.
u32 pair_count(u32 n) { return n * (n - 1); }

u32 pair_index(u32 n, u32 i, u32 j) { return i * (n - 1) + j - (j > i ? 1u : 0u); }

std::pair<u32, u32> pair_at(u32 n, u32 idx) {
  u32 i = idx / (n - 1), o = idx % (n - 1);
  return {i, o >= i ? o + 1 : o};
}

FFMatrix elem_mat(const FiniteField& k, u32 n, u32 i, u32 j, const FFElem& b) {
  FFMatrix M = ff_mat_id(k, n);
  M.at(i, j) = b;
  return M;
}

// Root of the power basis: alpha with {1, alpha, ..., alpha^(m-1)} the
// coordinate basis of k; alpha = 1 when k is a prime field.
FFElem power_basis_root(const FiniteField& k) {
  return k.m() == 1 ? k.one() : k.element_at(k.p());
}

const FFMatrix& mat_of(const Elem& e) { return std::any_cast<const FFMatrix&>(e); }
const FFElem& fe_of(const Elem& e) { return std::any_cast<const FFElem&>(e); }

BBGroup ff_matrix_group(FieldPtr k, u32 n) {
  BBGroup G;
  G.id = Elem(ff_mat_id(*k, n));
  G.mul = [k](const Elem& a, const Elem& b) { return Elem(ff_mat_mul(*k, mat_of(a), mat_of(b))); };
  G.inv = [k](const Elem& a) { return Elem(ff_mat_inv(*k, mat_of(a))); };
  G.eq = [](const Elem& a, const Elem& b) { return mat_of(a) == mat_of(b); };
  return G;
}

BBGroup field_units_group(FieldPtr k) {
  BBGroup G;
  G.id = Elem(k->one());
  G.mul = [k](const Elem& a, const Elem& b) { return Elem(k->mul(fe_of(a), fe_of(b))); };
  G.inv = [k](const Elem& a) { return Elem(k->inv(fe_of(a))); };
  G.eq = [](const Elem& a, const Elem& b) { return fe_of(a) == fe_of(b); };
  return G;
}

u64 submod(u64 a, u64 b, u64 p) { return (a + p - b) % p; }

// Solves V x = rhs over F_p for invertible V (row major m x m).
std::vector<u64> solve_mod_p(u64 p, std::vector<std::vector<u64>> V, std::vector<u64> rhs) {
  size_t m = rhs.size();
  for (size_t c = 0; c < m; ++c) {
    size_t piv = c;
    while (piv < m && V[piv][c] == 0) ++piv;
    if (piv == m) throw UnitringError("solve_mod_p: singular system");
    std::swap(V[piv], V[c]);
    std::swap(rhs[piv], rhs[c]);
    u64 d = inverse_mod(V[c][c], p);
    for (size_t j = c; j < m; ++j) V[c][j] = mulmod(V[c][j], d, p);
    rhs[c] = mulmod(rhs[c], d, p);
    for (size_t r = 0; r < m; ++r) {
      if (r == c || V[r][c] == 0) continue;
      u64 f = V[r][c];
      for (size_t j = c; j < m; ++j) V[r][j] = submod(V[r][j], mulmod(f, V[c][j], p), p);
      rhs[r] = submod(rhs[r], mulmod(f, rhs[c], p), p);
    }
  }
  return rhs;
}

// Coordinates of beta in the basis {nu^0, ..., nu^(m-1)}; nu generates k
// over its prime field.
std::vector<u64> nu_coords(const FiniteField& k, const FFElem& nu, const FFElem& beta) {
  u32 m = k.m();
  std::vector<std::vector<u64>> V(m, std::vector<u64>(m));
  FFElem pw = k.one();
  for (u32 j = 0; j < m; ++j) {
    for (u32 i = 0; i < m; ++i) V[i][j] = pw[i];
    pw = k.mul(pw, nu);
  }
  return solve_mod_p(k.p(), std::move(V), beta);
}

Word comm_word(const Word& a, const Word& b) {
  return word_mul(word_mul(word_inv(a), word_inv(b)), word_mul(a, b));
}

void validate_relators(const EffectivePresentation& P, const char* who) {
  for (const Word& r : P.pres.relators)
    if (!P.grp.eq(P.exp(r), P.grp.id)) throw UnitringError(std::string(who) + ": relator check failed");
}

// ---------------------------------------------------------------------------
// SL_2(k) on tau = e12(1), delta = diag(w^-1, w), U = [[0,-1],[1,0]] for a
// primitive root w. Conjugation by delta scales e12 by nu = w^2, so the
// subgroup generated by the delta-conjugates of tau is k as a module over
// the prime field, with nu-power basis words standing in for field elements.

struct Sl2Data {
  FieldPtr k;
  FFElem omega, nu;
  std::vector<FFElem> alpha_pow;  // alpha^r for r < m
};

// (d^-j t d^j)^e, the word form of e12(e * nu^j).
Word sl2_conj(u32 j, i64 e) {
  if (e == 0) return word_one();
  if (j == 0) return word_gen(1, e);
  return word_mul(word_mul(word_gen(2, -static_cast<i64>(j)), word_gen(1, e)),
                  word_gen(2, static_cast<i64>(j)));
}

// Word evaluating to e12(beta), beta expanded in the nu-power basis.
Word sl2_e12_basis(const Sl2Data& D, const FFElem& beta) {
  std::vector<u64> c = nu_coords(*D.k, D.nu, beta);
  Word w;
  for (u32 j = 0; j < c.size(); ++j)
    if (c[j]) w = word_mul(w, sl2_conj(j, static_cast<i64>(c[j])));
  return w;
}

// Word evaluating to e12(beta) with at most two syllable blocks: beta is
// written as a sum of one or two elements of <nu>. For odd q a non-square
// beta splits as nu^s + square, found by scanning s.
Word sl2_e12(const Sl2Data& D, const FFElem& beta) {
  const FiniteField& K = *D.k;
  if (K.is_zero(beta)) return word_one();
  u64 q = K.q();
  if (q % 2 == 0) {
    u64 x = discrete_log(K, D.nu, beta);
    return sl2_conj(static_cast<u32>(x), 1);
  }
  u64 y = discrete_log(K, D.omega, beta);
  if (y % 2 == 0) return sl2_conj(static_cast<u32>(y / 2), 1);
  u64 half = (q - 1) / 2;
  FFElem pw = K.one();
  for (u64 s = 0; s < q; ++s) {
    FFElem g = K.sub(beta, pw);
    if (!K.is_zero(g) && K.is_one(K.pow(g, half))) {
      u64 x = discrete_log(K, D.omega, g) / 2;
      return word_mul(sl2_conj(static_cast<u32>(s), 1), sl2_conj(static_cast<u32>(x), 1));
    }
    pw = K.mul(pw, D.nu);
  }
  throw UnitringError("sl2: no two-square split found");
}

// Word evaluating to e21(beta) = u^-1 e12(-beta) u.
Word sl2_e21(const Sl2Data& D, const FFElem& beta) {
  return word_mul(word_mul(word_gen(3, -1), sl2_e12(D, D.k->neg(beta))), word_gen(3));
}

EffectivePresentation sl2_presentation(FieldPtr k) {
  const FiniteField& K = *k;
  u64 p = K.p(), q = K.q();
  u32 m = K.m();
  auto D = std::make_shared<Sl2Data>();
  D->k = k;
  D->omega = primitive_root(K);
  D->nu = K.mul(D->omega, D->omega);
  FFElem alpha = power_basis_root(K);
  FFElem ar = K.one();
  for (u32 r = 0; r < m; ++r) {
    D->alpha_pow.push_back(ar);
    ar = K.mul(ar, alpha);
  }

  EffectivePresentation P;
  P.grp = ff_matrix_group(k, 2);
  P.pres.ngens = 3;

  FFMatrix tau = elem_mat(K, 2, 0, 1, K.one());
  FFMatrix delta = ff_mat_id(K, 2);
  delta.at(0, 0) = K.inv(D->omega);
  delta.at(1, 1) = D->omega;
  FFMatrix U = ff_mat_zero(K, 2);
  U.at(0, 1) = K.neg(K.one());
  U.at(1, 0) = K.one();
  P.gens = {Elem(tau), Elem(delta), Elem(U)};

  auto& rel = P.pres.relators;
  rel.push_back(word_gen(1, static_cast<i64>(p)));
  for (u32 j = 1; j < m; ++j) rel.push_back(comm_word(word_gen(1), sl2_conj(j, 1)));
  // Minimal polynomial of nu over the prime field, as a relator: the
  // delta-conjugates of tau span a quotient of (k, +).
  {
    FFElem num = K.one();
    for (u32 j = 0; j < m; ++j) num = K.mul(num, D->nu);
    std::vector<u64> a = nu_coords(K, D->nu, num);  // nu^m = sum a_j nu^j
    Word w;
    for (u32 j = 0; j < m; ++j)
      if (a[j]) w = word_mul(w, sl2_conj(j, static_cast<i64>(p - a[j])));
    rel.push_back(word_mul(w, sl2_conj(m, 1)));
  }
  rel.push_back(word_gen(2, static_cast<i64>(q - 1)));
  if (q % 2)
    rel.push_back(word_mul(word_gen(3, 2), word_gen(2, -static_cast<i64>((q - 1) / 2))));
  else
    rel.push_back(word_gen(3, 2));
  rel.push_back(word_mul(word_mul(word_gen(3), word_gen(2)), word_mul(word_gen(3, -1), word_gen(2))));
  rel.push_back(word_mul(word_pow(word_mul(word_gen(3), word_gen(1)), 3), word_gen(3, -2)));
  // delta = n(w^-1) U with n(b) = e12(b) e21(-b^-1) e12(b); ties the torus
  // generator to the unipotent ones.
  {
    FFElem wi = K.inv(D->omega);
    Word W1 = sl2_e12_basis(*D, wi);
    Word W2 = sl2_e12_basis(*D, D->omega);
    Word n = word_mul(word_mul(W1, word_mul(word_mul(word_gen(3, -1), W2), word_gen(3))), W1);
    rel.push_back(word_mul(word_gen(2, -1), word_mul(n, word_gen(3))));
  }

  FieldPtr kc = k;
  u32 mm = m;
  u64 pp = p;
  P.dlog = [D, kc, mm, pp](const Elem& g) {
    Word base = elementary_word(kc, mat_of(g));
    Word out;
    for (auto& [gen, e] : base.syl) {
      u32 idx = gen - 1, pr = idx / mm, r = idx % mm;
      u64 c = static_cast<u64>(mod_floor(e, static_cast<i64>(pp)));
      if (!c) continue;
      FFElem beta = kc->mul(kc->from_u64(c), D->alpha_pow[r]);
      out = word_mul(out, pr == 0 ? sl2_e12(*D, beta) : sl2_e21(*D, beta));
    }
    return out;
  };
  validate_relators(P, "sl2_presentation");
  return P;
}

// ---------------------------------------------------------------------------
// SL_n(k) for n >= 3 on the elementary matrices e_ij(alpha^r): p-th powers,
// commutators within and between root subgroups, and the Chevalley
// commutator formula [e_ij(a), e_jl(b)] = e_il(ab).

EffectivePresentation sln_steinberg(FieldPtr k, u32 n) {
  const FiniteField& K = *k;
  u64 p = K.p();
  u32 m = K.m(), np = pair_count(n);
  FFElem alpha = power_basis_root(K);
  std::vector<FFElem> apow(2 * m - 1);
  apow[0] = K.one();
  for (u32 r = 1; r < 2 * m - 1; ++r) apow[r] = K.mul(apow[r - 1], alpha);

  auto gidx = [m, n](u32 i, u32 j, u32 r) { return pair_index(n, i, j) * m + r + 1; };
  auto eword = [&](u32 i, u32 j, const FFElem& b) {
    Word w;
    for (u32 r = 0; r < m; ++r)
      if (b[r]) w = word_mul(w, word_gen(gidx(i, j, r), static_cast<i64>(b[r])));
    return w;
  };

  EffectivePresentation P;
  P.grp = ff_matrix_group(k, n);
  P.pres.ngens = np * m;
  P.gens.reserve(P.pres.ngens);
  for (const FFMatrix& M : elementary_generators(k, n)) P.gens.push_back(Elem(M));

  auto& rel = P.pres.relators;
  for (u32 g = 1; g <= np * m; ++g) rel.push_back(word_gen(g, static_cast<i64>(p)));
  for (u32 idx = 0; idx < np; ++idx)
    for (u32 r = 0; r < m; ++r)
      for (u32 s = r + 1; s < m; ++s)
        rel.push_back(comm_word(word_gen(idx * m + r + 1), word_gen(idx * m + s + 1)));
  for (u32 a = 0; a < np; ++a)
    for (u32 b = a + 1; b < np; ++b) {
      auto [ia, ja] = pair_at(n, a);
      auto [ib, jb] = pair_at(n, b);
      if (ja == ib || jb == ia) continue;  // linked or composable: not commuting
      for (u32 r = 0; r < m; ++r)
        for (u32 s = 0; s < m; ++s)
          rel.push_back(comm_word(word_gen(a * m + r + 1), word_gen(b * m + s + 1)));
    }
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j)
      for (u32 l = 0; l < n; ++l) {
        if (i == j || j == l || i == l) continue;
        for (u32 r = 0; r < m; ++r)
          for (u32 s = 0; s < m; ++s) {
            Word c = comm_word(word_gen(gidx(i, j, r)), word_gen(gidx(j, l, s)));
            rel.push_back(word_mul(c, word_inv(eword(i, l, apow[r + s]))));
          }
      }

  FieldPtr kc = k;
  P.dlog = [kc](const Elem& g) { return elementary_word(kc, mat_of(g)); };
  validate_relators(P, "sl_n_presentation");
  return P;
}

}  // namespace

// ---------------------------------------------------------------------------

EffectivePresentation field_units_presentation(FieldPtr k) {
  EffectivePresentation P;
  P.grp = field_units_group(k);
  if (k->q() == 2) {
    BBGroup G = P.grp;
    P.dlog = [G](const Elem& g) {
      if (!G.eq(g, G.id)) throw NotInSubgroup("field_units_presentation: nontrivial element of F_2^x");
      return word_one();
    };
    return P;
  }
  FFElem w = primitive_root(*k);
  P.pres.ngens = 1;
  P.pres.relators = {word_gen(1, static_cast<i64>(k->q() - 1))};
  P.gens = {Elem(w)};
  FieldPtr kc = k;
  P.dlog = [kc, w](const Elem& g) {
    u64 x = discrete_log(*kc, w, fe_of(g));
    return x ? word_gen(1, static_cast<i64>(x)) : word_one();
  };
  return P;
}

std::vector<FFMatrix> elementary_generators(FieldPtr k, u32 n) {
  if (n < 2) throw BadSpec("elementary_generators: need n >= 2");
  std::vector<FFMatrix> gens;
  gens.reserve(pair_count(n) * k->m());
  FFElem alpha = power_basis_root(*k);
  for (u32 idx = 0; idx < pair_count(n); ++idx) {
    auto [i, j] = pair_at(n, idx);
    FFElem ar = k->one();
    for (u32 r = 0; r < k->m(); ++r) {
      gens.push_back(elem_mat(*k, n, i, j, ar));
      ar = k->mul(ar, alpha);
    }
  }
  return gens;
}

Word elementary_word(FieldPtr k, const FFMatrix& M) {
  const FiniteField& K = *k;
  u32 n = M.n;
  if (!K.is_one(ff_mat_det(K, M))) throw NotDeterminantOne("elementary_word: determinant is not 1");
  FFMatrix A = M;
  std::vector<std::tuple<u32, u32, FFElem>> ops;  // left multiplications e_ij(b)
  auto push = [&](u32 i, u32 j, const FFElem& b) {
    if (K.is_zero(b)) return;
    for (u32 c = 0; c < n; ++c) A.at(i, c) = K.add(A.at(i, c), K.mul(b, A.at(j, c)));
    ops.emplace_back(i, j, b);
  };
  for (u32 c = 0; c < n; ++c) {
    if (K.is_zero(A.at(c, c))) {
      u32 r = c + 1;
      while (r < n && K.is_zero(A.at(r, c))) ++r;
      if (r == n) throw UnitringError("elementary_word: pivot search failed");
      push(c, r, K.one());
    }
    FFElem pi = K.inv(A.at(c, c));
    for (u32 r = 0; r < n; ++r)
      if (r != c && !K.is_zero(A.at(r, c))) push(r, c, K.neg(K.mul(A.at(r, c), pi)));
  }
  // A is diagonal with determinant 1; sweep each entry to 1 with the block
  // monomial h(u) = n(u) n(-1), n(b) = e12(b) e21(-1/b) e12(b), applied as
  // six elementary left multiplications (rightmost factor first).
  for (u32 c = 0; c + 1 < n; ++c) {
    if (K.is_one(A.at(c, c))) continue;
    FFElem ui = A.at(c, c), u = K.inv(ui);
    FFElem m1 = K.neg(K.one());
    push(c, c + 1, m1);
    push(c + 1, c, K.one());
    push(c, c + 1, m1);
    push(c, c + 1, u);
    push(c + 1, c, K.neg(ui));
    push(c, c + 1, u);
  }
  if (!(A == ff_mat_id(K, n))) throw UnitringError("elementary_word: reduction failed");
  // (ops_L ... ops_1) M = 1, so M is the product of the inverted ops in
  // application order.
  Word w;
  u32 m = K.m();
  for (auto& [i, j, b] : ops) {
    FFElem nb = K.neg(b);
    u32 base = pair_index(n, i, j) * m;
    for (u32 r = 0; r < m; ++r)
      if (nb[r]) w = word_mul(w, word_gen(base + r + 1, static_cast<i64>(nb[r])));
  }
  return w;
}

EffectivePresentation sl_n_presentation(FieldPtr k, u32 n) {
  if (n < 2) throw BadSpec("sl_n_presentation: need n >= 2");
  return n == 2 ? sl2_presentation(k) : sln_steinberg(k, n);
}

EffectivePresentation gl_n_presentation(FieldPtr k, u32 n) {
  if (n == 0) throw BadSpec("gl_n_presentation: need n >= 1");
  if (n == 1) {
    FieldPtr kc = k;
    return transport(
        field_units_presentation(k), ff_matrix_group(k, 1),
        [kc](const Elem& a) {
          FFMatrix M{1, {fe_of(a)}};
          return Elem(M);
        },
        [](const Elem& g) { return Elem(mat_of(g).at(0, 0)); });
  }
  FieldPtr kc = k;
  ExactSequence seq;
  seq.N = ff_matrix_group(k, n);
  seq.G = seq.N;
  seq.H = field_units_group(k);
  seq.incl.forward = [](const Elem& g) { return g; };
  seq.incl.preimage = [](const Elem& g) { return g; };
  seq.proj.forward = [kc](const Elem& g) { return Elem(ff_mat_det(*kc, mat_of(g))); };
  seq.proj.preimage = [kc, n](const Elem& c) {
    FFMatrix M = ff_mat_id(*kc, n);
    M.at(0, 0) = fe_of(c);
    return Elem(M);
  };
  return extend_presentation(seq, sl_n_presentation(k, n), field_units_presentation(k));
}

BigInt gl_order(u64 q, u32 n) {
  BigInt qn = 1;
  for (u32 i = 0; i < n; ++i) qn *= q;
  BigInt res = 1, qi = 1;
  for (u32 i = 0; i < n; ++i) {
    res *= qn - qi;
    qi *= q;
  }
  return res;
}

}  // namespace unitring

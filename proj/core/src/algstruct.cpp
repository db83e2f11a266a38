#include "unitring/algstruct.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace unitring {

namespace {

using Row = std::vector<u64>;

u64 addm(u64 a, u64 b, u64 p) {
  a += b;
  return a >= p ? a - p : a;
}
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 mulm(u64 a, u64 b, u64 p) {
  // operands are reduced; stay in u64 when the product cannot overflow
  return p < (u64(1) << 31) ? (a * b) % p : mulmod(a, b, p);
}

Row to_row(const RingElement& x, u64 p) {
  Row r(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    r[i] = static_cast<u64>(mod_floor(x[i], static_cast<i64>(p)));
  return r;
}

RingElement to_elem(const Row& r) { return RingElement(r.begin(), r.end()); }

// Reduced row echelon form mod p, in place: zero rows dropped, rows ordered
// by pivot column, pivots 1 and alone in their column. Returns pivot columns.
std::vector<u32> rref(u64 p, u32 cols, std::vector<Row>& rows) {
  std::vector<Row> out;
  std::vector<u32> piv;
  for (Row& vin : rows) {
    Row v = std::move(vin);
    for (size_t r = 0; r < out.size(); ++r) {
      u64 c = v[piv[r]];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) v[j] = subm(v[j], mulm(c, out[r][j], p), p);
    }
    u32 pc = cols;
    for (u32 j = 0; j < cols; ++j)
      if (v[j]) {
        pc = j;
        break;
      }
    if (pc == cols) continue;
    u64 inv = inverse_mod(v[pc], p);
    for (u32 j = 0; j < cols; ++j) v[j] = mulm(v[j], inv, p);
    for (size_t r = 0; r < out.size(); ++r) {
      u64 c = out[r][pc];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) out[r][j] = subm(out[r][j], mulm(c, v[j], p), p);
    }
    out.push_back(std::move(v));
    piv.push_back(pc);
  }
  std::vector<size_t> ord(out.size());
  for (size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return piv[a] < piv[b]; });
  std::vector<Row> sorted;
  std::vector<u32> spiv;
  for (size_t i : ord) {
    sorted.push_back(std::move(out[i]));
    spiv.push_back(piv[i]);
  }
  rows = std::move(sorted);
  return spiv;
}

// Canonical basis of {x : M x = 0}.
std::vector<Row> kernel_basis(u64 p, u32 cols, std::vector<Row> M) {
  std::vector<u32> piv = rref(p, cols, M);
  std::vector<char> isp(cols, 0);
  for (u32 c : piv) isp[c] = 1;
  std::vector<Row> ker;
  for (u32 f = 0; f < cols; ++f) {
    if (isp[f]) continue;
    Row v(cols, 0);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = subm(0, M[r][f], p);
    ker.push_back(std::move(v));
  }
  return ker;
}

// Echelon span with expression tracking: every echelon row stays a recorded
// linear combination of the successfully inserted vectors.
struct FpSpan {
  u64 p = 2;
  u32 cols = 0;
  std::vector<Row> rows;
  std::vector<Row> expr;
  std::vector<u32> piv;
  u32 inserted = 0;

  FpSpan(u64 p_, u32 cols_) : p(p_), cols(cols_) {}

  // Reduces v in place; e receives coefficients with
  // v_original = v_residual + sum_t e[t] * inserted_t.
  void reduce(Row& v, Row& e) const {
    e.assign(inserted, 0);
    for (size_t r = 0; r < rows.size(); ++r) {
      u64 c = v[piv[r]];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) v[j] = subm(v[j], mulm(c, rows[r][j], p), p);
      for (u32 t = 0; t < inserted; ++t) e[t] = addm(e[t], mulm(c, expr[r][t], p), p);
    }
  }

  bool contains(Row v) const {
    Row e;
    reduce(v, e);
    for (u64 x : v)
      if (x) return false;
    return true;
  }

  // In-span coordinates over the inserted vectors; false if outside.
  bool coords(Row v, Row& combo) const {
    Row e;
    reduce(v, e);
    for (u64 x : v)
      if (x) return false;
    combo = std::move(e);
    return true;
  }

  // True when v enlarged the span. Otherwise, combo (if given) receives the
  // expression of v over the previously inserted vectors.
  bool insert(Row v, Row* combo = nullptr) {
    Row e;
    reduce(v, e);
    u32 pc = cols;
    for (u32 j = 0; j < cols; ++j)
      if (v[j]) {
        pc = j;
        break;
      }
    if (pc == cols) {
      if (combo) *combo = std::move(e);
      return false;
    }
    u64 inv = inverse_mod(v[pc], p);
    for (u32 j = 0; j < cols; ++j) v[j] = mulm(v[j], inv, p);
    Row ne(inserted + 1, 0);
    for (u32 t = 0; t < inserted; ++t) ne[t] = mulm(subm(0, e[t], p), inv, p);
    ne[inserted] = inv;
    for (auto& er : expr) er.resize(inserted + 1, 0);
    for (size_t r = 0; r < rows.size(); ++r) {
      u64 c = rows[r][pc];
      if (!c) continue;
      for (u32 j = 0; j < cols; ++j) rows[r][j] = subm(rows[r][j], mulm(c, v[j], p), p);
      for (u32 t = 0; t <= inserted; ++t) expr[r][t] = subm(expr[r][t], mulm(c, ne[t], p), p);
    }
    rows.push_back(std::move(v));
    expr.push_back(std::move(ne));
    piv.push_back(pc);
    ++inserted;
    return true;
  }

  u32 rank() const { return static_cast<u32>(rows.size()); }
};

}  // namespace

// ---------------------------------------------------------------------------

std::vector<u64> fp_charpoly(u64 p, std::vector<std::vector<u64>> a) {
  u32 n = static_cast<u32>(a.size());
  for (auto& r : a) {
    if (r.size() != n) throw UnitringError("fp_charpoly: matrix is not square");
    for (auto& x : r) x %= p;
  }
  // Hessenberg form by similarity transforms.
  for (u32 j = 0; j + 2 < n; ++j) {
    u32 pr = n;
    for (u32 r = j + 1; r < n; ++r)
      if (a[r][j]) {
        pr = r;
        break;
      }
    if (pr == n) continue;
    if (pr != j + 1) {
      std::swap(a[pr], a[j + 1]);
      for (u32 r = 0; r < n; ++r) std::swap(a[r][pr], a[r][j + 1]);
    }
    u64 inv = inverse_mod(a[j + 1][j], p);
    for (u32 r = j + 2; r < n; ++r) {
      u64 f = mulm(a[r][j], inv, p);
      if (!f) continue;
      for (u32 c = 0; c < n; ++c) a[r][c] = subm(a[r][c], mulm(f, a[j + 1][c], p), p);
      for (u32 r2 = 0; r2 < n; ++r2) a[r2][j + 1] = addm(a[r2][j + 1], mulm(f, a[r2][r], p), p);
    }
  }
  // det(xI - H) for Hessenberg H: expansion along the last column gives
  // p_k = (x - h_kk) p_{k-1} - sum_r h_rk (prod of subdiagonals below r) p_{r-1}.
  std::vector<std::vector<u64>> pk(n + 1);
  pk[0] = {1};
  for (u32 k = 1; k <= n; ++k) {
    std::vector<u64> cur(k + 1, 0);
    for (u32 t = 0; t < k; ++t) {
      cur[t + 1] = addm(cur[t + 1], pk[k - 1][t], p);
      cur[t] = subm(cur[t], mulm(a[k - 1][k - 1], pk[k - 1][t], p), p);
    }
    u64 prod = 1;
    for (u32 i = k - 1; i >= 1; --i) {
      prod = mulm(prod, a[i][i - 1], p);
      u64 coef = mulm(a[i - 1][k - 1], prod, p);
      if (coef)
        for (u32 t = 0; t < i; ++t) cur[t] = subm(cur[t], mulm(coef, pk[i - 1][t], p), p);
    }
    pk[k] = std::move(cur);
  }
  return pk[n];
}

// ---------------------------------------------------------------------------

FpAlgebra::FpAlgebra(u64 p, u32 d, const std::vector<RingElement>& c, RingElement unity)
    : p_(p) {
  if (!is_prime(p)) throw BadSpec("FpAlgebra: p must be prime");
  if (c.size() != static_cast<size_t>(d) * d) throw BadSpec("FpAlgebra: table needs d*d entries");
  if (unity.size() != d) throw BadSpec("FpAlgebra: unity has wrong length");
  std::vector<std::vector<SparseTerm>> table(c.size());
  for (size_t r = 0; r < c.size(); ++r) {
    if (c[r].size() != d) throw BadSpec("FpAlgebra: table entry has wrong length");
    for (u32 j = 0; j < d; ++j) {
      i64 v = mod_floor(c[r][j], static_cast<i64>(p));
      if (v) table[r].push_back({j, v});
    }
  }
  FinRing R(std::vector<i64>(d, static_cast<i64>(p)), std::move(table), std::move(unity));
  R_ = std::make_shared<const FinRing>(std::move(R));
}

RingElement FpAlgebra::table(u32 i, u32 j) const {
  RingElement out(dim(), 0);
  for (const SparseTerm& t : R_->table_row(i, j)) out[t.idx] = mod_floor(t.c, static_cast<i64>(p_));
  return out;
}

AlgebraBridge algebra_from_pring(RingPtr R) {
  u64 m = R->rank() == 0 ? 1 : R->add_exponent();
  if (m == 1) throw NotPAnnihilated("ring has additive exponent 1");
  if (!is_prime(m))
    throw NotPAnnihilated("additive exponent " + std::to_string(m) + " is not prime");
  u64 p = m;
  std::vector<u32> keep;
  for (u32 i = 0; i < R->rank(); ++i)
    if (R->add_orders()[i] != 1) keep.push_back(i);
  u32 d = static_cast<u32>(keep.size());
  std::vector<u32> back(R->rank(), UINT32_MAX);
  for (u32 a = 0; a < d; ++a) back[keep[a]] = a;

  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(d) * d);
  for (u32 a = 0; a < d; ++a)
    for (u32 b = 0; b < d; ++b)
      for (const SparseTerm& t : R->table_row(keep[a], keep[b])) {
        if (back[t.idx] == UINT32_MAX) continue;  // order-1 coordinate, identically zero
        i64 v = mod_floor(t.c, static_cast<i64>(p));
        if (v) table[static_cast<size_t>(a) * d + b].push_back({back[t.idx], v});
      }
  RingElement unity(d, 0);
  RingElement runity = R->unity();
  for (u32 a = 0; a < d; ++a) unity[a] = runity[keep[a]];
  FinRing A = FinRing::unchecked(std::vector<i64>(d, static_cast<i64>(p)), std::move(table),
                                 std::move(unity));
  RingPtr Ap = std::make_shared<const FinRing>(std::move(A));

  AlgebraBridge br{R, FpAlgebra(p, Ap), {}, {}};
  u32 rrank = R->rank();
  br.to_alg = [Ap, keep](const RingElement& x) {
    RingElement y(keep.size(), 0);
    for (size_t a = 0; a < keep.size(); ++a) y[a] = x[keep[a]];
    return Ap->reduce(std::move(y));
  };
  br.from_alg = [R, keep, rrank](const RingElement& y) {
    RingElement x(rrank, 0);
    for (size_t a = 0; a < keep.size(); ++a) x[keep[a]] = y[a];
    return R->reduce(std::move(x));
  };
  return br;
}

// ---------------------------------------------------------------------------

std::vector<RingElement> radical_fp(const FpAlgebra& A) {
  u64 p = A.p();
  u32 d = A.dim();
  if (d == 0) return {};
  const FinRing& R = A.ring();

  // trace of left multiplication by each basis element: a linear functional
  std::vector<u64> tvec(d, 0);
  for (u32 i = 0; i < d; ++i)
    for (u32 j = 0; j < d; ++j)
      for (const SparseTerm& s : R.table_row(i, j))
        if (s.idx == j)
          tvec[i] = addm(tvec[i], static_cast<u64>(mod_floor(s.c, static_cast<i64>(p))), p);

  std::vector<Row> basis(d);
  for (u32 i = 0; i < d; ++i) {
    basis[i].assign(d, 0);
    basis[i][i] = 1;
  }

  // Level p^i cuts by the coefficient of lambda^(d - p^i) in the
  // characteristic polynomial of left multiplication; level 1 is the trace.
  for (u64 pi = 1; pi <= d; pi *= p) {
    u32 k = static_cast<u32>(basis.size());
    if (k == 0) break;
    std::vector<RingElement> el(k);
    for (u32 a = 0; a < k; ++a) el[a] = to_elem(basis[a]);
    std::vector<Row> G(k, Row(k, 0));
    for (u32 a = 0; a < k; ++a)
      for (u32 b = 0; b < k; ++b) {
        RingElement z = R.mul(el[a], el[b]);
        u64 g = 0;
        if (pi == 1) {
          for (u32 i = 0; i < d; ++i)
            if (z[i]) g = addm(g, mulm(static_cast<u64>(z[i]), tvec[i], p), p);
        } else {
          auto lm = R.left_mul_matrix(z);
          std::vector<Row> L(d, Row(d, 0));
          for (u32 r = 0; r < d; ++r)
            for (u32 c = 0; c < d; ++c) L[r][c] = static_cast<u64>(lm[r][c]);
          g = fp_charpoly(p, std::move(L))[d - pi];
        }
        G[a][b] = g;
      }
    std::vector<Row> GT(k, Row(k, 0));
    for (u32 a = 0; a < k; ++a)
      for (u32 b = 0; b < k; ++b) GT[b][a] = G[a][b];
    std::vector<Row> ker = kernel_basis(p, k, std::move(GT));
    std::vector<Row> nb;
    for (const Row& al : ker) {
      Row v(d, 0);
      for (u32 a = 0; a < k; ++a) {
        if (!al[a]) continue;
        for (u32 j = 0; j < d; ++j) v[j] = addm(v[j], mulm(al[a], basis[a][j], p), p);
      }
      nb.push_back(std::move(v));
    }
    rref(p, d, nb);
    basis = std::move(nb);
  }

  std::vector<RingElement> out;
  out.reserve(basis.size());
  for (const Row& r : basis) out.push_back(to_elem(r));
  return out;
}

std::vector<RingElement> center(const FpAlgebra& A) {
  u64 p = A.p();
  u32 d = A.dim();
  if (d == 0) return {};
  const FinRing& R = A.ring();
  std::vector<Row> M;
  for (u32 i = 0; i < d; ++i) {
    std::vector<RingElement> com(d);
    for (u32 j = 0; j < d; ++j)
      com[j] = R.sub(R.mul(R.basis(j), R.basis(i)), R.mul(R.basis(i), R.basis(j)));
    for (u32 k = 0; k < d; ++k) {
      Row row(d, 0);
      bool nz = false;
      for (u32 j = 0; j < d; ++j) {
        row[j] = static_cast<u64>(com[j][k]);
        nz = nz || row[j] != 0;
      }
      if (nz) M.push_back(std::move(row));
    }
  }
  std::vector<Row> ker = kernel_basis(p, d, std::move(M));
  rref(p, d, ker);
  std::vector<RingElement> out;
  out.reserve(ker.size());
  for (const Row& r : ker) out.push_back(to_elem(r));
  return out;
}

Ideal jacobson_radical(RingPtr R) {
  if (R->rank() == 0 || R->size() == 1) return Ideal::span(R, {});
  u64 p = 0;
  for (i64 dord : R->add_orders()) {
    if (dord == 1) continue;
    Factorization f = factor(static_cast<u64>(dord));
    if (f.size() != 1)
      throw NotPRing("additive order " + std::to_string(dord) + " is not a prime power");
    if (p == 0)
      p = f[0].first;
    else if (p != f[0].first)
      throw NotPRing("additive orders mix primes");
  }

  std::vector<RingElement> gens;
  if (R->add_exponent() == p) {
    AlgebraBridge br = algebra_from_pring(R);
    for (const RingElement& v : radical_fp(br.A)) gens.push_back(br.from_alg(v));
  } else {
    std::vector<RingElement> pgens;
    for (u32 i = 0; i < R->rank(); ++i)
      pgens.push_back(R->smul(static_cast<i64>(p), R->basis(i)));
    QuotientRing Q = quotient_ring(R, Ideal::span(R, pgens));
    AlgebraBridge br = algebra_from_pring(Q.ring);
    for (const RingElement& v : radical_fp(br.A)) gens.push_back(Q.lift(br.from_alg(v)));
    for (RingElement& g : pgens) gens.push_back(std::move(g));
  }
  Ideal J = Ideal::span(R, gens);

  Ideal Jk = J;
  int guard = 0;
  while (!Jk.is_zero_ideal()) {
    if (++guard > 64) throw UnitringError("jacobson_radical: computed ideal is not nilpotent");
    Jk = Jk.mul(Jk);
  }
  return J;
}

// ---------------------------------------------------------------------------

namespace {

// Minimal polynomial of z in the unital subalgebra with unity e. Monic, low
// coefficients first.
std::vector<u64> minpoly_rel(const FinRing& R, u64 p, const RingElement& e,
                             const RingElement& z) {
  u32 d = R.rank();
  FpSpan span(p, d);
  RingElement pw = e;
  Row combo;
  for (u32 k = 0;; ++k) {
    if (!span.insert(to_row(pw, p), &combo)) {
      std::vector<u64> mu(k + 1, 0);
      mu[k] = 1;
      for (u32 t = 0; t < k; ++t) mu[t] = subm(0, combo[t], p);
      return mu;
    }
    if (k > d + 1) throw UnitringError("minpoly: no linear dependence found");
    pw = R.mul(pw, z);
  }
}

FFPoly to_ffpoly(const FiniteField& k, const std::vector<u64>& c) {
  FFPoly f;
  f.reserve(c.size());
  for (u64 x : c) f.push_back(FFElem{x % k.p()});
  return poly_normalize(std::move(f), k);
}

std::vector<u64> from_ffpoly(const FFPoly& f) {
  std::vector<u64> c;
  c.reserve(f.size());
  for (const FFElem& e : f) c.push_back(e.empty() ? 0 : e[0]);
  return c;
}

// g = gcd(a, b) monic, with g = u a + v b.
void poly_ext_gcd(const FiniteField& k, FFPoly a, FFPoly b, FFPoly& g, FFPoly& u, FFPoly& v) {
  FFPoly u0 = poly_const(k, k.one()), v0, u1, v1 = poly_const(k, k.one());
  while (poly_deg(b) >= 0) {
    FFPoly rem;
    FFPoly q = poly_divmod(k, a, b, rem);
    a = std::move(b);
    b = std::move(rem);
    FFPoly nu = poly_sub(k, u0, poly_mul(k, q, u1));
    FFPoly nv = poly_sub(k, v0, poly_mul(k, q, v1));
    u0 = std::move(u1);
    v0 = std::move(v1);
    u1 = std::move(nu);
    v1 = std::move(nv);
  }
  if (poly_deg(a) < 0) {
    g = {};
    u = {};
    v = {};
    return;
  }
  FFPoly sc = poly_const(k, k.inv(a.back()));
  g = poly_mul(k, a, sc);
  u = poly_mul(k, u0, sc);
  v = poly_mul(k, v0, sc);
}

// Evaluate a polynomial at z, with e standing in for z^0.
RingElement poly_at(const FinRing& R, const std::vector<u64>& coeffs, const RingElement& e,
                    const RingElement& z) {
  RingElement acc = R.zero();
  RingElement pw = e;
  for (size_t t = 0; t < coeffs.size(); ++t) {
    if (coeffs[t]) acc = R.add(acc, R.smul(static_cast<i64>(coeffs[t]), pw));
    if (t + 1 < coeffs.size()) pw = R.mul(pw, z);
  }
  return acc;
}

// Orthogonal idempotents refining e, one per primary factor of mu, via CRT
// coefficients evaluated at z. Empty when mu has a single primary factor.
std::vector<RingElement> crt_idempotents(const FinRing& R, const RingElement& e,
                                         const RingElement& z, const std::vector<u64>& mu,
                                         const FiniteField& fp1, u64 seed) {
  FFPoly MU = to_ffpoly(fp1, mu);
  auto facs = factor_poly(fp1, MU, seed);
  if (facs.size() < 2) return {};
  std::vector<RingElement> out;
  for (const auto& [f, a] : facs) {
    FFPoly q = poly_const(fp1, fp1.one());
    for (u32 t = 0; t < a; ++t) q = poly_mul(fp1, q, f);
    FFPoly rem;
    FFPoly h = poly_divmod(fp1, MU, q, rem);
    FFPoly g, u, v;
    poly_ext_gcd(fp1, poly_mod(fp1, h, q), q, g, u, v);
    FFPoly eps = poly_mod(fp1, poly_mul(fp1, h, u), MU);
    out.push_back(poly_at(R, from_ffpoly(eps), e, z));
  }
  return out;
}

// Shared data captured by a component's isomorphism closures.
struct CompState {
  RingPtr R;
  u64 p = 2;
  FieldPtr k;
  u32 n = 0, m = 0;
  std::vector<RingElement> kb;         // k-basis of the module A * ehat
  std::shared_ptr<FpSpan> msolve;      // span of theta^t kb[s], inserted at s*m + t
  std::vector<RingElement> abasis;     // F_p-basis of the component
  std::shared_ptr<FpSpan> isosolve;    // span of flattened matrices of abasis
};

FFMatrix comp_to_matrix(const CompState& st, const RingElement& x) {
  FFMatrix M = ff_mat_zero(*st.k, st.n);
  for (u32 s = 0; s < st.n; ++s) {
    RingElement y = st.R->mul(x, st.kb[s]);
    Row combo;
    if (!st.msolve->coords(to_row(y, st.p), combo))
      throw NotSemisimple("left module is not invariant");
    for (u32 r = 0; r < st.n; ++r) {
      FFElem c(st.m, 0);
      for (u32 t = 0; t < st.m; ++t) c[t] = combo[static_cast<size_t>(r) * st.m + t];
      M.at(r, s) = std::move(c);
    }
  }
  return M;
}

Row flatten_matrix(const CompState& st, const FFMatrix& M) {
  Row flat(static_cast<size_t>(st.n) * st.n * st.m, 0);
  for (u32 r = 0; r < st.n; ++r)
    for (u32 s = 0; s < st.n; ++s) {
      const FFElem& c = M.at(r, s);
      for (u32 t = 0; t < st.m && t < c.size(); ++t)
        flat[(static_cast<size_t>(r) * st.n + s) * st.m + t] = c[t] % st.p;
    }
  return flat;
}

RingElement comp_from_matrix(const CompState& st, const FFMatrix& M) {
  if (M.n != st.n) throw UnitringError("from_matrix: wrong matrix size");
  Row combo;
  if (!st.isosolve->coords(flatten_matrix(st, M), combo))
    throw NotSemisimple("matrix is outside the isomorphism image");
  RingElement x = st.R->zero();
  for (size_t j = 0; j < st.abasis.size(); ++j)
    if (combo[j]) x = st.R->add(x, st.R->smul(static_cast<i64>(combo[j]), st.abasis[j]));
  return x;
}

}  // namespace

WedderburnData wedderburn(const FpAlgebra& A, u64 seed) {
  u64 p = A.p();
  u32 d = A.dim();
  WedderburnData W;
  W.dim = d;
  if (d == 0) return W;
  const FinRing& R = A.ring();
  RingPtr Rp = A.ring_ptr();
  Rng rng(seed);
  u32 budget = 20 * d + 20;
  FieldPtr fp1 = FiniteField::make(p, 1);

  auto rand_in = [&](const std::vector<RingElement>& bs) {
    RingElement v = R.zero();
    for (const auto& b : bs) {
      u64 c = rng.below(p);
      if (c) v = R.add(v, R.smul(static_cast<i64>(c), b));
    }
    return v;
  };

  std::vector<RingElement> Z = center(A);

  // Split the center into primitive idempotents, each carrying a generator
  // of its residue field.
  struct Block {
    RingElement e;
    std::vector<RingElement> zb;
  };
  struct FieldBlock {
    RingElement e;
    RingElement theta;
    std::vector<u64> mu;
  };
  std::vector<Block> work{{A.unity(), Z}};
  std::vector<FieldBlock> fields;
  while (!work.empty()) {
    Block blk = std::move(work.back());
    work.pop_back();
    u32 dz = static_cast<u32>(blk.zb.size());
    if (dz == 0) throw NotSemisimple("central block has dimension zero");
    if (dz == 1) {
      fields.push_back({blk.e, blk.e, {subm(0, 1, p), 1}});  // mu = x - 1
      continue;
    }
    for (;;) {
      if (budget == 0) throw SplitFailure("central idempotent search exhausted its budget");
      --budget;
      RingElement z = rand_in(blk.zb);
      std::vector<u64> mu = minpoly_rel(R, p, blk.e, z);
      auto facs = factor_poly(*fp1, to_ffpoly(*fp1, mu), rng.next());
      if (facs.size() == 1) {
        if (facs[0].second > 1) throw NotSemisimple("center contains a nilpotent element");
        if (static_cast<u32>(mu.size()) - 1 == dz) {
          fields.push_back({blk.e, z, mu});
          break;
        }
        continue;  // irreducible but not separating, redraw
      }
      std::vector<RingElement> es = crt_idempotents(R, blk.e, z, mu, *fp1, rng.next());
      RingElement sum = R.zero();
      for (const RingElement& ej : es) {
        if (!R.eq(R.mul(ej, ej), ej)) throw NotSemisimple("central splitting broke idempotence");
        sum = R.add(sum, ej);
      }
      if (!R.eq(sum, blk.e)) throw NotSemisimple("central idempotents do not sum back");
      for (const RingElement& ej : es) {
        std::vector<RingElement> zb2;
        FpSpan sp(p, d);
        for (const RingElement& zz : blk.zb) {
          RingElement w = R.mul(ej, zz);
          if (sp.insert(to_row(w, p))) zb2.push_back(std::move(w));
        }
        work.push_back({ej, std::move(zb2)});
      }
      break;
    }
  }

  // Build each simple component and its explicit matrix isomorphism.
  std::vector<WedderburnComponent> comps;
  u32 dimsum = 0;
  RingElement idsum = R.zero();
  for (const FieldBlock& fb : fields) {
    u32 m = static_cast<u32>(fb.mu.size()) - 1;
    FieldPtr k = m == 1 ? FiniteField::make(p, 1)
                        : std::make_shared<const FiniteField>(p, fb.mu);
    idsum = R.add(idsum, fb.e);

    auto st = std::make_shared<CompState>();
    st->R = Rp;
    st->p = p;
    st->k = k;
    st->m = m;

    FpSpan compspan(p, d);
    for (u32 i = 0; i < d; ++i) {
      RingElement w = R.mul(R.basis(i), fb.e);
      if (compspan.insert(to_row(w, p))) st->abasis.push_back(std::move(w));
    }
    u32 dimC = static_cast<u32>(st->abasis.size());
    if (dimC % m != 0) throw NotSemisimple("component dimension is not a multiple of [k:F_p]");
    u32 nsq = dimC / m;
    u32 n = 0;
    while ((n + 1) * (n + 1) <= nsq) ++n;
    if (n * n != nsq) throw NotSemisimple("component dimension is not n^2 [k:F_p]");
    st->n = n;
    dimsum += dimC;

    std::vector<RingElement> tp(m);
    tp[0] = fb.e;
    for (u32 t = 1; t < m; ++t) tp[t] = R.mul(tp[t - 1], fb.theta);

    // Primitive idempotent by shrinking the corner algebra.
    RingElement ehat = fb.e;
    for (;;) {
      FpSpan corner(p, d);
      std::vector<RingElement> cb;
      for (u32 i = 0; i < d; ++i) {
        RingElement w = R.mul(R.mul(ehat, R.basis(i)), ehat);
        if (corner.insert(to_row(w, p))) cb.push_back(std::move(w));
      }
      if (cb.size() == m) break;
      if (budget == 0) throw SplitFailure("primitive idempotent search exhausted its budget");
      --budget;
      RingElement z = rand_in(cb);
      std::vector<u64> mz = minpoly_rel(R, p, ehat, z);
      std::vector<RingElement> es = crt_idempotents(R, ehat, z, mz, *fp1, rng.next());
      if (es.empty()) continue;  // non-separating draw, retry
      if (!R.eq(R.mul(es[0], es[0]), es[0]))
        throw NotSemisimple("corner splitting broke idempotence");
      ehat = es[0];
    }

    // k-basis of the left module A * ehat.
    std::vector<RingElement> Wb;
    {
      FpSpan msp(p, d);
      for (u32 i = 0; i < d; ++i) {
        RingElement w = R.mul(R.basis(i), ehat);
        if (msp.insert(to_row(w, p))) Wb.push_back(std::move(w));
      }
    }
    if (Wb.size() != static_cast<size_t>(n) * m)
      throw NotSemisimple("module dimension is not n [k:F_p]");
    st->msolve = std::make_shared<FpSpan>(p, d);
    for (const RingElement& w : Wb) {
      if (st->msolve->contains(to_row(w, p))) continue;
      st->kb.push_back(w);
      for (u32 t = 0; t < m; ++t)
        if (!st->msolve->insert(to_row(R.mul(tp[t], w), p)))
          throw NotSemisimple("scalar action is not free on the module");
    }
    if (st->kb.size() != n) throw NotSemisimple("module k-dimension mismatch");

    // Invert the linear map x -> matrix on the component.
    st->isosolve = std::make_shared<FpSpan>(p, n * n * m);
    std::vector<FFMatrix> tms(dimC);
    for (u32 j = 0; j < dimC; ++j) {
      tms[j] = comp_to_matrix(*st, st->abasis[j]);
      if (!st->isosolve->insert(flatten_matrix(*st, tms[j])))
        throw NotSemisimple("matrix images of the component basis are dependent");
    }

    // Verification: identity, multiplicativity on basis pairs, roundtrip.
    if (!(comp_to_matrix(*st, fb.e) == ff_mat_id(*k, n)))
      throw NotSemisimple("central idempotent does not map to the identity matrix");
    for (u32 a = 0; a < dimC; ++a)
      for (u32 b = 0; b < dimC; ++b) {
        FFMatrix lhs = comp_to_matrix(*st, R.mul(st->abasis[a], st->abasis[b]));
        if (!(lhs == ff_mat_mul(*k, tms[a], tms[b])))
          throw NotSemisimple("isomorphism is not multiplicative");
      }
    for (u32 j = 0; j < dimC; ++j)
      if (!R.eq(comp_from_matrix(*st, tms[j]), st->abasis[j]))
        throw NotSemisimple("isomorphism roundtrip failed");

    WedderburnComponent comp;
    comp.k = k;
    comp.n = n;
    comp.idem = fb.e;
    comp.to_matrix = [st](const RingElement& x) { return comp_to_matrix(*st, x); };
    comp.from_matrix = [st](const FFMatrix& M) { return comp_from_matrix(*st, M); };
    comps.push_back(std::move(comp));
  }

  if (dimsum != d) throw NotSemisimple("component dimensions do not sum to the algebra dimension");
  if (!R.eq(idsum, R.unity()))
    throw NotSemisimple("central idempotents do not sum to the unity");

  std::sort(comps.begin(), comps.end(), [](const WedderburnComponent& a,
                                           const WedderburnComponent& b) {
    if (a.k->q() != b.k->q()) return a.k->q() < b.k->q();
    if (a.n != b.n) return a.n < b.n;
    return a.idem < b.idem;
  });
  W.components = std::move(comps);
  return W;
}

}  // namespace unitring

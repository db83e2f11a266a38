#include "unitring/finring.hpp"

#include <algorithm>
#include <numeric>

namespace unitring {

namespace {

i64 mod_floor_i128(i128 a, i64 m) {
  i64 r = static_cast<i64>(a % m);
  return r < 0 ? r + m : r;
}

}  // namespace

FinRing::FinRing(std::vector<i64> add_orders, std::vector<std::vector<SparseTerm>> table,
                 RingElement unity) {
  init(std::move(add_orders), std::move(table), std::move(unity), true);
}

FinRing FinRing::unchecked(std::vector<i64> add_orders, std::vector<std::vector<SparseTerm>> table,
                           RingElement unity) {
  FinRing r;
  r.init(std::move(add_orders), std::move(table), std::move(unity), false);
  return r;
}

void FinRing::init(std::vector<i64> d, std::vector<std::vector<SparseTerm>> table,
                   RingElement unity, bool validate) {
  n_ = static_cast<u32>(d.size());
  d_ = std::move(d);
  i64 maxd = 1;
  for (i64 di : d_) {
    if (di < 2) throw BadSpec("FinRing: additive orders must be >= 2");
    maxd = std::max(maxd, di);
  }
  // Fast multiply accumulates n^2 raw products of magnitude < maxd^3 in i64.
  small_ = i128(n_) * n_ * maxd * maxd * maxd < (i128(1) << 62);
  if (table.size() != static_cast<size_t>(n_) * n_)
    throw BadSpec("FinRing: table must have rank^2 rows");
  if (unity.size() != n_) throw BadSpec("FinRing: unity has wrong rank");

  toff_.assign(static_cast<size_t>(n_) * n_ + 1, 0);
  std::vector<i64> dense(n_, 0);
  std::vector<std::vector<SparseTerm>> norm(table.size());
  for (size_t r = 0; r < table.size(); ++r) {
    for (const SparseTerm& t : table[r]) {
      if (t.idx >= n_) throw BadSpec("FinRing: table index out of range");
      dense[t.idx] = mod_floor(checked_add(dense[t.idx], mod_floor(t.c, d_[t.idx])), d_[t.idx]);
    }
    for (const SparseTerm& t : table[r]) {
      if (dense[t.idx] != 0) {
        norm[r].push_back({t.idx, dense[t.idx]});
        dense[t.idx] = 0;
      }
    }
    std::sort(norm[r].begin(), norm[r].end(),
              [](const SparseTerm& a, const SparseTerm& b) { return a.idx < b.idx; });
    toff_[r + 1] = toff_[r] + norm[r].size();
  }
  tdata_.reserve(toff_.back());
  for (auto& row : norm)
    for (const SparseTerm& t : row) tdata_.push_back(t);

  gf2_ = n_ > 0 && maxd == 2;
  if (gf2_) {
    gf2w_ = (n_ + 63) / 64;
    gf2t_.assign(static_cast<size_t>(n_) * n_ * gf2w_, 0);
    for (size_t r = 0; r < static_cast<size_t>(n_) * n_; ++r)
      for (u64 t = toff_[r]; t < toff_[r + 1]; ++t) {
        u32 k = tdata_[t].idx;
        gf2t_[r * gf2w_ + k / 64] ^= u64(1) << (k % 64);
      }
  }
  one_ = reduce(std::move(unity));

  if (!validate) return;

  // Bilinearity over the additive group: d_i b_i = 0 forces d_i (b_i b_j) = 0.
  for (u32 i = 0; i < n_; ++i)
    for (u32 j = 0; j < n_; ++j)
      for (u64 t = toff_[static_cast<size_t>(i) * n_ + j]; t < toff_[static_cast<size_t>(i) * n_ + j + 1]; ++t) {
        const SparseTerm& s = tdata_[t];
        if ((i128(d_[i]) * s.c) % d_[s.idx] != 0 || (i128(d_[j]) * s.c) % d_[s.idx] != 0)
          throw BadSpec("FinRing: multiplication not bilinear for the given orders");
      }
  // Unity.
  for (u32 j = 0; j < n_; ++j) {
    RingElement bj = basis(j);
    if (mul(one_, bj) != bj || mul(bj, one_) != bj)
      throw BadSpec("FinRing: unity is not a two-sided identity");
  }
  // Associativity on generator triples, by sparse convolution.
  std::vector<i64> lhs(n_), rhs(n_);
  for (u32 i = 0; i < n_; ++i)
    for (u32 j = 0; j < n_; ++j)
      for (u32 k = 0; k < n_; ++k) {
        std::fill(lhs.begin(), lhs.end(), 0);
        std::fill(rhs.begin(), rhs.end(), 0);
        size_t rij = static_cast<size_t>(i) * n_ + j;
        for (u64 t = toff_[rij]; t < toff_[rij + 1]; ++t) {
          size_t rmk = static_cast<size_t>(tdata_[t].idx) * n_ + k;
          for (u64 u = toff_[rmk]; u < toff_[rmk + 1]; ++u) {
            u32 ix = tdata_[u].idx;
            lhs[ix] = mod_floor_i128(i128(lhs[ix]) + i128(tdata_[t].c) * tdata_[u].c, d_[ix]);
          }
        }
        size_t rjk = static_cast<size_t>(j) * n_ + k;
        for (u64 t = toff_[rjk]; t < toff_[rjk + 1]; ++t) {
          size_t rim = static_cast<size_t>(i) * n_ + tdata_[t].idx;
          for (u64 u = toff_[rim]; u < toff_[rim + 1]; ++u) {
            u32 ix = tdata_[u].idx;
            rhs[ix] = mod_floor_i128(i128(rhs[ix]) + i128(tdata_[t].c) * tdata_[u].c, d_[ix]);
          }
        }
        if (lhs != rhs) throw BadSpec("FinRing: multiplication not associative");
      }
}

u64 FinRing::size_u64() const {
  u64 s = 1;
  for (i64 di : d_) {
    if (s > (u64(1) << 62) / static_cast<u64>(di)) throw TooLarge("FinRing::size_u64");
    s *= static_cast<u64>(di);
  }
  return s;
}

BigInt FinRing::size() const {
  BigInt s = 1;
  for (i64 di : d_) s *= di;
  return s;
}

u64 FinRing::add_exponent() const {
  u64 l = 1;
  for (i64 di : d_) l = std::lcm(l, static_cast<u64>(di));
  return l;
}

RingElement FinRing::basis(u32 i) const {
  RingElement e(n_, 0);
  e.at(i) = 1;
  return e;
}

RingElement FinRing::from_u64(u64 c) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i)
    r[i] = static_cast<i64>((u128(c) % d_[i]) * one_[i] % d_[i]);
  return r;
}

RingElement FinRing::reduce(RingElement x) const {
  if (x.size() != n_) throw UnitringError("FinRing: element has wrong rank");
  for (u32 i = 0; i < n_; ++i) x[i] = mod_floor(x[i], d_[i]);
  return x;
}

RingElement FinRing::add(const RingElement& a, const RingElement& b) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i) r[i] = mod_floor(a[i] + b[i], d_[i]);
  return r;
}

RingElement FinRing::sub(const RingElement& a, const RingElement& b) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i) r[i] = mod_floor(a[i] - b[i], d_[i]);
  return r;
}

RingElement FinRing::neg(const RingElement& a) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i) r[i] = mod_floor(-a[i], d_[i]);
  return r;
}

RingElement FinRing::smul(i64 c, const RingElement& a) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i) r[i] = mod_floor_i128(i128(mod_floor(c, d_[i])) * a[i], d_[i]);
  return r;
}

RingElement FinRing::mul(const RingElement& a, const RingElement& b) const {
  RingElement out(n_, 0);
  if (gf2_) {
    static thread_local std::vector<u64> acc;
    acc.assign(gf2w_, 0);
    for (u32 i = 0; i < n_; ++i) {
      if (!(a[i] & 1)) continue;
      size_t base = (static_cast<size_t>(i) * n_) * gf2w_;
      for (u32 j = 0; j < n_; ++j) {
        if (!(b[j] & 1)) continue;
        const u64* row = gf2t_.data() + base + static_cast<size_t>(j) * gf2w_;
        for (u32 w = 0; w < gf2w_; ++w) acc[w] ^= row[w];
      }
    }
    for (u32 k = 0; k < n_; ++k) out[k] = static_cast<i64>((acc[k / 64] >> (k % 64)) & 1);
    return out;
  }
  if (small_) {
    static thread_local std::vector<i64> acc;
    acc.assign(n_, 0);
    for (u32 i = 0; i < n_; ++i) {
      i64 ai = a[i];
      if (!ai) continue;
      size_t base = static_cast<size_t>(i) * n_;
      for (u32 j = 0; j < n_; ++j) {
        i64 bj = b[j];
        if (!bj) continue;
        i64 s = ai * bj;
        for (u64 t = toff_[base + j]; t < toff_[base + j + 1]; ++t)
          acc[tdata_[t].idx] += s * tdata_[t].c;
      }
    }
    for (u32 k = 0; k < n_; ++k) out[k] = mod_floor(acc[k], d_[k]);
  } else {
    static thread_local std::vector<i128> acc;
    acc.assign(n_, 0);
    for (u32 i = 0; i < n_; ++i) {
      i64 ai = a[i];
      if (!ai) continue;
      size_t base = static_cast<size_t>(i) * n_;
      for (u32 j = 0; j < n_; ++j) {
        i64 bj = b[j];
        if (!bj) continue;
        for (u64 t = toff_[base + j]; t < toff_[base + j + 1]; ++t) {
          u32 k = tdata_[t].idx;
          i128 s = (i128(ai) * bj) % d_[k];
          acc[k] = (acc[k] + s * tdata_[t].c) % d_[k];
        }
      }
    }
    for (u32 k = 0; k < n_; ++k) out[k] = mod_floor_i128(acc[k], d_[k]);
  }
  return out;
}

RingElement FinRing::pow(const RingElement& a, u64 e) const {
  RingElement r = one_, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    if (e >>= 1) b = mul(b, b);
  }
  return r;
}

bool FinRing::is_zero(const RingElement& a) const {
  return std::all_of(a.begin(), a.end(), [](i64 x) { return x == 0; });
}

RingElement FinRing::random(Rng& rng) const {
  RingElement r(n_);
  for (u32 i = 0; i < n_; ++i) r[i] = static_cast<i64>(rng.below(static_cast<u64>(d_[i])));
  return r;
}

std::vector<RingElement> FinRing::all_elements(u64 limit) const {
  u64 n = size_u64();
  if (n > limit) throw TooLarge("FinRing::all_elements");
  std::vector<RingElement> out;
  out.reserve(n);
  RingElement cur = zero();
  for (u64 c = 0; c < n; ++c) {
    out.push_back(cur);
    for (u32 i = 0; i < n_; ++i) {
      if (++cur[i] < d_[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

IMat FinRing::left_mul_matrix(const RingElement& x) const {
  IMat M(n_, IRow(n_, 0));
  for (u32 i = 0; i < n_; ++i) {
    i64 xi = x[i];
    if (!xi) continue;
    for (u32 j = 0; j < n_; ++j) {
      size_t r = static_cast<size_t>(i) * n_ + j;
      for (u64 t = toff_[r]; t < toff_[r + 1]; ++t) {
        u32 k = tdata_[t].idx;
        M[j][k] = mod_floor_i128(i128(M[j][k]) + i128(xi) * tdata_[t].c, d_[k]);
      }
    }
  }
  return M;
}

IMat FinRing::right_mul_matrix(const RingElement& x) const {
  IMat M(n_, IRow(n_, 0));
  for (u32 j = 0; j < n_; ++j) {
    i64 xj = x[j];
    if (!xj) continue;
    for (u32 i = 0; i < n_; ++i) {
      size_t r = static_cast<size_t>(i) * n_ + j;
      for (u64 t = toff_[r]; t < toff_[r + 1]; ++t) {
        u32 k = tdata_[t].idx;
        M[i][k] = mod_floor_i128(i128(M[i][k]) + i128(xj) * tdata_[t].c, d_[k]);
      }
    }
  }
  return M;
}

std::optional<RingElement> FinRing::unit_inverse(const RingElement& x) const {
  if (n_ == 0) return RingElement{};
  IMat T = left_mul_matrix(x);
  for (u32 i = 0; i < n_; ++i) {
    IRow r(n_, 0);
    r[i] = d_[i];
    T.push_back(r);
  }
  SmithForm f = smith_normal_form(T, n_);
  IRow y;
  try {
    y = f.solve_left(IRow(one_.begin(), one_.end()));
  } catch (const NoSolution&) {
    return std::nullopt;
  }
  RingElement inv = reduce(RingElement(y.begin(), y.begin() + n_));
  if (mul(x, inv) != one_ || mul(inv, x) != one_) return std::nullopt;
  return inv;
}

std::vector<SparseTerm> FinRing::table_row(u32 i, u32 j) const {
  size_t r = static_cast<size_t>(i) * n_ + j;
  return std::vector<SparseTerm>(tdata_.begin() + static_cast<i64>(toff_[r]),
                                 tdata_.begin() + static_cast<i64>(toff_[r + 1]));
}

// ---------------------------------------------------------------------------

static RingPtr to_ptr(FinRing r) { return std::make_shared<const FinRing>(std::move(r)); }

RingPtr zmod_ring(u64 m) {
  if (m == 0) throw UnitringError("zmod_ring(0)");
  if (m == 1) return to_ptr(FinRing({}, {}, {}));
  return to_ptr(FinRing({static_cast<i64>(m)}, {{{0, 1}}}, {1}));
}

RingPtr gf_ring(u64 p, u32 m, u64 seed) {
  auto k = FiniteField::make(p, m, seed);
  std::vector<i64> d(m, static_cast<i64>(p));
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(m) * m);
  for (u32 i = 0; i < m; ++i)
    for (u32 j = 0; j < m; ++j) {
      FFElem a(m, 0), b(m, 0);
      a[i] = 1;
      b[j] = 1;
      FFElem prod = k->mul(a, b);
      for (u32 t = 0; t < m; ++t)
        if (prod[t]) table[static_cast<size_t>(i) * m + j].push_back({t, static_cast<i64>(prod[t])});
    }
  RingElement one(m, 0);
  one[0] = 1;
  return to_ptr(FinRing(std::move(d), std::move(table), std::move(one)));
}

RingPtr product_ring(const std::vector<FinRing>& factors) {
  std::vector<i64> d;
  std::vector<u32> off;
  for (const FinRing& f : factors) {
    off.push_back(static_cast<u32>(d.size()));
    for (i64 di : f.add_orders()) d.push_back(di);
  }
  u32 n = static_cast<u32>(d.size());
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(n) * n);
  RingElement one(n, 0);
  for (size_t fi = 0; fi < factors.size(); ++fi) {
    const FinRing& f = factors[fi];
    u32 o = off[fi], r = f.rank();
    for (u32 i = 0; i < r; ++i) {
      one[o + i] = f.unity()[i];
      for (u32 j = 0; j < r; ++j) {
        auto row = f.table_row(i, j);
        auto& dst = table[static_cast<size_t>(o + i) * n + (o + j)];
        for (const SparseTerm& t : row) dst.push_back({o + t.idx, t.c});
      }
    }
  }
  return to_ptr(FinRing::unchecked(std::move(d), std::move(table), std::move(one)));
}

MatrixRing matrix_ring(RingPtr R, u32 nn) {
  u32 r = R->rank();
  u32 n = nn;
  u32 N = n * n * r;
  std::vector<i64> d(N);
  for (u32 cell = 0; cell < n * n; ++cell)
    for (u32 i = 0; i < r; ++i) d[static_cast<size_t>(cell) * r + i] = R->add_orders()[i];
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(N) * N);
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b)
      for (u32 i = 0; i < r; ++i) {
        u32 lhs = (a * n + b) * r + i;
        for (u32 dcol = 0; dcol < n; ++dcol)
          for (u32 j = 0; j < r; ++j) {
            u32 rhs = (b * n + dcol) * r + j;  // e_ab e_cd nonzero only when c = b
            auto row = R->table_row(i, j);
            auto& dst = table[static_cast<size_t>(lhs) * N + rhs];
            for (const SparseTerm& t : row) dst.push_back({(a * n + dcol) * r + t.idx, t.c});
          }
      }
  RingElement one(N, 0);
  for (u32 a = 0; a < n; ++a)
    for (u32 i = 0; i < r; ++i) one[static_cast<size_t>((a * n + a) * r) + i] = R->unity()[i];
  MatrixRing M;
  M.ring = to_ptr(FinRing::unchecked(std::move(d), std::move(table), std::move(one)));
  M.base = std::move(R);
  M.n = n;
  return M;
}

RingElement MatrixRing::embed(const std::vector<RingElement>& entries) const {
  u32 r = base->rank();
  if (entries.size() != static_cast<size_t>(n) * n)
    throw UnitringError("MatrixRing::embed: need n*n entries");
  RingElement x(static_cast<size_t>(n) * n * r, 0);
  for (u32 cell = 0; cell < n * n; ++cell) {
    if (entries[cell].size() != r) throw UnitringError("MatrixRing::embed: bad entry rank");
    for (u32 i = 0; i < r; ++i) x[static_cast<size_t>(cell) * r + i] = entries[cell][i];
  }
  return ring->reduce(std::move(x));
}

std::vector<RingElement> MatrixRing::entries(const RingElement& x) const {
  u32 r = base->rank();
  std::vector<RingElement> out(static_cast<size_t>(n) * n, RingElement(r, 0));
  for (u32 cell = 0; cell < n * n; ++cell)
    for (u32 i = 0; i < r; ++i) out[cell][i] = x[static_cast<size_t>(cell) * r + i];
  return out;
}

RingElement MatrixRing::scalar(const RingElement& rr) const {
  u32 r = base->rank();
  RingElement x(static_cast<size_t>(n) * n * r, 0);
  for (u32 a = 0; a < n; ++a)
    for (u32 i = 0; i < r; ++i) x[static_cast<size_t>((a * n + a) * r) + i] = rr[i];
  return ring->reduce(std::move(x));
}

RingPtr poly_quotient_ring(RingPtr Bp, const std::vector<RingElement>& f) {
  const FinRing& B = *Bp;
  u32 r = B.rank();
  if (f.size() < 2) throw BadSpec("poly_quotient_ring: modulus must have degree >= 1");
  u32 deg = static_cast<u32>(f.size() - 1);
  if (B.reduce(f.back()) != B.unity()) throw BadSpec("poly_quotient_ring: modulus must be monic");
  for (u32 i = 0; i < r; ++i)
    for (u32 j = i + 1; j < r; ++j)
      if (B.mul(B.basis(i), B.basis(j)) != B.mul(B.basis(j), B.basis(i)))
        throw BadSpec("poly_quotient_ring: base ring must be commutative");

  // x^e mod f for e up to 2 deg - 2, coefficients in B.
  std::vector<std::vector<RingElement>> xpow(2 * deg - 1,
                                             std::vector<RingElement>(deg, B.zero()));
  for (u32 e = 0; e < deg; ++e) xpow[e][e] = B.unity();
  for (u32 e = deg; e + 1 <= 2 * deg - 1; ++e) {
    std::vector<RingElement> shifted(deg + 1, B.zero());
    for (u32 i = 0; i < deg; ++i) shifted[i + 1] = xpow[e - 1][i];
    RingElement top = shifted[deg];
    for (u32 i = 0; i < deg; ++i)
      xpow[e][i] = B.sub(shifted[i], B.mul(top, B.reduce(f[i])));
  }

  u32 N = deg * r;
  std::vector<i64> d(N);
  for (u32 i = 0; i < deg; ++i)
    for (u32 s = 0; s < r; ++s) d[static_cast<size_t>(i) * r + s] = B.add_orders()[s];
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(N) * N);
  for (u32 i = 0; i < deg; ++i)
    for (u32 s = 0; s < r; ++s) {
      u32 lhs = i * r + s;
      for (u32 j = 0; j < deg; ++j)
        for (u32 t = 0; t < r; ++t) {
          u32 rhs = j * r + t;
          RingElement u = B.mul(B.basis(s), B.basis(t));
          auto& dst = table[static_cast<size_t>(lhs) * N + rhs];
          for (u32 e = 0; e < deg; ++e) {
            RingElement v = B.mul(u, xpow[i + j][e]);
            for (u32 k = 0; k < r; ++k)
              if (v[k]) dst.push_back({e * r + k, v[k]});
          }
        }
    }
  RingElement one(N, 0);
  for (u32 s = 0; s < r; ++s) one[s] = B.unity()[s];
  return to_ptr(FinRing(std::move(d), std::move(table), std::move(one)));
}

// ---------------------------------------------------------------------------

Ideal::Ideal(RingPtr R, Lattice lat) : R_(std::move(R)), lat_(std::move(lat)) {
  if (lat_.dim() != R_->rank()) throw UnitringError("Ideal: lattice dimension mismatch");
}

Ideal Ideal::span(RingPtr R, const std::vector<RingElement>& gens) {
  std::vector<i64> diag = R->add_orders();
  Lattice lat(diag.empty() ? Lattice(0) : Lattice(diag));
  std::vector<RingElement> work;
  for (const RingElement& g : gens) work.push_back(R->reduce(g));
  u32 n = R->rank();
  while (!work.empty()) {
    RingElement v = std::move(work.back());
    work.pop_back();
    if (R->is_zero(v) || lat.contains(IRow(v.begin(), v.end()))) continue;
    lat.add_row(IRow(v.begin(), v.end()));
    for (u32 i = 0; i < n; ++i) {
      RingElement b = R->basis(i);
      work.push_back(R->mul(b, v));
      work.push_back(R->mul(v, b));
    }
  }
  return Ideal(std::move(R), std::move(lat));
}

RingElement Ideal::reduce(const RingElement& x) const {
  IRow r = lat_.reduce(IRow(x.begin(), x.end()));
  return R_->reduce(RingElement(r.begin(), r.end()));
}

BigInt Ideal::size() const {
  BigInt total = R_->size();
  BigInt index = 1;
  for (u32 i = 0; i < lat_.dim(); ++i) index *= lat_.basis()[i][i];
  return total / index;
}

bool Ideal::is_zero_ideal() const { return size() == 1; }

std::vector<RingElement> Ideal::add_generators() const {
  std::vector<RingElement> out;
  for (const IRow& row : lat_.basis()) {
    RingElement e = R_->reduce(RingElement(row.begin(), row.end()));
    if (!R_->is_zero(e)) out.push_back(std::move(e));
  }
  return out;
}

Ideal Ideal::add(const Ideal& o) const {
  Lattice lat = lat_;
  for (const IRow& row : o.lat_.basis()) lat.add_row(row);
  return Ideal(R_, std::move(lat));
}

Ideal Ideal::mul(const Ideal& o) const {
  Lattice lat(R_->add_orders().empty() ? Lattice(0) : Lattice(R_->add_orders()));
  std::vector<RingElement> a = add_generators(), b = o.add_generators();
  for (const RingElement& x : a)
    for (const RingElement& y : b) {
      RingElement p = R_->mul(x, y);
      if (!R_->is_zero(p)) lat.add_row(IRow(p.begin(), p.end()));
    }
  return Ideal(R_, std::move(lat));
}

// ---------------------------------------------------------------------------

QuotientRing quotient_ring(RingPtr R, const Ideal& I) {
  u32 n = R->rank();
  auto quo = std::make_shared<AbQuotient>(n, I.lattice().basis());
  const std::vector<i64>& inv = quo->group().invariants();
  u32 m = static_cast<u32>(inv.size());

  std::vector<RingElement> lifts(m);
  for (u32 i = 0; i < m; ++i) {
    AbElement e(m, 0);
    e[i] = 1;
    IRow lift = quo->lift(e);
    lifts[i] = R->reduce(RingElement(lift.begin(), lift.end()));
  }
  std::vector<std::vector<SparseTerm>> table(static_cast<size_t>(m) * m);
  for (u32 i = 0; i < m; ++i)
    for (u32 j = 0; j < m; ++j) {
      RingElement p = R->mul(lifts[i], lifts[j]);
      AbElement c = quo->coords(IRow(p.begin(), p.end()));
      for (u32 k = 0; k < m; ++k)
        if (c[k]) table[static_cast<size_t>(i) * m + j].push_back({k, c[k]});
    }
  AbElement onec = quo->coords(IRow(R->unity().begin(), R->unity().end()));

  QuotientRing Q;
  Q.ring = to_ptr(FinRing::unchecked(inv, std::move(table), RingElement(onec.begin(), onec.end())));
  RingPtr Rp = R;
  Q.project = [quo](const RingElement& x) {
    AbElement c = quo->coords(IRow(x.begin(), x.end()));
    return RingElement(c.begin(), c.end());
  };
  Q.lift = [quo, Rp](const RingElement& y) {
    IRow l = quo->lift(AbElement(y.begin(), y.end()));
    return Rp->reduce(RingElement(l.begin(), l.end()));
  };
  return Q;
}

// ---------------------------------------------------------------------------

Ideal Ideal::pow_2k(u32 k) const {
  Ideal r = *this;
  for (u32 i = 0; i < k; ++i) r = r.mul(r);
  return r;
}

static RingHom identity_hom(RingPtr R) {
  RingHom h;
  h.src = R;
  h.dst = R;
  h.forward = [](const RingElement& x) { return x; };
  h.preimage = [](const RingElement& x) { return x; };
  return h;
}

std::vector<PComponent> p_decomposition(RingPtr R) {
  std::vector<PComponent> out;
  if (R->rank() == 0) return out;
  u64 m = R->add_exponent();
  Factorization fac = factor(m);
  if (fac.size() == 1) {
    out.push_back({fac[0].first, R, identity_hom(R)});
    return out;
  }
  for (const auto& [p, a] : fac) {
    u64 pa = 1;
    for (u32 i = 0; i < a; ++i) pa *= p;
    u64 u = m / pa;
    u64 t = inverse_mod(u % pa, pa);
    u64 c = static_cast<u64>(u128(t) * u % m);
    // c*1 is the central idempotent cutting out the p-primary part.
    RingElement ep = R->smul(static_cast<i64>(c), R->unity());
    RingElement co = R->sub(R->unity(), ep);
    QuotientRing Q = quotient_ring(R, Ideal::span(R, {co}));
    PComponent comp;
    comp.p = p;
    comp.ring = Q.ring;
    comp.map.src = R;
    comp.map.dst = Q.ring;
    comp.map.forward = Q.project;
    comp.map.preimage = Q.lift;
    out.push_back(std::move(comp));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<RingElement> brute_force_units(const FinRing& R) {
  u64 n = R.size_u64();
  if (n > (u64(1) << 16)) throw TooLarge("brute_force_units");
  std::vector<RingElement> out;
  for (const auto& x : R.all_elements(u64(1) << 16))
    if (R.is_unit(x)) out.push_back(x);
  return out;
}

namespace {

u64 element_index(const FinRing& R, const RingElement& x) {
  u64 idx = 0;
  for (u32 i = 0; i < R.rank(); ++i) idx = idx * static_cast<u64>(R.add_orders()[i]) + static_cast<u64>(x[i]);
  return idx;
}

}  // namespace

Ideal brute_force_radical(RingPtr R) {
  u64 n = R->size_u64();
  if (n > (u64(1) << 12)) throw TooLarge("brute_force_radical");
  u32 r = R->rank();
  std::vector<char> unit(n, 0);
  for (const auto& x : R->all_elements(u64(1) << 12)) unit[element_index(*R, x)] = R->is_unit(x) ? 1 : 0;

  std::vector<i64> diag = R->add_orders();
  Lattice lat = r == 0 ? Lattice(0) : Lattice(diag);
  for (const auto& x : R->all_elements(u64(1) << 12)) {
    // x is in the radical iff every element of the left ideal Rx is
    // quasi-regular. Enumerate Rx as the additive span of the b_i x.
    Lattice span = r == 0 ? Lattice(0) : Lattice(diag);
    for (u32 i = 0; i < r; ++i) {
      RingElement g = R->mul(R->basis(i), x);
      if (!R->is_zero(g)) span.add_row(IRow(g.begin(), g.end()));
    }
    std::vector<RingElement> members;
    members.push_back(R->zero());
    bool ok = true;
    for (u32 i = 0; i < r && ok; ++i) {
      i64 piv = span.basis()[i][i];
      if (piv == diag[i]) continue;
      RingElement step = R->reduce(RingElement(span.basis()[i].begin(), span.basis()[i].end()));
      u64 reps = static_cast<u64>(diag[i] / piv);
      size_t base = members.size();
      RingElement acc = R->zero();
      for (u64 c = 1; c < reps && ok; ++c) {
        acc = R->add(acc, step);
        for (size_t s = 0; s < base && ok; ++s) {
          RingElement z = R->add(members[s], acc);
          if (!unit[element_index(*R, R->sub(R->unity(), z))]) ok = false;
          members.push_back(std::move(z));
        }
      }
    }
    if (ok && !R->is_zero(x)) lat.add_row(IRow(x.begin(), x.end()));
  }
  return Ideal(R, std::move(lat));
}

}  // namespace unitring

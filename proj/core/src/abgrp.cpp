#include "unitring/abgrp.hpp"

#include <algorithm>
#include <numeric>

#include "unitring/numtheory.hpp"

namespace unitring {

namespace {

i64 floordiv(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

IMat imat_identity(u32 n) {
  IMat I(n, IRow(n, 0));
  for (u32 i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

IMat imat_mul(const IMat& A, const IMat& B) {
  u32 r = static_cast<u32>(A.size());
  u32 m = static_cast<u32>(B.size());
  u32 c = m ? static_cast<u32>(B[0].size()) : 0;
  IMat R(r, IRow(c, 0));
  for (u32 i = 0; i < r; ++i)
    for (u32 k = 0; k < m; ++k) {
      i64 a = A[i][k];
      if (!a) continue;
      for (u32 j = 0; j < c; ++j)
        R[i][j] = checked_add(R[i][j], checked_mul(a, B[k][j]));
    }
  return R;
}

IRow row_mat_mul(const IRow& x, const IMat& A) {
  u32 m = static_cast<u32>(A.size());
  u32 c = m ? static_cast<u32>(A[0].size()) : 0;
  IRow r(c, 0);
  for (u32 k = 0; k < m; ++k) {
    i64 a = x[k];
    if (!a) continue;
    for (u32 j = 0; j < c; ++j) r[j] = checked_add(r[j], checked_mul(a, A[k][j]));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct SnfWork {
  IMat W, U, V, Vinv;
  u32 rows, cols;

  void row_swap(u32 i, u32 j) {
    if (i == j) return;
    std::swap(W[i], W[j]);
    std::swap(U[i], U[j]);
  }
  void row_neg(u32 i) {
    for (auto& x : W[i]) x = checked_mul(x, -1);
    for (auto& x : U[i]) x = checked_mul(x, -1);
  }
  // row_i += c * row_j
  void row_addmul(u32 i, u32 j, i64 c) {
    for (u32 t = 0; t < cols; ++t) W[i][t] = checked_add(W[i][t], checked_mul(c, W[j][t]));
    for (u32 t = 0; t < rows; ++t) U[i][t] = checked_add(U[i][t], checked_mul(c, U[j][t]));
  }
  void col_swap(u32 i, u32 j) {
    if (i == j) return;
    for (u32 t = 0; t < rows; ++t) std::swap(W[t][i], W[t][j]);
    for (u32 t = 0; t < cols; ++t) std::swap(V[t][i], V[t][j]);
    std::swap(Vinv[i], Vinv[j]);
  }
  // col_j += c * col_i  (so Vinv row_i -= c * Vinv row_j)
  void col_addmul(u32 j, u32 i, i64 c) {
    for (u32 t = 0; t < rows; ++t) W[t][j] = checked_add(W[t][j], checked_mul(c, W[t][i]));
    for (u32 t = 0; t < cols; ++t) V[t][j] = checked_add(V[t][j], checked_mul(c, V[t][i]));
    for (u32 t = 0; t < cols; ++t)
      Vinv[i][t] = checked_add(Vinv[i][t], checked_mul(-c, Vinv[j][t]));
  }

  void diagonalize() {
    u32 k = std::min(rows, cols);
    for (u32 t = 0; t < k; ++t) {
      while (true) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        u32 pi = t, pj = t;
        i64 best = 0;
        for (u32 i = t; i < rows; ++i)
          for (u32 j = t; j < cols; ++j) {
            i64 v = W[i][j] < 0 ? -W[i][j] : W[i][j];
            if (v != 0 && (best == 0 || v < best)) { best = v; pi = i; pj = j; }
          }
        if (best == 0) return;  // trailing block is zero
        row_swap(t, pi);
        col_swap(t, pj);
        if (W[t][t] < 0) row_neg(t);
        bool clean = true;
        for (u32 i = t + 1; i < rows; ++i) {
          i64 q = floordiv(W[i][t], W[t][t]);
          if (q) row_addmul(i, t, -q);
          if (W[i][t]) clean = false;
        }
        for (u32 j = t + 1; j < cols; ++j) {
          i64 q = floordiv(W[t][j], W[t][t]);
          if (q) col_addmul(j, t, -q);
          if (W[t][j]) clean = false;
        }
        if (!clean) continue;
        // Pull in any entry the pivot does not divide, then redo.
        bool redo = false;
        for (u32 i = t + 1; i < rows && !redo; ++i)
          for (u32 j = t + 1; j < cols && !redo; ++j)
            if (W[i][j] % W[t][t] != 0) {
              row_addmul(t, i, 1);
              redo = true;
            }
        if (!redo) break;
      }
    }
  }
};

}  // namespace

SmithForm smith_normal_form(const IMat& M, u32 cols) {
  SnfWork w;
  w.rows = static_cast<u32>(M.size());
  w.cols = cols;
  w.W = M;
  for (const auto& r : w.W)
    if (r.size() != cols) throw UnitringError("smith_normal_form: ragged matrix");
  w.U = imat_identity(w.rows);
  w.V = imat_identity(w.cols);
  w.Vinv = imat_identity(w.cols);
  u32 k = std::min(w.rows, w.cols);
  while (true) {
    w.diagonalize();
    bool fixed = true;
    for (u32 t = 0; t + 1 < k; ++t) {
      i64 a = w.W[t][t], b = w.W[t + 1][t + 1];
      if (a != 0 && b != 0 && b % a != 0) {
        w.col_addmul(t, t + 1, 1);  // puts b into column t; re-diagonalize
        fixed = false;
        break;
      }
    }
    if (fixed) break;
  }
  SmithForm f;
  f.rows = w.rows;
  f.cols = w.cols;
  f.s.resize(k);
  for (u32 t = 0; t < k; ++t) f.s[t] = w.W[t][t];
  f.U = std::move(w.U);
  f.V = std::move(w.V);
  f.Vinv = std::move(w.Vinv);
  return f;
}

IRow SmithForm::solve_left(const IRow& b) const {
  if (b.size() != cols) throw UnitringError("solve_left: size mismatch");
  IRow w = row_mat_mul(b, V);
  IRow y(rows, 0);
  u32 k = static_cast<u32>(s.size());
  for (u32 i = 0; i < cols; ++i) {
    if (i < k && s[i] != 0) {
      if (w[i] % s[i] != 0) throw NoSolution("solve_left: not in row span");
      y[i] = w[i] / s[i];
    } else if (w[i] != 0) {
      throw NoSolution("solve_left: not in row span");
    }
  }
  return row_mat_mul(y, U);
}

// ---------------------------------------------------------------------------

FinAbGroup::FinAbGroup(std::vector<i64> invariants) {
  for (i64 d : invariants) {
    if (d <= 0) throw UnitringError("FinAbGroup: invariants must be positive");
    if (d > 1) d_.push_back(d);
  }
}

u64 FinAbGroup::size() const {
  u64 n = 1;
  for (i64 d : d_) {
    if (n > (u64(1) << 62) / static_cast<u64>(d)) throw TooLarge("FinAbGroup::size");
    n *= static_cast<u64>(d);
  }
  return n;
}

AbElement FinAbGroup::reduce(AbElement x) const {
  if (x.size() != d_.size()) throw UnitringError("FinAbGroup: rank mismatch");
  for (size_t i = 0; i < d_.size(); ++i) x[i] = mod_floor(x[i], d_[i]);
  return x;
}

AbElement FinAbGroup::add(const AbElement& a, const AbElement& b) const {
  AbElement r(d_.size());
  for (size_t i = 0; i < d_.size(); ++i) r[i] = mod_floor(a[i] + b[i], d_[i]);
  return r;
}

AbElement FinAbGroup::neg(const AbElement& a) const {
  AbElement r(d_.size());
  for (size_t i = 0; i < d_.size(); ++i) r[i] = mod_floor(-a[i], d_[i]);
  return r;
}

AbElement FinAbGroup::sub(const AbElement& a, const AbElement& b) const {
  AbElement r(d_.size());
  for (size_t i = 0; i < d_.size(); ++i) r[i] = mod_floor(a[i] - b[i], d_[i]);
  return r;
}

AbElement FinAbGroup::smul(i64 c, const AbElement& a) const {
  AbElement r(d_.size());
  for (size_t i = 0; i < d_.size(); ++i)
    r[i] = mod_floor(checked_mul(mod_floor(c, d_[i]), a[i]), d_[i]);
  return r;
}

bool FinAbGroup::is_zero(const AbElement& a) const {
  return std::all_of(a.begin(), a.end(), [](i64 x) { return x == 0; });
}

u64 FinAbGroup::order(const AbElement& a) const {
  u64 l = 1;
  for (size_t i = 0; i < d_.size(); ++i) {
    u64 oi = static_cast<u64>(d_[i]) / std::gcd(static_cast<u64>(d_[i]),
                                                static_cast<u64>(mod_floor(a[i], d_[i])));
    u64 g = std::gcd(l, oi);
    if (l / g > (u64(1) << 62) / oi) throw TooLarge("FinAbGroup::order");
    l = l / g * oi;
  }
  return l;
}

AbElement FinAbGroup::random(Rng& rng) const {
  AbElement r(d_.size());
  for (size_t i = 0; i < d_.size(); ++i) r[i] = static_cast<i64>(rng.below(static_cast<u64>(d_[i])));
  return r;
}

AbElement FinAbGroup::gen(u32 i) const {
  AbElement r(d_.size(), 0);
  r.at(i) = 1;
  return r;
}

std::vector<AbElement> FinAbGroup::all_elements(u64 limit) const {
  u64 n = size();
  if (n > limit) throw TooLarge("FinAbGroup::all_elements");
  std::vector<AbElement> out;
  out.reserve(n);
  AbElement cur = zero();
  for (u64 c = 0; c < n; ++c) {
    out.push_back(cur);
    for (size_t i = 0; i < d_.size(); ++i) {
      if (++cur[i] < d_[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

AbQuotient::AbQuotient(u32 n, const IMat& relations) : n_(n) {
  SmithForm f = smith_normal_form(relations, n);
  s_.assign(n, 0);
  for (u32 i = 0; i < f.s.size() && i < n; ++i) s_[i] = f.s[i] < 0 ? -f.s[i] : f.s[i];
  std::vector<i64> inv;
  for (u32 i = 0; i < n; ++i) {
    if (s_[i] == 0) throw InfiniteGroup("AbQuotient: relations have rank < n");
    if (s_[i] > 1) keep_.push_back(i);
  }
  for (u32 i : keep_) inv.push_back(s_[i]);
  V_ = std::move(f.V);
  Vinv_ = std::move(f.Vinv);
  group_ = FinAbGroup(std::move(inv));
}

AbElement AbQuotient::coords(const IRow& x) const {
  IRow y = row_mat_mul(x, V_);
  AbElement a(keep_.size());
  for (size_t j = 0; j < keep_.size(); ++j) a[j] = mod_floor(y[keep_[j]], s_[keep_[j]]);
  return a;
}

IRow AbQuotient::lift(const AbElement& a) const {
  if (a.size() != keep_.size()) throw UnitringError("AbQuotient::lift: rank mismatch");
  IRow y(n_, 0);
  for (size_t j = 0; j < keep_.size(); ++j) y[keep_[j]] = a[j];
  return row_mat_mul(y, Vinv_);
}

std::vector<i64> invariant_factors(u32 n, const IMat& relations) {
  return AbQuotient(n, relations).group().invariants();
}

// ---------------------------------------------------------------------------

namespace {

IMat stacked_with_diag(const std::vector<AbElement>& gens, const FinAbGroup& amb) {
  u32 n = amb.rank();
  IMat T;
  T.reserve(gens.size() + n);
  for (const auto& g : gens) {
    if (g.size() != n) throw UnitringError("subgroup gens: rank mismatch");
    T.push_back(g);
  }
  for (u32 i = 0; i < n; ++i) {
    IRow r(n, 0);
    r[i] = amb.invariants()[i];
    T.push_back(r);
  }
  return T;
}

IMat kernel_relations(const SmithForm& f, u32 ngens, u32 n) {
  // Rows of U beyond the rank are a basis of the left kernel; their first
  // ngens coordinates present the subgroup as Z^ngens / K.
  u32 rank = 0;
  for (i64 s : f.s)
    if (s != 0) ++rank;
  IMat K;
  for (u32 i = rank; i < f.rows; ++i) {
    IRow r(f.U[i].begin(), f.U[i].begin() + ngens);
    K.push_back(r);
  }
  (void)n;
  return K;
}

}  // namespace

AbSubgroup::AbSubgroup(FinAbGroup ambient, std::vector<AbElement> gens)
    : amb_(std::move(ambient)),
      gens_(std::move(gens)),
      ngens_(static_cast<u32>(gens_.size())),
      stacked_(smith_normal_form(stacked_with_diag(gens_, amb_), amb_.rank())),
      sub_(ngens_, kernel_relations(stacked_, ngens_, amb_.rank())) {}

AbElement AbSubgroup::to_ambient(const AbElement& s) const {
  IRow y = sub_.lift(s);
  AbElement acc = amb_.zero();
  for (u32 j = 0; j < ngens_; ++j)
    if (y[j]) acc = amb_.add(acc, amb_.smul(y[j], gens_[j]));
  return acc;
}

AbElement AbSubgroup::from_ambient(const AbElement& x) const {
  IRow b(x.begin(), x.end());
  IRow u;
  try {
    u = stacked_.solve_left(b);
  } catch (const NoSolution&) {
    throw NotInSubgroup("AbSubgroup::from_ambient");
  }
  IRow y(u.begin(), u.begin() + ngens_);
  return sub_.coords(y);
}

bool AbSubgroup::contains(const AbElement& x) const {
  IRow b(x.begin(), x.end());
  try {
    stacked_.solve_left(b);
    return true;
  } catch (const NoSolution&) {
    return false;
  }
}

AbBigQuotient::AbBigQuotient(FinAbGroup ambient, const std::vector<AbElement>& gens)
    : amb_(std::move(ambient)), quo_(amb_.rank(), stacked_with_diag(gens, amb_)) {}

AbElement AbBigQuotient::project(const AbElement& x) const {
  IRow b(x.begin(), x.end());
  return quo_.coords(b);
}

AbElement AbBigQuotient::lift(const AbElement& y) const {
  return amb_.reduce(quo_.lift(y));
}

// ---------------------------------------------------------------------------

Lattice::Lattice(u32 n) : n_(n), H_(n, IRow(n, 0)) {}

Lattice::Lattice(std::vector<i64> diag) : n_(static_cast<u32>(diag.size())) {
  H_.assign(n_, IRow(n_, 0));
  for (u32 i = 0; i < n_; ++i) {
    if (diag[i] < 1) throw UnitringError("Lattice: diagonal entries must be >= 1");
    H_[i][i] = diag[i];
  }
}

void Lattice::add_row(IRow v) {
  if (v.size() != n_) throw UnitringError("Lattice::add_row: size mismatch");
  for (u32 j = 0; j < n_; ++j) {
    if (v[j] == 0) continue;
    i64 a = H_[j][j];
    if (a == 0) {
      if (v[j] < 0)
        for (auto& x : v) x = checked_mul(x, -1);
      H_[j] = std::move(v);
      canonical_ = false;
      return;
    }
    if (v[j] % a == 0) {
      i64 q = v[j] / a;
      for (u32 t = j; t < n_; ++t) v[t] = checked_add(v[t], checked_mul(-q, H_[j][t]));
    } else {
      i64 x, y;
      i64 g = egcd(a, v[j], x, y);
      IRow nr(n_, 0), nv(n_, 0);
      i64 qa = a / g, qb = v[j] / g;
      for (u32 t = j; t < n_; ++t) {
        nr[t] = checked_add(checked_mul(x, H_[j][t]), checked_mul(y, v[t]));
        nv[t] = checked_add(checked_mul(qa, v[t]), checked_mul(-qb, H_[j][t]));
      }
      H_[j] = std::move(nr);
      v = std::move(nv);
      canonical_ = false;
      // Keep the updated row's tail small so later walks stay bounded.
      for (u32 t = j + 1; t < n_; ++t) {
        if (H_[t][t] == 0 || H_[j][t] == 0) continue;
        i64 q = floordiv(H_[j][t], H_[t][t]);
        if (!q) continue;
        for (u32 c = t; c < n_; ++c)
          H_[j][c] = checked_add(H_[j][c], checked_mul(-q, H_[t][c]));
      }
    }
  }
}

bool Lattice::contains(IRow v) const {
  if (v.size() != n_) throw UnitringError("Lattice::contains: size mismatch");
  for (u32 j = 0; j < n_; ++j) {
    if (v[j] == 0) continue;
    i64 a = H_[j][j];
    if (a == 0 || v[j] % a != 0) return false;
    i64 q = v[j] / a;
    for (u32 t = j; t < n_; ++t) v[t] = checked_add(v[t], checked_mul(-q, H_[j][t]));
  }
  return true;
}

IRow Lattice::reduce(IRow v) const {
  if (v.size() != n_) throw UnitringError("Lattice::reduce: size mismatch");
  canonicalize();
  for (u32 j = 0; j < n_; ++j) {
    if (H_[j][j] == 0) continue;
    i64 q = floordiv(v[j], H_[j][j]);
    if (!q) continue;
    for (u32 t = j; t < n_; ++t) v[t] = checked_add(v[t], checked_mul(-q, H_[j][t]));
  }
  return v;
}

bool Lattice::full_rank() const {
  for (u32 i = 0; i < n_; ++i)
    if (H_[i][i] == 0) return false;
  return true;
}

const IMat& Lattice::basis() const {
  canonicalize();
  return H_;
}

u64 Lattice::index() const {
  if (!full_rank()) throw InfiniteGroup("Lattice::index: not full rank");
  u64 r = 1;
  for (u32 i = 0; i < n_; ++i) {
    u64 d = static_cast<u64>(H_[i][i]);
    if (r > (u64(1) << 62) / d) throw TooLarge("Lattice::index");
    r *= d;
  }
  return r;
}

bool Lattice::operator==(const Lattice& o) const {
  if (n_ != o.n_) return false;
  canonicalize();
  o.canonicalize();
  return H_ == o.H_;
}

void Lattice::canonicalize() const {
  if (canonical_) return;
  for (u32 i = n_; i-- > 0;) {
    if (H_[i][i] == 0) continue;
    for (u32 j = i + 1; j < n_; ++j) {
      if (H_[j][j] == 0 || H_[i][j] == 0) continue;
      i64 q = floordiv(H_[i][j], H_[j][j]);
      if (!q) continue;
      for (u32 c = j; c < n_; ++c)
        H_[i][c] = checked_add(H_[i][c], checked_mul(-q, H_[j][c]));
    }
  }
  canonical_ = true;
}

}  // namespace unitring

#pragma once

#include <optional>
#include <vector>

#include "unitring/common.hpp"

namespace unitring {

// Row-vector convention throughout: group elements and relation vectors are
// rows, lattices are row spans, maps act on the right.

using IRow = std::vector<i64>;
using IMat = std::vector<IRow>;

IMat imat_identity(u32 n);
IMat imat_mul(const IMat& A, const IMat& B);
IRow row_mat_mul(const IRow& x, const IMat& A);

// ---------------------------------------------------------------------------
// Smith normal form: S = U * M * V with U, V unimodular, S diagonal,
// s[0] | s[1] | ..., all s[i] >= 0. All arithmetic overflow-checked.

struct SmithForm {
  u32 rows = 0, cols = 0;
  std::vector<i64> s;  // length min(rows, cols)
  IMat U;              // rows x rows
  IMat V;              // cols x cols
  IMat Vinv;           // V^{-1}

  // Solve u * M = b over Z; throws NoSolution if b is not in the row span.
  IRow solve_left(const IRow& b) const;
};

SmithForm smith_normal_form(const IMat& M, u32 cols);

// ---------------------------------------------------------------------------
// A finite abelian group presented as prod Z/d_i with every d_i >= 2.

using AbElement = std::vector<i64>;

class FinAbGroup {
 public:
  FinAbGroup() = default;
  // Invariants may contain 1s (dropped) but not 0s. Order is kept as given;
  // a divisibility chain is not required.
  explicit FinAbGroup(std::vector<i64> invariants);

  u32 rank() const { return static_cast<u32>(d_.size()); }
  const std::vector<i64>& invariants() const { return d_; }
  u64 size() const;  // throws TooLarge above 2^62

  AbElement zero() const { return AbElement(d_.size(), 0); }
  AbElement reduce(AbElement x) const;  // coordinatewise mod d_i
  AbElement add(const AbElement& a, const AbElement& b) const;
  AbElement neg(const AbElement& a) const;
  AbElement sub(const AbElement& a, const AbElement& b) const;
  AbElement smul(i64 c, const AbElement& a) const;
  bool is_zero(const AbElement& a) const;
  u64 order(const AbElement& a) const;
  AbElement random(Rng& rng) const;
  // Generator e_i.
  AbElement gen(u32 i) const;
  // Every element, counting order; throws TooLarge if size() > limit.
  std::vector<AbElement> all_elements(u64 limit = 1u << 20) const;

  bool operator==(const FinAbGroup& o) const { return d_ == o.d_; }

 private:
  std::vector<i64> d_;
};

// ---------------------------------------------------------------------------
// Z^n modulo the row span of a relation matrix. Finite quotients only:
// throws InfiniteGroup when the relations have rank < n.

class AbQuotient {
 public:
  AbQuotient(u32 n, const IMat& relations);

  const FinAbGroup& group() const { return group_; }
  u32 ambient_rank() const { return n_; }
  AbElement coords(const IRow& x) const;  // Z^n -> group
  IRow lift(const AbElement& a) const;    // section group -> Z^n

 private:
  u32 n_ = 0;
  std::vector<i64> s_;  // full SNF diagonal, length n
  IMat V_, Vinv_;
  std::vector<u32> keep_;  // positions with s_i >= 2
  FinAbGroup group_;
};

// Convenience: invariant factors (1s stripped) of Z^n / <rows>.
std::vector<i64> invariant_factors(u32 n, const IMat& relations);

// ---------------------------------------------------------------------------
// Subgroup of a FinAbGroup generated by a list of elements, presented as an
// abstract group with maps in both directions.

class AbSubgroup {
 public:
  AbSubgroup(FinAbGroup ambient, std::vector<AbElement> gens);

  const FinAbGroup& group() const { return sub_.group(); }
  const FinAbGroup& ambient() const { return amb_; }
  u64 size() const { return sub_.group().size(); }
  AbElement to_ambient(const AbElement& s) const;
  // Express an ambient element in subgroup coordinates; throws NotInSubgroup.
  AbElement from_ambient(const AbElement& x) const;
  bool contains(const AbElement& x) const;

 private:
  FinAbGroup amb_;
  std::vector<AbElement> gens_;
  u32 ngens_;
  SmithForm stacked_;  // SNF of [gens; diag(d)], for membership solves
  AbQuotient sub_;     // Z^ngens / kernel
};

// Quotient of a FinAbGroup by the subgroup generated by given elements.

class AbBigQuotient {
 public:
  AbBigQuotient(FinAbGroup ambient, const std::vector<AbElement>& gens);

  const FinAbGroup& group() const { return quo_.group(); }
  AbElement project(const AbElement& x) const;
  AbElement lift(const AbElement& y) const;  // section into the ambient group

 private:
  FinAbGroup amb_;
  AbQuotient quo_;
};

// ---------------------------------------------------------------------------
// Incremental row-span accumulator: a sublattice of Z^n held as a triangular
// row basis (pivot of row i at column i; absent rows are zero). Suited to
// feeding many relation rows in one at a time without materializing a huge
// matrix. If constructed from a diagonal, the lattice always contains
// diag(d) Z^n and all entries stay bounded.

class Lattice {
 public:
  explicit Lattice(u32 n);                 // empty span
  explicit Lattice(std::vector<i64> diag); // span of diag(d), all d_i >= 1

  u32 dim() const { return n_; }
  void add_row(IRow v);
  bool contains(IRow v) const;
  IRow reduce(IRow v) const;  // canonical representative mod the lattice
  bool full_rank() const;
  // Basis in canonical (column-reduced) triangular form; zero rows kept so
  // the matrix is always n x n.
  const IMat& basis() const;
  // |Z^n / L|; throws InfiniteGroup if not full rank, TooLarge over 2^62.
  u64 index() const;

  bool operator==(const Lattice& o) const;

 private:
  u32 n_ = 0;
  mutable IMat H_;
  mutable bool canonical_ = true;
  void canonicalize() const;
};

}  // namespace unitring

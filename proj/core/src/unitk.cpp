#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitring/unitk.hpp"

namespace unitring {

namespace {

const UnitPair& up(const Elem& e) { return std::any_cast<const UnitPair&>(e); }

IRow coord_row(const RingElement& x) { return IRow(x.begin(), x.end()); }

bool row_nonzero(const IRow& r) {
  for (i64 c : r)
    if (c) return true;
  return false;
}

std::string fq_name(u64 q) { return "F_" + std::to_string(q); }

BigInt ab_group_order(const FinAbGroup& A) {
  BigInt n = 1;
  for (i64 d : A.invariants()) n *= d;
  return n;
}

}  // namespace

Elem unit_elem(const FinRing& R, const RingElement& x) {
  auto inv = R.unit_inverse(x);
  if (!inv) throw NotAUnit("unit_elem: element has no two-sided inverse");
  return Elem(UnitPair{R.reduce(x), std::move(*inv)});
}

const UnitPair& unit_cast(const Elem& e) { return std::any_cast<const UnitPair&>(e); }

BBGroup ring_units_group(RingPtr R) {
  BBGroup G;
  G.id = Elem(UnitPair{R->unity(), R->unity()});
  G.mul = [R](const Elem& a, const Elem& b) {
    const UnitPair &x = up(a), &y = up(b);
    return Elem(UnitPair{R->mul(x.v, y.v), R->mul(y.vi, x.vi)});
  };
  G.inv = [](const Elem& a) {
    const UnitPair& x = up(a);
    return Elem(UnitPair{x.vi, x.v});
  };
  G.eq = [](const Elem& a, const Elem& b) { return up(a).v == up(b).v; };
  return G;
}

RingElement unipotent_inverse(const FinRing& R, const RingElement& u) {
  RingElement x = R.sub(u, R.unity());
  RingElement res = R.sub(R.unity(), x);
  RingElement x2 = R.mul(x, x);
  u32 guard = 0;
  while (!R.is_zero(x2)) {
    if (++guard > 64) throw NotNilpotent("unipotent_inverse: u - 1 is not nilpotent");
    res = R.mul(res, R.add(R.unity(), x2));
    x2 = R.mul(x2, x2);
  }
  return res;
}

// ---------------------------------------------------------------------------
// The abelian layer (1 + I)/(1 + I^2) = I/I^2 under a |-> 1 - a, held as a
// subgroup of the additive group R/I^2.

namespace {

struct LayerMaps {
  RingPtr R;
  std::shared_ptr<AbQuotient> amb;  // Z^rank / lattice(I^2)
  std::shared_ptr<AbSubgroup> sub;  // the image of I

  AbElement coords(const RingElement& x) const {  // x in I
    return sub->from_ambient(amb->coords(coord_row(x)));
  }
  RingElement rep(const AbElement& s) const {  // representative in I
    IRow r = amb->lift(sub->to_ambient(s));
    return R->reduce(RingElement(r.begin(), r.end()));
  }
};

LayerMaps make_layer(RingPtr R, const Ideal& I, const Ideal& I2) {
  LayerMaps L;
  L.R = R;
  L.amb = std::make_shared<AbQuotient>(R->rank(), I2.lattice().basis());
  std::vector<AbElement> gens;
  for (const RingElement& g : I.add_generators()) gens.push_back(L.amb->coords(coord_row(g)));
  L.sub = std::make_shared<AbSubgroup>(L.amb->group(), std::move(gens));
  return L;
}

// I, I^2, I^4, ... down to the zero ideal; throws NotNilpotent when the
// chain stalls.
std::vector<Ideal> nilpotent_filtration(const Ideal& I) {
  std::vector<Ideal> filt{I};
  u32 guard = 0;
  while (!filt.back().is_zero_ideal()) {
    if (++guard > 64) throw NotNilpotent("nilpotent_filtration: squaring chain too long");
    Ideal nxt = filt.back().mul(filt.back());
    if (nxt == filt.back()) throw NotNilpotent("nilpotent_filtration: ideal is not nilpotent");
    filt.push_back(std::move(nxt));
  }
  return filt;
}

EffectivePresentation unipotent_impl(RingPtr R, const Ideal& I, std::vector<TraceEntry>* trace) {
  BBGroup U = ring_units_group(R);
  std::vector<Ideal> filt = nilpotent_filtration(I);
  std::vector<ChainLayer> layers;
  std::vector<TraceEntry> local;
  BigInt total = 1;
  for (size_t j = filt.size() - 1; j-- > 0;) {
    auto L = std::make_shared<LayerMaps>(make_layer(R, filt[j], filt[j + 1]));
    EffectivePresentation qp = abelian_presentation(L->sub->group());
    ExactSequence seq;
    seq.N = U;
    seq.G = U;
    seq.H = qp.grp;
    seq.incl.forward = [](const Elem& g) { return g; };
    seq.incl.preimage = [](const Elem& g) { return g; };
    RingPtr Rc = R;
    seq.proj.forward = [L, Rc](const Elem& g) {
      return Elem(L->coords(Rc->sub(Rc->unity(), up(g).v)));
    };
    seq.proj.preimage = [L, Rc](const Elem& a) {
      RingElement v = Rc->sub(Rc->unity(), L->rep(std::any_cast<const AbElement&>(a)));
      RingElement vi = unipotent_inverse(*Rc, v);
      return Elem(UnitPair{std::move(v), std::move(vi)});
    };
    BigInt layer_order = ab_group_order(L->sub->group());
    total *= layer_order;
    local.push_back({"unipotent layer " + std::to_string(j), qp.pres.ngens,
                     qp.pres.relators.size(), std::move(layer_order)});
    layers.push_back({std::move(seq), std::move(qp)});
  }
  if (total != I.size()) throw UnitringError("unipotent_presentation: layer orders do not multiply up");
  if (trace) {
    std::reverse(local.begin(), local.end());  // report top layer first
    trace->insert(trace->end(), local.begin(), local.end());
  }
  return chain_extensions(U, layers);
}

}  // namespace

EffectivePresentation unipotent_layer(RingPtr R, const Ideal& I) {
  nilpotent_filtration(I);  // eager nilpotency check
  auto L = std::make_shared<LayerMaps>(make_layer(R, I, I.mul(I)));
  auto I2 = std::make_shared<Ideal>(I.mul(I));
  EffectivePresentation qp = abelian_presentation(L->sub->group());
  BBGroup G = ring_units_group(R);
  RingPtr Rc = R;
  G.eq = [Rc, I2](const Elem& a, const Elem& b) {
    return I2->contains(Rc->sub(Rc->mul(up(a).v, up(b).vi), Rc->unity()));
  };
  return transport(
      qp, G,
      [L, Rc](const Elem& a) {
        RingElement v = Rc->sub(Rc->unity(), L->rep(std::any_cast<const AbElement&>(a)));
        RingElement vi = unipotent_inverse(*Rc, v);
        return Elem(UnitPair{std::move(v), std::move(vi)});
      },
      [L, Rc](const Elem& g) { return Elem(L->coords(Rc->sub(Rc->unity(), up(g).v))); });
}

EffectivePresentation unipotent_presentation(RingPtr R, const Ideal& I) {
  return unipotent_impl(R, I, nullptr);
}

// ---------------------------------------------------------------------------
// Semisimple unit groups through the Wedderburn decomposition.

namespace {

struct SsData {
  EffectivePresentation pres;
  std::vector<TraceEntry> trace;
  BigInt order = 1;
};

SsData semisimple_units_impl(RingPtr R, u64 seed) {
  SsData out;
  BBGroup U = ring_units_group(R);
  if (R->rank() == 0) {
    out.pres = trivial_presentation(U);
    return out;
  }
  std::optional<AlgebraBridge> brv;
  try {
    brv.emplace(algebra_from_pring(R));
  } catch (const NotPAnnihilated&) {
    throw NotSemisimple("semisimple_units: ring is not an algebra over a prime field");
  }
  auto br = std::make_shared<AlgebraBridge>(std::move(*brv));
  WedderburnData W = wedderburn(br->A, seed);
  std::vector<ProductFactor> factors;
  for (const WedderburnComponent& comp : W.components) {
    auto c = std::make_shared<WedderburnComponent>(comp);
    ProductFactor f;
    f.pres = gl_n_presentation(c->k, c->n);
    f.embed = [c, br](const Elem& Me) {
      const FFMatrix& M = std::any_cast<const FFMatrix&>(Me);
      auto lift = [&](const FFMatrix& X) {
        RingElement a = br->A.add(c->from_matrix(X), br->A.sub(br->A.unity(), c->idem));
        return br->from_alg(a);
      };
      return Elem(UnitPair{lift(M), lift(ff_mat_inv(*c->k, M))});
    };
    f.project = [c, br](const Elem& u) { return Elem(c->to_matrix(br->to_alg(up(u).v))); };
    out.trace.push_back({"GL_" + std::to_string(c->n) + "(" + fq_name(c->k->q()) + ")",
                         f.pres.pres.ngens, f.pres.pres.relators.size(),
                         gl_order(c->k->q(), c->n)});
    out.order *= gl_order(c->k->q(), c->n);
    factors.push_back(std::move(f));
  }
  out.pres = internal_product(U, std::move(factors));
  return out;
}

}  // namespace

EffectivePresentation semisimple_units(RingPtr R, u64 seed) {
  return semisimple_units_impl(R, seed).pres;
}

// ---------------------------------------------------------------------------
// Units of a ring of prime-power order: 1 -> 1+J -> R^x -> (R/J)^x -> 1.

UnitGroupResult pring_units(RingPtr R, const Ideal& radical, u64 seed) {
  UnitGroupResult res;
  res.ring = R;
  res.order = 1;
  BBGroup U = ring_units_group(R);
  if (R->rank() == 0) {
    res.pres = trivial_presentation(U);
    return res;
  }
  if (factor(R->add_exponent()).size() != 1)
    throw NotPRing("pring_units: additive exponent is not a prime power");

  std::vector<TraceEntry> unitrace;
  EffectivePresentation presN = unipotent_impl(R, radical, &unitrace);
  QuotientRing Q = quotient_ring(R, radical);
  SsData ss = semisimple_units_impl(Q.ring, seed);

  ExactSequence seq;
  seq.N = U;
  seq.G = U;
  seq.H = ring_units_group(Q.ring);
  seq.incl.forward = [](const Elem& g) { return g; };
  seq.incl.preimage = [](const Elem& g) { return g; };
  auto Qp = std::make_shared<QuotientRing>(Q);
  seq.proj.forward = [Qp](const Elem& g) {
    const UnitPair& x = up(g);
    return Elem(UnitPair{Qp->project(x.v), Qp->project(x.vi)});
  };
  RingPtr Rc = R;
  seq.proj.preimage = [Qp, Rc](const Elem& h) {
    const UnitPair& x = up(h);
    RingElement u0 = Qp->lift(x.v), w = Qp->lift(x.vi);
    RingElement ti = unipotent_inverse(*Rc, Rc->mul(u0, w));  // (u0 w)^-1, u0 w in 1+J
    return Elem(UnitPair{std::move(u0), Rc->mul(w, ti)});
  };
  res.pres = extend_presentation(seq, presN, ss.pres);
  res.order = radical.size() * ss.order;
  res.trace = std::move(ss.trace);
  res.trace.insert(res.trace.end(), unitrace.begin(), unitrace.end());
  return res;
}

UnitGroupResult pring_units(RingPtr R, u64 seed) {
  if (R->rank() == 0) return pring_units(R, Ideal::span(R, {}), seed);
  return pring_units(R, jacobson_radical(R), seed);
}

// ---------------------------------------------------------------------------
// Units of an arbitrary finite ring, prime by prime.

namespace {

// CRT idempotent of the p-part: e = ((m/p^a)^-1 mod p^a) * (m/p^a) * 1.
RingElement crt_idempotent(const FinRing& R, u64 p) {
  u64 m = R.add_exponent();
  u64 pa = 1;
  while (m % (pa * p) == 0) pa *= p;
  u64 u = m / pa;
  if (u == 1) return R.unity();
  u64 t = inverse_mod(u % pa, pa);
  return R.smul(static_cast<i64>(mulmod(t, u, m)), R.unity());
}

}  // namespace

UnitGroupResult unit_group(RingPtr R, u64 seed) {
  UnitGroupResult res;
  res.ring = R;
  res.order = 1;
  BBGroup U = ring_units_group(R);
  std::vector<PComponent> comps = p_decomposition(R);
  if (comps.empty()) {
    res.pres = trivial_presentation(U);
    return res;
  }
  std::vector<ProductFactor> factors;
  for (const PComponent& comp : comps) {
    auto pc = std::make_shared<PComponent>(comp);
    UnitGroupResult part = pring_units(pc->ring, seed);
    std::string tag = comps.size() > 1 ? "p=" + std::to_string(pc->p) + ": " : "";
    for (TraceEntry t : part.trace) {
      t.label = tag + t.label;
      res.trace.push_back(std::move(t));
    }
    res.order *= part.order;
    RingElement e = crt_idempotent(*R, pc->p);
    RingElement ce = R->sub(R->unity(), e);
    ProductFactor f;
    f.pres = std::move(part.pres);
    RingPtr Rc = R;
    f.embed = [pc, Rc, e, ce](const Elem& a) {
      const UnitPair& x = up(a);
      auto lift = [&](const RingElement& y) {
        return Rc->add(Rc->mul(pc->map.preimage(y), e), ce);
      };
      return Elem(UnitPair{lift(x.v), lift(x.vi)});
    };
    f.project = [pc](const Elem& a) {
      const UnitPair& x = up(a);
      return Elem(UnitPair{pc->map.forward(x.v), pc->map.forward(x.vi)});
    };
    factors.push_back(std::move(f));
  }
  res.pres = internal_product(U, std::move(factors));
  return res;
}

BigInt unit_group_order(RingPtr R, u64 seed) {
  BigInt total = 1;
  for (const PComponent& pc : p_decomposition(R)) {
    Ideal J = jacobson_radical(pc.ring);
    total *= J.size();
    QuotientRing Q = quotient_ring(pc.ring, J);
    if (Q.ring->rank() == 0) continue;
    AlgebraBridge br = algebra_from_pring(Q.ring);
    for (const WedderburnComponent& c : wedderburn(br.A, seed).components)
      total *= gl_order(c.k->q(), c.n);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Abelian quotients.

namespace {

// Z^ngens modulo the exponent rows of the relators; the abelianization of
// the presented group. group_order must be a multiple of every element
// order in the quotient, so the lattice contains group_order * e_j for
// every j. Seeding those rows lets the whole Hermite reduction run with
// entries below group_order, which keeps the arithmetic bounded where a
// plain integer reduction at this many columns blows past 64 bits.
AbQuotient relator_ab_quotient(const FpGroup& P, const BigInt& group_order) {
  const u32 n = P.ngens;
  if (group_order < 1) throw UnitringError("relator_ab_quotient: order must be positive");
  const BigInt& E = group_order;
  auto norm = [&E](BigInt x) {
    x %= E;
    if (x < 0) x += E;
    return x;
  };
  std::vector<std::vector<BigInt>> H(n);
  for (u32 j = 0; j < n; ++j) {
    H[j].assign(n, 0);
    H[j][j] = E;
  }
  auto combine = [&](std::vector<BigInt> v) {
    for (u32 j = 0; j < n; ++j) {
      v[j] = norm(std::move(v[j]));
      if (v[j] == 0) continue;
      const BigInt a = H[j][j], b = v[j];
      if (b % a == 0) {
        BigInt q = b / a;
        for (u32 t = j; t < n; ++t)
          if (H[j][t] != 0) v[t] = norm(v[t] - q * H[j][t]);
      } else {
        BigInt x0 = 1, y0 = 0, x1 = 0, y1 = 1, aa = a, bb = b;
        while (bb != 0) {
          BigInt q = aa / bb;
          aa -= q * bb;
          std::swap(aa, bb);
          x0 -= q * x1;
          std::swap(x0, x1);
          y0 -= q * y1;
          std::swap(y0, y1);
        }
        if (aa < 0) {
          aa = -aa;
          x0 = -x0;
          y0 = -y0;
        }
        BigInt qa = a / aa, qb = b / aa;
        std::vector<BigInt> nr(n, 0);
        nr[j] = aa;
        for (u32 t = j + 1; t < n; ++t) {
          nr[t] = norm(x0 * H[j][t] + y0 * v[t]);
          v[t] = norm(qa * v[t] - qb * H[j][t]);
        }
        v[j] = 0;
        H[j] = std::move(nr);
      }
    }
  };
  for (const Word& r : P.relators) {
    IRow row = word_exponents(r, n);
    if (!row_nonzero(row)) continue;
    std::vector<BigInt> v(n);
    for (u32 t = 0; t < n; ++t) v[t] = row[t];
    combine(std::move(v));
  }
  // Per-row left to right sweeps, deepest rows first, so reducing one entry
  // only disturbs columns the sweep has not reached yet.
  for (u32 i = n; i-- > 0;) {
    for (u32 j = i + 1; j < n; ++j) {
      if (H[i][j] == 0) continue;
      BigInt q = H[i][j] / H[j][j];
      if (H[i][j] % H[j][j] < 0) q -= 1;
      if (q == 0) continue;
      for (u32 t = j; t < n; ++t)
        if (H[j][t] != 0) H[i][t] -= q * H[j][t];
    }
  }
  const BigInt hi = std::numeric_limits<i64>::max();
  IMat basis;
  for (u32 j = 0; j < n; ++j) {
    IRow r(n, 0);
    for (u32 t = j; t < n; ++t) {
      if (H[j][t] > hi || -H[j][t] > hi) throw Overflow("relator lattice entry");
      r[t] = static_cast<i64>(H[j][t]);
    }
    basis.push_back(std::move(r));
  }
  return AbQuotient(n, basis);
}

Word row_to_word(const IRow& r) {
  Word w;
  for (u32 i = 0; i < r.size(); ++i)
    if (r[i]) w = word_mul(w, word_gen(i + 1, r[i]));
  return w;
}

}  // namespace

AbelianQuotientResult unit_abelianization(RingPtr R, u64 seed) {
  auto ug = std::make_shared<UnitGroupResult>(unit_group(R, seed));
  u32 n = ug->pres.pres.ngens;
  auto quo = std::make_shared<AbQuotient>(relator_ab_quotient(ug->pres.pres, ug->order));
  AbelianQuotientResult out;
  out.group = quo->group();
  RingPtr Rc = R;
  out.forward = [ug, quo, Rc, n](const RingElement& x) {
    Word w = ug->pres.dlog(unit_elem(*Rc, x));
    return quo->coords(word_exponents(w, n));
  };
  out.preimage = [ug, quo](const AbElement& a) {
    return up(ug->pres.exp(row_to_word(quo->lift(a)))).v;
  };
  out.kernel = "commutator subgroup of the unit group";
  return out;
}

// ---------------------------------------------------------------------------
// K_1 via stabilization into 3x3 matrix units, one prime at a time.

namespace {

// Mat_3(J) as an ideal of Mat_3(R), from the coordinate lattice of J.
Ideal matrix_radical(const MatrixRing& S, const Ideal& J) {
  u32 rank = J.ring()->rank();
  Lattice L(S.ring->add_orders());
  for (const IRow& jr : J.lattice().basis()) {
    if (!row_nonzero(jr)) continue;
    for (u32 cell = 0; cell < 9; ++cell) {
      IRow v(S.ring->rank(), 0);
      std::copy(jr.begin(), jr.end(), v.begin() + cell * rank);
      L.add_row(std::move(v));
    }
  }
  return Ideal(S.ring, std::move(L));
}

struct PK1 {
  std::shared_ptr<PComponent> pc;
  std::shared_ptr<UnitGroupResult> units;  // units of the p-component
  std::shared_ptr<AbQuotient> ab;          // its abelianized presentation
  std::shared_ptr<AbBigQuotient> quo;      // K_1 = ab / ker(stabilization)
  std::vector<i64> ker_invariants;         // structure of that kernel
  RingElement e, ce;                       // CRT idempotent data in R
};

std::vector<i64> canonical_invariants(const std::vector<i64>& diag) {
  u32 N = static_cast<u32>(diag.size());
  IMat rel(N, IRow(N, 0));
  for (u32 i = 0; i < N; ++i) rel[i][i] = diag[i];
  return AbQuotient(N, rel).group().invariants();
}

PK1 component_k1(RingPtr R, const PComponent& comp, u64 seed) {
  PK1 out;
  out.pc = std::make_shared<PComponent>(comp);
  RingPtr Rp = comp.ring;
  Ideal J = jacobson_radical(Rp);
  out.units = std::make_shared<UnitGroupResult>(pring_units(Rp, J, seed));
  out.ab = std::make_shared<AbQuotient>(relator_ab_quotient(out.units->pres.pres, out.units->order));

  MatrixRing S = matrix_ring(Rp, 3);
  UnitGroupResult sunits = pring_units(S.ring, matrix_radical(S, J), seed);
  AbQuotient sab = relator_ab_quotient(sunits.pres.pres, sunits.order);

  // The stabilization a |-> diag(a, 1, 1) on the invariant generators of
  // ab(R_p^x), pushed to ab coordinates on the S side.
  const FinAbGroup& AR = out.ab->group();
  const FinAbGroup& AS = sab.group();
  u32 rR = AR.rank(), rS = AS.rank();
  IMat T;
  for (u32 t = 0; t < rR; ++t) {
    Word w = row_to_word(out.ab->lift(AR.gen(t)));
    UnitPair u = unit_cast(out.units->pres.exp(w));
    std::vector<RingElement> entries(9, Rp->zero());
    entries[0] = u.v;
    entries[4] = Rp->unity();
    entries[8] = Rp->unity();
    std::vector<RingElement> ientries(9, Rp->zero());
    ientries[0] = u.vi;
    ientries[4] = Rp->unity();
    ientries[8] = Rp->unity();
    UnitPair D{S.embed(entries), S.embed(ientries)};
    Word ws = sunits.pres.dlog(Elem(std::move(D)));
    AbElement v = sab.coords(word_exponents(ws, sunits.pres.pres.ngens));
    T.push_back(std::move(v));
  }
  for (u32 i = 0; i < rS; ++i) {
    IRow row(rS, 0);
    row[i] = AS.invariants()[i];
    T.push_back(std::move(row));
  }
  SmithForm sf = smith_normal_form(T, rS);
  std::vector<AbElement> kergens;
  for (u32 i = 0; i < rR + rS; ++i) {
    bool zero_row = i >= sf.s.size() || sf.s[i] == 0;
    if (!zero_row) continue;
    AbElement x(sf.U[i].begin(), sf.U[i].begin() + rR);
    x = AR.reduce(std::move(x));
    if (!AR.is_zero(x)) kergens.push_back(std::move(x));
  }
  out.quo = std::make_shared<AbBigQuotient>(AR, kergens);
  out.ker_invariants = AbSubgroup(AR, kergens).group().invariants();
  out.e = crt_idempotent(*R, comp.p);
  out.ce = R->sub(R->unity(), out.e);
  return out;
}

}  // namespace

AbelianQuotientResult k1(RingPtr R, u64 seed) {
  auto parts = std::make_shared<std::vector<PK1>>();
  for (const PComponent& comp : p_decomposition(R)) parts->push_back(component_k1(R, comp, seed));

  std::vector<i64> diag;
  auto offsets = std::make_shared<std::vector<u32>>();
  for (const PK1& pk : *parts) {
    offsets->push_back(static_cast<u32>(diag.size()));
    for (i64 d : pk.quo->group().invariants()) diag.push_back(d);
  }
  u32 N = static_cast<u32>(diag.size());
  IMat rel(N, IRow(N, 0));
  for (u32 i = 0; i < N; ++i) rel[i][i] = diag[i];
  auto quo = std::make_shared<AbQuotient>(N, rel);

  AbelianQuotientResult out;
  out.group = quo->group();
  RingPtr Rc = R;
  out.forward = [parts, quo, Rc, N](const RingElement& x) {
    unit_elem(*Rc, x);  // reject non-units up front
    IRow cat;
    cat.reserve(N);
    for (const PK1& pk : *parts) {
      Word w = pk.units->pres.dlog(unit_elem(*pk.pc->ring, pk.pc->map.forward(x)));
      AbElement a = pk.quo->project(pk.ab->coords(word_exponents(w, pk.units->pres.pres.ngens)));
      cat.insert(cat.end(), a.begin(), a.end());
    }
    return quo->coords(cat);
  };
  out.preimage = [parts, quo, offsets, Rc](const AbElement& y) {
    IRow full = quo->lift(y);
    RingElement acc = Rc->unity();
    for (size_t i = 0; i < parts->size(); ++i) {
      const PK1& pk = (*parts)[i];
      u32 off = (*offsets)[i], r = pk.quo->group().rank();
      AbElement seg(full.begin() + off, full.begin() + off + r);
      IRow lifted = pk.ab->lift(pk.quo->lift(pk.quo->group().reduce(std::move(seg))));
      UnitPair u = unit_cast(pk.units->pres.exp(row_to_word(lifted)));
      RingElement emb = Rc->add(Rc->mul(pk.pc->map.preimage(u.v), pk.e), pk.ce);
      acc = Rc->mul(acc, emb);
    }
    return acc;
  };
  out.kernel = "kernel of the stabilization into 3x3 matrix units";
  std::vector<i64> kerinv;
  for (const PK1& pk : *parts)
    kerinv.insert(kerinv.end(), pk.ker_invariants.begin(), pk.ker_invariants.end());
  out.kernel_invariants = canonical_invariants(kerinv);
  return out;
}

}  // namespace unitring

#include "unitring/fpgrp.hpp"

#include <algorithm>
#include <memory>

namespace unitring {

Word word_one() { return {}; }

Word word_gen(u32 i, i64 e) {
  Word w;
  if (e != 0) w.syl.push_back({i, e});
  return w;
}

namespace {

void push_syl(Word& w, u32 g, i64 e) {
  if (e == 0) return;
  if (!w.syl.empty() && w.syl.back().first == g) {
    w.syl.back().second = checked_add(w.syl.back().second, e);
    if (w.syl.back().second == 0) w.syl.pop_back();
  } else {
    w.syl.push_back({g, e});
  }
}

}  // namespace

Word word_mul(const Word& a, const Word& b) {
  Word r = a;
  for (const auto& [g, e] : b.syl) push_syl(r, g, e);
  return r;
}

Word word_inv(const Word& a) {
  Word r;
  r.syl.reserve(a.syl.size());
  for (auto it = a.syl.rbegin(); it != a.syl.rend(); ++it)
    r.syl.push_back({it->first, -it->second});
  return r;
}

Word word_pow(const Word& a, i64 e) {
  if (e == 0 || a.syl.empty()) return word_one();
  if (a.syl.size() == 1) return word_gen(a.syl[0].first, checked_mul(a.syl[0].second, e));
  Word base = e < 0 ? word_inv(a) : a;
  u64 n = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
  Word r = word_one();
  while (n) {
    if (n & 1) r = word_mul(r, base);
    base = word_mul(base, base);
    n >>= 1;
  }
  return r;
}

u64 word_length(const Word& a) {
  u64 n = 0;
  for (const auto& [g, e] : a.syl) n += static_cast<u64>(e < 0 ? -e : e);
  return n;
}

Word word_shift(const Word& a, u32 offset) {
  Word r = a;
  for (auto& [g, e] : r.syl) g += offset;
  return r;
}

IRow word_exponents(const Word& w, u32 ngens) {
  IRow row(ngens, 0);
  for (const auto& [g, e] : w.syl) {
    if (g < 1 || g > ngens) throw UnitringError("word_exponents: generator out of range");
    row[g - 1] = checked_add(row[g - 1], e);
  }
  return row;
}

std::vector<i64> fp_abelian_invariants(const FpGroup& G) {
  IMat rows;
  rows.reserve(G.relators.size());
  for (const Word& r : G.relators) rows.push_back(word_exponents(r, G.ngens));
  try {
    return invariant_factors(G.ngens, rows);
  } catch (const InfiniteGroup&) {
    throw InfiniteAbelianization("fp_abelian_invariants");
  }
}

// ---------------------------------------------------------------------------
// HLT coset enumeration with coincidence handling.

namespace {

constexpr u64 UNDEF = ~u64(0);

struct Enumerator {
  u32 ncols;
  u64 cap;
  std::vector<std::vector<u32>> rels;  // relators as column sequences
  std::vector<u64> tab;
  std::vector<u64> uf;
  u64 ndef = 0, nlive = 0;

  static u32 invcol(u32 g) { return g ^ 1; }
  u64 get(u64 c, u32 g) const { return tab[c * ncols + g]; }
  void set(u64 c, u32 g, u64 d) { tab[c * ncols + g] = d; }

  u64 find(u64 c) {
    while (uf[c] != c) {
      uf[c] = uf[uf[c]];
      c = uf[c];
    }
    return c;
  }

  bool define(u64 c, u32 g) {
    if (ndef >= cap) return false;
    u64 n = ndef++;
    tab.resize(ndef * ncols, UNDEF);
    uf.push_back(n);
    set(c, g, n);
    set(n, invcol(g), c);
    ++nlive;
    return true;
  }

  void coincidence(u64 a, u64 b) {
    std::vector<u64> dead;
    auto join = [&](u64 x, u64 y) {
      x = find(x);
      y = find(y);
      if (x == y) return;
      if (x > y) std::swap(x, y);
      uf[y] = x;
      --nlive;
      dead.push_back(y);
    };
    join(a, b);
    for (size_t qi = 0; qi < dead.size(); ++qi) {
      u64 y = dead[qi];
      for (u32 g = 0; g < ncols; ++g) {
        u64 d = get(y, g);
        if (d == UNDEF) continue;
        set(y, g, UNDEF);
        if (get(d, invcol(g)) == y) set(d, invcol(g), UNDEF);
        u64 u = find(y), v = find(d);
        u64 ug = get(u, g);
        if (ug != UNDEF) {
          join(ug, v);
        } else {
          u64 vg = get(v, invcol(g));
          if (vg != UNDEF) {
            join(vg, u);
          } else {
            set(u, g, v);
            set(v, invcol(g), u);
          }
        }
      }
    }
  }

  // Scan relator w at coset c, defining cosets as needed. False on cap.
  bool scan_and_fill(u64 c, const std::vector<u32>& w) {
    if (w.empty()) return true;
    u64 f = c, b = c;
    size_t i = 0, r = w.size();  // unscanned range is [i, r)
    while (true) {
      while (i < r && get(f, w[i]) != UNDEF) f = find(get(f, w[i++]));
      if (i == r) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (r > i && get(b, invcol(w[r - 1])) != UNDEF) b = find(get(b, invcol(w[--r])));
      if (r == i) {
        coincidence(f, b);
        return true;
      }
      if (r == i + 1) {
        set(f, w[i], b);
        set(b, invcol(w[i]), f);
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }
};

std::vector<u32> relator_columns(const Word& w) {
  std::vector<u32> out;
  for (const auto& [g, e] : w.syl) {
    u32 col = 2 * (g - 1) + (e < 0 ? 1 : 0);
    u64 n = static_cast<u64>(e < 0 ? -e : e);
    for (u64 i = 0; i < n; ++i) out.push_back(col);
  }
  return out;
}

}  // namespace

u64 CosetTable::apply_word(u64 c, const Word& w) const {
  for (const auto& [g, e] : w.syl) {
    u32 col = 2 * (g - 1) + (e < 0 ? 1 : 0);
    u64 n = static_cast<u64>(e < 0 ? -e : e);
    for (u64 i = 0; i < n; ++i) c = apply(c, col);
  }
  return c;
}

Word CosetTable::rep(u64 c) const {
  std::vector<std::pair<u32, i64>> path;
  while (c != 0) {
    auto [p, col] = def[c];
    path.push_back({col / 2 + 1, (col % 2) ? i64(-1) : i64(1)});
    c = p;
  }
  Word w;
  for (auto it = path.rbegin(); it != path.rend(); ++it) push_syl(w, it->first, it->second);
  return w;
}

std::optional<CosetTable> coset_enumeration(const FpGroup& G, u64 max_cosets) {
  Enumerator en;
  en.ncols = 2 * G.ngens;
  en.cap = max_cosets;
  for (const Word& r : G.relators) {
    if (!r.syl.empty()) en.rels.push_back(relator_columns(r));
    for (const auto& [g, e] : r.syl) {
      (void)e;
      if (g < 1 || g > G.ngens) throw UnitringError("coset_enumeration: bad generator");
    }
  }
  en.ndef = 1;
  en.nlive = 1;
  en.uf.assign(1, 0);
  en.tab.assign(en.ncols, UNDEF);

  for (u64 alpha = 0; alpha < en.ndef; ++alpha) {
    if (en.find(alpha) != alpha) continue;
    for (const auto& rel : en.rels) {
      if (!en.scan_and_fill(alpha, rel)) return std::nullopt;
      if (en.find(alpha) != alpha) break;
    }
    if (en.find(alpha) != alpha) continue;
    for (u32 g = 0; g < en.ncols; ++g)
      if (en.get(alpha, g) == UNDEF && !en.define(alpha, g)) return std::nullopt;
  }

  // Compact live cosets, renumbering in definition order.
  std::vector<u64> idx(en.ndef, UNDEF);
  u64 size = 0;
  for (u64 c = 0; c < en.ndef; ++c)
    if (en.find(c) == c) idx[c] = size++;
  CosetTable T;
  T.ngens = G.ngens;
  T.size = size;
  T.act.assign(size * en.ncols, UNDEF);
  for (u64 c = 0; c < en.ndef; ++c) {
    if (en.find(c) != c) continue;
    for (u32 g = 0; g < en.ncols; ++g) {
      u64 d = en.get(c, g);
      if (d == UNDEF) throw UnitringError("coset_enumeration: incomplete table");
      T.act[idx[c] * en.ncols + g] = idx[en.find(d)];
    }
  }
  // Rebuild definition edges over the compacted table.
  T.def.assign(size, {0, 0});
  std::vector<bool> seen(size, false);
  std::vector<u64> bfs{0};
  seen[0] = true;
  for (size_t qi = 0; qi < bfs.size(); ++qi) {
    u64 c = bfs[qi];
    for (u32 g = 0; g < en.ncols; ++g) {
      u64 d = T.act[c * en.ncols + g];
      if (!seen[d]) {
        seen[d] = true;
        T.def[d] = {c, g};
        bfs.push_back(d);
      }
    }
  }
  if (bfs.size() != size) throw UnitringError("coset_enumeration: action not transitive");
  // Verification pass: columns are permutations and every relator closes.
  for (u32 g = 0; g < en.ncols; ++g) {
    std::vector<bool> hit(size, false);
    for (u64 c = 0; c < size; ++c) {
      u64 d = T.act[c * en.ncols + g];
      if (hit[d]) throw UnitringError("coset_enumeration: column not a permutation");
      hit[d] = true;
      if (T.act[d * en.ncols + Enumerator::invcol(g)] != c)
        throw UnitringError("coset_enumeration: inverse link broken");
    }
  }
  for (const Word& r : G.relators)
    for (u64 c = 0; c < size; ++c)
      if (T.apply_word(c, r) != c) throw UnitringError("coset_enumeration: relator open");
  return T;
}

std::optional<u64> todd_coxeter_order(const FpGroup& G, u64 max_cosets) {
  auto t = coset_enumeration(G, max_cosets);
  if (!t) return std::nullopt;
  return t->size;
}

// ---------------------------------------------------------------------------

Elem bbg_pow(const BBGroup& G, const Elem& x, i64 e) {
  Elem base = e < 0 ? G.inv(x) : x;
  u64 n = e < 0 ? static_cast<u64>(-e) : static_cast<u64>(e);
  Elem r = G.id;
  while (n) {
    if (n & 1) r = G.mul(r, base);
    if (n >>= 1) base = G.mul(base, base);
  }
  return r;
}

Elem bbg_eval(const BBGroup& G, const Word& w, const std::vector<Elem>& gens) {
  Elem r = G.id;
  for (const auto& [g, e] : w.syl) {
    if (g < 1 || g > gens.size()) throw UnitringError("bbg_eval: generator out of range");
    r = G.mul(r, bbg_pow(G, gens[g - 1], e));
  }
  return r;
}

EffectivePresentation trivial_presentation(BBGroup G) {
  EffectivePresentation P;
  P.grp = G;
  P.pres = FpGroup{0, {}};
  P.dlog = [G](const Elem& g) {
    if (!G.eq(g, G.id)) throw NotInSubgroup("trivial_presentation: dlog of nonidentity");
    return word_one();
  };
  return P;
}

EffectivePresentation abelian_presentation(const FinAbGroup& A) {
  BBGroup G;
  G.id = A.zero();
  G.mul = [A](const Elem& a, const Elem& b) {
    return Elem(A.add(std::any_cast<const AbElement&>(a), std::any_cast<const AbElement&>(b)));
  };
  G.inv = [A](const Elem& a) { return Elem(A.neg(std::any_cast<const AbElement&>(a))); };
  G.eq = [](const Elem& a, const Elem& b) {
    return std::any_cast<const AbElement&>(a) == std::any_cast<const AbElement&>(b);
  };
  EffectivePresentation P;
  P.grp = G;
  u32 n = A.rank();
  P.pres.ngens = n;
  for (u32 i = 0; i < n; ++i) P.pres.relators.push_back(word_gen(i + 1, A.invariants()[i]));
  for (u32 i = 0; i < n; ++i)
    for (u32 j = i + 1; j < n; ++j) {
      Word c = word_mul(word_mul(word_gen(i + 1), word_gen(j + 1)),
                        word_mul(word_gen(i + 1, -1), word_gen(j + 1, -1)));
      P.pres.relators.push_back(c);
    }
  for (u32 i = 0; i < n; ++i) P.gens.push_back(Elem(A.gen(i)));
  P.dlog = [A](const Elem& g) {
    const auto& a = std::any_cast<const AbElement&>(g);
    Word w;
    for (u32 i = 0; i < a.size(); ++i)
      if (a[i]) w = word_mul(w, word_gen(i + 1, a[i]));
    return w;
  };
  return P;
}

EffectivePresentation transport(const EffectivePresentation& P, BBGroup G2,
                                std::function<Elem(const Elem&)> fwd,
                                std::function<Elem(const Elem&)> bwd) {
  EffectivePresentation Q;
  Q.grp = std::move(G2);
  Q.pres = P.pres;
  Q.gens.reserve(P.gens.size());
  for (const Elem& g : P.gens) Q.gens.push_back(fwd(g));
  auto dlog = P.dlog;
  Q.dlog = [dlog, bwd](const Elem& g) { return dlog(bwd(g)); };
  return Q;
}

EffectivePresentation extend_presentation(const ExactSequence& seq,
                                          const EffectivePresentation& presN,
                                          const EffectivePresentation& presH) {
  struct State {
    ExactSequence seq;
    EffectivePresentation N, H;
    std::vector<Elem> gX;
    u32 nX, nY;
  };
  auto st = std::make_shared<State>();
  st->seq = seq;
  st->N = presN;
  st->H = presH;
  st->nX = presH.pres.ngens;
  st->nY = presN.pres.ngens;
  for (const Elem& hx : presH.gens) st->gX.push_back(seq.proj.preimage(hx));

  EffectivePresentation P;
  P.grp = seq.G;
  P.pres.ngens = st->nX + st->nY;
  P.gens = st->gX;
  for (const Elem& ny : presN.gens) P.gens.push_back(seq.incl.forward(ny));

  // Lifted relators of H: r evaluated at the chosen preimages lands in N.
  for (const Word& r : presH.pres.relators) {
    Elem val = bbg_eval(seq.G, r, st->gX);
    Elem n = seq.incl.preimage(val);
    Word wn = presN.dlog(n);
    P.pres.relators.push_back(word_mul(word_inv(word_shift(wn, st->nX)), r));
  }
  // Relators of N, shifted.
  for (const Word& u : presN.pres.relators)
    P.pres.relators.push_back(word_shift(u, st->nX));
  // Conjugation action of the H-generators on the N-generators.
  for (u32 x = 1; x <= st->nX; ++x)
    for (u32 y = 1; y <= st->nY; ++y) {
      Elem gx = st->gX[x - 1];
      Elem gy = P.gens[st->nX + y - 1];
      Elem c = seq.G.mul(seq.G.mul(gx, gy), seq.G.inv(gx));
      Word w = presN.dlog(seq.incl.preimage(c));
      Word conj = word_mul(word_mul(word_gen(x), word_gen(st->nX + y)), word_gen(x, -1));
      P.pres.relators.push_back(word_mul(word_inv(word_shift(w, st->nX)), conj));
    }

  if (P.pres.ngens > presH.pres.ngens + presN.pres.ngens)
    throw UnitringError("extend_presentation: generator bound violated");
  if (P.pres.relators.size() > presH.pres.relators.size() + presN.pres.relators.size() +
                                   static_cast<size_t>(st->nX) * st->nY)
    throw UnitringError("extend_presentation: relator bound violated");

  P.dlog = [st](const Elem& g) {
    Word wH = st->H.dlog(st->seq.proj.forward(g));
    Elem gp = bbg_eval(st->seq.G, wH, st->gX);
    Elem n = st->seq.incl.preimage(st->seq.G.mul(gp, st->seq.G.inv(g)));
    Word wN = st->N.dlog(n);
    return word_mul(word_inv(word_shift(wN, st->nX)), wH);
  };
  return P;
}

void check_presentation(const EffectivePresentation& P, u32 samples, Rng& rng,
                        u64 word_length_cap) {
  for (const Word& r : P.pres.relators)
    if (!P.grp.eq(P.exp(r), P.grp.id)) throw NotExact("check_presentation: relator alive");
  if (!P.grp.eq(P.exp(P.dlog(P.grp.id)), P.grp.id))
    throw NotExact("check_presentation: dlog(id) wrong");
  if (P.pres.ngens == 0) return;
  for (u32 s = 0; s < samples; ++s) {
    Word w;
    u64 len = rng.below(word_length_cap) + 1;
    for (u64 i = 0; i < len; ++i) {
      u32 g = static_cast<u32>(rng.below(P.pres.ngens)) + 1;
      i64 e = static_cast<i64>(rng.below(5)) - 2;
      if (e) w = word_mul(w, word_gen(g, e));
    }
    Elem g = P.exp(w);
    Word w2 = P.dlog(g);
    if (!P.grp.eq(P.exp(w2), g)) throw NotExact("check_presentation: dlog/exp mismatch");
  }
}

EffectivePresentation internal_product(BBGroup G, std::vector<ProductFactor> factors) {
  struct State {
    std::vector<EffectivePresentation> pres;
    std::vector<std::function<Elem(const Elem&)>> project;
    std::vector<u32> offset;
  };
  auto st = std::make_shared<State>();
  EffectivePresentation P;
  P.grp = G;
  u32 off = 0;
  std::vector<u32> counts;
  for (auto& f : factors) {
    st->offset.push_back(off);
    for (const Word& r : f.pres.pres.relators)
      P.pres.relators.push_back(word_shift(r, off));
    for (const Elem& g : f.pres.gens) P.gens.push_back(f.embed(g));
    counts.push_back(f.pres.pres.ngens);
    off += f.pres.pres.ngens;
    st->pres.push_back(f.pres);
    st->project.push_back(f.project);
  }
  P.pres.ngens = off;
  // Images of distinct factors commute; the presentation must say so.
  for (size_t a = 0; a < factors.size(); ++a)
    for (size_t b = a + 1; b < factors.size(); ++b)
      for (u32 i = 1; i <= counts[a]; ++i)
        for (u32 j = 1; j <= counts[b]; ++j) {
          u32 ga = st->offset[a] + i, gb = st->offset[b] + j;
          Word c = word_mul(word_mul(word_gen(ga), word_gen(gb)),
                            word_mul(word_gen(ga, -1), word_gen(gb, -1)));
          P.pres.relators.push_back(c);
        }
  P.dlog = [st](const Elem& g) {
    Word w;
    for (size_t i = 0; i < st->pres.size(); ++i) {
      Word wi = st->pres[i].dlog(st->project[i](g));
      w = word_mul(w, word_shift(wi, st->offset[i]));
    }
    return w;
  };
  return P;
}

EffectivePresentation chain_extensions(BBGroup bottom,
                                       const std::vector<ChainLayer>& layers) {
  EffectivePresentation acc = trivial_presentation(bottom);
  for (const ChainLayer& layer : layers)
    acc = extend_presentation(layer.seq, acc, layer.quotient);
  return acc;
}

}  // namespace unitring

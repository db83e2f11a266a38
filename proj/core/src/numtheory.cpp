#include "unitring/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unitring {

i64 egcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b; a = b; b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
  x = x0; y = y0;
  return a;
}

u64 inverse_mod(u64 a, u64 m) {
  i64 x, y;
  i64 g = egcd(static_cast<i64>(a % m), static_cast<i64>(m), x, y);
  if (g != 1) throw NoSolution("inverse_mod: gcd != 1");
  return static_cast<u64>(mod_floor(x, static_cast<i64>(m)));
}

// ---------------------------------------------------------------------------

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, u32 r) {
  a %= n;
  if (a == 0) return true;
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (u32 i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  u32 r = 0;
  while ((d & 1) == 0) { d >>= 1; ++r; }
  // This witness set decides primality for every n < 2^64.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (!miller_rabin_witness(n, a, d, r)) return false;
  return true;
}

namespace {

u64 pollard_brent(u64 n, Rng& rng) {
  if (n % 2 == 0) return 2;
  while (true) {
    u64 y = rng.below(n - 2) + 1;
    u64 c = rng.below(n - 2) + 1;
    u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto step = [&](u64 v) { return (static_cast<u64>(u128(v) * v % n) + c) % n; };
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        u64 lim = std::min(m, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
    // Unlucky cycle; retry with fresh parameters.
  }
}

void factor_rec(u64 n, Rng& rng, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) { primes.push_back(n); return; }
  u64 d = pollard_brent(n, rng);
  factor_rec(d, rng, primes);
  factor_rec(n / d, rng, primes);
}

}  // namespace

Factorization factor(u64 n, u64 seed) {
  if (n == 0) throw UnitringError("factor(0)");
  Factorization out;
  for (u64 p = 2; p <= 9973 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    u32 e = 0;
    while (n % p == 0) { n /= p; ++e; }
    out.emplace_back(p, e);
  }
  if (n > 1) {
    if (n <= 9973ULL * 9973ULL || is_prime(n)) {
      out.emplace_back(n, 1);
    } else {
      Rng rng(seed ^ 0xfac70e5ULL);
      std::vector<u64> primes;
      factor_rec(n, rng, primes);
      std::sort(primes.begin(), primes.end());
      for (size_t i = 0; i < primes.size();) {
        size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        out.emplace_back(primes[i], static_cast<u32>(j - i));
        i = j;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// FiniteField

FiniteField::FiniteField(u64 p, std::vector<u64> modulus)
    : p_(p), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) throw UnitringError("FiniteField: p must be prime");
  if (modulus_.size() < 2) throw UnitringError("FiniteField: modulus degree >= 1");
  m_ = static_cast<u32>(modulus_.size() - 1);
  for (u64& c : modulus_) c %= p_;
  if (modulus_.back() != 1) throw UnitringError("FiniteField: modulus must be monic");
  q_ = 1;
  for (u32 i = 0; i < m_; ++i) {
    if (q_ > (u64(1) << 62) / p_) throw TooLarge("FiniteField: q exceeds 2^62");
    q_ *= p_;
  }
  qm1_factors_ = q_ > 1 ? factor(q_ - 1) : Factorization{};
}

FFElem FiniteField::one() const {
  FFElem e(m_, 0);
  e[0] = 1 % p_;
  return e;
}

FFElem FiniteField::from_u64(u64 c) const {
  FFElem e(m_, 0);
  e[0] = c % p_;
  return e;
}

bool FiniteField::is_zero(const FFElem& a) const {
  return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
}

bool FiniteField::is_one(const FFElem& a) const { return a == one(); }

FFElem FiniteField::add(const FFElem& a, const FFElem& b) const {
  FFElem r(m_);
  for (u32 i = 0; i < m_; ++i) r[i] = (a[i] + b[i]) % p_;
  return r;
}

FFElem FiniteField::sub(const FFElem& a, const FFElem& b) const {
  FFElem r(m_);
  for (u32 i = 0; i < m_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
  return r;
}

FFElem FiniteField::neg(const FFElem& a) const {
  FFElem r(m_);
  for (u32 i = 0; i < m_; ++i) r[i] = a[i] ? p_ - a[i] : 0;
  return r;
}

FFElem FiniteField::mul(const FFElem& a, const FFElem& b) const {
  std::vector<u64> prod(2 * m_ - 1, 0);
  for (u32 i = 0; i < m_; ++i) {
    if (!a[i]) continue;
    for (u32 j = 0; j < m_; ++j) {
      if (!b[j]) continue;
      prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p_)) % p_;
    }
  }
  // Reduce by the monic modulus, top down.
  for (u32 i = 2 * m_ - 2; i >= m_; --i) {
    u64 c = prod[i];
    if (!c) { if (i == m_) break; continue; }
    prod[i] = 0;
    for (u32 j = 0; j < m_; ++j) {
      if (!modulus_[j]) continue;
      u64& t = prod[i - m_ + j];
      t = (t + p_ - mulmod(c, modulus_[j], p_)) % p_;
    }
    if (i == m_) break;
  }
  prod.resize(m_);
  return prod;
}

FFElem FiniteField::pow(const FFElem& a, u64 e) const {
  FFElem r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

FFElem FiniteField::pow_signed(const FFElem& a, i64 e) const {
  if (e >= 0) return pow(a, static_cast<u64>(e));
  return pow(inv(a), static_cast<u64>(-e));
}

FFElem FiniteField::inv(const FFElem& a) const {
  if (is_zero(a)) throw NoSolution("FiniteField::inv(0)");
  if (q_ == 2) return a;
  return pow(a, q_ - 2);
}

FFElem FiniteField::element_at(u64 idx) const {
  FFElem e(m_);
  for (u32 i = 0; i < m_; ++i) { e[i] = idx % p_; idx /= p_; }
  if (idx) throw UnitringError("element_at: index out of range");
  return e;
}

u64 FiniteField::index_of(const FFElem& a) const {
  u64 idx = 0, w = 1;
  for (u32 i = 0; i < m_; ++i) { idx += a[i] * w; w *= p_; }
  return idx;
}

FFElem FiniteField::random(Rng& rng) const {
  return element_at(rng.below(q_));
}

u64 FiniteField::order(const FFElem& a) const {
  if (is_zero(a)) throw UnitringError("order of zero");
  u64 n = q_ - 1;
  if (n == 0) return 1;
  for (const auto& [l, e] : qm1_factors_) {
    (void)e;
    while (n % l == 0 && is_one(pow(a, n / l))) n /= l;
  }
  return n;
}

std::shared_ptr<const FiniteField> FiniteField::make(u64 p, u32 m, u64 seed) {
  if (m == 0) throw UnitringError("FiniteField::make: m >= 1");
  if (m == 1) return std::make_shared<FiniteField>(p, std::vector<u64>{0, 1});
  Rng rng(seed ^ (p * 1000003ULL + m));
  // A random monic polynomial of degree m is irreducible with probability
  // about 1/m, so this terminates quickly for every seed.
  for (int tries = 0; tries < 40000; ++tries) {
    std::vector<u64> f(m + 1, 0);
    f[m] = 1;
    for (u32 i = 0; i < m; ++i) f[i] = rng.below(p);
    if (f[0] == 0) continue;
    FiniteField base(p, {0, 1});
    FFPoly fp;
    for (u64 c : f) fp.push_back(base.from_u64(c));
    if (poly_irreducible(base, fp)) return std::make_shared<FiniteField>(p, f);
  }
  throw UnitringError("FiniteField::make: no irreducible modulus found");
}

FFElem primitive_root(const FiniteField& k) {
  for (u64 idx = 1; idx < k.q(); ++idx) {
    FFElem a = k.element_at(idx);
    if (k.order(a) == k.q() - 1) return a;
  }
  throw UnitringError("primitive_root: none found");
}

// ---------------------------------------------------------------------------
// Discrete log

namespace {

struct ElemHash {
  size_t operator()(const FFElem& v) const { return static_cast<size_t>(hash_span(v)); }
};

// x with g^x = a, where g has prime order l. Baby-step giant-step.
u64 bsgs_prime(const FiniteField& k, const FFElem& g, const FFElem& a, u64 l) {
  u64 s = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(l))));
  if (s == 0) s = 1;
  std::unordered_map<FFElem, u64, ElemHash> baby;
  baby.reserve(s * 2);
  FFElem cur = k.one();
  for (u64 j = 0; j < s; ++j) {
    baby.emplace(cur, j);
    cur = k.mul(cur, g);
  }
  FFElem giant = k.inv(k.pow(g, s));  // g^{-s}
  FFElem y = a;
  for (u64 i = 0; i <= s; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) {
      u64 x = i * s + it->second;
      return x % l;
    }
    y = k.mul(y, giant);
  }
  throw NotInSubgroup("bsgs: target not in <g>");
}

}  // namespace

u64 discrete_log(const FiniteField& k, const FFElem& g, const FFElem& a) {
  if (k.is_zero(g) || k.is_zero(a)) throw NotInSubgroup("discrete_log: zero argument");
  u64 n = k.order(g);
  if (k.is_one(a)) return 0;
  Factorization nf;
  for (const auto& [l, e] : k.unit_order_factors()) {
    (void)e;
    u32 cnt = 0;
    u64 t = n;
    while (t % l == 0) { t /= l; ++cnt; }
    if (cnt) nf.emplace_back(l, cnt);
  }
  // Pohlig-Hellman: solve modulo each l^e, then CRT.
  u128 x = 0, mod = 1;
  for (const auto& [l, e] : nf) {
    u64 le = 1;
    for (u32 i = 0; i < e; ++i) le *= l;
    FFElem gi = k.pow(g, n / le);  // order l^e
    FFElem ai = k.pow(a, n / le);
    FFElem gamma = k.pow(gi, le / l);  // order l
    u64 xi = 0, lj = 1;
    for (u32 j = 0; j < e; ++j) {
      FFElem t = k.mul(ai, k.inv(k.pow(gi, xi)));
      FFElem h = k.pow(t, le / (lj * l));
      u64 d = bsgs_prime(k, gamma, h, l);
      xi += d * lj;
      lj *= l;
    }
    // CRT accumulate (moduli are pairwise coprime).
    u64 m2 = le;
    u64 r2 = xi;
    u64 m1u = static_cast<u64>(mod);
    u64 inv = inverse_mod(m1u % m2, m2);
    u64 diff = (r2 + m2 - static_cast<u64>(x % m2)) % m2;
    x = x + mod * ((u128(diff) * inv) % m2);
    mod *= m2;
  }
  u64 res = static_cast<u64>(x % n);
  if (k.pow(g, res) != a) throw NotInSubgroup("discrete_log: target not in <g>");
  return res;
}

// ---------------------------------------------------------------------------
// Polynomials

int poly_deg(const FFPoly& f) { return static_cast<int>(f.size()) - 1; }

FFPoly poly_normalize(FFPoly f, const FiniteField& k) {
  while (!f.empty() && k.is_zero(f.back())) f.pop_back();
  return f;
}

FFPoly poly_x(const FiniteField& k) { return {k.zero(), k.one()}; }

FFPoly poly_const(const FiniteField& k, const FFElem& c) {
  if (k.is_zero(c)) return {};
  return {c};
}

FFPoly poly_add(const FiniteField& k, const FFPoly& a, const FFPoly& b) {
  FFPoly r(std::max(a.size(), b.size()), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
  return poly_normalize(std::move(r), k);
}

FFPoly poly_sub(const FiniteField& k, const FFPoly& a, const FFPoly& b) {
  FFPoly r(std::max(a.size(), b.size()), k.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
  return poly_normalize(std::move(r), k);
}

FFPoly poly_mul(const FiniteField& k, const FFPoly& a, const FFPoly& b) {
  if (a.empty() || b.empty()) return {};
  FFPoly r(a.size() + b.size() - 1, k.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  return poly_normalize(std::move(r), k);
}

FFPoly poly_divmod(const FiniteField& k, const FFPoly& a, const FFPoly& b, FFPoly& rem) {
  if (b.empty()) throw NoSolution("poly division by zero");
  FFPoly r = a;
  int db = poly_deg(b);
  FFElem lead_inv = k.inv(b.back());
  FFPoly q;
  if (poly_deg(r) >= db) q.assign(poly_deg(r) - db + 1, k.zero());
  while (poly_deg(r) >= db) {
    int d = poly_deg(r) - db;
    FFElem c = k.mul(r.back(), lead_inv);
    q[d] = c;
    for (int i = 0; i <= db; ++i)
      r[d + i] = k.sub(r[d + i], k.mul(c, b[i]));
    r = poly_normalize(std::move(r), k);
  }
  rem = std::move(r);
  return poly_normalize(std::move(q), k);
}

FFPoly poly_mod(const FiniteField& k, const FFPoly& a, const FFPoly& b) {
  FFPoly rem;
  poly_divmod(k, a, b, rem);
  return rem;
}

FFPoly poly_monic(const FiniteField& k, const FFPoly& a) {
  if (a.empty()) return a;
  FFElem c = k.inv(a.back());
  FFPoly r = a;
  for (auto& x : r) x = k.mul(x, c);
  return r;
}

FFPoly poly_gcd(const FiniteField& k, FFPoly a, FFPoly b) {
  while (!b.empty()) {
    FFPoly r = poly_mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(k, a);
}

FFPoly poly_derivative(const FiniteField& k, const FFPoly& a) {
  if (a.size() < 2) return {};
  FFPoly r(a.size() - 1, k.zero());
  for (size_t i = 1; i < a.size(); ++i) {
    FFElem c = k.mul(a[i], k.from_u64(i % k.p()));
    r[i - 1] = c;
  }
  return poly_normalize(std::move(r), k);
}

FFPoly poly_powmod(const FiniteField& k, FFPoly base, u128 e, const FFPoly& mod) {
  FFPoly r{k.one()};
  base = poly_mod(k, base, mod);
  while (e) {
    if (e & 1) r = poly_mod(k, poly_mul(k, r, base), mod);
    base = poly_mod(k, poly_mul(k, base, base), mod);
    e >>= 1;
  }
  return r;
}

FFElem poly_eval(const FiniteField& k, const FFPoly& f, const FFElem& x) {
  FFElem r = k.zero();
  for (size_t i = f.size(); i-- > 0;) r = k.add(k.mul(r, x), f[i]);
  return r;
}

bool poly_eq(const FFPoly& a, const FFPoly& b) { return a == b; }

bool poly_irreducible(const FiniteField& k, const FFPoly& f) {
  int d = poly_deg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  // f irreducible over F_q of degree d iff x^{q^d} = x (mod f) and
  // gcd(x^{q^{d/l}} - x, f) = 1 for every prime l | d.
  FFPoly x = poly_x(k);
  FFPoly xq = x;
  std::vector<FFPoly> frob_powers;  // x^{q^i} mod f for i = 1..d
  for (int i = 1; i <= d; ++i) {
    xq = poly_powmod(k, xq, k.q(), f);
    frob_powers.push_back(xq);
  }
  if (!poly_eq(poly_mod(k, frob_powers[d - 1], f), poly_mod(k, x, f))) return false;
  for (const auto& [l, e] : factor(static_cast<u64>(d))) {
    (void)e;
    FFPoly diff = poly_sub(k, frob_powers[d / l - 1], x);
    if (poly_deg(poly_gcd(k, diff, f)) != 0) return false;
  }
  return true;
}

namespace {

// p-th root of a polynomial all of whose exponents are multiples of p.
FFPoly poly_pth_root(const FiniteField& k, const FFPoly& f) {
  u64 p = k.p();
  u64 root_exp = k.q() / p;  // a -> a^{q/p} is the inverse of Frobenius
  FFPoly r;
  for (size_t i = 0; i < f.size(); i += p) r.push_back(k.pow(f[i], root_exp));
  return poly_normalize(std::move(r), k);
}

// Squarefree decomposition of a monic polynomial in characteristic p.
void squarefree_split(const FiniteField& k, FFPoly f, u32 mult,
                      std::vector<std::pair<FFPoly, u32>>& out) {
  if (poly_deg(f) <= 0) return;
  FFPoly fp = poly_derivative(k, f);
  if (fp.empty()) {
    squarefree_split(k, poly_pth_root(k, f), mult * static_cast<u32>(k.p()), out);
    return;
  }
  FFPoly c = poly_gcd(k, f, fp);
  FFPoly w;
  { FFPoly rem; w = poly_divmod(k, f, c, rem); }
  u32 i = 1;
  while (poly_deg(w) > 0) {
    FFPoly y = poly_gcd(k, w, c);
    FFPoly fac, rem;
    fac = poly_divmod(k, w, y, rem);
    if (poly_deg(fac) > 0) out.emplace_back(poly_monic(k, fac), mult * i);
    w = std::move(y);
    c = poly_divmod(k, c, w, rem);
    ++i;
  }
  if (poly_deg(c) > 0)
    squarefree_split(k, poly_pth_root(k, c), mult * static_cast<u32>(k.p()), out);
}

u128 checked_pow_u128(u64 b, u32 e) {
  u128 r = 1;
  for (u32 i = 0; i < e; ++i) {
    if (r > (u128(1) << 120) / b) throw TooLarge("q^d exponent overflow");
    r *= b;
  }
  return r;
}

// Equal-degree factorization: g is monic squarefree, a product of
// irreducibles of degree d. Cantor-Zassenhaus splitting.
void edf(const FiniteField& k, const FFPoly& g, int d, Rng& rng,
         std::vector<FFPoly>& out) {
  if (poly_deg(g) == d) { out.push_back(g); return; }
  int n = poly_deg(g);
  while (true) {
    FFPoly r(n, k.zero());
    for (int i = 0; i < n; ++i) r[i] = k.random(rng);
    r = poly_normalize(std::move(r), k);
    if (poly_deg(r) <= 0) continue;
    FFPoly s;
    if (k.p() == 2) {
      // Trace map over F_2: sum of r^{2^i}, i < d*m.
      FFPoly acc = poly_mod(k, r, g);
      FFPoly cur = acc;
      u64 steps = static_cast<u64>(d) * k.m();
      for (u64 i = 1; i < steps; ++i) {
        cur = poly_mod(k, poly_mul(k, cur, cur), g);
        acc = poly_add(k, acc, cur);
      }
      s = acc;
    } else {
      u128 e = (checked_pow_u128(k.q(), static_cast<u32>(d)) - 1) / 2;
      FFPoly t = poly_powmod(k, r, e, g);
      s = poly_sub(k, t, FFPoly{k.one()});
    }
    FFPoly h = poly_gcd(k, s, g);
    if (poly_deg(h) > 0 && poly_deg(h) < poly_deg(g)) {
      FFPoly rem, other = poly_divmod(k, g, h, rem);
      edf(k, poly_monic(k, h), d, rng, out);
      edf(k, poly_monic(k, other), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FFPoly, u32>> factor_poly(const FiniteField& k, const FFPoly& f_in,
                                                u64 seed) {
  FFPoly f = poly_normalize(f_in, k);
  if (f.empty()) throw UnitringError("factor_poly: zero polynomial");
  std::vector<std::pair<FFPoly, u32>> out;
  if (poly_deg(f) == 0) return out;
  Rng rng(seed ^ 0x90137eadULL);
  std::vector<std::pair<FFPoly, u32>> squarefree;
  squarefree_split(k, poly_monic(k, f), 1, squarefree);
  for (const auto& [sf, mult] : squarefree) {
    // Distinct-degree split of each squarefree part.
    FFPoly rem_poly = sf;
    FFPoly h = poly_mod(k, poly_x(k), rem_poly);
    for (int d = 1; 2 * d <= poly_deg(rem_poly); ++d) {
      h = poly_powmod(k, h, k.q(), rem_poly);
      FFPoly g = poly_gcd(k, poly_sub(k, h, poly_x(k)), rem_poly);
      if (poly_deg(g) > 0) {
        std::vector<FFPoly> irreds;
        edf(k, g, d, rng, irreds);
        for (auto& irr : irreds) out.emplace_back(std::move(irr), mult);
        FFPoly rem;
        rem_poly = poly_divmod(k, rem_poly, g, rem);
        h = poly_mod(k, h, rem_poly);
      }
    }
    if (poly_deg(rem_poly) > 0) out.emplace_back(poly_monic(k, rem_poly), mult);
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    if (poly_deg(a.first) != poly_deg(b.first))
      return poly_deg(a.first) < poly_deg(b.first);
    for (size_t i = a.first.size(); i-- > 0;) {
      u64 ia = k.index_of(a.first[i]), ib = k.index_of(b.first[i]);
      if (ia != ib) return ia < ib;
    }
    return a.second < b.second;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

FFMatrix ff_mat_id(const FiniteField& k, u32 n) {
  FFMatrix m{n, std::vector<FFElem>(static_cast<size_t>(n) * n, k.zero())};
  for (u32 i = 0; i < n; ++i) m.at(i, i) = k.one();
  return m;
}

FFMatrix ff_mat_zero(const FiniteField& k, u32 n) {
  return FFMatrix{n, std::vector<FFElem>(static_cast<size_t>(n) * n, k.zero())};
}

FFMatrix ff_mat_mul(const FiniteField& k, const FFMatrix& a, const FFMatrix& b) {
  u32 n = a.n;
  FFMatrix r = ff_mat_zero(k, n);
  for (u32 i = 0; i < n; ++i)
    for (u32 l = 0; l < n; ++l) {
      const FFElem& c = a.at(i, l);
      if (k.is_zero(c)) continue;
      for (u32 j = 0; j < n; ++j) {
        if (k.is_zero(b.at(l, j))) continue;
        r.at(i, j) = k.add(r.at(i, j), k.mul(c, b.at(l, j)));
      }
    }
  return r;
}

FFMatrix ff_mat_inv(const FiniteField& k, const FFMatrix& a) {
  u32 n = a.n;
  FFMatrix w = a, inv = ff_mat_id(k, n);
  for (u32 c = 0; c < n; ++c) {
    u32 piv = c;
    while (piv < n && k.is_zero(w.at(piv, c))) ++piv;
    if (piv == n) throw NoSolution("ff_mat_inv: singular");
    if (piv != c)
      for (u32 j = 0; j < n; ++j) {
        std::swap(w.at(piv, j), w.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    FFElem d = k.inv(w.at(c, c));
    for (u32 j = 0; j < n; ++j) {
      w.at(c, j) = k.mul(w.at(c, j), d);
      inv.at(c, j) = k.mul(inv.at(c, j), d);
    }
    for (u32 i = 0; i < n; ++i) {
      if (i == c || k.is_zero(w.at(i, c))) continue;
      FFElem f = w.at(i, c);
      for (u32 j = 0; j < n; ++j) {
        w.at(i, j) = k.sub(w.at(i, j), k.mul(f, w.at(c, j)));
        inv.at(i, j) = k.sub(inv.at(i, j), k.mul(f, inv.at(c, j)));
      }
    }
  }
  return inv;
}

FFElem ff_mat_det(const FiniteField& k, const FFMatrix& a) {
  u32 n = a.n;
  FFMatrix w = a;
  FFElem det = k.one();
  for (u32 c = 0; c < n; ++c) {
    u32 piv = c;
    while (piv < n && k.is_zero(w.at(piv, c))) ++piv;
    if (piv == n) return k.zero();
    if (piv != c) {
      for (u32 j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
      det = k.neg(det);
    }
    det = k.mul(det, w.at(c, c));
    FFElem d = k.inv(w.at(c, c));
    for (u32 i = c + 1; i < n; ++i) {
      if (k.is_zero(w.at(i, c))) continue;
      FFElem f = k.mul(w.at(i, c), d);
      for (u32 j = c; j < n; ++j)
        w.at(i, j) = k.sub(w.at(i, j), k.mul(f, w.at(c, j)));
    }
  }
  return det;
}

u64 ff_mat_hash(const FFMatrix& a) {
  u64 h = hash_combine(0x5bd1e995, a.n);
  for (const FFElem& e : a.e) h = hash_combine(h, hash_span(e));
  return h;
}

}  // namespace unitring

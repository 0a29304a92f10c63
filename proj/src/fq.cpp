#include "iwff/fq.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace iwff {

i64 mod_pow(i64 base, u64 exp, i64 mod) {
    if (mod <= 0) throw InvalidInput("mod_pow: modulus must be positive");
    i64 r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp) {
        if (exp & 1) r = (i64)((i128)r * base % mod);
        base = (i64)((i128)base * base % mod);
        exp >>= 1;
    }
    return r;
}

i64 mod_inv(i64 a, i64 mod) {
    a %= mod;
    if (a < 0) a += mod;
    if (a == 0) throw DivisionByZero("mod_inv of zero");
    // extended Euclid; mod need not be prime as long as gcd(a, mod) = 1
    i64 r0 = mod, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1;
        i64 t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw DivisionByZero("mod_inv: argument not a unit");
    t0 %= mod;
    if (t0 < 0) t0 += mod;
    return t0;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Arithmetic for dense polynomials over F_p, little-endian, used only for
// modulus selection and validation.
using Fp = std::vector<i64>;

void fp_trim(Fp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Fp fp_mulmod(const Fp& f, const Fp& g, const Fp& m, i64 p) {
    Fp r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] = (r[i + j] + (i128)f[i] * g[j]) % p;
    }
    // reduce by monic m
    int dm = (int)m.size() - 1;
    for (int i = (int)r.size() - 1; i >= dm; --i) {
        i64 c = r[i];
        if (!c) continue;
        r[i] = 0;
        for (int j = 0; j < dm; ++j)
            r[i - dm + j] = ((r[i - dm + j] - (i128)c * m[j]) % p + p) % p;
    }
    r.resize(dm);
    return r;
}

Fp fp_powmod(Fp base, u64 e, const Fp& m, i64 p) {
    Fp r(m.size() - 1, 0);
    r[0] = 1;
    while (e) {
        if (e & 1) r = fp_mulmod(r, base, m, p);
        base = fp_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Fp fp_gcd(Fp a, Fp b, i64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // a mod b
        i64 lead = mod_inv(b.back(), p);
        for (int i = (int)a.size() - 1; i >= (int)b.size() - 1; --i) {
            i64 c = (i128)a[i] * lead % p;
            if (!c) continue;
            for (size_t j = 0; j < b.size(); ++j) {
                size_t k = i - (b.size() - 1) + j;
                a[k] = ((a[k] - (i128)c * b[j]) % p + p) % p;
            }
        }
        fp_trim(a);
        std::swap(a, b);
    }
    return a;
}

// Rabin's test: f monic of degree a is irreducible over F_p iff
// x^{p^a} = x mod f and gcd(x^{p^{a/l}} - x, f) = 1 for each prime l | a.
bool fp_irreducible(const Fp& f, i64 p) {
    int a = (int)f.size() - 1;
    if (a < 1) return false;
    Fp x = {0, 1};
    if (a == 1) return true;
    auto frob_iter = [&](int k) {
        // x^{p^k} mod f
        Fp r = x;
        for (int i = 0; i < k; ++i) r = fp_powmod(r, (u64)p, f, p);
        return r;
    };
    Fp xq = frob_iter(a);
    fp_trim(xq);
    Fp xx = x;
    fp_trim(xx);
    if (xq != xx) return false;
    int rem = a;
    for (int l = 2; l <= rem; ++l) {
        if (rem % l) continue;
        while (rem % l == 0) rem /= l;
        Fp g = frob_iter(a / l);
        if (g.size() < 2) g.resize(2, 0);
        g[1] = ((g[1] - 1) % p + p) % p;
        Fp d = fp_gcd(g, f, p);
        if (!(d.size() == 1)) return false;
    }
    return true;
}

}  // namespace

FqField::FqField(i64 p, int a) : p_(p), a_(a) {
    if (!is_prime(p)) throw InvalidInput("FqField: p must be prime");
    if (a < 1 || a > 40) throw InvalidInput("FqField: bad extension degree");
    i128 q = 1;
    for (int i = 0; i < a; ++i) {
        q *= p;
        if (q > (i128)1 << 62) throw InvalidInput("FqField: q too large");
    }
    q_ = (u64)q;
    if (a == 1) {
        mod_ = {0, 1};  // x
        return;
    }
    // canonical modulus: first monic irreducible in base-p counting order
    u64 span = 1;
    for (int i = 0; i < a; ++i) span *= (u64)p;  // p^a lower-coefficient tuples
    for (u64 k = 0; k < span; ++k) {
        Fp f(a + 1, 0);
        u64 t = k;
        for (int i = 0; i < a; ++i) {
            f[i] = (i64)(t % (u64)p);
            t /= (u64)p;
        }
        f[a] = 1;
        if (fp_irreducible(f, p)) {
            mod_ = f;
            return;
        }
    }
    throw InvalidInput("FqField: no irreducible found (unreachable)");
}

FqField::FqField(i64 p, std::vector<i64> modulus) : p_(p) {
    if (!is_prime(p)) throw InvalidInput("FqField: p must be prime");
    for (auto& c : modulus) c = ((c % p) + p) % p;
    while (modulus.size() > 1 && modulus.back() == 0) modulus.pop_back();
    a_ = (int)modulus.size() - 1;
    if (a_ < 1) throw InvalidInput("FqField: modulus must be nonconstant");
    if (modulus.back() != 1) throw InvalidInput("FqField: modulus must be monic");
    if (a_ > 1 && !fp_irreducible(modulus, p))
        throw InvalidInput("FqField: modulus is reducible");
    i128 q = 1;
    for (int i = 0; i < a_; ++i) {
        q *= p;
        if (q > (i128)1 << 62) throw InvalidInput("FqField: q too large");
    }
    q_ = (u64)q;
    mod_ = std::move(modulus);
}

FqElem FqField::zero() const { return FqElem{std::vector<i64>(a_, 0)}; }

FqElem FqField::one() const {
    auto e = zero();
    e.c[0] = 1;
    return e;
}

FqElem FqField::from_int(i64 n) const {
    auto e = zero();
    e.c[0] = ((n % p_) + p_) % p_;
    return e;
}

FqElem FqField::gen() const {
    if (a_ == 1) return from_int(mod_[0] ? -mod_[0] : 0);  // root of x+c
    auto e = zero();
    e.c[1] = 1;
    return e;
}

FqElem FqField::element(std::vector<i64> coeffs) const {
    if ((int)coeffs.size() > a_) throw InvalidInput("element: too many coefficients");
    coeffs.resize(a_, 0);
    for (auto& c : coeffs) c = ((c % p_) + p_) % p_;
    return FqElem{std::move(coeffs)};
}

bool FqField::is_zero(const FqElem& x) const {
    return std::all_of(x.c.begin(), x.c.end(), [](i64 c) { return c == 0; });
}

FqElem FqField::add(const FqElem& x, const FqElem& y) const {
    FqElem r = x;
    for (int i = 0; i < a_; ++i) {
        r.c[i] += y.c[i];
        if (r.c[i] >= p_) r.c[i] -= p_;
    }
    return r;
}

FqElem FqField::sub(const FqElem& x, const FqElem& y) const {
    FqElem r = x;
    for (int i = 0; i < a_; ++i) {
        r.c[i] -= y.c[i];
        if (r.c[i] < 0) r.c[i] += p_;
    }
    return r;
}

FqElem FqField::neg(const FqElem& x) const { return sub(zero(), x); }

void FqField::reduce(std::vector<i64>& v) const {
    for (int i = (int)v.size() - 1; i >= a_; --i) {
        i64 c = v[i] % p_;
        v[i] = 0;
        if (!c) continue;
        for (int j = 0; j < a_; ++j)
            v[i - a_ + j] = ((v[i - a_ + j] - (i128)c * mod_[j]) % p_ + p_) % p_;
    }
    v.resize(a_);
    for (auto& c : v) c = ((c % p_) + p_) % p_;
}

FqElem FqField::mul(const FqElem& x, const FqElem& y) const {
    std::vector<i64> r(2 * a_ - 1, 0);
    for (int i = 0; i < a_; ++i) {
        if (!x.c[i]) continue;
        for (int j = 0; j < a_; ++j)
            r[i + j] = (r[i + j] + (i128)x.c[i] * y.c[j]) % p_;
    }
    reduce(r);
    return FqElem{std::move(r)};
}

FqElem FqField::pow(const FqElem& x, u64 n) const {
    FqElem r = one(), b = x;
    while (n) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

FqElem FqField::inv(const FqElem& x) const {
    if (is_zero(x)) throw DivisionByZero("FqField::inv of zero");
    return pow(x, q_ - 2);
}

FqElem FqField::frobenius(const FqElem& x) const { return pow(x, (u64)p_); }

i64 FqField::trace_to_prime(const FqElem& x) const {
    FqElem s = x, fx = x;
    for (int i = 1; i < a_; ++i) {
        fx = frobenius(fx);
        s = add(s, fx);
    }
    return as_prime_residue(s);
}

int FqField::quadratic_character(const FqElem& x) const {
    if (p_ == 2) throw Unsupported("quadratic_character needs odd characteristic");
    if (is_zero(x)) return 0;
    FqElem t = pow(x, (q_ - 1) / 2);
    if (t == one()) return 1;
    return -1;
}

u64 FqField::mult_order(const FqElem& x) const {
    if (is_zero(x)) throw InvalidInput("mult_order of zero");
    u64 ord = q_ - 1;
    u64 n = ord;
    for (u64 d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            n /= d;
            while (ord % d == 0 && pow(x, ord / d) == one()) ord /= d;
        }
    }
    if (n > 1)
        while (ord % n == 0 && pow(x, ord / n) == one()) ord /= n;
    return ord;
}

FqElem FqField::element_from_index(u64 idx) const {
    auto e = zero();
    for (int i = 0; i < a_; ++i) {
        e.c[i] = (i64)(idx % (u64)p_);
        idx /= (u64)p_;
    }
    return e;
}

bool FqField::incr(FqElem& x) const {
    for (int i = 0; i < a_; ++i) {
        if (++x.c[i] < p_) return true;
        x.c[i] = 0;
    }
    return false;
}

void FqField::check_enum(u64 cap) const {
    if (q_ > cap) throw EnumerationTooLarge("FqField enumeration", q_, cap);
}

i64 FqField::as_prime_residue(const FqElem& x) const {
    for (int i = 1; i < a_; ++i)
        if (x.c[i]) throw InvalidInput("element not in the prime field");
    return x.c[0];
}

std::string FqField::to_string(const FqElem& x) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < a_; ++i) {
        if (!x.c[i]) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || x.c[i] != 1) os << x.c[i];
        if (i == 0) continue;
        os << "x";
        if (i > 1) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

FqEmbedding::FqEmbedding(const FqField& from, const FqField& to, u64 cap)
    : from_(&from), to_(&to) {
    if (from.p() != to.p()) throw InvalidInput("FqEmbedding: different characteristic");
    if (to.degree() % from.degree() != 0)
        throw InvalidInput("FqEmbedding: no embedding (degree does not divide)");
    to.check_enum(cap);
    // least root of the small modulus inside the big field
    const auto& m = from.modulus();
    FqElem root = to.zero();
    bool found = false;
    FqElem x = to.zero();
    u64 left = to.q();
    while (left--) {
        FqElem v = to.zero();
        // Horner for m at x
        for (int i = (int)m.size() - 1; i >= 0; --i) {
            v = to.mul(v, x);
            v = to.add(v, to.from_int(m[i]));
        }
        if (to.is_zero(v)) {
            root = x;
            found = true;
            break;
        }
        to.incr(x);
    }
    if (!found) throw InvalidInput("FqEmbedding: modulus has no root (unreachable)");
    gen_powers_.resize(from.degree());
    gen_powers_[0] = to.one();
    for (int i = 1; i < from.degree(); ++i)
        gen_powers_[i] = to.mul(gen_powers_[i - 1], root);
}

FqElem FqEmbedding::map(const FqElem& x) const {
    FqElem r = to_->zero();
    for (int i = 0; i < from_->degree(); ++i) {
        if (!x.c[i]) continue;
        FqElem t = gen_powers_[i];
        for (auto& c : t.c) c = (i128)c * x.c[i] % to_->p();
        r = to_->add(r, t);
    }
    return r;
}

FqPoly fqpoly_make(const FqField& F, std::vector<FqElem> coeffs) {
    while (!coeffs.empty() && F.is_zero(coeffs.back())) coeffs.pop_back();
    return FqPoly{std::move(coeffs)};
}

FqPoly fqpoly_from_ints(const FqField& F, const std::vector<i64>& coeffs) {
    std::vector<FqElem> c;
    c.reserve(coeffs.size());
    for (i64 v : coeffs) c.push_back(F.from_int(v));
    return fqpoly_make(F, std::move(c));
}

int fqpoly_deg(const FqField& F, const FqPoly& f) {
    (void)F;
    return (int)f.c.size() - 1;
}

FqElem fqpoly_eval(const FqField& F, const FqPoly& f, const FqElem& x) {
    FqElem r = F.zero();
    for (int i = (int)f.c.size() - 1; i >= 0; --i) r = F.add(F.mul(r, x), f.c[i]);
    return r;
}

FqPoly fqpoly_add(const FqField& F, const FqPoly& f, const FqPoly& g) {
    std::vector<FqElem> r(std::max(f.c.size(), g.c.size()), F.zero());
    for (size_t i = 0; i < f.c.size(); ++i) r[i] = f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) r[i] = F.add(r[i], g.c[i]);
    return fqpoly_make(F, std::move(r));
}

FqPoly fqpoly_mul(const FqField& F, const FqPoly& f, const FqPoly& g) {
    if (f.c.empty() || g.c.empty()) return FqPoly{};
    std::vector<FqElem> r(f.c.size() + g.c.size() - 1, F.zero());
    for (size_t i = 0; i < f.c.size(); ++i)
        for (size_t j = 0; j < g.c.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(f.c[i], g.c[j]));
    return fqpoly_make(F, std::move(r));
}

FqPoly fqpoly_rem(const FqField& F, FqPoly f, const FqPoly& g) {
    if (g.c.empty()) throw DivisionByZero("fqpoly_rem by zero");
    FqElem lead_inv = F.inv(g.c.back());
    while (f.c.size() >= g.c.size()) {
        FqElem c = F.mul(f.c.back(), lead_inv);
        size_t off = f.c.size() - g.c.size();
        for (size_t j = 0; j < g.c.size(); ++j)
            f.c[off + j] = F.sub(f.c[off + j], F.mul(c, g.c[j]));
        while (!f.c.empty() && F.is_zero(f.c.back())) f.c.pop_back();
    }
    return f;
}

FqPoly fqpoly_gcd(const FqField& F, FqPoly f, FqPoly g) {
    while (!g.c.empty()) {
        f = fqpoly_rem(F, std::move(f), g);
        std::swap(f, g);
    }
    if (!f.c.empty()) {
        FqElem s = F.inv(f.c.back());
        for (auto& c : f.c) c = F.mul(c, s);
    }
    return f;
}

FqPoly fqpoly_derivative(const FqField& F, const FqPoly& f) {
    std::vector<FqElem> r;
    for (size_t i = 1; i < f.c.size(); ++i) {
        FqElem t = f.c[i];
        for (auto& c : t.c) c = (i128)c * (i64)(i % (u64)F.p()) % F.p();
        r.push_back(t);
    }
    return fqpoly_make(F, std::move(r));
}

bool fqpoly_squarefree(const FqField& F, const FqPoly& f) {
    if (f.c.empty()) return false;
    FqPoly d = fqpoly_derivative(F, f);
    if (d.c.empty()) return false;  // p-th power (or constant)
    FqPoly g = fqpoly_gcd(F, f, d);
    return fqpoly_deg(F, g) == 0;
}

}  // namespace iwff

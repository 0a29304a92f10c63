#include "iwff/padic.hpp"

#include <algorithm>
#include <sstream>

#include "iwff/fq.hpp"  // mod_pow, mod_inv, is_prime

namespace iwff {

i64 int_valuation(i64 n, i64 p) {
    if (n == 0) throw InvalidInput("int_valuation of zero");
    i64 v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

PadicCtx::PadicCtx(i64 p, int m, int N) : p_(p), m_(m), N_(N) {
    if (!is_prime(p)) throw InvalidInput("PadicCtx: p must be prime");
    if (m < 0 || m > 6) throw InvalidInput("PadicCtx: m out of range");
    if (N < 1) throw InvalidInput("PadicCtx: N must be >= 1");
    i128 q = 1;
    ppows_.push_back(1);
    for (int i = 0; i < N; ++i) {
        q *= p;
        if (q > (i128)1 << 31)
            throw InvalidInput("PadicCtx: p^N exceeds the 2^31 working bound");
        ppows_.push_back((i64)q);
    }
    pN_ = (i64)q;
    if (m == 0) {
        e_ = 1;
        mod_pi_ = {zmod(-p, pN_), 1};  // pi = p
        u_e_ = ORes{{1}};
        u_e_inv_ = ORes{{1}};
        zeta_ = r_one();  // zeta = 1 when m = 0
        return;
    }
    e_ = 1;
    for (int i = 0; i < m - 1; ++i) e_ *= (int)p;
    e_ *= (int)(p - 1);
    if (e_ > 160) throw InvalidInput("PadicCtx: ramification index too large");
    // Phi_{p^m}(1+x) = sum_{j<p} (1+x)^{j p^{m-1}}, exact integers
    i64 pm1 = 1;
    for (int i = 0; i < m - 1; ++i) pm1 *= p;
    IPoly base = ip_pow(IPoly{1, 1}, (u64)pm1);  // (1+x)^{p^{m-1}}
    IPoly phi = {0};
    IPoly acc = {1};
    for (i64 j = 0; j < p; ++j) {
        phi = ip_add(phi, acc);
        acc = ip_mul(acc, base);
    }
    if (ip_deg(phi) != e_ || phi[e_] != 1)
        throw Error("PadicCtx: cyclotomic construction failed");
    // Eisenstein: all non-leading coefficients divisible by p
    u_e_.c.assign(e_, 0);
    for (int i = 0; i < e_; ++i) {
        if (phi[i] % p != 0) throw Error("PadicCtx: modulus not Eisenstein");
        u_e_.c[i] = zmod(-(phi[i] / p), pN_);
    }
    mod_pi_ = zp_from(phi, pN_);
    mod_pi_.resize(e_ + 1);  // keep monic shape even if trims occurred
    mod_pi_[e_] = 1;
    u_e_inv_ = r_inv(u_e_);
    zeta_ = r_zero();
    if (e_ > 1) {
        zeta_.c[0] = 1;
        zeta_.c[1] = 1;  // zeta = 1 + pi
    } else {
        zeta_.c[0] = zmod(-1, pN_);  // p = 2, m = 1: zeta_2 = -1, pi = -2
    }
}

CtxPtr PadicCtx::make(i64 p, int m, int N) {
    return CtxPtr(new PadicCtx(p, m, N));
}

i64 PadicCtx::ppow(int k) const {
    if (k < 0 || k > N_) throw InvalidInput("ppow out of range");
    return ppows_[k];
}

i64 PadicCtx::zeta_order() const {
    i64 r = 1;
    for (int i = 0; i < m_; ++i) r *= p_;
    return r;
}

ORes PadicCtx::r_zero() const { return ORes{std::vector<i64>(e_, 0)}; }

ORes PadicCtx::r_one() const {
    auto r = r_zero();
    r.c[0] = 1;
    return r;
}

ORes PadicCtx::r_from_int(i64 n) const {
    auto r = r_zero();
    r.c[0] = zmod(n, pN_);
    return r;
}

ORes PadicCtx::r_add(const ORes& x, const ORes& y) const {
    ORes r = x;
    for (int i = 0; i < e_; ++i) r.c[i] = (r.c[i] + y.c[i]) % pN_;
    return r;
}

ORes PadicCtx::r_sub(const ORes& x, const ORes& y) const {
    ORes r = x;
    for (int i = 0; i < e_; ++i) r.c[i] = zmod(r.c[i] - y.c[i], pN_);
    return r;
}

ORes PadicCtx::r_neg(const ORes& x) const { return r_sub(r_zero(), x); }

ORes PadicCtx::r_mul(const ORes& x, const ORes& y) const {
    ZPoly prod = zp_mul(x.c, y.c, pN_);
    prod = zp_rem_monic(std::move(prod), mod_pi_, pN_);
    prod.resize(e_, 0);
    return ORes{std::move(prod)};
}

ORes PadicCtx::r_scale(const ORes& x, i64 c) const {
    ORes r = x;
    c = zmod(c, pN_);
    for (auto& v : r.c) v = (i64)((i128)v * c % pN_);
    return r;
}

ORes PadicCtx::r_pow(ORes x, u64 n) const {
    ORes r = r_one();
    while (n) {
        if (n & 1) r = r_mul(r, x);
        x = r_mul(x, x);
        n >>= 1;
    }
    return r;
}

bool PadicCtx::r_is_zero(const ORes& x) const {
    return std::all_of(x.c.begin(), x.c.end(), [](i64 c) { return c == 0; });
}

bool PadicCtx::r_is_unit(const ORes& x) const { return x.c[0] % p_ != 0; }

ORes PadicCtx::r_inv(const ORes& x) const {
    if (!r_is_unit(x)) throw NotAUnit("r_inv: not a unit of O/p^N");
    ORes y = r_from_int(mod_inv(x.c[0], p_));
    int prec = 1;  // pi-digits of correctness
    while (prec < e_ * N_) {
        // y <- y (2 - x y)
        ORes t = r_mul(x, y);
        t = r_sub(r_from_int(2), t);
        y = r_mul(y, t);
        prec *= 2;
    }
    return y;
}

ORes PadicCtx::r_pi() const {
    auto r = r_zero();
    if (e_ == 1) {
        // m = 0: pi = p;  p = 2, m = 1: pi = zeta_2 - 1 = -2
        r.c[0] = (m_ == 0) ? zmod(p_, pN_) : zmod(-2, pN_);
    } else {
        r.c[1] = 1;
    }
    return r;
}

ORes PadicCtx::r_mul_pi(const ORes& x) const {
    if (e_ == 1) return r_scale(x, r_pi().c[0]);
    ZPoly shifted(e_ + 1, 0);
    for (int i = 0; i < e_; ++i) shifted[i + 1] = x.c[i];
    shifted = zp_rem_monic(std::move(shifted), mod_pi_, pN_);
    shifted.resize(e_, 0);
    return ORes{std::move(shifted)};
}

ORes PadicCtx::r_zeta_pow(i64 j) const {
    i64 ord = zeta_order();
    j = zmod(j, ord);
    return r_pow(zeta_, (u64)j);
}

i64 PadicCtx::vp_int(i64 c) const {
    if (c == 0) return N_;
    i64 v = 0;
    while (c % p_ == 0) {
        c /= p_;
        ++v;
    }
    return v;
}

i64 PadicCtx::r_valuation(const ORes& x) const {
    i64 best = (i64)e_ * N_;
    for (int i = 0; i < e_; ++i) {
        i64 v = vp_int(x.c[i]);
        if (v >= N_) continue;
        best = std::min(best, (i64)e_ * v + i);
    }
    return best;
}

std::pair<ORes, int> PadicCtx::r_div_pi_pow(const ORes& x, i64 t) const {
    if (t == 0) return {x, 0};
    if (t < 0) {
        // multiply by pi^{-t}; pi^e = p * u_e
        ORes y = x;
        i64 k = -t;
        i64 a = k / e_, b = k % e_;
        for (i64 i = 0; i < a; ++i) y = r_scale(r_mul(y, u_e_), p_);
        for (i64 i = 0; i < b; ++i) y = r_mul_pi(y);
        return {y, 0};
    }
    i64 a = t / e_, b = t % e_;
    ORes y = x;
    int loss;
    if (b == 0) {
        for (i64 i = 0; i < a; ++i) y = r_mul(y, u_e_inv_);
        loss = (int)a;
    } else {
        for (i64 i = 0; i < e_ - b; ++i) y = r_mul_pi(y);
        for (i64 i = 0; i < a + 1; ++i) y = r_mul(y, u_e_inv_);
        loss = (int)a + 1;
    }
    // y = x * pi^{e-b} * u_e^{-(a+1)} (or x * u_e^{-a}); now divide by p^{loss}
    i64 pl = (loss <= N_) ? ppows_[loss] : 0;
    if (pl == 0) return {r_zero(), loss};
    ORes r = r_zero();
    for (int i = 0; i < e_; ++i) {
        if (y.c[i] % pl != 0)
            throw Error("r_div_pi_pow: residue not divisible (valuation too small)");
        r.c[i] = y.c[i] / pl;
    }
    return {r, loss};
}

std::vector<i64> PadicCtx::to_zeta_basis(const ORes& x) const {
    if (m_ == 0) return x.c;
    // substitute pi = y - 1: expand sum c_i (y-1)^i
    ZPoly acc = {1}, out(e_, 0);
    ZPoly ym1 = {zmod(-1, pN_), 1};
    for (int i = 0; i < e_; ++i) {
        for (size_t j = 0; j < acc.size(); ++j)
            out[j] = (i64)((out[j] + (i128)x.c[i] * acc[j]) % pN_);
        acc = zp_mul(acc, ym1, pN_);
    }
    return out;
}

ORes PadicCtx::from_zeta_basis(const std::vector<i64>& z) const {
    if (m_ == 0) {
        if (z.empty()) return r_zero();
        return r_from_int(z[0]);
    }
    if ((int)z.size() > e_) throw InvalidInput("from_zeta_basis: too many coefficients");
    ORes out = r_zero();
    ORes acc = r_one();
    for (size_t i = 0; i < z.size(); ++i) {
        out = r_add(out, r_scale(acc, z[i]));
        acc = r_mul(acc, zeta_);
    }
    return out;
}

PadicNum PadicCtx::zero() const { return PadicNum{PState::Zero, 0, 0, {}}; }

PadicNum PadicCtx::one() const { return make_unit(r_one()); }

PadicNum PadicCtx::make_unit(const ORes& u) const {
    if (!r_is_unit(u)) throw NotAUnit("make_unit: mantissa is not a unit");
    return PadicNum{PState::Reg, 0, (i64)e_ * N_, u};
}

PadicNum PadicCtx::approx_zero(i64 bound) const {
    return PadicNum{PState::AZero, std::min(bound, (i64)e_ * N_), 0, {}};
}

PadicNum PadicCtx::from_int(i64 n) const {
    if (n == 0) return zero();
    i64 v = int_valuation(n, p_);
    i64 unit = n;
    for (i64 i = 0; i < v; ++i) unit /= p_;
    PadicNum r = make_unit(r_from_int(unit));
    return mul_ppow(r, v);
}

PadicNum PadicCtx::from_res(const ORes& x) const { return from_res(x, (i64)e_ * N_); }

PadicNum PadicCtx::from_res(const ORes& x, i64 absprec) const {
    absprec = std::min(absprec, (i64)e_ * N_);
    i64 t = r_valuation(x);
    if (t >= absprec) return approx_zero(absprec);
    auto [u, loss] = r_div_pi_pow(x, t);
    i64 rp = std::min(absprec - t, (i64)e_ * (N_ - loss));
    return PadicNum{PState::Reg, t, rp, u};
}

PadicNum PadicCtx::zeta_num(i64 j) const { return make_unit(r_zeta_pow(j)); }

PadicNum PadicCtx::pi_num() const {
    PadicNum r = make_unit(r_one());
    r.v = 1;
    return r;
}

PadicNum PadicCtx::neg(const PadicNum& x) const {
    PadicNum r = x;
    if (r.st == PState::Reg) r.u = r_neg(r.u);
    return r;
}

PadicNum PadicCtx::add(const PadicNum& x, const PadicNum& y) const {
    if (x.st == PState::Zero) return y;
    if (y.st == PState::Zero) return x;
    if (x.st == PState::AZero && y.st == PState::AZero)
        return approx_zero(std::min(x.v, y.v));
    if (x.st == PState::AZero || y.st == PState::AZero) {
        const PadicNum& az = (x.st == PState::AZero) ? x : y;
        const PadicNum& rg = (x.st == PState::AZero) ? y : x;
        if (az.v > rg.v) {
            PadicNum r = rg;
            r.relprec = std::min(r.relprec, az.v - rg.v);
            return r;
        }
        return approx_zero(az.v);
    }
    const PadicNum* a = &x;
    const PadicNum* b = &y;
    if (a->v > b->v) std::swap(a, b);
    i64 P = std::min(a->v + a->relprec, b->v + b->relprec);
    P = std::min(P, a->v + (i64)e_ * N_);
    i64 d = b->v - a->v;
    ORes s = a->u;
    if (d < (i64)e_ * N_) {
        auto [shifted, loss] = r_div_pi_pow(b->u, -d);
        (void)loss;
        s = r_add(s, shifted);
    }
    PadicNum r = from_res(s, P - a->v);
    if (r.st == PState::AZero)
        return approx_zero(r.v + a->v);
    r.v += a->v;
    return r;
}

PadicNum PadicCtx::sub(const PadicNum& x, const PadicNum& y) const {
    return add(x, neg(y));
}

PadicNum PadicCtx::mul(const PadicNum& x, const PadicNum& y) const {
    if (x.st == PState::Zero || y.st == PState::Zero) return zero();
    if (x.st == PState::AZero || y.st == PState::AZero)
        return approx_zero(x.v + y.v);
    return PadicNum{PState::Reg, x.v + y.v, std::min(x.relprec, y.relprec),
                    r_mul(x.u, y.u)};
}

PadicNum PadicCtx::inv(const PadicNum& x) const {
    if (x.st == PState::Zero) throw DivisionByZero("inv of exact zero");
    if (x.st == PState::AZero)
        throw PrecisionLoss("inv of a value indistinguishable from zero", x.v);
    return PadicNum{PState::Reg, -x.v, x.relprec, r_inv(x.u)};
}

PadicNum PadicCtx::div(const PadicNum& x, const PadicNum& y) const {
    return mul(x, inv(y));
}

PadicNum PadicCtx::mul_ppow(const PadicNum& x, i64 k) const {
    if (x.st == PState::Zero) return x;
    if (x.st == PState::AZero) return approx_zero(x.v + k * e_);
    PadicNum r = x;
    r.v += k * e_;
    if (m_ == 0 || k == 0) return r;  // u_e = 1 when m = 0
    if (k > 0)
        for (i64 i = 0; i < k; ++i) r.u = r_mul(r.u, u_e_inv_);
    else
        for (i64 i = 0; i < -k; ++i) r.u = r_mul(r.u, u_e_);
    return r;
}

PadicNum PadicCtx::pow(const PadicNum& x, i64 k) const {
    if (k == 0) return one();
    PadicNum b = (k < 0) ? inv(x) : x;
    u64 n = (k < 0) ? (u64)(-k) : (u64)k;
    if (b.st == PState::Zero) return zero();
    if (b.st == PState::AZero) return approx_zero(b.v * (i64)n);
    PadicNum r = one();
    while (n) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

Cmp3 PadicCtx::cmp(const PadicNum& x, const PadicNum& y) const {
    PadicNum d = sub(x, y);
    switch (d.st) {
        case PState::Zero:
            return Cmp3{CmpKind::Equal, (i64)e_ * N_};
        case PState::Reg:
            return Cmp3{CmpKind::Different, d.v};
        default:
            return Cmp3{CmpKind::Indistinguishable, d.v};
    }
}

ORes PadicCtx::to_res(const PadicNum& x) const {
    if (x.st == PState::Zero) return r_zero();
    if (x.st == PState::AZero) {
        if (x.v < (i64)e_ * N_)
            throw PrecisionLoss("to_res: value known only above its bound", x.v);
        return r_zero();
    }
    if (x.v < 0) throw InvalidInput("to_res: negative valuation");
    auto [r, loss] = r_div_pi_pow(x.u, -x.v);
    (void)loss;
    return r;
}

std::string PadicCtx::to_string(const ORes& x) const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < e_; ++i) {
        if (i) os << ",";
        os << x.c[i];
    }
    os << "]";
    return os.str();
}

std::string PadicCtx::to_string(const PadicNum& x) const {
    std::ostringstream os;
    switch (x.st) {
        case PState::Zero:
            os << "0";
            break;
        case PState::AZero:
            os << "O(pi^" << x.v << ")";
            break;
        case PState::Reg:
            os << "pi^" << x.v << "*" << to_string(x.u) << "+O(pi^"
               << x.v + x.relprec << ")";
            break;
    }
    return os.str();
}

i64 PadicCtx::teichmuller_int(i64 r) const {
    r = zmod(r, pN_);
    if (r % p_ == 0) throw InvalidInput("teichmuller: residue not a unit");
    i64 x = r, prev = -1;
    for (int i = 0; i <= N_ + 2 && x != prev; ++i) {
        prev = x;
        x = mod_pow(x, (u64)p_, pN_);
    }
    return x;
}

PadicNum PadicCtx::teichmuller(i64 r) const {
    return make_unit(r_from_int(teichmuller_int(r)));
}

// ---- Hensel lifting ----

namespace {

// division with remainder over F_p (general divisor)
std::pair<ZPoly, ZPoly> fp_divrem(ZPoly f, const ZPoly& g, i64 p) {
    ZPoly gg = g;
    zp_trim(gg);
    if (gg.empty()) throw DivisionByZero("fp_divrem by zero");
    i64 li = mod_inv(gg.back(), p);
    int dg = (int)gg.size() - 1;
    zp_trim(f);
    if ((int)f.size() <= dg) return {{}, f};
    ZPoly q(f.size() - dg, 0);
    for (int i = (int)f.size() - 1; i >= dg; --i) {
        i64 c = (i64)((i128)f[i] * li % p);
        if (c) {
            q[i - dg] = c;
            for (int j = 0; j <= dg; ++j)
                f[i - dg + j] = zmod(f[i - dg + j] - (i64)((i128)c * gg[j] % p), p);
        }
    }
    f.resize(dg);
    zp_trim(f);
    zp_trim(q);
    return {q, f};
}

// extended gcd over F_p: returns (d, s, t) with s f + t g = d, d monic
std::tuple<ZPoly, ZPoly, ZPoly> fp_egcd(ZPoly f, ZPoly g, i64 p) {
    ZPoly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    zp_trim(f);
    zp_trim(g);
    while (!g.empty()) {
        auto [q, r] = fp_divrem(f, g, p);
        ZPoly s2 = zp_sub(s0, zp_mul(q, s1, p), p);
        ZPoly t2 = zp_sub(t0, zp_mul(q, t1, p), p);
        f = g;
        g = r;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (f.empty()) throw Error("fp_egcd of two zero polynomials");
    i64 li = mod_inv(f.back(), p);
    return {zp_scale(f, li, p), zp_scale(s0, li, p), zp_scale(t0, li, p)};
}

}  // namespace

std::pair<ZPoly, ZPoly> hensel_bifactor(const ZPoly& h, const ZPoly& Fbar,
                                        const ZPoly& Gbar, i64 p, int W) {
    i64 M = 1;
    for (int i = 0; i < W; ++i) M *= p;
    if (h.empty() || zmod(h.back(), M) != 1)
        throw LiftFails("hensel_bifactor: input must be monic");
    int dF = (int)Fbar.size() - 1, dG = (int)Gbar.size() - 1;
    if (dF + dG != (int)h.size() - 1)
        throw LiftFails("hensel_bifactor: degree mismatch");
    auto [d, A, B] = fp_egcd(Fbar, Gbar, p);
    if (d.size() != 1)
        throw LiftFails("hensel_bifactor: factors not coprime mod p");
    ZPoly F(Fbar), G(Gbar);
    for (auto& c : F) c = zmod(c, M);
    for (auto& c : G) c = zmod(c, M);
    i64 pk = 1;
    for (int k = 1; k < W; ++k) {
        pk *= p;
        ZPoly E = zp_sub(h, zp_mul(F, G, M), M);
        ZPoly Ek(E.size());
        for (size_t i = 0; i < E.size(); ++i) {
            if (E[i] % pk != 0)
                throw Error("hensel_bifactor: error term valuation dropped");
            Ek[i] = zmod(E[i] / pk, p);
        }
        zp_trim(Ek);
        if (Ek.empty()) continue;
        // solve dF*Gbar + dG*Fbar = Ek over F_p, deg dF < deg Fbar
        ZPoly dFc = fp_divrem(zp_mul(B, Ek, p), Fbar, p).second;
        ZPoly rem = zp_sub(Ek, zp_mul(dFc, Gbar, p), p);
        auto [dGc, zero] = fp_divrem(rem, Fbar, p);
        zp_trim(zero);
        if (!zero.empty()) throw Error("hensel_bifactor: division residue");
        F = zp_add(F, zp_scale(dFc, pk, M), M);
        G = zp_add(G, zp_scale(dGc, pk, M), M);
        F.resize(dF + 1, 0);
        G.resize(dG + 1, 0);
        F[dF] = 1;
        G[dG] = 1;
    }
    return {F, G};
}

UnitFactorSplit hensel_unit_factor(const IPoly& h, const CtxPtr& ctx) {
    i64 p = ctx->p(), M = ctx->pN();
    IPoly hh = h;
    ip_trim(hh);
    if (hh.empty() || hh.back() != 1)
        throw LiftFails("hensel_unit_factor: polynomial must be monic");
    int d = (int)hh.size() - 1;
    ZPoly hm = zp_from(hh, M);
    hm.resize(d + 1, 0);
    hm[d] = 1;
    int s = 0;
    while (s < d && zmod(hh[s], p) == 0) ++s;
    if (s == 0) return {hm, {1}};
    if (s == d) return {{1}, hm};
    ZPoly Fbar(d - s + 1), Gbar(s + 1, 0);
    for (int i = 0; i <= d - s; ++i) Fbar[i] = zmod(hh[i + s], p);
    Gbar[s] = 1;
    auto [F, G] = hensel_bifactor(hm, Fbar, Gbar, p, ctx->N());
    return {F, G};
}

HenselRoot hensel_root(const IPoly& f, i64 r0, const CtxPtr& ctx) {
    i64 p = ctx->p(), M = ctx->pN();
    int N = ctx->N();
    ZPoly fm = zp_from(f, M);
    ZPoly fd = zp_from(ip_derivative(f), M);
    i64 x = zmod(r0, M);
    auto val = [&](i64 c) { return (c == 0) ? (i64)N : int_valuation(zmod(c, M), p); };
    i64 k = val(zp_eval(fd, x, M));
    if (k >= N)
        throw LiftFails("hensel_root: derivative vanishes at working precision");
    if (val(zp_eval(fm, x, M)) <= 2 * k)
        throw LiftFails("hensel_root: |f(r0)| < |f'(r0)|^2 fails");
    i64 pk = ctx->ppow((int)k);
    for (int it = 0; it < 2 * N + 6; ++it) {
        i64 fx = zp_eval(fm, x, M);
        if (val(fx) >= N) break;
        i64 dfx = zp_eval(fd, x, M);
        if (val(dfx) != k) throw LiftFails("hensel_root: derivative valuation drifted");
        if (fx % pk != 0) throw LiftFails("hensel_root: lost divisibility");
        i64 unit = dfx / pk;
        i64 delta = (i64)((i128)(fx / pk) * mod_inv(unit, M) % M);
        x = zmod(x - delta, M);
    }
    if (val(zp_eval(fm, x, M)) < N)
        throw LiftFails("hensel_root: no convergence at working precision");
    int certified = N - (int)k;
    i64 res = zmod(x, ctx->ppow(certified));
    PadicNum value = ctx->from_res(ctx->r_from_int(x), (i64)ctx->e() * certified);
    return HenselRoot{res, certified, value};
}

}  // namespace iwff

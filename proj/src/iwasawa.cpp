#include "iwff/iwasawa.hpp"

#include <algorithm>

#include "iwff/errors.hpp"
#include "iwff/fq.hpp"

namespace iwff {

namespace {

void check_same(const IwasawaElem& x, const IwasawaElem& y) {
    if (x.ctx != y.ctx || x.n != y.n)
        throw InvalidInput("group-ring operands live at different levels");
}

void check_same(const IwasawaSeries& f, const IwasawaSeries& g) {
    if (f.ctx != g.ctx || f.D != g.D)
        throw InvalidInput("series operands have different context or truncation");
}

// polynomial helpers over O/p^N truncated at T^D
std::vector<ORes> ovec(const CtxPtr& ctx, size_t len) {
    return std::vector<ORes>(len, ctx->r_zero());
}

std::vector<ORes> omul(const CtxPtr& ctx, const std::vector<ORes>& x,
                       const std::vector<ORes>& y, size_t D) {
    auto r = ovec(ctx, D);
    for (size_t i = 0; i < x.size() && i < D; ++i) {
        if (ctx->r_is_zero(x[i])) continue;
        for (size_t j = 0; j < y.size() && i + j < D; ++j)
            r[i + j] = ctx->r_add(r[i + j], ctx->r_mul(x[i], y[j]));
    }
    return r;
}

}  // namespace

i64 gamma_order(i64 p, int n) {
    if (n < 0 || n > 3) throw InvalidInput("level must be in 0..3");
    i64 r = 1;
    for (int i = 0; i < n; ++i) r *= p;
    return r;
}

IwasawaElem iw_zero(const CtxPtr& ctx, int n) {
    IwasawaElem x;
    x.ctx = ctx;
    x.n = n;
    x.c.assign(static_cast<size_t>(gamma_order(ctx->p(), n)), ctx->r_zero());
    return x;
}

IwasawaElem iw_scalar(const CtxPtr& ctx, int n, const ORes& s) {
    auto x = iw_zero(ctx, n);
    x.c[0] = s;
    return x;
}

IwasawaElem iw_one(const CtxPtr& ctx, int n) { return iw_scalar(ctx, n, ctx->r_one()); }

IwasawaElem iw_gamma_pow(const CtxPtr& ctx, int n, i64 k) {
    auto x = iw_zero(ctx, n);
    i64 P = static_cast<i64>(x.c.size());
    x.c[static_cast<size_t>(((k % P) + P) % P)] = ctx->r_one();
    return x;
}

IwasawaElem iw_add(const IwasawaElem& x, const IwasawaElem& y) {
    check_same(x, y);
    auto r = x;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = x.ctx->r_add(x.c[k], y.c[k]);
    return r;
}

IwasawaElem iw_sub(const IwasawaElem& x, const IwasawaElem& y) {
    check_same(x, y);
    auto r = x;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = x.ctx->r_sub(x.c[k], y.c[k]);
    return r;
}

IwasawaElem iw_neg(const IwasawaElem& x) {
    auto r = x;
    for (auto& v : r.c) v = x.ctx->r_neg(v);
    return r;
}

IwasawaElem iw_mul(const IwasawaElem& x, const IwasawaElem& y) {
    check_same(x, y);
    auto r = iw_zero(x.ctx, x.n);
    size_t P = r.c.size();
    for (size_t i = 0; i < P; ++i) {
        if (x.ctx->r_is_zero(x.c[i])) continue;
        for (size_t j = 0; j < P; ++j) {
            size_t k = i + j < P ? i + j : i + j - P;
            r.c[k] = x.ctx->r_add(r.c[k], x.ctx->r_mul(x.c[i], y.c[j]));
        }
    }
    return r;
}

IwasawaElem iw_scale(const IwasawaElem& x, const ORes& s) {
    auto r = x;
    for (auto& v : r.c) v = x.ctx->r_mul(v, s);
    return r;
}

IwasawaElem iw_pow(IwasawaElem x, u64 k) {
    auto r = iw_one(x.ctx, x.n);
    while (k) {
        if (k & 1) r = iw_mul(r, x);
        k >>= 1;
        if (k) x = iw_mul(x, x);
    }
    return r;
}

bool iw_eq(const IwasawaElem& x, const IwasawaElem& y) {
    check_same(x, y);
    return x.c == y.c;
}

bool iw_is_zero(const IwasawaElem& x) {
    for (const auto& v : x.c)
        if (!x.ctx->r_is_zero(v)) return false;
    return true;
}

ORes iw_aug(const IwasawaElem& x) {
    auto s = x.ctx->r_zero();
    for (const auto& v : x.c) s = x.ctx->r_add(s, v);
    return s;
}

bool iw_is_unit(const IwasawaElem& x) {
    // The finite local ring (O/p^N)[Gamma_n] has maximal ideal (pi, gamma0-1);
    // x is a unit iff its augmentation is a unit of O/p^N.
    return x.ctx->r_is_unit(iw_aug(x));
}

IwasawaElem iw_inv(const IwasawaElem& x) {
    if (!iw_is_unit(x)) throw NotAUnit("group-ring element has non-unit augmentation");
    // Newton from the scalar seed aug(x)^{-1}: the initial error lies in the
    // nilpotent ideal (pi, gamma0-1), so y <- y(2 - xy) terminates exactly.
    auto y = iw_scalar(x.ctx, x.n, x.ctx->r_inv(iw_aug(x)));
    auto one = iw_one(x.ctx, x.n);
    for (int it = 0; it < 64; ++it) {
        auto xy = iw_mul(x, y);
        if (iw_eq(xy, one)) return y;
        y = iw_mul(y, iw_sub(iw_add(one, one), xy));
    }
    throw Error("group-ring inversion did not terminate");
}

IwasawaElem iw_sharp(const IwasawaElem& x) {
    auto r = iw_zero(x.ctx, x.n);
    size_t P = r.c.size();
    for (size_t k = 0; k < P; ++k) r.c[k == 0 ? 0 : P - k] = x.c[k];
    return r;
}

IwasawaElem iw_twist(const IwasawaElem& x, const ORes& c) {
    if (!x.ctx->r_is_unit(c)) throw NotAUnit("twist requires a unit character value");
    auto cinv = x.ctx->r_inv(c);
    auto r = x;
    auto pw = x.ctx->r_one();
    for (size_t k = 0; k < r.c.size(); ++k) {
        r.c[k] = x.ctx->r_mul(x.c[k], pw);
        pw = x.ctx->r_mul(pw, cinv);
    }
    return r;
}

IwasawaElem iw_project(const IwasawaElem& x, int lower) {
    if (lower > x.n) throw InvalidInput("projection target level exceeds source");
    auto r = iw_zero(x.ctx, lower);
    size_t Q = r.c.size();
    for (size_t k = 0; k < x.c.size(); ++k)
        r.c[k % Q] = x.ctx->r_add(r.c[k % Q], x.c[k]);
    return r;
}

IwasawaElem iw_norm_element(const CtxPtr& ctx, int n, int m) {
    if (m > n) throw InvalidInput("norm element needs m <= n");
    auto r = iw_zero(ctx, n);
    i64 pm = gamma_order(ctx->p(), m);
    i64 cnt = gamma_order(ctx->p(), n - m);
    for (i64 j = 0; j < cnt; ++j) r.c[static_cast<size_t>(j * pm)] = ctx->r_one();
    return r;
}

IwasawaElem iw_simple_element(const CtxPtr& ctx, int n, int k) {
    if (k < 1 || k > n) throw InvalidInput("simple element needs 1 <= k <= n");
    // Phi_{p^k}(gamma0) = sum_{j<p} gamma0^{j p^{k-1}}
    auto r = iw_zero(ctx, n);
    i64 step = gamma_order(ctx->p(), k - 1);
    for (i64 j = 0; j < ctx->p(); ++j) r.c[static_cast<size_t>(j * step)] = ctx->r_one();
    return r;
}

IwasawaElem iw_from_Tpoly(const CtxPtr& ctx, int n, const IPoly& f) {
    auto r = iw_zero(ctx, n);
    auto t = iw_sub(iw_gamma_pow(ctx, n, 1), iw_one(ctx, n));
    auto acc = iw_one(ctx, n);
    for (size_t j = 0; j < f.size(); ++j) {
        if (f[j] != 0) r = iw_add(r, iw_scale(acc, ctx->r_from_int(f[j])));
        if (j + 1 < f.size()) acc = iw_mul(acc, t);
    }
    return r;
}

ORes character_value(const CtxPtr& ctx, const PCharacter& om) {
    if (om.level < 0 || om.level > ctx->m())
        throw InvalidInput("character level exceeds root-of-unity supply (need m >= level)");
    i64 plev = gamma_order(ctx->p(), om.level);
    i64 t = ((om.t % plev) + plev) % plev;
    i64 j = t * (ctx->zeta_order() / plev);
    return ctx->r_zeta_pow(j);
}

ORes iw_eval(const IwasawaElem& x, const PCharacter& om) {
    if (om.level > x.n) throw InvalidInput("character level exceeds group level");
    auto eps = character_value(x.ctx, om);
    auto s = x.ctx->r_zero();
    auto pw = x.ctx->r_one();
    for (size_t k = 0; k < x.c.size(); ++k) {
        s = x.ctx->r_add(s, x.ctx->r_mul(x.c[k], pw));
        pw = x.ctx->r_mul(pw, eps);
    }
    return s;
}

PadicNum iw_eval_num(const IwasawaElem& x, const PCharacter& om) {
    return x.ctx->from_res(iw_eval(x, om));
}

std::vector<PCharacter> all_characters(i64 p, int level) {
    std::vector<PCharacter> r;
    i64 P = gamma_order(p, level);
    r.reserve(static_cast<size_t>(P));
    for (i64 t = 0; t < P; ++t) r.push_back({level, t});
    return r;
}

// ---- series ----

IwasawaSeries sr_zero(const CtxPtr& ctx, int D) {
    if (D < 1 || D > 4096) throw InvalidInput("series truncation out of range");
    IwasawaSeries f;
    f.ctx = ctx;
    f.D = D;
    f.a = ovec(ctx, static_cast<size_t>(D));
    return f;
}

IwasawaSeries sr_make(const CtxPtr& ctx, int D, std::vector<ORes> a) {
    auto f = sr_zero(ctx, D);
    if (a.size() > static_cast<size_t>(D)) throw InvalidInput("series data exceeds truncation");
    for (size_t i = 0; i < a.size(); ++i) f.a[i] = std::move(a[i]);
    return f;
}

IwasawaSeries sr_from_Tpoly(const CtxPtr& ctx, int D, const IPoly& f) {
    auto s = sr_zero(ctx, D);
    for (size_t i = 0; i < f.size(); ++i) {
        if (i >= static_cast<size_t>(D)) {
            if (f[i] != 0) throw InvalidInput("polynomial degree exceeds series truncation");
            continue;
        }
        s.a[i] = ctx->r_from_int(f[i]);
    }
    return s;
}

IwasawaSeries sr_add(const IwasawaSeries& f, const IwasawaSeries& g) {
    check_same(f, g);
    auto r = f;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = f.ctx->r_add(f.a[i], g.a[i]);
    return r;
}

IwasawaSeries sr_sub(const IwasawaSeries& f, const IwasawaSeries& g) {
    check_same(f, g);
    auto r = f;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = f.ctx->r_sub(f.a[i], g.a[i]);
    return r;
}

IwasawaSeries sr_mul(const IwasawaSeries& f, const IwasawaSeries& g) {
    check_same(f, g);
    auto r = f;
    r.a = omul(f.ctx, f.a, g.a, static_cast<size_t>(f.D));
    return r;
}

IwasawaSeries sr_scale(const IwasawaSeries& f, const ORes& s) {
    auto r = f;
    for (auto& v : r.a) v = f.ctx->r_mul(v, s);
    return r;
}

bool sr_eq(const IwasawaSeries& f, const IwasawaSeries& g) {
    check_same(f, g);
    return f.a == g.a;
}

IwasawaSeries iw_to_series(const IwasawaElem& x, int D) {
    auto f = sr_zero(x.ctx, D);
    // gamma0^k = (1+T)^k, accumulated incrementally
    auto acc = ovec(x.ctx, static_cast<size_t>(D));
    acc[0] = x.ctx->r_one();
    for (size_t k = 0; k < x.c.size(); ++k) {
        if (!x.ctx->r_is_zero(x.c[k]))
            for (size_t i = 0; i < acc.size(); ++i)
                f.a[i] = x.ctx->r_add(f.a[i], x.ctx->r_mul(acc[i], x.c[k]));
        if (k + 1 < x.c.size()) {
            // acc *= (1 + T)
            for (size_t i = acc.size() - 1; i >= 1; --i)
                acc[i] = x.ctx->r_add(acc[i], acc[i - 1]);
        }
    }
    return f;
}

namespace {

// Horner substitution f(s(T)) for a series s with s(0) = 0
IwasawaSeries sr_subst(const IwasawaSeries& f, const IwasawaSeries& s) {
    auto r = sr_zero(f.ctx, f.D);
    for (size_t i = f.a.size(); i-- > 0;) {
        r = sr_mul(r, s);
        r.a[0] = f.ctx->r_add(r.a[0], f.a[i]);
    }
    return r;
}

}  // namespace

IwasawaSeries sr_sharp(const IwasawaSeries& f) {
    // T -> (1+T)^{-1} - 1 = -T + T^2 - T^3 + ...
    auto s = sr_zero(f.ctx, f.D);
    i64 sign = -1;
    for (int i = 1; i < f.D; ++i, sign = -sign) s.a[static_cast<size_t>(i)] = f.ctx->r_from_int(sign);
    return sr_subst(f, s);
}

IwasawaSeries sr_twist(const IwasawaSeries& f, const ORes& c) {
    if (!f.ctx->r_is_unit(c)) throw NotAUnit("series twist requires a unit");
    auto cm1 = f.ctx->r_sub(c, f.ctx->r_one());
    if (!f.ctx->r_is_zero(cm1) && f.ctx->r_valuation(cm1) == 0)
        throw Unsupported("series twist needs v(c - 1) > 0; twist the group ring instead");
    // T -> c^{-1} - 1 + c^{-1} T
    auto cinv = f.ctx->r_inv(c);
    auto s = sr_zero(f.ctx, f.D);
    s.a[0] = f.ctx->r_sub(cinv, f.ctx->r_one());
    s.a[1] = cinv;
    return sr_subst(f, s);
}

PadicNum sr_eval(const IwasawaSeries& f, const PadicNum& x) {
    const auto& ctx = f.ctx;
    i64 vx;
    switch (x.st) {
        case PState::Zero:
            return ctx->from_res(f.a[0]);
        case PState::Reg:
            vx = x.v;
            break;
        default:
            vx = x.v;  // certified lower bound
            break;
    }
    if (vx <= 0) throw InvalidInput("series evaluation needs a point of positive valuation");
    PadicNum r = ctx->zero();
    for (size_t i = f.a.size(); i-- > 0;)
        r = ctx->add(ctx->mul(r, x), ctx->from_res(f.a[i]));
    // tail sum_{i >= D} a_i x^i has valuation >= D * vx
    return ctx->add(r, ctx->approx_zero(static_cast<i64>(f.D) * vx));
}

OrdLeading sr_ord_leading(const IwasawaSeries& f) {
    for (size_t i = 0; i < f.a.size(); ++i)
        if (!f.ctx->r_is_zero(f.a[i]))
            return {static_cast<int>(i), f.ctx->from_res(f.a[i])};
    throw PrecisionLoss("series is zero at working precision; order undetermined",
                        static_cast<i64>(f.ctx->e()) * f.ctx->N());
}

WPrep weierstrass_prep(const IwasawaSeries& f, int guard) {
    const auto& ctx = f.ctx;
    const i64 p = ctx->p();
    const int D = f.D;
    const i64 eN = static_cast<i64>(ctx->e()) * ctx->N();

    i64 mu = eN;
    for (const auto& v : f.a) mu = std::min(mu, ctx->r_valuation(v));
    if (mu >= eN)
        throw PrecisionLoss("weierstrass_prep: series vanishes at working precision", eN);

    // strip pi^mu; every coefficient loses the same number of p-digits
    int loss = 0;
    auto g = ovec(ctx, static_cast<size_t>(D));
    for (int i = 0; i < D; ++i) {
        auto [y, l] = ctx->r_div_pi_pow(f.a[static_cast<size_t>(i)], mu);
        g[static_cast<size_t>(i)] = y;
        loss = std::max(loss, l);
    }

    int lambda = -1;
    for (int i = 0; i < D; ++i)
        if (ctx->r_is_unit(g[static_cast<size_t>(i)])) {
            lambda = i;
            break;
        }
    if (lambda < 0 || lambda > D - 1 - guard)
        throw InsufficientTruncation(
            "weierstrass_prep: distinguished degree not below truncation guard");

    // reduction mod pi and the F_p power-series inverse B of the unit part
    std::vector<i64> B(static_cast<size_t>(D), 0);
    {
        std::vector<i64> ub(static_cast<size_t>(D), 0);
        for (int i = lambda; i < D; ++i)
            ub[static_cast<size_t>(i - lambda)] =
                ((g[static_cast<size_t>(i)].c[0] % p) + p) % p;
        B[0] = mod_inv(ub[0], p);
        for (int k = 1; k < D; ++k) {
            i64 s = 0;
            for (int j = 1; j <= k && j < D; ++j) s = (s + ub[static_cast<size_t>(j)] * B[static_cast<size_t>(k - j)]) % p;
            B[static_cast<size_t>(k)] = (p - s % p) * B[0] % p;
        }
    }
    auto Bo = ovec(ctx, static_cast<size_t>(D));
    for (int i = 0; i < D; ++i) Bo[static_cast<size_t>(i)] = ctx->r_from_int(B[static_cast<size_t>(i)]);

    auto P = ovec(ctx, static_cast<size_t>(lambda) + 1);
    P[static_cast<size_t>(lambda)] = ctx->r_one();
    auto U = ovec(ctx, static_cast<size_t>(D));
    for (int i = lambda; i < D; ++i) U[static_cast<size_t>(i - lambda)] = g[static_cast<size_t>(i)];

    // linear pi-adic lifting: each pass divides the defect g - P*U by pi
    bool done = false;
    for (i64 it = 0; it <= eN + 1 && !done; ++it) {
        auto PU = omul(ctx, P, U, static_cast<size_t>(D));
        auto E = ovec(ctx, static_cast<size_t>(D));
        done = true;
        for (int i = 0; i < D; ++i) {
            E[static_cast<size_t>(i)] = ctx->r_sub(g[static_cast<size_t>(i)], PU[static_cast<size_t>(i)]);
            if (!ctx->r_is_zero(E[static_cast<size_t>(i)])) done = false;
        }
        if (done) break;
        auto W = omul(ctx, Bo, E, static_cast<size_t>(D));
        for (int i = 0; i < lambda; ++i)
            P[static_cast<size_t>(i)] = ctx->r_add(P[static_cast<size_t>(i)], W[static_cast<size_t>(i)]);
        std::vector<ORes> Whigh(W.begin() + lambda, W.end());
        auto dU = omul(ctx, Whigh, U, static_cast<size_t>(D));
        for (int i = 0; i < D; ++i)
            U[static_cast<size_t>(i)] = ctx->r_add(U[static_cast<size_t>(i)], dU[static_cast<size_t>(i)]);
    }
    if (!done) throw Error("weierstrass_prep: lifting did not terminate");

    WPrep w;
    w.mu = mu;
    w.dist = std::move(P);
    w.unit = sr_make(ctx, D, std::move(U));
    w.digits = ctx->N() - loss;
    return w;
}

// ---- rank 2 ----

namespace {
void check_same2(const IwasawaElem2& x, const IwasawaElem2& y) {
    if (x.ctx != y.ctx || x.n != y.n)
        throw InvalidInput("rank-2 operands live at different levels");
}
}  // namespace

IwasawaElem2 iw2_zero(const CtxPtr& ctx, int n) {
    IwasawaElem2 x;
    x.ctx = ctx;
    x.n = n;
    i64 P = gamma_order(ctx->p(), n);
    x.c.assign(static_cast<size_t>(P * P), ctx->r_zero());
    return x;
}

IwasawaElem2 iw2_scalar(const CtxPtr& ctx, int n, const ORes& s) {
    auto x = iw2_zero(ctx, n);
    x.c[0] = s;
    return x;
}

IwasawaElem2 iw2_gamma(const CtxPtr& ctx, int n, int which, i64 k) {
    if (which != 1 && which != 2) throw InvalidInput("generator index must be 1 or 2");
    auto x = iw2_zero(ctx, n);
    i64 P = gamma_order(ctx->p(), n);
    i64 kk = ((k % P) + P) % P;
    x.c[static_cast<size_t>(which == 1 ? kk : P * kk)] = ctx->r_one();
    return x;
}

IwasawaElem2 iw2_add(const IwasawaElem2& x, const IwasawaElem2& y) {
    check_same2(x, y);
    auto r = x;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = x.ctx->r_add(x.c[k], y.c[k]);
    return r;
}

IwasawaElem2 iw2_mul(const IwasawaElem2& x, const IwasawaElem2& y) {
    check_same2(x, y);
    auto r = iw2_zero(x.ctx, x.n);
    size_t P = static_cast<size_t>(gamma_order(x.ctx->p(), x.n));
    for (size_t i = 0; i < x.c.size(); ++i) {
        if (x.ctx->r_is_zero(x.c[i])) continue;
        size_t i1 = i % P, i2 = i / P;
        for (size_t j = 0; j < y.c.size(); ++j) {
            size_t k1 = (i1 + j % P) % P, k2 = (i2 + j / P) % P;
            r.c[k1 + P * k2] = x.ctx->r_add(r.c[k1 + P * k2], x.ctx->r_mul(x.c[i], y.c[j]));
        }
    }
    return r;
}

IwasawaElem2 iw2_scale(const IwasawaElem2& x, const ORes& s) {
    auto r = x;
    for (auto& v : r.c) v = x.ctx->r_mul(v, s);
    return r;
}

ORes iw2_eval(const IwasawaElem2& x, const PCharacter& om1, const PCharacter& om2) {
    if (om1.level > x.n || om2.level > x.n)
        throw InvalidInput("character level exceeds group level");
    auto e1 = character_value(x.ctx, om1);
    auto e2 = character_value(x.ctx, om2);
    size_t P = static_cast<size_t>(gamma_order(x.ctx->p(), x.n));
    auto s = x.ctx->r_zero();
    auto p2 = x.ctx->r_one();
    for (size_t k2 = 0; k2 < P; ++k2) {
        auto p1 = p2;
        for (size_t k1 = 0; k1 < P; ++k1) {
            s = x.ctx->r_add(s, x.ctx->r_mul(x.c[k1 + P * k2], p1));
            p1 = x.ctx->r_mul(p1, e1);
        }
        p2 = x.ctx->r_mul(p2, e2);
    }
    return s;
}

std::vector<std::vector<i64>> zero_set(const IwasawaElem& x) {
    std::vector<std::vector<i64>> z;
    for (const auto& om : all_characters(x.ctx->p(), x.n))
        if (x.ctx->r_is_zero(iw_eval(x, om))) z.push_back({om.t});
    return z;
}

std::vector<std::vector<i64>> zero_set2(const IwasawaElem2& x) {
    std::vector<std::vector<i64>> z;
    auto chars = all_characters(x.ctx->p(), x.n);
    for (const auto& o1 : chars)
        for (const auto& o2 : chars)
            if (x.ctx->r_is_zero(iw2_eval(x, o1, o2))) z.push_back({o1.t, o2.t});
    return z;
}

}  // namespace iwff

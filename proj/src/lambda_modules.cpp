#include "iwff/lambda_modules.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

// product of two little-endian ORes polynomials, exact over O/p^N
std::vector<ORes> opoly_mul(const CtxPtr& ctx, const std::vector<ORes>& f,
                            const std::vector<ORes>& g) {
    std::vector<ORes> h(f.size() + g.size() - 1, ctx->r_zero());
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j)
            h[i + j] = ctx->r_add(h[i + j], ctx->r_mul(f[i], g[j]));
    return h;
}

ORes opoly_eval(const CtxPtr& ctx, const std::vector<ORes>& f, const ORes& x) {
    ORes v = ctx->r_zero();
    for (size_t i = f.size(); i-- > 0;) v = ctx->r_add(ctx->r_mul(v, x), f[i]);
    return v;
}

// coefficients of f(eps*(1+T) - 1), the omega^* substitution on polynomials
std::vector<ORes> opoly_twist(const CtxPtr& ctx, const std::vector<ORes>& f,
                              const ORes& eps) {
    const ORes b0 = ctx->r_sub(eps, ctx->r_one());
    std::vector<ORes> g{f.back()};
    for (size_t i = f.size() - 1; i-- > 0;) {
        std::vector<ORes> next(g.size() + 1, ctx->r_zero());
        for (size_t j = 0; j < g.size(); ++j) {
            next[j] = ctx->r_add(next[j], ctx->r_mul(g[j], b0));
            next[j + 1] = ctx->r_add(next[j + 1], ctx->r_mul(g[j], eps));
        }
        next[0] = ctx->r_add(next[0], f[i]);
        g = std::move(next);
    }
    return g;
}

IwasawaSeries series_from_poly(const CtxPtr& ctx, int D,
                               const std::vector<ORes>& f) {
    std::vector<ORes> a(static_cast<size_t>(D), ctx->r_zero());
    if ((int)f.size() > D)
        throw InvalidInput("polynomial degree exceeds series truncation");
    std::copy(f.begin(), f.end(), a.begin());
    return sr_make(ctx, D, std::move(a));
}

CharElement prep_to_char(const CtxPtr& ctx, const WPrep& w) {
    return CharElement{ctx, w.mu, w.dist, w.digits};
}

// Euler totient of p^k
i64 phi_pk(i64 p, int k) { return k == 0 ? 1 : (p - 1) * ppow_i64(p, k - 1); }

}  // namespace

ModulePresentation pres_from_factors(
    const CtxPtr& ctx, int D,
    std::vector<std::pair<IwasawaSeries, int>> factors) {
    int r = 0;
    for (auto& [xi, mult] : factors) {
        if (mult < 1) throw InvalidInput("factor multiplicity must be positive");
        if (xi.D != D) throw InvalidInput("factor truncation mismatch");
        r += mult;
    }
    if (r == 0) throw InvalidInput("empty factor list");
    ModulePresentation pres{ctx, r, {}, std::move(factors)};
    pres.rel.assign(static_cast<size_t>(r) * r, sr_zero(ctx, D));
    int k = 0;
    for (auto& [xi, mult] : pres.factors)
        for (int i = 0; i < mult; ++i, ++k)
            pres.rel[static_cast<size_t>(k) * r + k] = xi;
    return pres;
}

IwasawaSeries pres_det(const ModulePresentation& pres) {
    const int r = pres.r;
    if (r < 1 || (int)pres.rel.size() != r * r)
        throw InvalidInput("presentation matrix is not square");
    if (r > 10) throw EnumerationTooLarge("pres_det", 1ull << r, 1 << 10);
    const CtxPtr& ctx = pres.ctx;
    const int D = pres.rel[0].D;
    for (const auto& s : pres.rel)
        if (s.D != D) throw InvalidInput("relation entries at mixed truncations");
    // Laplace expansion along rows, minors keyed by the set of free columns
    std::map<u64, IwasawaSeries> memo;
    auto det = [&](auto&& self, u64 mask) -> IwasawaSeries {
        if (mask == 0) {
            auto one = sr_zero(ctx, D);
            one.a[0] = ctx->r_one();
            return one;
        }
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        const int row = r - __builtin_popcountll(mask);
        IwasawaSeries acc = sr_zero(ctx, D);
        int sign = 1;
        for (int j = 0; j < r; ++j) {
            if (!(mask >> j & 1)) continue;
            const auto& entry = pres.rel[static_cast<size_t>(row) * r + j];
            auto term = sr_mul(entry, self(self, mask & ~(1ull << j)));
            acc = sign > 0 ? sr_add(acc, term) : sr_sub(acc, term);
            sign = -sign;
        }
        memo.emplace(mask, acc);
        return acc;
    };
    return det(det, (r == 64 ? ~0ull : (1ull << r) - 1));
}

CharElement char_normalize(const IwasawaSeries& f, int guard) {
    try {
        return prep_to_char(f.ctx, weierstrass_prep(f, guard));
    } catch (const PrecisionLoss& e) {
        throw NotTorsionAtPrecision(e.bound);
    }
}

CharElement char_element(const ModulePresentation& pres, int guard) {
    return char_normalize(pres_det(pres), guard);
}

CharElement char_mul(const CharElement& x, const CharElement& y) {
    if (x.ctx != y.ctx) throw InvalidInput("characteristic elements over different rings");
    return CharElement{x.ctx, x.mu + y.mu, opoly_mul(x.ctx, x.dist, y.dist),
                       std::min(x.digits, y.digits)};
}

bool char_assoc_eq(const CharElement& x, const CharElement& y) {
    if (x.ctx != y.ctx || x.mu != y.mu || x.dist.size() != y.dist.size())
        return false;
    const CtxPtr& ctx = x.ctx;
    const i64 need = (i64)ctx->e() * std::min({x.digits, y.digits, ctx->N()});
    for (size_t i = 0; i < x.dist.size(); ++i)
        if (ctx->r_valuation(ctx->r_sub(x.dist[i], y.dist[i])) < need) return false;
    return true;
}

CharElement char_sharp(const CharElement& f, int D, int guard) {
    auto w = weierstrass_prep(sr_sharp(series_from_poly(f.ctx, D, f.dist)), guard);
    CharElement r = prep_to_char(f.ctx, w);
    r.mu += f.mu;
    r.digits = std::min(r.digits, f.digits);
    return r;
}

CharElement char_twist(const CharElement& f, const ORes& c, int D, int guard) {
    auto w = weierstrass_prep(sr_twist(series_from_poly(f.ctx, D, f.dist), c), guard);
    CharElement r = prep_to_char(f.ctx, w);
    r.mu += f.mu;
    r.digits = std::min(r.digits, f.digits);
    return r;
}

namespace {

ModulePresentation twist_with(const ModulePresentation& pres,
                              IwasawaSeries (*op)(const IwasawaSeries&, const ORes&),
                              const ORes& c) {
    ModulePresentation out{pres.ctx, pres.r, {}, {}};
    out.rel.reserve(pres.rel.size());
    for (const auto& s : pres.rel) out.rel.push_back(op(s, c));
    out.factors.reserve(pres.factors.size());
    for (const auto& [xi, mult] : pres.factors)
        out.factors.emplace_back(op(xi, c), mult);
    return out;
}

}  // namespace

ModulePresentation module_twist_sharp(const ModulePresentation& pres) {
    auto op = [](const IwasawaSeries& s, const ORes&) { return sr_sharp(s); };
    return twist_with(pres, op, pres.ctx->r_one());
}

ModulePresentation module_twist_phi(const ModulePresentation& pres, const ORes& c) {
    auto op = [](const IwasawaSeries& s, const ORes& u) { return sr_twist(s, u); };
    return twist_with(pres, op, c);
}

EulerChar euler_characteristic(const CharElement& f, const PCharacter& om) {
    const CtxPtr& ctx = f.ctx;
    const ORes eps = character_value(ctx, om);
    const auto g = opoly_twist(ctx, f.dist, eps);
    int ord = -1;
    for (size_t i = 0; i < g.size(); ++i)
        if (!ctx->r_is_zero(g[i])) {
            ord = (int)i;
            break;
        }
    if (ord < 0)
        throw PrecisionLoss("twisted characteristic element vanishes at precision",
                            (i64)ctx->e() * ctx->N());
    EulerChar ec;
    ec.ord = ord;
    ec.finite = (ord == 0);
    if (ec.finite) ec.exponent = f.mu + ctx->r_valuation(g[0]);
    return ec;
}

i64 euler_characteristic_bruteforce(const CharElement& f, const PCharacter& om,
                                    u64 cap) {
    const CtxPtr& ctx = f.ctx;
    const i64 p = ctx->p();
    const int N = ctx->N();
    const int e = ctx->e();
    const ORes eps = character_value(ctx, om);
    auto g = opoly_twist(ctx, f.dist, eps);
    const int lambda = (int)g.size() - 1;
    auto check_cap = [&](i64 total) {
        long double sz = powl((long double)p, (long double)total);
        if (total > 62 || sz > (long double)cap)
            throw EnumerationTooLarge("euler bruteforce",
                                      total > 62 ? ~0ull : (u64)sz, cap);
    };
    if (lambda == 0) {
        // M = Lambda/pi^mu: T acts injectively, M_Gamma = O/pi^mu
        check_cap(f.mu);
        return f.mu;
    }
    // companion matrix of the monic normalization of g, T acting on
    // O^lambda = Lambda_O/(g); integer expansion in the pi-power basis
    const ORes norm = ctx->r_inv(g[(size_t)lambda]);
    for (auto& c : g) c = ctx->r_mul(c, norm);
    std::vector<std::vector<ORes>> C((size_t)lambda,
                                     std::vector<ORes>((size_t)lambda, ctx->r_zero()));
    for (int j = 0; j + 1 < lambda; ++j) C[(size_t)j + 1][(size_t)j] = ctx->r_one();
    for (int i = 0; i < lambda; ++i)
        C[(size_t)i][(size_t)lambda - 1] = ctx->r_neg(g[(size_t)i]);

    const int E = e * lambda;
    Mat A(E, E);
    ORes pia = ctx->r_one();
    std::vector<ORes> pis;
    for (int a = 0; a < e; ++a) {
        pis.push_back(pia);
        pia = ctx->r_mul_pi(pia);
    }
    for (int j = 0; j < lambda; ++j)
        for (int a = 0; a < e; ++a)
            for (int i = 0; i < lambda; ++i) {
                const ORes img = ctx->r_mul(C[(size_t)i][(size_t)j], pis[(size_t)a]);
                for (int b = 0; b < e; ++b) A.at(i * e + b, j * e + a) = img.c[(size_t)b];
            }

    SmithForm S = smith_form(A, p, N);
    i64 total = f.mu;
    for (int v : S.exps) {
        if (v >= N)
            throw PrecisionLoss(
                "companion cokernel order not certified below p^N", (i64)e * N);
        total += v;
    }
    // all invariant factors below p^N: det is pi-power times unit, so the
    // T-action is injective on O^lambda and Ker(g_M) = 0 is certified
    check_cap(total);
    return total;
}

PartSplit part_split(const ModulePresentation& pres, int guard) {
    if (pres.factors.empty())
        throw InvalidInput("part_split needs a factored presentation");
    const CtxPtr& ctx = pres.ctx;
    PartSplit out;
    out.p_part = CharElement{ctx, 0, {ctx->r_one()}, ctx->N()};
    out.si_part = out.p_part;
    out.ns_part = out.p_part;

    for (int idx = 0; idx < (int)pres.factors.size(); ++idx) {
        const auto& [xi, mult] = pres.factors[(size_t)idx];
        CharElement c;
        try {
            c = char_normalize(xi, guard);
        } catch (const NotTorsionAtPrecision&) {
            throw Unclassified("factor vanishes at working precision", idx);
        }
        if (c.mu > 0) {
            out.p_idx.push_back(idx);
            out.p_part.mu += c.mu * mult;
            out.p_part.digits = std::min(out.p_part.digits, c.digits);
        }
        const int lambda = (int)c.dist.size() - 1;
        if (lambda == 0) continue;  // pure pi-power (or unit factor)

        // candidate root orders p^k with phi(p^k) = lambda
        std::vector<int> cands;
        if (lambda == 1) cands.push_back(0);
        {
            i64 q = ctx->p() == 2 ? lambda : (lambda % (ctx->p() - 1) == 0
                                                  ? lambda / (ctx->p() - 1)
                                                  : 0);
            if (q > 0) {
                int k = 1;
                while (q > 1 && q % ctx->p() == 0) {
                    q /= ctx->p();
                    ++k;
                }
                if (q == 1 && phi_pk(ctx->p(), k) == lambda) cands.push_back(k);
            }
        }
        bool simple = false, blocked = false;
        for (int k : cands) {
            if (k > ctx->m()) {
                blocked = true;  // orbit not representable at this level
                continue;
            }
            bool all_zero = true;
            if (k == 0) {
                all_zero = ctx->r_is_zero(c.dist[0]);
            } else {
                const i64 pk = ppow_i64(ctx->p(), k);
                const i64 shift = ppow_i64(ctx->p(), ctx->m() - k);
                for (i64 t = 1; t < pk && all_zero; ++t) {
                    if (t % ctx->p() == 0) continue;
                    const ORes x = ctx->r_sub(ctx->r_zeta_pow(t * shift), ctx->r_one());
                    all_zero = ctx->r_is_zero(opoly_eval(ctx, c.dist, x));
                }
            }
            if (all_zero) {
                simple = true;
                break;
            }
        }
        CharElement distpart{ctx, 0, c.dist, c.digits};
        CharElement pw = distpart;
        for (int i = 1; i < mult; ++i) pw = char_mul(pw, distpart);
        if (simple) {
            out.si_idx.push_back(idx);
            out.si_part = char_mul(out.si_part, pw);
        } else if (blocked) {
            throw Unclassified(
                "degree matches a root orbit above the coefficient level", idx);
        } else {
            out.ns_idx.push_back(idx);
            out.ns_part = char_mul(out.ns_part, pw);
        }
    }
    return out;
}

}  // namespace iwff

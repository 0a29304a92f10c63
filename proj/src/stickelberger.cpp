#include "iwff/stickelberger.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

int q_exponent(i64 p, i64 q) {
    if (q < 2) throw InvalidInput("constant field size must be at least 2");
    int k = 0;
    i64 t = q;
    while (t % p == 0) {
        t /= p;
        ++k;
    }
    if (t != 1 || k == 0)
        throw InvalidInput("constant field size " + std::to_string(q) +
                           " is not a power of the working prime " +
                           std::to_string(p));
    return k;
}

i64 powmod(i64 b, i64 k, i64 M) {
    i64 r = 1 % M;
    b = zmod(b, M);
    while (k) {
        if (k & 1) r = (i64)((i128)r * b % M);
        b = (i64)((i128)b * b % M);
        k >>= 1;
    }
    return r;
}

int moebius(int n) {
    int mu = 1;
    for (int d = 2; (i64)d * d <= n; ++d) {
        if (n % d) continue;
        n /= d;
        if (n % d == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// prod_{v in S} (1 - t^{deg v}), no pole adjustment
IPoly s_prod_poly(const PlaceSet& S) {
    IPoly A{1};
    for (int d : S) {
        if (d < 1) throw InvalidInput("place degree must be positive");
        IPoly f(d + 1, 0);
        f[0] = 1;
        f[d] = -1;
        A = ip_mul(A, f);
    }
    return A;
}

// s_adjust_poly(S) * P, the polynomial part of the closed form
IPoly closed_numerator(const BaseField& K, const PlaceSet& S) {
    return ip_mul(s_adjust_poly(S), K.P);
}

PadicNum eval_ipoly(const CtxPtr& ctx, const IPoly& f, const PadicNum& y) {
    PadicNum r = ctx->zero();
    for (int i = (int)f.size() - 1; i >= 0; --i)
        r = ctx->add(ctx->mul(r, y), ctx->from_int(f[i]));
    return r;
}

PadicNum safe_inv(const CtxPtr& ctx, const PadicNum& d, const char* what) {
    if (d.st == PState::Zero)
        throw PoleOrPrecision(std::string(what) + ": exact pole", true,
                              (i64)ctx->e() * ctx->N());
    if (d.st == PState::AZero)
        throw PoleOrPrecision(
            std::string(what) + ": denominator indistinguishable from zero",
            false, d.v);
    return ctx->inv(d);
}

i64 iw_min_valuation(const IwasawaElem& x) {
    i64 best = (i64)x.ctx->e() * x.ctx->N();
    for (const auto& r : x.c) best = std::min(best, x.ctx->r_valuation(r));
    return best;
}

// prod_i (1 - alpha_i^{-1} gamma0^{-1})(1 - alpha_i^{-1} gamma0)
IwasawaElem delta_element(const CtxPtr& ctx, const FrobeniusData& fr, int n) {
    IwasawaElem d = iw_one(ctx, n);
    for (const auto& al : fr.alphas) {
        ORes ai = ctx->to_res(ctx->inv(al));
        IwasawaElem f1 =
            iw_sub(iw_one(ctx, n), iw_scale(iw_gamma_pow(ctx, n, -1), ai));
        IwasawaElem f2 =
            iw_sub(iw_one(ctx, n), iw_scale(iw_gamma_pow(ctx, n, 1), ai));
        d = iw_mul(d, iw_mul(f1, f2));
    }
    return d;
}

i64 character_order(i64 p, const PCharacter& om) {
    i64 Pn = gamma_order(p, om.level);
    return Pn / std::gcd(Pn, om.t < 0 ? -om.t : om.t);
}

}  // namespace

BaseField base_field_rational(i64 p, i64 q) {
    return BaseField{IPoly{1}, 0, q, q_exponent(p, q)};
}

BaseField base_field_from_curve(i64 p, const CurveModel& X, i64 cap) {
    BaseField K;
    K.P = zeta_numerator(X, cap);
    K.kappa = curve_genus(X);
    K.q = curve_q(X);
    K.qexp = q_exponent(p, K.q);
    return K;
}

IPoly s_adjust_poly(const PlaceSet& S) {
    IPoly A = s_prod_poly(S);
    if (S.empty()) return A;
    // divide by (1 - t); exact since every factor vanishes at t = 1
    int dA = ip_deg(A);
    IPoly Q(std::max(dA, 1), 0);
    i64 carry = 0;
    for (int k = 0; k < dA; ++k) {
        carry += A[k];
        Q[k] = carry;
    }
    if (carry + A[dA] != 0) throw Error("s_adjust_poly: division not exact");
    ip_trim(Q);
    return Q;
}

std::vector<i64> place_degree_counts(const BaseField& K, int emax) {
    std::vector<i64> S = zeta_power_sums(K.P, K.q, emax);  // S[r-1] = sum w^r
    std::vector<i64> N(emax + 1, 0);
    i64 qr = 1;
    for (int r = 1; r <= emax; ++r) {
        qr = checked_mul(qr, K.q);
        N[r] = qr + 1 - S[r - 1];
    }
    std::vector<i64> b(emax + 1, 0);
    for (int e = 1; e <= emax; ++e) {
        i64 acc = 0;
        for (int d = 1; d <= e; ++d)
            if (e % d == 0) acc += moebius(e / d) * N[d];
        if (acc % e != 0) throw Error("place counts fail Moebius integrality");
        b[e] = acc / e;
        if (b[e] < 0) throw Error("negative place count");
    }
    return b;
}

ThetaSeries theta_series(const CtxPtr& ctx, const BaseField& K,
                         const PlaceSet& S, int n, int Du) {
    if (Du < 0) throw InvalidInput("negative truncation degree");
    q_exponent(ctx->p(), K.q);
    IPoly SP = closed_numerator(K, S);
    i64 pN = ctx->ppow(ctx->N());
    ThetaSeries t{ctx, n, {}};
    t.c.reserve(Du + 1);
    for (int k = 0; k <= Du; ++k) {
        i64 acc = 0;
        for (int j = 0; j <= std::min(k, ip_deg(SP)); ++j)
            acc = (i64)((acc + (i128)zmod(SP[j], pN) * powmod(K.q, k - j, pN)) %
                        pN);
        t.c.push_back(iw_scale(iw_gamma_pow(ctx, n, k), ctx->r_from_int(acc)));
    }
    return t;
}

namespace {

using UPoly = std::vector<IwasawaElem>;  // truncated polynomial in u

UPoly upoly_mul(const CtxPtr& ctx, int n, const UPoly& A, const UPoly& B,
                int Du) {
    UPoly C((size_t)Du + 1, iw_zero(ctx, n));
    for (int i = 0; i <= Du; ++i) {
        if (iw_is_zero(A[i])) continue;
        for (int j = 0; i + j <= Du; ++j) {
            if (iw_is_zero(B[j])) continue;
            C[i + j] = iw_add(C[i + j], iw_mul(A[i], B[j]));
        }
    }
    return C;
}

}  // namespace

ThetaSeries theta_series_oracle(const CtxPtr& ctx, const BaseField& K,
                                const PlaceSet& S, int n, int Du) {
    if (Du < 0) throw InvalidInput("negative truncation degree");
    std::vector<i64> b = place_degree_counts(K, Du);
    std::vector<i64> removed(Du + 1, 0);
    for (int d : S) {
        if (d < 1 || d > Du)
            throw InvalidInput(
                "S contains a place of degree beyond the truncation");
        ++removed[d];
    }
    UPoly T((size_t)Du + 1, iw_zero(ctx, n));
    T[0] = iw_one(ctx, n);
    for (int e = 1; e <= Du; ++e) {
        i64 M = b[e] - removed[e];
        if (M < 0)
            throw InvalidInput("S removes more degree-" + std::to_string(e) +
                               " places than the base field has");
        if (M == 0) continue;
        // (1 - gamma0^e u^e)^{-M} by binary exponentiation of the truncated
        // geometric series
        UPoly F((size_t)Du + 1, iw_zero(ctx, n));
        for (int j = 0; e * j <= Du; ++j)
            F[(size_t)e * j] = iw_gamma_pow(ctx, n, (i64)e * j);
        UPoly acc((size_t)Du + 1, iw_zero(ctx, n));
        acc[0] = iw_one(ctx, n);
        i64 m = M;
        while (m) {
            if (m & 1) acc = upoly_mul(ctx, n, acc, F, Du);
            m >>= 1;
            if (m) F = upoly_mul(ctx, n, F, F, Du);
        }
        T = upoly_mul(ctx, n, T, acc, Du);
    }
    if (S.empty()) {
        UPoly G((size_t)Du + 1, iw_zero(ctx, n));
        G[0] = iw_one(ctx, n);
        if (Du >= 1) G[1] = iw_neg(iw_gamma_pow(ctx, n, 1));
        T = upoly_mul(ctx, n, T, G, Du);
    }
    return ThetaSeries{ctx, n, std::move(T)};
}

bool theta_eq(const ThetaSeries& a, const ThetaSeries& b) {
    if (a.n != b.n || a.c.size() != b.c.size()) return false;
    for (size_t k = 0; k < a.c.size(); ++k)
        if (!iw_eq(a.c[k], b.c[k])) return false;
    return true;
}

ThetaSeries theta_project(const ThetaSeries& t, int lower) {
    ThetaSeries r{t.ctx, lower, {}};
    r.c.reserve(t.c.size());
    for (const auto& ck : t.c) r.c.push_back(iw_project(ck, lower));
    return r;
}

bool theta_decay_holds(const ThetaSeries& t, const BaseField& K,
                       const PlaceSet& S) {
    int start = ip_deg(closed_numerator(K, S));
    i64 prev = -1;
    for (int k = start; k < (int)t.c.size(); ++k) {
        i64 v = iw_min_valuation(t.c[k]);
        if (prev >= 0 && v < prev) return false;
        prev = v;
    }
    return true;
}

IwasawaElem theta_partial_sum(const ThetaSeries& t) {
    IwasawaElem s = iw_zero(t.ctx, t.n);
    for (const auto& ck : t.c) s = iw_add(s, ck);
    return s;
}

IwasawaElem theta_at_unit(const CtxPtr& ctx, const BaseField& K,
                          const PlaceSet& S, int n, const ORes& x) {
    if (!ctx->r_is_unit(x))
        throw InvalidInput("theta_at_unit needs a unit substitution point");
    IPoly SP = closed_numerator(K, S);
    IwasawaElem G = iw_zero(ctx, n);
    ORes xp = ctx->r_one();
    for (int j = 0; j <= ip_deg(SP); ++j) {
        if (SP[j] != 0)
            G = iw_add(G, iw_scale(iw_gamma_pow(ctx, n, j),
                                   ctx->r_scale(xp, SP[j])));
        xp = ctx->r_mul(xp, x);
    }
    // 1 - q x gamma0 is a unit: its augmentation 1 - qx is one
    IwasawaElem H = iw_sub(
        iw_one(ctx, n), iw_scale(iw_gamma_pow(ctx, n, 1), ctx->r_scale(x, K.q)));
    return iw_mul(G, iw_inv(H));
}

IwasawaElem stickelberger_element(const CtxPtr& ctx, const BaseField& K,
                                  const PlaceSet& S, int n) {
    return theta_at_unit(ctx, K, S, n, ctx->r_one());
}

PadicNum dirichlet_l_value(const CtxPtr& ctx, const BaseField& K,
                           const PlaceSet& S, const ORes& eps,
                           const PadicNum& x) {
    PadicNum epsx = ctx->mul(ctx->from_res(eps), x);
    PadicNum num = ctx->mul(eval_ipoly(ctx, K.P, epsx),
                            eval_ipoly(ctx, s_prod_poly(S), epsx));
    PadicNum d1 = ctx->sub(ctx->one(), epsx);
    PadicNum d2 = ctx->sub(ctx->one(), ctx->mul(ctx->from_int(K.q), epsx));
    return ctx->mul(num, ctx->mul(safe_inv(ctx, d1, "L at 1 - eps x"),
                                  safe_inv(ctx, d2, "L at 1 - q eps x")));
}

PadicNum dirichlet_l_star_value(const CtxPtr& ctx, const BaseField& K,
                                const PlaceSet& S, const ORes& eps,
                                const PadicNum& x) {
    PadicNum epsx = ctx->mul(ctx->from_res(eps), x);
    PadicNum num = eval_ipoly(ctx, closed_numerator(K, S), epsx);
    PadicNum d2 = ctx->sub(ctx->one(), ctx->mul(ctx->from_int(K.q), epsx));
    return ctx->mul(num, safe_inv(ctx, d2, "L* at 1 - q eps x"));
}

PadicLData padic_L(const CtxPtr& ctx, const FrobeniusData& fr,
                   const BaseField& K, const PlaceSet& S, int n) {
    if (fr.q != K.q)
        throw InvalidInput("Frobenius data and base field disagree on q");
    IwasawaElem tp = iw_one(ctx, n);
    for (const auto& al : fr.alphas) {
        ORes ai = ctx->to_res(ctx->inv(al));
        tp = iw_mul(tp, iw_sharp(theta_at_unit(ctx, K, S, n, ai)));
    }
    IwasawaElem th = iw_mul(tp, iw_sharp(tp));

    ORes pa = ctx->r_one();
    for (const auto& al : fr.alphas) pa = ctx->r_mul(pa, ctx->to_res(al));
    i64 expo = 2 * (i64)K.kappa - 2;
    ORes pa_pow = expo >= 0 ? ctx->r_pow(pa, (u64)expo)
                            : ctx->r_pow(ctx->r_inv(pa), (u64)(-expo));
    IwasawaElem num =
        iw_scale(iw_mul(iw_gamma_pow(ctx, n, (i64)fr.g * expo), th), pa_pow);
    IwasawaElem den = delta_element(ctx, fr, n);
    // q^{g(kappa-1)} belongs to the denominator; negative powers move to the
    // numerator to keep both sides in the ring
    i64 qpw = (i64)fr.g * (K.kappa - 1) * fr.qexp;  // power of p
    i64 mag = qpw >= 0 ? qpw : -qpw;
    if (mag >= ctx->N())
        throw PrecisionLoss("q-power in Ltilde exhausts the working precision",
                            mag * ctx->e());
    ORes qres = ctx->r_from_int(ctx->ppow((int)mag));
    if (qpw >= 0)
        den = iw_scale(den, qres);
    else
        num = iw_scale(num, qres);
    return PadicLData{std::move(tp), std::move(th),
                      IwasawaFraction{std::move(num), std::move(den)}};
}

PadicNum padic_L_value(const PadicLData& L, const PCharacter& om) {
    const CtxPtr& ctx = L.Ltilde.num.ctx;
    PadicNum nv = ctx->from_res(iw_eval(L.Ltilde.num, om));
    PadicNum dv = ctx->from_res(iw_eval(L.Ltilde.den, om));
    return ctx->mul(nv, safe_inv(ctx, dv, "omega(den) in padic_L_value"));
}

PadicNum twisted_hasse_weil(const CtxPtr& ctx, const FrobeniusData& fr,
                            const BaseField& K, const PlaceSet& S,
                            const PCharacter& om) {
    if (fr.q != K.q)
        throw InvalidInput("Frobenius data and base field disagree on q");
    ORes eps = character_value(ctx, om);
    PadicNum L = ctx->one();
    for (int i = 0; i < fr.g; ++i) {
        L = ctx->mul(L, dirichlet_l_value(ctx, K, S, eps,
                                          ctx->inv(fr.alphas[i])));
        L = ctx->mul(L, dirichlet_l_value(ctx, K, S, eps,
                                          ctx->inv(fr.betas[i])));
    }
    return L;
}

FudgeFactors fudge_factors(const CtxPtr& ctx, const FrobeniusData& fr,
                           const BaseField& K, const PlaceSet& S, int n,
                           const PCharacter& om) {
    ORes eps = character_value(ctx, om);
    FudgeFactors F{ctx->one(), iw_one(ctx, n), ctx->one(), ctx->one(), true};
    F.tau = ctx->pow(ctx->from_res(eps), 2 - 2 * (i64)K.kappa);
    if (S.empty()) F.delta_S = delta_element(ctx, fr, n);
    ORes epsi = ctx->r_inv(eps);
    for (int i = 0; i < fr.g; ++i) {
        ORes ai = ctx->to_res(ctx->inv(fr.alphas[i]));
        PadicNum bi = ctx->inv(fr.betas[i]);
        for (int d : S) {
            ORes numr = ctx->r_sub(ctx->r_one(),
                                   ctx->r_mul(ctx->r_pow(epsi, (u64)d),
                                              ctx->r_pow(ai, (u64)d)));
            PadicNum den = ctx->sub(
                ctx->one(), ctx->mul(ctx->from_res(ctx->r_pow(eps, (u64)d)),
                                     ctx->pow(bi, d)));
            F.xi = ctx->mul(F.xi, ctx->mul(ctx->from_res(numr),
                                           safe_inv(ctx, den, "Xi factor")));
        }
    }
    ORes pa_inv = ctx->r_one();
    for (const auto& al : fr.alphas)
        pa_inv = ctx->r_mul(pa_inv, ctx->to_res(ctx->inv(al)));
    // (q^{g/2} prod alpha_i^{-1})^{2 kappa - 2}: the q-exponent g(kappa-1)
    // is integral, so no half power materializes (d_omega = 0)
    F.power = ctx->mul_ppow(ctx->pow(ctx->from_res(pa_inv), 2 * (i64)K.kappa - 2),
                            (i64)fr.g * (K.kappa - 1) * fr.qexp);
    F.half_power_ok = true;
    return F;
}

PadicAgreement relative_agreement(const CtxPtr& ctx, const PadicNum& lhs,
                                  const PadicNum& rhs, int slack) {
    const i64 e = ctx->e();
    const i64 eN = e * ctx->N();
    PadicNum d = ctx->sub(lhs, rhs);
    i64 bound = (d.st == PState::Zero) ? 2 * eN : d.v;
    i64 ref = (lhs.st == PState::Zero) ? eN : lhs.v;
    PadicAgreement a;
    a.diff_bound = bound;
    i64 rel = bound - ref;
    a.pass = rel >= e * (ctx->N() - slack);
    i64 digits = rel >= 0 ? rel / e : 0;
    a.rel_digits = (int)std::min<i64>(digits, ctx->N());
    return a;
}

namespace {

InterpReport interpolation_sweep(const CtxPtr& ctx, const FrobeniusData& fr,
                                 const BaseField& K, const PlaceSet& S, int n,
                                 int slack, bool theorem_form) {
    InterpReport rep;
    PadicLData L = padic_L(ctx, fr, K, S, n);
    for (const auto& om : all_characters(ctx->p(), n)) {
        InterpRecord r;
        r.omega_level = om.level;
        r.omega_exponent = om.t;
        r.omega_order = character_order(ctx->p(), om);
        try {
            PadicNum lhs, rhs;
            if (theorem_form) {
                lhs = ctx->from_res(iw_eval(L.theta, om));
                FudgeFactors F = fudge_factors(ctx, fr, K, S, n, om);
                if (!F.half_power_ok)
                    throw Unsupported("half-integral q power in fudge factor");
                rhs = ctx->mul(ctx->pow(F.tau, fr.g), F.power);
                rhs = ctx->mul(rhs, ctx->from_res(iw_eval(F.delta_S, om)));
                rhs = ctx->mul(rhs, F.xi);
                rhs = ctx->mul(rhs, twisted_hasse_weil(ctx, fr, K, S, om));
            } else {
                lhs = padic_L_value(L, om);
                rhs = twisted_hasse_weil(ctx, fr, K, S, om);
            }
            r.lhs = ctx->to_string(lhs);
            r.rhs = ctx->to_string(rhs);
            PadicAgreement a = relative_agreement(ctx, lhs, rhs, slack);
            r.diff_bound = a.diff_bound;
            r.rel_digits = a.rel_digits;
            r.pass = a.pass;
        } catch (const PoleOrPrecision& ex) {
            r.pass = false;
            r.note = ex.what();
        } catch (const Unsupported& ex) {
            r.pass = false;
            r.note = ex.what();
        }
        rep.all_pass = rep.all_pass && r.pass;
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

}  // namespace

InterpReport interpolation_check(const CtxPtr& ctx, const FrobeniusData& fr,
                                 const BaseField& K, int n, int slack) {
    return interpolation_sweep(ctx, fr, K, PlaceSet{}, n, slack, false);
}

InterpReport interpolation_check_theorem(const CtxPtr& ctx,
                                         const FrobeniusData& fr,
                                         const BaseField& K, const PlaceSet& S,
                                         int n, int slack) {
    return interpolation_sweep(ctx, fr, K, S, n, slack, true);
}

FEReport functional_equation_check(const CtxPtr& ctx, const BaseField& K,
                                   const std::vector<PCharacter>& oms,
                                   int samples, int slack) {
    FEReport rep;
    rep.poly_identity = zeta_fe_symmetric(K.P, K.q);
    rep.all_pass = rep.poly_identity;
    for (const auto& om : oms) {
        ORes eps = character_value(ctx, om);
        ORes epsi = ctx->r_inv(eps);
        for (int j = 1; j <= samples; ++j) {
            FERecord r;
            r.omega_level = om.level;
            r.omega_exponent = om.t;
            PadicNum x = ctx->mul_ppow(ctx->from_int(j), j);
            r.x = ctx->to_string(x);
            try {
                PadicNum lhs = dirichlet_l_value(ctx, K, {}, epsi, x);
                // 1/(q x), then the epsilon and x power fudges
                PadicNum y = ctx->mul_ppow(ctx->inv(x), -K.qexp);
                PadicNum rhs = dirichlet_l_value(ctx, K, {}, eps, y);
                rhs = ctx->mul(
                    rhs, ctx->pow(ctx->from_res(eps), 2 - 2 * (i64)K.kappa));
                rhs = ctx->mul(rhs,
                               ctx->mul_ppow(ctx->pow(x, 2 * (i64)K.kappa - 2),
                                             (i64)K.qexp * (K.kappa - 1)));
                PadicAgreement a = relative_agreement(ctx, lhs, rhs, slack);
                r.rel_digits = a.rel_digits;
                r.pass = a.pass;
            } catch (const PoleOrPrecision& ex) {
                r.pass = false;
                r.note = ex.what();
            }
            rep.all_pass = rep.all_pass && r.pass;
            rep.rows.push_back(std::move(r));
        }
    }
    return rep;
}

bool theta_certified_nonzero(const IwasawaElem& theta) {
    return !iw_is_zero(theta);
}

}  // namespace iwff

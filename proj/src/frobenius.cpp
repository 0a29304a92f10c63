#include "iwff/frobenius.hpp"

#include <algorithm>

#include "iwff/errors.hpp"
#include "iwff/fq.hpp"

namespace iwff {

FrobeniusData frobenius_from_charpoly(const CtxPtr& ctx, const IPoly& h, i64 q) {
    const i64 p = ctx->p();
    int dg = ip_deg(h);
    if (dg < 2 || dg % 2 != 0) throw InvalidInput("charpoly must have even degree >= 2");
    if (h[static_cast<size_t>(dg)] != 1) throw InvalidInput("charpoly must be monic");
    int g = dg / 2;

    int qexp = 0;
    {
        i64 r = q;
        while (r > 1 && r % p == 0) {
            r /= p;
            ++qexp;
        }
        if (r != 1 || qexp == 0)
            throw InvalidInput("base field size must be a power of the working prime");
    }
    if (h[0] != ipow(q, static_cast<u64>(g)))
        throw BadModel("charpoly constant term must be q^g");
    for (int k = 0; k <= g; ++k)
        if (h[static_cast<size_t>(k)] !=
            checked_mul(ipow(q, static_cast<u64>(g - k)), h[static_cast<size_t>(2 * g - k)]))
            throw BadModel("charpoly is not q-symmetric");

    auto split = hensel_unit_factor(h, ctx);
    if (ip_deg(split.h_unit) != g)
        throw NotOrdinary("unit eigenvalue count differs from the dimension");

    // distinct simple roots of the unit part over F_p, lifted one by one
    const IPoly& hu = split.h_unit;
    auto hu_p = zp_from(hu, p);
    auto hud_p = zp_from(ip_derivative(hu), p);
    std::vector<i64> roots;
    for (i64 r = 1; r < p; ++r)
        if (zp_eval(hu_p, r, p) == 0) roots.push_back(r);
    if (static_cast<int>(roots.size()) != g)
        throw LiftFails("unit eigenvalues do not split over Z_p at this precision");
    for (i64 r : roots)
        if (zp_eval(hud_p, r, p) == 0) throw LiftFails("repeated unit eigenvalue mod p");

    FrobeniusData fr;
    fr.ctx = ctx;
    fr.q = q;
    fr.qexp = qexp;
    fr.g = g;
    fr.h = h;
    for (i64 r : roots) fr.alphas.push_back(hensel_root(hu, r, ctx).value);
    std::sort(fr.alphas.begin(), fr.alphas.end(),
              [&](const PadicNum& x, const PadicNum& y) { return x.u.c < y.u.c; });
    for (const auto& a : fr.alphas)
        fr.betas.push_back(ctx->mul_ppow(ctx->inv(a), qexp));
    return fr;
}

FrobeniusData frobenius_from_elliptic(const CtxPtr& ctx, const CurveModel& E, i64 cap) {
    if (E.kind != CurveModel::Kind::Elliptic && curve_genus(E) != 1)
        throw InvalidInput("elliptic Frobenius needs a genus-1 model");
    i64 q = curve_q(E);
    i64 a = q + 1 - count_points(E, 1, cap);
    return frobenius_from_charpoly(ctx, {q, -a, 1}, q);
}

FrobeniusData frobenius_from_curve(const CtxPtr& ctx, const CurveModel& C, i64 cap) {
    auto P = zeta_numerator(C, cap);
    return frobenius_from_charpoly(ctx, frobenius_charpoly_from_zeta(P), curve_q(C));
}

IPoly charpoly_product(const std::vector<IPoly>& parts) {
    if (parts.empty()) throw InvalidInput("empty charpoly product");
    IPoly h = {1};
    for (const auto& f : parts) h = ip_mul(h, f);
    return h;
}

i64 frobenius_trace(const FrobeniusData& fr) {
    return -fr.h[static_cast<size_t>(2 * fr.g - 1)];
}

}  // namespace iwff

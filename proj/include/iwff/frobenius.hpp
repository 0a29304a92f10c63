#pragma once
#include <vector>

#include "iwff/curve.hpp"
#include "iwff/padic.hpp"

namespace iwff {

// Frobenius data of a constant ordinary abelian variety A/F_q inside a
// p-adic working context: the characteristic polynomial h (monic, degree
// 2g, q-symmetric) together with its g unit eigenvalues alpha_i, certified
// by Hensel lifting, and the complementary beta_i = q / alpha_i.
// alphas are sorted by mantissa (pi-basis coefficients, lexicographic).
struct FrobeniusData {
    CtxPtr ctx;
    i64 q = 0;
    int qexp = 0;  // q = p^qexp
    int g = 0;
    IPoly h;
    std::vector<PadicNum> alphas;
    std::vector<PadicNum> betas;
};

// Validates shape (monic even degree, constant term q^g, q-symmetry),
// splits off the unit part, and lifts its roots.  Throws NotOrdinary when
// the unit eigenvalue count differs from g, LiftFails when the unit part
// does not split into distinct simple roots over Z_p.
FrobeniusData frobenius_from_charpoly(const CtxPtr& ctx, const IPoly& h, i64 q);

// h = x^2 - a x + q from the point count of an elliptic curve
FrobeniusData frobenius_from_elliptic(const CtxPtr& ctx, const CurveModel& E,
                                      i64 cap = kDefaultEnumCap);

// charpoly from any curve model via its zeta numerator (A = Jacobian)
FrobeniusData frobenius_from_curve(const CtxPtr& ctx, const CurveModel& C,
                                   i64 cap = kDefaultEnumCap);

// product of characteristic polynomials (A a product of smaller varieties)
IPoly charpoly_product(const std::vector<IPoly>& parts);

i64 frobenius_trace(const FrobeniusData& fr);  // sum of all eigenvalues

}  // namespace iwff

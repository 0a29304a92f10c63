#pragma once
#include <optional>
#include <string>
#include <vector>

#include "iwff/fq.hpp"
#include "iwff/intpoly.hpp"

namespace iwff {

// A curve over F_q presented in one of four shapes:
//   P1            the projective line
//   Elliptic      y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
//   Hyperelliptic y^2 = f(x), 3 <= deg f <= 6, odd characteristic
//   RawCounts     point counts N_1..N_r supplied directly (with a genus)
struct CurveModel {
    enum class Kind { P1, Elliptic, Hyperelliptic, RawCounts };
    Kind kind = Kind::P1;
    FqField F{2, 1};
    std::vector<FqElem> a;    // elliptic: a1, a2, a3, a4, a6
    FqPoly f;                  // hyperelliptic right-hand side
    int genus_raw = 0;         // RawCounts only
    std::vector<i64> counts;   // RawCounts only: N_1, N_2, ...
};

CurveModel curve_p1(const FqField& F);
CurveModel curve_elliptic(const FqField& F, const std::vector<FqElem>& a15);
CurveModel curve_elliptic_ints(const FqField& F, const std::vector<i64>& a15);
CurveModel curve_hyperelliptic(const FqField& F, const FqPoly& f);
CurveModel curve_raw(i64 q, int genus, const std::vector<i64>& counts);

int curve_genus(const CurveModel& C);
i64 curve_q(const CurveModel& C);

// BadModel if the equations are singular (elliptic: discriminant zero;
// hyperelliptic: f not squarefree or bad degree/characteristic).
void curve_validate(const CurveModel& C);

// #C(F_{q^r}), projective points (points at infinity included).
// EnumerationTooLarge beyond the cap.
i64 count_points(const CurveModel& C, int r, i64 cap = kDefaultEnumCap);

// Numerator P(t) of Z(C/F_q, t) = P(t) / ((1-t)(1-qt)), degree 2*genus,
// built from N_1..N_g by the Newton recurrence and completed by the
// functional equation c_{2g-k} = q^{g-k} c_k.  Counts beyond N_g that are
// affordable under the cap (or supplied raw) are recomputed from P and
// cross-checked; disagreement raises BadModel.
IPoly zeta_numerator(const CurveModel& C, i64 cap = kDefaultEnumCap);

// inverse-root power sums S_r = sum alpha_i^r extended by the linear
// recurrence of P; counts satisfy N_r = q^r + 1 - S_r
std::vector<i64> zeta_power_sums(const IPoly& P, i64 q, int rmax);

// exact two-term functional equation on coefficients
bool zeta_fe_symmetric(const IPoly& P, i64 q);
// all reciprocal roots on |alpha| = sqrt(q), within tol (floating check)
bool zeta_rh_holds(const IPoly& P, i64 q, double tol = 1e-9);

// Frobenius characteristic polynomial h(x) = x^{2g} P(1/x), monic of
// degree 2g with h(x) = prod (x - alpha_i)
IPoly frobenius_charpoly_from_zeta(const IPoly& P);

// ---- closed points of P^1 over F_q ----

struct Place {
    bool infinite = false;
    FqPoly poly;  // monic irreducible; ignored when infinite
};

int place_degree(const Place& v);

// number of closed points of P^1/F_q of each degree 1..emax (Moebius count;
// degree 1 includes the infinite place)
std::vector<i64> place_counts(i64 q, int emax);

// all places of degree <= maxdeg by sieve enumeration (cap guards q^maxdeg)
std::vector<Place> enumerate_places(const FqField& F, int maxdeg,
                                    i64 cap = kDefaultEnumCap);

// the first monic irreducible of degree d in base-q counting order
Place canonical_place(const FqField& F, int d, i64 cap = kDefaultEnumCap);

}  // namespace iwff

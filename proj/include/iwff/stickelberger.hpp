#pragma once
#include <string>
#include <vector>

#include "iwff/curve.hpp"
#include "iwff/frobenius.hpp"
#include "iwff/iwasawa.hpp"

namespace iwff {

// Base function field K = F_q(X) of a curve over a constant field of size
// q = p^qexp, reduced to what the arithmetic Z_p-extension sees: the zeta
// numerator P (degree 2*kappa, P(0) = 1) and the ambient sizes.
struct BaseField {
    IPoly P{1};
    int kappa = 0;
    i64 q = 0;
    int qexp = 0;
};

BaseField base_field_rational(i64 p, i64 q);
BaseField base_field_from_curve(i64 p, const CurveModel& X,
                                i64 cap = kDefaultEnumCap);

// Finite set S of places of K, recorded by degree only: a place v enters
// every formula through [v] = gamma0^{deg v} and q_v = q^{deg v}, so the
// degree multiset is the whole input.  Empty set allowed.
using PlaceSet = std::vector<int>;

// (1 - t)^{delta_S - 1} * prod_{v in S} (1 - t^{deg v}) as a polynomial;
// delta_S = 1 iff S is empty.  For nonempty S the division by (1 - t) is
// exact.  This is the factor turning the full Euler product over places
// into Theta_{K,S}.
IPoly s_adjust_poly(const PlaceSet& S);

// Number of places of each degree 1..emax (index 0 unused), recovered from
// the zeta numerator via point counts and Moebius inversion.
std::vector<i64> place_degree_counts(const BaseField& K, int emax);

// Theta_{K,S}(u) truncated at u^Du: c[k] in Lambda_n is the coefficient of
// u^k.  Built from the closed form P(gamma0 u) * (1 - q gamma0 u)^{-1}
// adjusted by s_adjust_poly; every coefficient is exact in (O/p^N)[Gamma_n].
struct ThetaSeries {
    CtxPtr ctx;
    int n = 0;
    std::vector<IwasawaElem> c;
};

ThetaSeries theta_series(const CtxPtr& ctx, const BaseField& K,
                         const PlaceSet& S, int n, int Du);
// Same object expanded the slow way: Euler product over all places of
// degree <= Du outside S, each factor a truncated geometric series, times
// (1 - gamma0 u)^{delta_S}.  InvalidInput if S asks for more places of some
// degree than K has.
ThetaSeries theta_series_oracle(const CtxPtr& ctx, const BaseField& K,
                                const PlaceSet& S, int n, int Du);
bool theta_eq(const ThetaSeries& a, const ThetaSeries& b);
ThetaSeries theta_project(const ThetaSeries& t, int lower);
// Coefficients tend to zero p-adically: min valuation is nondecreasing from
// degree deg(s_adjust_poly * P) on.  Returns false if violated.
bool theta_decay_holds(const ThetaSeries& t, const BaseField& K,
                       const PlaceSet& S);
// sum_{k <= Du} c_k, the partial sum approximating theta at u = 1
IwasawaElem theta_partial_sum(const ThetaSeries& t);

// Theta_{K,S}(x) for a unit x of O/p^N, exactly:
//   (SP)(x gamma0) * (1 - q x gamma0)^{-1},  SP = s_adjust_poly(S) * P.
IwasawaElem theta_at_unit(const CtxPtr& ctx, const BaseField& K,
                          const PlaceSet& S, int n, const ORes& x);
// theta_{K,S} = Theta_{K,S}(1)
IwasawaElem stickelberger_element(const CtxPtr& ctx, const BaseField& K,
                                  const PlaceSet& S, int n);

// L_S(omega, x) = SProd(eps x) * P(eps x) / ((1 - eps x)(1 - q eps x)) with
// SProd = prod_{v in S}(1 - t^{deg v}), the Dirichlet L-value of K twisted
// by omega (eps = omega(gamma0)) at q^{-s} = x.  PoleOrPrecision when a
// denominator is zero or indistinguishable from zero.
PadicNum dirichlet_l_value(const CtxPtr& ctx, const BaseField& K,
                           const PlaceSet& S, const ORes& eps,
                           const PadicNum& x);
// L*_S(omega, x) = (1 - eps x)^{delta_S} L_S(omega, x); the (1 - eps x)
// factor cancels against the pole, so this is s_adjust_poly applied whole:
//   (SP)(eps x) * (1 - q eps x)^{-1}.
PadicNum dirichlet_l_star_value(const CtxPtr& ctx, const BaseField& K,
                                const PlaceSet& S, const ORes& eps,
                                const PadicNum& x);

// theta_{A,K,S} and the p-adic L-fraction of a constant ordinary A/F_q:
//   theta_plus = prod_i sharp(Theta_{K,S}(alpha_i^{-1}))
//   theta      = theta_plus * sharp(theta_plus)
//   Ltilde     = num / den,
//     num = (prod alpha_i)^{2kappa-2} gamma0^{g(2kappa-2)} q^{g max(1-kappa,0)} theta
//     den = q^{g max(kappa-1,0)} * Delta, Delta = prod_i (1 - alpha_i^{-1}
//           gamma0^{-1})(1 - alpha_i^{-1} gamma0)
// kept as a fraction because Delta is a zero divisor in Lambda_n.
struct PadicLData {
    IwasawaElem theta_plus;
    IwasawaElem theta;
    IwasawaFraction Ltilde;
};

PadicLData padic_L(const CtxPtr& ctx, const FrobeniusData& fr,
                   const BaseField& K, const PlaceSet& S, int n);
// omega(num) / omega(den); PoleOrPrecision if omega(den) is not certified
// nonzero.
PadicNum padic_L_value(const PadicLData& L, const PCharacter& om);

// Classical side: L_S(A, omega, 1) = prod_i L_S(omega, alpha_i^{-1})
// * L_S(omega, beta_i^{-1}).
PadicNum twisted_hasse_weil(const CtxPtr& ctx, const FrobeniusData& fr,
                            const BaseField& K, const PlaceSet& S,
                            const PCharacter& om);

// Interpolation fudge factors at omega:
//   tau     = eps^{2 - 2 kappa}            (epsilon factor of the base)
//   delta_S = prod_i [(1 - alpha_i^{-1} gamma0^{-1})(1 - alpha_i^{-1}
//             gamma0)]^{delta_S}           (group-ring element, 1 for S != {})
//   xi      = prod_i prod_{v in S} (1 - eps^{-deg v} alpha_i^{-deg v})
//             / (1 - eps^{deg v} beta_i^{-deg v})
//   power   = (q^{g/2} prod alpha_i^{-1})^{2 kappa - 2 + d_omega}
// d_omega = 0 throughout (unramified characters only), which keeps the
// q^{1/2} exponent integral; half_power_ok records that.
struct FudgeFactors {
    PadicNum tau;
    IwasawaElem delta_S;
    PadicNum xi;
    PadicNum power;
    bool half_power_ok = true;
};

FudgeFactors fudge_factors(const CtxPtr& ctx, const FrobeniusData& fr,
                           const BaseField& K, const PlaceSet& S, int n,
                           const PCharacter& om);

// Certified relative agreement of two values: the difference carries
// valuation >= (reference valuation) + e * digits.  `digits` is capped at
// N; pass = digits >= N - slack.  The reference is lhs when lhs is
// distinguishable from zero, else its certified bound.
struct PadicAgreement {
    i64 diff_bound = 0;   // certified pi-valuation bound of lhs - rhs
    int rel_digits = 0;   // agreement in p-digits relative to lhs
    bool pass = false;
};
PadicAgreement relative_agreement(const CtxPtr& ctx, const PadicNum& lhs,
                                  const PadicNum& rhs, int slack);

struct InterpRecord {
    int omega_level = 0;
    i64 omega_exponent = 0;
    i64 omega_order = 1;
    std::string lhs, rhs;
    i64 diff_bound = 0;
    int rel_digits = 0;
    bool pass = false;
    std::string note;  // PoleOrPrecision annotation, empty when clean
};
struct InterpReport {
    std::vector<InterpRecord> rows;
    bool all_pass = true;
};

// Sweep of omega(Ltilde) = L(A, omega, 1) over all characters of Gamma_n.
// Per-character PoleOrPrecision is recorded in the row, not thrown.
// Requires S empty (Ltilde is an S = {} object).
InterpReport interpolation_check(const CtxPtr& ctx, const FrobeniusData& fr,
                                 const BaseField& K, int n, int slack = 2);
// Sweep of the fudged form, any S:
//   omega(theta_{A,S}) = tau^g * power * omega(delta_S) * xi * L_S(A, omega, 1)
InterpReport interpolation_check_theorem(const CtxPtr& ctx,
                                         const FrobeniusData& fr,
                                         const BaseField& K, const PlaceSet& S,
                                         int n, int slack = 2);

struct FERecord {
    int omega_level = 0;
    i64 omega_exponent = 0;
    std::string x;
    int rel_digits = 0;
    bool pass = false;
    std::string note;
};
struct FEReport {
    std::vector<FERecord> rows;
    bool poly_identity = false;  // coefficient identity c_{2k-i} = q^{k-i} c_i
    bool all_pass = true;
};

// Two-sided functional equation of the base Dirichlet L-function,
//   L(omega^{-1}, x) = eps^{2-2kappa} q^{kappa-1} x^{2kappa-2} L(omega, 1/(qx)),
// sampled at x = j p^j, j = 1..samples, for each listed character.
FEReport functional_equation_check(const CtxPtr& ctx, const BaseField& K,
                                   const std::vector<PCharacter>& oms,
                                   int samples = 5, int slack = 2);

// theta != 0 at working precision (some coefficient nonzero mod p^N).
bool theta_certified_nonzero(const IwasawaElem& theta);

}  // namespace iwff

#pragma once
#include <vector>
#include "iwff/padic.hpp"

namespace iwff {

// Element of the level-n group ring (O/p^N)[Gamma_n], Gamma_n cyclic of
// order p^n with fixed generator gamma0 (identified with the arithmetic
// Frobenius Fr_q downstream).  Coefficients little-endian in powers of
// gamma0: x = sum_k c[k] gamma0^k.
struct IwasawaElem {
    CtxPtr ctx;
    int n = 0;
    std::vector<ORes> c;
};

// Character of Gamma_n: omega(gamma0) = zeta_{p^level}^t.  Trivial iff
// t = 0 mod p^level.  Needs ctx->m() >= level to evaluate.
struct PCharacter {
    int level = 0;
    i64 t = 0;
};

// Truncated power series sum a[i] T^i mod (p^N, T^D) over O/p^N, the series
// view of the Iwasawa algebra under gamma0 = 1 + T.  The truncation at T^D
// is explicitly lossy for levels with p^n > D.
struct IwasawaSeries {
    CtxPtr ctx;
    int D = 0;
    std::vector<ORes> a;
};

// Numerator/denominator pair in the total quotient ring; equality is tested
// by cross-multiplication.
struct IwasawaFraction {
    IwasawaElem num;
    IwasawaElem den;
};

i64 gamma_order(i64 p, int n);  // p^n

IwasawaElem iw_zero(const CtxPtr& ctx, int n);
IwasawaElem iw_one(const CtxPtr& ctx, int n);
IwasawaElem iw_scalar(const CtxPtr& ctx, int n, const ORes& s);
IwasawaElem iw_gamma_pow(const CtxPtr& ctx, int n, i64 k);
IwasawaElem iw_add(const IwasawaElem& x, const IwasawaElem& y);
IwasawaElem iw_sub(const IwasawaElem& x, const IwasawaElem& y);
IwasawaElem iw_neg(const IwasawaElem& x);
IwasawaElem iw_mul(const IwasawaElem& x, const IwasawaElem& y);
IwasawaElem iw_scale(const IwasawaElem& x, const ORes& s);
IwasawaElem iw_pow(IwasawaElem x, u64 k);
bool iw_eq(const IwasawaElem& x, const IwasawaElem& y);
bool iw_is_zero(const IwasawaElem& x);

ORes iw_aug(const IwasawaElem& x);   // augmentation sum
bool iw_is_unit(const IwasawaElem& x);
IwasawaElem iw_inv(const IwasawaElem& x);  // NotAUnit if not a unit

// involution gamma -> gamma^{-1}
IwasawaElem iw_sharp(const IwasawaElem& x);
// twist gamma0^k -> c^{-k} gamma0^k for a unit c of O/p^N (the group-ring
// form of gamma -> phi(gamma)^{-1} gamma with phi(gamma0) = c)
IwasawaElem iw_twist(const IwasawaElem& x, const ORes& c);
// natural projection Lambda_n -> Lambda_{n'}, n' <= n
IwasawaElem iw_project(const IwasawaElem& x, int lower);
// norm element of the kernel of Gamma_n -> Gamma_m: sum_j gamma0^{j p^m}
IwasawaElem iw_norm_element(const CtxPtr& ctx, int n, int m);
// simple element Phi_{p^k}(gamma0) at level n, 1 <= k <= n: the minimal
// annihilator direction attached to characters of exact order p^k
IwasawaElem iw_simple_element(const CtxPtr& ctx, int n, int k);
// element from a polynomial in T = gamma0 - 1 with integer coefficients
IwasawaElem iw_from_Tpoly(const CtxPtr& ctx, int n, const IPoly& f);

// exact evaluation at omega: sum c_k zeta^{t k}
ORes iw_eval(const IwasawaElem& x, const PCharacter& om);
PadicNum iw_eval_num(const IwasawaElem& x, const PCharacter& om);
std::vector<PCharacter> all_characters(i64 p, int level);
// omega(gamma0) as a residue
ORes character_value(const CtxPtr& ctx, const PCharacter& om);

// ---- series view ----

IwasawaSeries sr_zero(const CtxPtr& ctx, int D);
IwasawaSeries sr_make(const CtxPtr& ctx, int D, std::vector<ORes> a);
IwasawaSeries sr_from_Tpoly(const CtxPtr& ctx, int D, const IPoly& f);
IwasawaSeries sr_add(const IwasawaSeries& f, const IwasawaSeries& g);
IwasawaSeries sr_sub(const IwasawaSeries& f, const IwasawaSeries& g);
IwasawaSeries sr_mul(const IwasawaSeries& f, const IwasawaSeries& g);
IwasawaSeries sr_scale(const IwasawaSeries& f, const ORes& s);
bool sr_eq(const IwasawaSeries& f, const IwasawaSeries& g);
// series view of a group-ring element: substitute gamma0 = 1 + T
IwasawaSeries iw_to_series(const IwasawaElem& x, int D);
// substitute T -> (1+T)^{-1} - 1 (the series form of the sharp involution)
IwasawaSeries sr_sharp(const IwasawaSeries& f);
// substitute T -> c^{-1}(1+T) - 1 for a 1-unit c (Unsupported otherwise:
// the substitution only converges when v(c - 1) > 0; at finite level use
// iw_twist on the group ring instead)
IwasawaSeries sr_twist(const IwasawaSeries& f, const ORes& c);
// evaluate at a point of positive valuation; the tail beyond T^D enters as
// an honest approximate zero of valuation >= D * v(x)
PadicNum sr_eval(const IwasawaSeries& f, const PadicNum& x);

struct OrdLeading {
    int ord;           // largest r with f in T^r (O/p^N)[[T]], as certified
    PadicNum leading;  // coefficient of T^ord
};
OrdLeading sr_ord_leading(const IwasawaSeries& f);

// Weierstrass preparation at precision: f = pi^mu * dist * unit with dist
// monic of degree lambda, non-leading coefficients in (pi), and unit
// invertible.  mu counts uniformizer powers (= p-powers when m = 0).
// `digits` is the number of p-digits at which the factorization is exact
// after stripping pi^mu (N when mu = 0).  mu, lambda and the identity
// f = pi^mu * dist * unit mod (p^N, T^D) are exact; the individual factors
// are canonical only up to corrections seeping in from the T^D boundary
// (one block of ~lambda degrees per pi-power), so dist matches the infinite-
// precision distinguished polynomial to `digits` once D > lambda*(e*N + 1).
struct WPrep {
    i64 mu;
    std::vector<ORes> dist;  // length lambda+1, monic
    IwasawaSeries unit;
    int digits;
};
WPrep weierstrass_prep(const IwasawaSeries& f, int guard = 4);

// ---- rank-2 group ring (O/p^N)[Gamma_n x Gamma_n], for zero sets of
// two-variable elements; coefficient of gamma1^i gamma2^j at index i + P*j.
struct IwasawaElem2 {
    CtxPtr ctx;
    int n = 0;
    std::vector<ORes> c;
};

IwasawaElem2 iw2_zero(const CtxPtr& ctx, int n);
IwasawaElem2 iw2_scalar(const CtxPtr& ctx, int n, const ORes& s);
IwasawaElem2 iw2_gamma(const CtxPtr& ctx, int n, int which, i64 k);
IwasawaElem2 iw2_add(const IwasawaElem2& x, const IwasawaElem2& y);
IwasawaElem2 iw2_mul(const IwasawaElem2& x, const IwasawaElem2& y);
IwasawaElem2 iw2_scale(const IwasawaElem2& x, const ORes& s);
ORes iw2_eval(const IwasawaElem2& x, const PCharacter& om1, const PCharacter& om2);

// Characters killed at working precision (evaluation == 0 in O/p^N).
// Each zero is the tuple of character exponents (one entry for d = 1).
std::vector<std::vector<i64>> zero_set(const IwasawaElem& x);
std::vector<std::vector<i64>> zero_set2(const IwasawaElem2& x);

}  // namespace iwff

#pragma once
#include <memory>
#include <string>
#include <vector>
#include "iwff/intpoly.hpp"

namespace iwff {

// Residue in O/p^N where O = Z_p[zeta] for a primitive p^m-th root of unity
// zeta.  Internally elements are polynomials of degree < e in the uniformizer
// pi = zeta - 1 (e = p^{m-1}(p-1) the ramification index; e = 1, pi = p when
// m = 0).  The pi-power basis makes valuations readable off coefficients:
// v_pi(sum c_i pi^i) = min_i (e*v_p(c_i) + i), the minimum being attained by
// a single term.
struct ORes {
    std::vector<i64> c;
    bool operator==(const ORes&) const = default;
};

class PadicCtx;
using CtxPtr = std::shared_ptr<const PadicCtx>;

// A p-adic number at working precision: either an exact zero, a regular
// value pi^v * u with unit mantissa u known to `relprec` pi-digits, or an
// "approximate zero" about which only v >= bound is certified (the residue
// vanished at working precision, e.g. after full cancellation).
enum class PState { Zero, Reg, AZero };

struct PadicNum {
    PState st = PState::Zero;
    i64 v = 0;        // Reg: exact valuation; AZero: certified lower bound
    i64 relprec = 0;  // Reg only: relative precision, in pi-units
    ORes u;           // Reg only: unit mantissa mod p^N
};

enum class CmpKind { Equal, Different, Indistinguishable };
struct Cmp3 {
    CmpKind kind;
    i64 bound;  // Indistinguishable: certified valuation bound of difference
};

class PadicCtx : public std::enable_shared_from_this<PadicCtx> {
public:
    static CtxPtr make(i64 p, int m, int N);

    i64 p() const { return p_; }
    int m() const { return m_; }
    int N() const { return N_; }
    int e() const { return e_; }
    i64 pN() const { return pN_; }
    i64 ppow(int k) const;          // p^k for 0 <= k <= N
    i64 zeta_order() const;         // p^m

    // ---- residue ring O/p^N ----
    ORes r_zero() const;
    ORes r_one() const;
    ORes r_from_int(i64 n) const;
    ORes r_add(const ORes& x, const ORes& y) const;
    ORes r_sub(const ORes& x, const ORes& y) const;
    ORes r_neg(const ORes& x) const;
    ORes r_mul(const ORes& x, const ORes& y) const;
    ORes r_scale(const ORes& x, i64 c) const;
    ORes r_pow(ORes x, u64 n) const;
    bool r_is_zero(const ORes& x) const;
    bool r_is_unit(const ORes& x) const;
    ORes r_inv(const ORes& x) const;       // NotAUnit if not a unit
    ORes r_pi() const;                     // the uniformizer as a residue
    ORes r_mul_pi(const ORes& x) const;    // multiply by pi
    ORes r_zeta_pow(i64 j) const;          // zeta^j, j mod p^m
    // valuation of a residue; returns e*N when x == 0 mod p^N
    i64 r_valuation(const ORes& x) const;
    // divide by pi^t assuming v_pi(x) >= t; second member = p-digits lost
    std::pair<ORes, int> r_div_pi_pow(const ORes& x, i64 t) const;
    // conversion between the internal pi-power basis and the zeta-power basis
    std::vector<i64> to_zeta_basis(const ORes& x) const;
    ORes from_zeta_basis(const std::vector<i64>& z) const;

    // ---- p-adic numbers ----
    PadicNum zero() const;
    PadicNum one() const;
    PadicNum from_int(i64 n) const;
    PadicNum from_res(const ORes& x) const;          // abs precision e*N
    PadicNum from_res(const ORes& x, i64 absprec) const;
    PadicNum approx_zero(i64 bound) const;
    PadicNum make_unit(const ORes& u) const;         // v=0, full precision
    PadicNum zeta_num(i64 j) const;                  // zeta^j as a PadicNum
    PadicNum pi_num() const;
    PadicNum add(const PadicNum& x, const PadicNum& y) const;
    PadicNum sub(const PadicNum& x, const PadicNum& y) const;
    PadicNum neg(const PadicNum& x) const;
    PadicNum mul(const PadicNum& x, const PadicNum& y) const;
    PadicNum inv(const PadicNum& x) const;
    PadicNum div(const PadicNum& x, const PadicNum& y) const;
    PadicNum mul_ppow(const PadicNum& x, i64 k) const;  // times p^k, k in Z
    PadicNum pow(const PadicNum& x, i64 k) const;        // k < 0 needs a unit
    Cmp3 cmp(const PadicNum& x, const PadicNum& y) const;
    bool certified_nonzero(const PadicNum& x) const { return x.st == PState::Reg; }
    // residue of a regular value with v >= 0, i.e. pi^v * u mod p^N
    ORes to_res(const PadicNum& x) const;
    std::string to_string(const PadicNum& x) const;
    std::string to_string(const ORes& x) const;

    // Teichmueller representative of r mod p (r a unit): the unique
    // (p-1)-st root of unity congruent to r, computed as the p-power
    // fixed point in Z/p^N.
    PadicNum teichmuller(i64 r) const;
    i64 teichmuller_int(i64 r) const;

    const ZPoly& pi_modulus() const { return mod_pi_; }

private:
    PadicCtx(i64 p, int m, int N);
    i64 p_;
    int m_, N_, e_;
    i64 pN_;
    std::vector<i64> ppows_;  // p^0..p^N
    ZPoly mod_pi_;            // Phi_{p^m}(1+x), monic degree e (x - p if m=0... see ctor)
    ORes u_e_;                // pi^e / p, a unit
    ORes u_e_inv_;
    ORes zeta_;               // 1 + pi
    i64 vp_int(i64 c) const;  // valuation of an integer residue, N if 0
};

// Integer p-adic valuation helper (exact integers, not residues).
i64 int_valuation(i64 n, i64 p);  // n != 0

struct HenselRoot {
    i64 residue;        // root mod p^{certified}
    int certified;      // p-digits of certainty (N - v_p(f'(root)))
    PadicNum value;
};

// Lift a root of f from r0 mod p (or a strong-Hensel seed when p = 2 or the
// derivative is not a unit): requires v_p(f(r0)) > 2 v_p(f'(r0)).
HenselRoot hensel_root(const IPoly& f, i64 r0, const CtxPtr& ctx);

// Factor a monic integer polynomial over Z/p^N as h = h_unit * h_nonunit
// where h_unit mod p has nonzero constant term (all roots p-adic units) and
// h_nonunit = x^s mod p (all roots of positive valuation).  Both factors are
// monic; exchanging alpha <-> q/alpha swaps their roles up to normalization.
struct UnitFactorSplit {
    ZPoly h_unit;
    ZPoly h_nonunit;
};
UnitFactorSplit hensel_unit_factor(const IPoly& h, const CtxPtr& ctx);

// Linear Hensel lift of a monic coprime factorization h = F*G mod p^W.
// Fbar, Gbar monic over F_p with gcd = 1 and deg Fbar + deg Gbar = deg h.
std::pair<ZPoly, ZPoly> hensel_bifactor(const ZPoly& h, const ZPoly& Fbar,
                                        const ZPoly& Gbar, i64 p, int W);

}  // namespace iwff

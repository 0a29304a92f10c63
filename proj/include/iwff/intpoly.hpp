#pragma once
#include <complex>
#include <cstdint>
#include <vector>
#include "iwff/errors.hpp"

namespace iwff {

using i64 = int64_t;
using u64 = uint64_t;
using i128 = __int128;

// Dense integer polynomials, little-endian.  Exact arithmetic with overflow
// checks; these carry zeta numerators, Frobenius characteristic polynomials
// and cyclotomic data, all of which stay far below the i64 range at the
// supported sizes.
using IPoly = std::vector<i64>;

void ip_trim(IPoly& f);
int ip_deg(const IPoly& f);  // -1 for the zero polynomial
IPoly ip_add(const IPoly& f, const IPoly& g);
IPoly ip_sub(const IPoly& f, const IPoly& g);
IPoly ip_mul(const IPoly& f, const IPoly& g);
IPoly ip_scale(const IPoly& f, i64 c);
i64 ip_eval(const IPoly& f, i64 x);
IPoly ip_derivative(const IPoly& f);
IPoly ip_pow(IPoly f, u64 n);
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);
i64 ipow(i64 b, u64 n);  // checked integer power

// x^{deg} * f(q/x) / x-normalization: the reciprocal transform
// f(x) -> x^{deg f} f(q/x) with integral coefficients (deg f even split).
IPoly ip_reciprocal_q(const IPoly& f, i64 q);

// All complex roots of f (deg >= 1, f[deg] != 0) by Durand-Kerner iteration.
std::vector<std::complex<double>> ip_roots(const IPoly& f);

// Polynomials over Z/M, little-endian, M up to 2^31 so products fit i128.
// Divisors must be monic where required.
using ZPoly = std::vector<i64>;

i64 zmod(i64 a, i64 M);
void zp_trim(ZPoly& f);
ZPoly zp_from(const IPoly& f, i64 M);
ZPoly zp_add(const ZPoly& f, const ZPoly& g, i64 M);
ZPoly zp_sub(const ZPoly& f, const ZPoly& g, i64 M);
ZPoly zp_mul(const ZPoly& f, const ZPoly& g, i64 M);
ZPoly zp_scale(const ZPoly& f, i64 c, i64 M);
i64 zp_eval(const ZPoly& f, i64 x, i64 M);
// division by a monic divisor: returns quotient, stores remainder in f
ZPoly zp_divrem_monic(ZPoly& f, const ZPoly& g, i64 M);
ZPoly zp_rem_monic(ZPoly f, const ZPoly& g, i64 M);
ZPoly zp_mulmod(const ZPoly& f, const ZPoly& g, const ZPoly& mod, i64 M);
ZPoly zp_powmod(ZPoly b, u64 e, const ZPoly& mod, i64 M);

}  // namespace iwff

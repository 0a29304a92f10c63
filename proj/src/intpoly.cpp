#include "iwff/intpoly.hpp"

#include <algorithm>
#include <cmath>

namespace iwff {

i64 checked_mul(i64 a, i64 b) {
    i128 r = (i128)a * b;
    if (r > INT64_MAX || r < INT64_MIN) throw Error("integer overflow in multiply");
    return (i64)r;
}

i64 checked_add(i64 a, i64 b) {
    i128 r = (i128)a + b;
    if (r > INT64_MAX || r < INT64_MIN) throw Error("integer overflow in add");
    return (i64)r;
}

i64 ipow(i64 b, u64 n) {
    i64 r = 1;
    while (n--) r = checked_mul(r, b);
    return r;
}

void ip_trim(IPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int ip_deg(const IPoly& f) {
    int d = (int)f.size() - 1;
    while (d >= 0 && f[d] == 0) --d;
    return d;
}

IPoly ip_add(const IPoly& f, const IPoly& g) {
    IPoly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = checked_add(r[i], g[i]);
    ip_trim(r);
    return r;
}

IPoly ip_sub(const IPoly& f, const IPoly& g) {
    IPoly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = checked_add(r[i], -g[i]);
    ip_trim(r);
    return r;
}

IPoly ip_mul(const IPoly& f, const IPoly& g) {
    if (f.empty() || g.empty()) return {};
    IPoly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] = checked_add(r[i + j], checked_mul(f[i], g[j]));
    }
    ip_trim(r);
    return r;
}

IPoly ip_scale(const IPoly& f, i64 c) {
    IPoly r = f;
    for (auto& x : r) x = checked_mul(x, c);
    ip_trim(r);
    return r;
}

i64 ip_eval(const IPoly& f, i64 x) {
    i64 r = 0;
    for (int i = (int)f.size() - 1; i >= 0; --i)
        r = checked_add(checked_mul(r, x), f[i]);
    return r;
}

IPoly ip_derivative(const IPoly& f) {
    IPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(checked_mul(f[i], (i64)i));
    ip_trim(r);
    return r;
}

IPoly ip_pow(IPoly f, u64 n) {
    IPoly r = {1};
    while (n) {
        if (n & 1) r = ip_mul(r, f);
        f = ip_mul(f, f);
        n >>= 1;
    }
    return r;
}

IPoly ip_reciprocal_q(const IPoly& f, i64 q) {
    int d = ip_deg(f);
    if (d < 0) return {};
    IPoly r(d + 1, 0);
    // coefficient of x^i in x^d f(q/x) is f[d-i] q^{d-i}
    for (int i = 0; i <= d; ++i) r[i] = checked_mul(f[d - i], ipow(q, d - i));
    ip_trim(r);
    return r;
}

std::vector<std::complex<double>> ip_roots(const IPoly& f) {
    int d = ip_deg(f);
    if (d < 1) throw InvalidInput("ip_roots: need degree >= 1");
    using C = std::complex<double>;
    std::vector<C> a(d + 1);
    for (int i = 0; i <= d; ++i) a[i] = (double)f[i];
    // Durand-Kerner from a non-real seed spiral
    std::vector<C> z(d);
    C seed(0.4, 0.9);
    z[0] = seed;
    for (int i = 1; i < d; ++i) z[i] = z[i - 1] * seed;
    auto eval = [&](C x) {
        C r = 0;
        for (int i = d; i >= 0; --i) r = r * x + a[i];
        return r;
    };
    C lead = a[d];
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            C num = eval(z[i]) / lead;
            C den = 1;
            for (int j = 0; j < d; ++j)
                if (j != i) den *= (z[i] - z[j]);
            C delta = num / den;
            z[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

i64 zmod(i64 a, i64 M) {
    a %= M;
    if (a < 0) a += M;
    return a;
}

void zp_trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly zp_from(const IPoly& f, i64 M) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = zmod(f[i], M);
    zp_trim(r);
    return r;
}

ZPoly zp_add(const ZPoly& f, const ZPoly& g, i64 M) {
    ZPoly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = (r[i] + g[i]) % M;
    zp_trim(r);
    return r;
}

ZPoly zp_sub(const ZPoly& f, const ZPoly& g, i64 M) {
    ZPoly r(std::max(f.size(), g.size()), 0);
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] = zmod(r[i] - g[i], M);
    zp_trim(r);
    return r;
}

ZPoly zp_mul(const ZPoly& f, const ZPoly& g, i64 M) {
    if (f.empty() || g.empty()) return {};
    ZPoly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (size_t j = 0; j < g.size(); ++j)
            r[i + j] = (i64)(((i128)f[i] * g[j] + r[i + j]) % M);
    }
    zp_trim(r);
    return r;
}

ZPoly zp_scale(const ZPoly& f, i64 c, i64 M) {
    ZPoly r = f;
    c = zmod(c, M);
    for (auto& x : r) x = (i64)((i128)x * c % M);
    zp_trim(r);
    return r;
}

i64 zp_eval(const ZPoly& f, i64 x, i64 M) {
    i64 r = 0;
    x = zmod(x, M);
    for (int i = (int)f.size() - 1; i >= 0; --i)
        r = (i64)(((i128)r * x + f[i]) % M);
    return r;
}

ZPoly zp_divrem_monic(ZPoly& f, const ZPoly& g, i64 M) {
    if (g.empty() || g.back() != 1)
        throw InvalidInput("zp_divrem_monic: divisor must be monic");
    int dg = (int)g.size() - 1;
    if ((int)f.size() <= dg) return {};
    ZPoly q(f.size() - dg, 0);
    for (int i = (int)f.size() - 1; i >= dg; --i) {
        i64 c = f[i];
        if (!c) continue;
        q[i - dg] = c;
        for (int j = 0; j <= dg; ++j)
            f[i - dg + j] = zmod(f[i - dg + j] - (i64)((i128)c * g[j] % M), M);
    }
    f.resize(dg);
    zp_trim(f);
    zp_trim(q);
    return q;
}

ZPoly zp_rem_monic(ZPoly f, const ZPoly& g, i64 M) {
    zp_divrem_monic(f, g, M);
    return f;
}

ZPoly zp_mulmod(const ZPoly& f, const ZPoly& g, const ZPoly& mod, i64 M) {
    return zp_rem_monic(zp_mul(f, g, M), mod, M);
}

ZPoly zp_powmod(ZPoly b, u64 e, const ZPoly& mod, i64 M) {
    ZPoly r = {1};
    b = zp_rem_monic(std::move(b), mod, M);
    while (e) {
        if (e & 1) r = zp_mulmod(r, b, mod, M);
        b = zp_mulmod(b, b, mod, M);
        e >>= 1;
    }
    return r;
}

}  // namespace iwff

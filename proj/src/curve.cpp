#include "iwff/curve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

i64 ipow_checked(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
}

// q = p^a with p prime; InvalidInput otherwise
std::pair<i64, int> prime_power_split(i64 q) {
    if (q < 2) throw InvalidInput("field size must be at least 2");
    i64 p = q;
    for (i64 d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    i64 r = q;
    int a = 0;
    while (r % p == 0) {
        r /= p;
        ++a;
    }
    if (r != 1) throw InvalidInput("field size is not a prime power");
    return {p, a};
}

FqElem embed(const FqEmbedding* emb, const FqElem& x) {
    return emb ? emb->map(x) : x;
}

}  // namespace

CurveModel curve_p1(const FqField& F) {
    CurveModel C;
    C.kind = CurveModel::Kind::P1;
    C.F = F;
    return C;
}

CurveModel curve_elliptic(const FqField& F, const std::vector<FqElem>& a15) {
    if (a15.size() != 5) throw InvalidInput("elliptic model needs a1,a2,a3,a4,a6");
    CurveModel C;
    C.kind = CurveModel::Kind::Elliptic;
    C.F = F;
    C.a = a15;
    curve_validate(C);
    return C;
}

CurveModel curve_elliptic_ints(const FqField& F, const std::vector<i64>& a15) {
    std::vector<FqElem> a;
    a.reserve(a15.size());
    for (i64 v : a15) a.push_back(F.from_int(v));
    return curve_elliptic(F, a);
}

CurveModel curve_hyperelliptic(const FqField& F, const FqPoly& f) {
    CurveModel C;
    C.kind = CurveModel::Kind::Hyperelliptic;
    C.F = F;
    C.f = f;
    curve_validate(C);
    return C;
}

CurveModel curve_raw(i64 q, int genus, const std::vector<i64>& counts) {
    auto [p, a] = prime_power_split(q);
    CurveModel C;
    C.kind = CurveModel::Kind::RawCounts;
    C.F = FqField(p, a);
    C.genus_raw = genus;
    C.counts = counts;
    if (genus < 0 || counts.size() < static_cast<size_t>(genus))
        throw InvalidInput("raw model needs counts N_1..N_g at least");
    return C;
}

int curve_genus(const CurveModel& C) {
    switch (C.kind) {
        case CurveModel::Kind::P1: return 0;
        case CurveModel::Kind::Elliptic: return 1;
        case CurveModel::Kind::Hyperelliptic:
            return (fqpoly_deg(C.F, C.f) - 1) / 2;
        default: return C.genus_raw;
    }
}

i64 curve_q(const CurveModel& C) { return static_cast<i64>(C.F.q()); }

void curve_validate(const CurveModel& C) {
    const FqField& F = C.F;
    if (C.kind == CurveModel::Kind::Elliptic) {
        const auto &a1 = C.a[0], &a2 = C.a[1], &a3 = C.a[2], &a4 = C.a[3], &a6 = C.a[4];
        // universal discriminant via the b-invariants
        auto b2 = F.add(F.mul(a1, a1), F.mul(F.from_int(4), a2));
        auto b4 = F.add(F.mul(F.from_int(2), a4), F.mul(a1, a3));
        auto b6 = F.add(F.mul(a3, a3), F.mul(F.from_int(4), a6));
        auto b8 = F.add(F.sub(F.add(F.mul(F.mul(a1, a1), a6),
                                    F.mul(F.mul(F.from_int(4), a2), a6)),
                              F.mul(F.mul(a1, a3), a4)),
                        F.sub(F.mul(a2, F.mul(a3, a3)), F.mul(a4, a4)));
        auto disc = F.add(F.sub(F.neg(F.mul(F.mul(b2, b2), b8)),
                                F.add(F.mul(F.from_int(8), F.mul(b4, F.mul(b4, b4))),
                                      F.mul(F.from_int(27), F.mul(b6, b6)))),
                          F.mul(F.from_int(9), F.mul(b2, F.mul(b4, b6))));
        if (F.is_zero(disc)) throw BadModel("elliptic model is singular");
    } else if (C.kind == CurveModel::Kind::Hyperelliptic) {
        if (F.p() == 2) throw Unsupported("hyperelliptic models need odd characteristic");
        int d = fqpoly_deg(F, C.f);
        if (d < 3 || d > 6) throw BadModel("hyperelliptic degree must be 3..6");
        if (!fqpoly_squarefree(F, C.f)) throw BadModel("hyperelliptic rhs is not squarefree");
    }
}

i64 count_points(const CurveModel& C, int r, i64 cap) {
    if (r < 1) throw InvalidInput("extension degree must be positive");
    const FqField& F = C.F;
    i64 qr = ipow_checked(static_cast<i64>(F.q()), r);

    switch (C.kind) {
        case CurveModel::Kind::P1:
            return qr + 1;
        case CurveModel::Kind::RawCounts:
            if (static_cast<size_t>(r) > C.counts.size())
                throw InvalidInput("raw model has no count at this depth");
            return C.counts[static_cast<size_t>(r) - 1];
        default:
            break;
    }

    if (static_cast<u64>(qr) > static_cast<u64>(cap))
        throw EnumerationTooLarge("point count", static_cast<u64>(qr),
                                  static_cast<u64>(cap));

    FqField Fr = r == 1 ? F : FqField(F.p(), F.degree() * r);
    std::optional<FqEmbedding> emb;
    if (r > 1) emb.emplace(F, Fr);
    const FqEmbedding* e = emb ? &*emb : nullptr;

    if (C.kind == CurveModel::Kind::Elliptic) {
        auto a1 = embed(e, C.a[0]), a2 = embed(e, C.a[1]), a3 = embed(e, C.a[2]),
             a4 = embed(e, C.a[3]), a6 = embed(e, C.a[4]);
        i64 total = 1;  // the single point at infinity
        auto x = Fr.zero();
        for (i64 i = 0; i < qr; ++i, Fr.incr(x)) {
            auto x2 = Fr.mul(x, x);
            auto rhs = Fr.add(Fr.add(Fr.mul(x2, x), Fr.mul(a2, x2)),
                              Fr.add(Fr.mul(a4, x), a6));
            auto h = Fr.add(Fr.mul(a1, x), a3);
            if (F.p() == 2) {
                if (Fr.is_zero(h)) {
                    total += 1;  // y^2 = rhs has exactly one root
                } else {
                    // y = h z reduces to z^2 + z = rhs / h^2
                    auto t = Fr.mul(rhs, Fr.inv(Fr.mul(h, h)));
                    total += Fr.trace_to_prime(t) == 0 ? 2 : 0;
                }
            } else {
                // (2y + h)^2 = 4 rhs + h^2
                auto z = Fr.add(Fr.mul(Fr.from_int(4), rhs), Fr.mul(h, h));
                total += 1 + Fr.quadratic_character(z);
            }
        }
        return total;
    }

    // hyperelliptic, odd characteristic
    FqPoly f;
    f.c.reserve(C.f.c.size());
    for (const auto& cf : C.f.c) f.c.push_back(embed(e, cf));
    int d = fqpoly_deg(F, C.f);
    i64 total = 0;
    auto x = Fr.zero();
    for (i64 i = 0; i < qr; ++i, Fr.incr(x))
        total += 1 + Fr.quadratic_character(fqpoly_eval(Fr, f, x));
    if (d % 2 == 1)
        total += 1;
    else
        total += 1 + Fr.quadratic_character(embed(e, C.f.c[static_cast<size_t>(d)]));
    return total;
}

std::vector<i64> zeta_power_sums(const IPoly& P, i64 q, int rmax) {
    (void)q;
    int dg = ip_deg(P);
    if (dg < 0 || P[0] != 1) throw InvalidInput("zeta numerator must have P(0) = 1");
    std::vector<i64> S(static_cast<size_t>(rmax) + 1, 0);
    for (int k = 1; k <= rmax; ++k) {
        i64 s = 0;
        if (k <= dg) s = checked_mul(static_cast<i64>(k), P[static_cast<size_t>(k)]);
        for (int i = 1; i < k && i <= dg; ++i)
            s = checked_add(s, checked_mul(P[static_cast<size_t>(i)], S[static_cast<size_t>(k - i)]));
        S[static_cast<size_t>(k)] = -s;
    }
    return std::vector<i64>(S.begin() + 1, S.end());
}

IPoly zeta_numerator(const CurveModel& C, i64 cap) {
    const i64 q = curve_q(C);
    const int g = curve_genus(C);
    if (g == 0) return {1};

    std::vector<i64> N(static_cast<size_t>(g));
    for (int r = 1; r <= g; ++r) N[static_cast<size_t>(r - 1)] = count_points(C, r, cap);

    IPoly c(static_cast<size_t>(2 * g) + 1, 0);
    c[0] = 1;
    std::vector<i64> s(static_cast<size_t>(g) + 1, 0);
    for (int i = 1; i <= g; ++i)
        s[static_cast<size_t>(i)] = N[static_cast<size_t>(i - 1)] - 1 - ipow_checked(q, i);
    for (int k = 1; k <= g; ++k) {
        i64 acc = 0;
        for (int i = 1; i <= k; ++i)
            acc = checked_add(acc, checked_mul(s[static_cast<size_t>(i)], c[static_cast<size_t>(k - i)]));
        if (acc % k != 0) throw BadModel("counts violate the Newton recurrence");
        c[static_cast<size_t>(k)] = acc / k;
    }
    for (int k = g - 1; k >= 0; --k)
        c[static_cast<size_t>(2 * g - k)] = checked_mul(ipow_checked(q, g - k), c[static_cast<size_t>(k)]);

    // cross-check all affordable counts against the completed numerator
    int depth = 2 * g;
    if (C.kind == CurveModel::Kind::RawCounts)
        depth = static_cast<int>(C.counts.size());
    auto S = zeta_power_sums(c, q, depth);
    for (int r = 1; r <= depth; ++r) {
        i64 predicted = ipow_checked(q, r) + 1 - S[static_cast<size_t>(r - 1)];
        i64 actual;
        try {
            actual = count_points(C, r, cap);
        } catch (const EnumerationTooLarge&) {
            continue;
        }
        if (actual != predicted)
            throw BadModel("point counts are inconsistent with the functional equation");
    }
    return c;
}

bool zeta_fe_symmetric(const IPoly& P, i64 q) {
    int dg = ip_deg(P);
    if (dg % 2 != 0) return false;
    int g = dg / 2;
    for (int k = 0; k <= g; ++k)
        if (P[static_cast<size_t>(2 * g - k)] != checked_mul(ipow_checked(q, g - k), P[static_cast<size_t>(k)]))
            return false;
    return true;
}

bool zeta_rh_holds(const IPoly& P, i64 q, double tol) {
    if (ip_deg(P) <= 0) return true;
    double expect = 1.0 / std::sqrt(static_cast<double>(q));
    for (const auto& z : ip_roots(P))
        if (std::abs(std::abs(z) - expect) > tol) return false;
    return true;
}

IPoly frobenius_charpoly_from_zeta(const IPoly& P) {
    int dg = ip_deg(P);
    IPoly h(static_cast<size_t>(dg) + 1, 0);
    for (int k = 0; k <= dg; ++k) h[static_cast<size_t>(k)] = P[static_cast<size_t>(dg - k)];
    return h;
}

// ---- places of P^1 ----

int place_degree(const Place& v) {
    return v.infinite ? 1 : static_cast<int>(v.poly.c.size()) - 1;
}

namespace {

i64 moebius(i64 n) {
    i64 m = 1;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            m = -m;
        }
    }
    if (n > 1) m = -m;
    return m;
}

}  // namespace

std::vector<i64> place_counts(i64 q, int emax) {
    std::vector<i64> N(static_cast<size_t>(emax));
    for (int e = 1; e <= emax; ++e) {
        i64 total = 0;
        for (i64 d = 1; d <= e; ++d)
            if (e % d == 0) total = checked_add(total, checked_mul(moebius(d), ipow_checked(q, e / static_cast<int>(d))));
        N[static_cast<size_t>(e - 1)] = total / e;
        if (e == 1) N[0] += 1;  // the infinite place
    }
    return N;
}

std::vector<Place> enumerate_places(const FqField& F, int maxdeg, i64 cap) {
    i64 q = static_cast<i64>(F.q());
    i64 budget = 0;
    for (int d = 1; d <= maxdeg; ++d) budget = checked_add(budget, ipow_checked(q, d));
    if (static_cast<u64>(budget) > static_cast<u64>(cap))
        throw EnumerationTooLarge("place sieve", static_cast<u64>(budget), static_cast<u64>(cap));

    std::vector<Place> out;
    out.push_back({true, {}});
    // monic polynomials of degree d in base-q counting order, sieved by
    // trial division against previously found irreducibles
    std::vector<FqPoly> irr;
    for (int d = 1; d <= maxdeg; ++d) {
        i64 qd = ipow_checked(q, d);
        for (i64 idx = 0; idx < qd; ++idx) {
            FqPoly f;
            f.c.resize(static_cast<size_t>(d) + 1);
            i64 t = idx;
            for (int i = 0; i < d; ++i) {
                f.c[static_cast<size_t>(i)] = F.element_from_index(static_cast<u64>(t % q));
                t /= q;
            }
            f.c[static_cast<size_t>(d)] = F.one();
            bool composite = false;
            for (const auto& g : irr) {
                if (2 * (static_cast<int>(g.c.size()) - 1) > d) break;
                if (fqpoly_deg(F, fqpoly_rem(F, f, g)) < 0) {
                    composite = true;
                    break;
                }
            }
            if (!composite) {
                irr.push_back(f);
                out.push_back({false, f});
            }
        }
        // keep the sieve list sorted by degree (it is, by construction)
    }
    return out;
}

Place canonical_place(const FqField& F, int d, i64 cap) {
    for (const auto& v : enumerate_places(F, d, cap))
        if (!v.infinite && place_degree(v) == d) return v;
    throw InvalidInput("no place of the requested degree");  // unreachable for d >= 1
}

}  // namespace iwff

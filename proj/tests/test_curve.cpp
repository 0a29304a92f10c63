#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>

#include "iwff/curve.hpp"
#include "iwff/errors.hpp"

using namespace iwff;

namespace {

// literal projective count for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// over the given field (independent of the character/trace shortcuts)
i64 brute_weierstrass(const FqField& F, const std::vector<FqElem>& a) {
    i64 total = 1;
    for (u64 i = 0; i < F.q(); ++i) {
        auto x = F.element_from_index(i);
        auto x2 = F.mul(x, x);
        auto rhs = F.add(F.add(F.mul(x2, x), F.mul(a[1], x2)), F.add(F.mul(a[3], x), a[4]));
        for (u64 j = 0; j < F.q(); ++j) {
            auto y = F.element_from_index(j);
            auto lhs = F.add(F.mul(y, y), F.add(F.mul(F.mul(a[0], x), y), F.mul(a[2], y)));
            if (lhs == rhs) ++total;
        }
    }
    return total;
}

i64 brute_hyperelliptic(const FqField& F, const FqPoly& f) {
    int d = fqpoly_deg(F, f);
    i64 total = 0;
    for (u64 i = 0; i < F.q(); ++i) {
        auto x = F.element_from_index(i);
        auto rhs = fqpoly_eval(F, f, x);
        for (u64 j = 0; j < F.q(); ++j) {
            auto y = F.element_from_index(j);
            if (F.mul(y, y) == rhs) ++total;
        }
    }
    if (d % 2 == 1) return total + 1;
    return total + 1 + F.quadratic_character(f.c[static_cast<size_t>(d)]);
}

std::vector<FqElem> embed_all(const FqEmbedding& e, const std::vector<FqElem>& a) {
    std::vector<FqElem> r;
    for (const auto& v : a) r.push_back(e.map(v));
    return r;
}

}  // namespace

TEST_CASE("elliptic counting vs brute force, odd characteristic") {
    FqField F3(3, 1);
    auto C = curve_elliptic_ints(F3, {0, 1, 0, 0, 1});  // y^2 = x^3 + x^2 + 1
    CHECK(count_points(C, 1) == 6);                      // a = -2
    CHECK(count_points(C, 1) == brute_weierstrass(F3, C.a));

    FqField F9(3, 2);
    FqEmbedding e(F3, F9);
    CHECK(count_points(C, 2) == brute_weierstrass(F9, embed_all(e, C.a)));

    FqField F5(5, 1);
    auto E = curve_elliptic_ints(F5, {0, 0, 0, 1, 1});  // y^2 = x^3 + x + 1
    CHECK(count_points(E, 1) == 9);                      // a = -3
    CHECK(count_points(E, 1) == brute_weierstrass(F5, E.a));
    FqField F25(5, 2);
    FqEmbedding e5(F5, F25);
    CHECK(count_points(E, 2) == brute_weierstrass(F25, embed_all(e5, E.a)));
}

TEST_CASE("elliptic counting in characteristic 2") {
    FqField F2(2, 1);
    auto C = curve_elliptic_ints(F2, {1, 0, 0, 0, 1});  // y^2 + xy = x^3 + 1
    CHECK(count_points(C, 1) == 4);                      // a = -1, ordinary
    CHECK(count_points(C, 1) == brute_weierstrass(F2, C.a));
    for (int r = 2; r <= 4; ++r) {
        FqField Fr(2, r);
        FqEmbedding e(F2, Fr);
        CHECK(count_points(C, r) == brute_weierstrass(Fr, embed_all(e, C.a)));
    }

    // supersingular comparison point: y^2 + y = x^3 has a = 0
    auto S = curve_elliptic_ints(F2, {0, 0, 1, 0, 0});
    CHECK(count_points(S, 1) == 3);
}

TEST_CASE("hyperelliptic counting vs brute force") {
    FqField F5(5, 1);
    auto f = fqpoly_from_ints(F5, {1, 1, 0, 0, 0, 1});  // x^5 + x + 1
    auto C = curve_hyperelliptic(F5, f);
    CHECK(curve_genus(C) == 2);
    CHECK(count_points(C, 1) == brute_hyperelliptic(F5, f));

    FqField F25(5, 2);
    FqEmbedding e(F5, F25);
    FqPoly f25;
    for (const auto& cf : f.c) f25.c.push_back(e.map(cf));
    CHECK(count_points(C, 2) == brute_hyperelliptic(F25, f25));

    // even degree: two or zero points at infinity depending on the leading
    // coefficient being a square
    auto g = fqpoly_from_ints(F5, {1, 1, 0, 0, 0, 0, 2});  // 2x^6 + x + 1
    auto C2 = curve_hyperelliptic(F5, g);
    CHECK(curve_genus(C2) == 2);
    CHECK(count_points(C2, 1) == brute_hyperelliptic(F5, g));
}

TEST_CASE("model validation") {
    FqField F5(5, 1);
    CHECK_THROWS_AS(curve_elliptic_ints(F5, {0, 0, 0, 0, 0}), BadModel);       // cusp
    CHECK_THROWS_AS(curve_elliptic_ints(F5, {0, 0, 0, -3, 2}), BadModel);      // node
    auto fsq = fqpoly_from_ints(F5, {0, 0, 1, 1});  // x^2 (x + 1)
    CHECK_THROWS_AS(curve_hyperelliptic(F5, fsq), BadModel);
    FqField F2(2, 1);
    auto f2 = fqpoly_from_ints(F2, {1, 1, 0, 1});
    CHECK_THROWS_AS(curve_hyperelliptic(F2, f2), Unsupported);
    CHECK_THROWS_AS(curve_raw(12, 1, {13}), InvalidInput);  // 12 not a prime power
}

TEST_CASE("zeta numerator, functional equation, RH") {
    FqField F3(3, 1);
    auto C = curve_elliptic_ints(F3, {0, 1, 0, 0, 1});
    auto P = zeta_numerator(C);
    REQUIRE(P.size() == 3);
    CHECK(P[0] == 1);
    CHECK(P[1] == 2);  // -a with a = -2
    CHECK(P[2] == 3);
    CHECK(zeta_fe_symmetric(P, 3));
    CHECK(zeta_rh_holds(P, 3));
    auto h = frobenius_charpoly_from_zeta(P);
    CHECK(h == IPoly{3, 2, 1});  // x^2 + 2x + 3

    // genus 2: degree 4 numerator with FE-filled top half
    FqField F5(5, 1);
    auto H = curve_hyperelliptic(F5, fqpoly_from_ints(F5, {1, 1, 0, 0, 0, 1}));
    auto P2 = zeta_numerator(H);
    REQUIRE(P2.size() == 5);
    CHECK(P2[0] == 1);
    CHECK(zeta_fe_symmetric(P2, 5));
    CHECK(zeta_rh_holds(P2, 5));
    CHECK(P2[4] == 25);

    // P^1 has trivial numerator
    CHECK(zeta_numerator(curve_p1(F3)) == IPoly{1});
}

TEST_CASE("power sums drive the Weil recurrence") {
    FqField F3(3, 1);
    auto C = curve_elliptic_ints(F3, {0, 1, 0, 0, 1});
    auto P = zeta_numerator(C);
    auto S = zeta_power_sums(P, 3, 6);
    // S_r = alpha^r + beta^r satisfies S_r = a S_{r-1} - q S_{r-2}
    i64 a = -2, q = 3;
    CHECK(S[0] == a);
    CHECK(S[1] == a * S[0] - q * 2);
    for (int r = 3; r <= 6; ++r)
        CHECK(S[static_cast<size_t>(r - 1)] ==
              a * S[static_cast<size_t>(r - 2)] - q * S[static_cast<size_t>(r - 3)]);
    // counts predicted by the recurrence match enumeration up to depth 4
    for (int r = 1; r <= 4; ++r) {
        i64 qr = 1;
        for (int i = 0; i < r; ++i) qr *= 3;
        CHECK(count_points(C, r) == qr + 1 - S[static_cast<size_t>(r - 1)]);
    }

    // genus-2 check at depths 3 and 4 (beyond the Newton inputs)
    FqField F5(5, 1);
    auto H = curve_hyperelliptic(F5, fqpoly_from_ints(F5, {1, 1, 0, 0, 0, 1}));
    auto P2 = zeta_numerator(H);
    auto S2 = zeta_power_sums(P2, 5, 4);
    for (int r = 3; r <= 4; ++r) {
        i64 qr = 1;
        for (int i = 0; i < r; ++i) qr *= 5;
        CHECK(count_points(H, r) == qr + 1 - S2[static_cast<size_t>(r - 1)]);
    }
}

TEST_CASE("raw counts and consistency enforcement") {
    auto C = curve_raw(3, 1, {6, 12});
    auto P = zeta_numerator(C);
    CHECK(P == IPoly{1, 2, 3});
    // N_2 inconsistent with the functional equation
    auto bad = curve_raw(3, 1, {6, 13});
    CHECK_THROWS_AS(zeta_numerator(bad), BadModel);
    // prime-power base field sizes are accepted
    auto C4 = curve_raw(4, 1, {6});
    CHECK(zeta_numerator(C4) == IPoly{1, 1, 4});  // a = -1 over F_4
}

TEST_CASE("place counts match the sieve") {
    auto N5 = place_counts(5, 4);
    CHECK(N5 == std::vector<i64>{6, 10, 40, 150});

    for (i64 q : {2, 3, 5}) {
        FqField F(q, 1);
        int maxdeg = q == 5 ? 3 : 4;
        auto places = enumerate_places(F, maxdeg);
        auto N = place_counts(q, maxdeg);
        std::vector<i64> found(static_cast<size_t>(maxdeg), 0);
        for (const auto& v : places) found[static_cast<size_t>(place_degree(v) - 1)]++;
        CHECK(found == N);
    }

    // first degree-2 irreducible over F_5 in counting order is x^2 + 2
    FqField F5(5, 1);
    auto v = canonical_place(F5, 2);
    CHECK_FALSE(v.infinite);
    REQUIRE(v.poly.c.size() == 3);
    CHECK(v.poly.c[0] == F5.from_int(2));
    CHECK(v.poly.c[1] == F5.from_int(0));
    CHECK(v.poly.c[2] == F5.from_int(1));

    // degree-1 canonical place is x itself (the infinite place is separate)
    auto w = canonical_place(F5, 1);
    CHECK(place_degree(w) == 1);
    CHECK(w.poly.c[0] == F5.from_int(0));
}

TEST_CASE("counting caps") {
    FqField F5(5, 1);
    auto C = curve_elliptic_ints(F5, {0, 0, 0, 1, 1});
    CHECK_THROWS_AS(count_points(C, 20), EnumerationTooLarge);
    CHECK_THROWS_AS(enumerate_places(F5, 12), EnumerationTooLarge);
}

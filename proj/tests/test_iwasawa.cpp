#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "iwff/errors.hpp"
#include "iwff/iwasawa.hpp"

using namespace iwff;

namespace {

IwasawaSeries random_series(const CtxPtr& ctx, int D, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    std::vector<ORes> a;
    for (int i = 0; i < D; ++i) a.push_back(ctx->r_from_int(d(rng)));
    return sr_make(ctx, D, std::move(a));
}

}  // namespace

TEST_CASE("group ring structure at level 2") {
    auto ctx = PadicCtx::make(3, 2, 6);
    int n = 2;
    auto g = iw_gamma_pow(ctx, n, 1);
    CHECK(iw_eq(iw_pow(g, 9), iw_one(ctx, n)));
    CHECK_FALSE(iw_eq(iw_pow(g, 3), iw_one(ctx, n)));

    // norm annihilation: (gamma0 - 1) * sum_k gamma0^k = 0
    auto full_norm = iw_norm_element(ctx, n, 0);
    CHECK(iw_is_zero(iw_mul(iw_sub(g, iw_one(ctx, n)), full_norm)));

    // associativity and commutativity spot check
    auto x = iw_add(iw_scale(g, ctx->r_from_int(7)), iw_gamma_pow(ctx, n, 5));
    auto y = iw_sub(iw_gamma_pow(ctx, n, 8), iw_scalar(ctx, n, ctx->r_from_int(2)));
    auto z = iw_add(iw_one(ctx, n), iw_gamma_pow(ctx, n, 4));
    CHECK(iw_eq(iw_mul(iw_mul(x, y), z), iw_mul(x, iw_mul(y, z))));
    CHECK(iw_eq(iw_mul(x, y), iw_mul(y, x)));
}

TEST_CASE("units and Newton inversion") {
    auto ctx = PadicCtx::make(5, 2, 8);
    int n = 2;
    auto g = iw_gamma_pow(ctx, n, 1);
    // 1 - q gamma0 with q = 25 has unit augmentation 1 - 25
    auto x = iw_sub(iw_one(ctx, n), iw_scale(g, ctx->r_from_int(25)));
    CHECK(iw_is_unit(x));
    auto xi = iw_inv(x);
    CHECK(iw_eq(iw_mul(x, xi), iw_one(ctx, n)));
    CHECK(iw_eq(iw_mul(xi, x), iw_one(ctx, n)));

    // gamma0 - 1 is not a unit
    auto t = iw_sub(g, iw_one(ctx, n));
    CHECK_FALSE(iw_is_unit(t));
    CHECK_THROWS_AS(iw_inv(t), NotAUnit);

    // 1 + (gamma0 - 1) * anything is a unit (augmentation 1)
    auto y = iw_add(iw_one(ctx, n), iw_mul(t, iw_gamma_pow(ctx, n, 7)));
    CHECK(iw_is_unit(y));
    CHECK(iw_eq(iw_mul(y, iw_inv(y)), iw_one(ctx, n)));
}

TEST_CASE("sharp involution is a ring automorphism") {
    auto ctx = PadicCtx::make(3, 2, 6);
    int n = 2;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    auto x = iw_zero(ctx, n);
    auto y = iw_zero(ctx, n);
    for (auto& v : x.c) v = ctx->r_from_int(d(rng));
    for (auto& v : y.c) v = ctx->r_from_int(d(rng));

    CHECK(iw_eq(iw_sharp(iw_sharp(x)), x));
    CHECK(iw_eq(iw_sharp(iw_mul(x, y)), iw_mul(iw_sharp(x), iw_sharp(y))));
    CHECK(iw_eq(iw_sharp(iw_add(x, y)), iw_add(iw_sharp(x), iw_sharp(y))));
    CHECK(iw_aug(iw_sharp(x)) == iw_aug(x));
    // on characters: omega(x^sharp) = omega^{-1}(x)
    PCharacter om{2, 4};
    PCharacter ominv{2, 9 - 4};
    CHECK(iw_eval(iw_sharp(x), om) == iw_eval(x, ominv));
}

TEST_CASE("character evaluation") {
    auto ctx = PadicCtx::make(5, 2, 8);
    int n = 2;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    auto x = iw_zero(ctx, n);
    auto y = iw_zero(ctx, n);
    for (auto& v : x.c) v = ctx->r_from_int(d(rng));
    for (auto& v : y.c) v = ctx->r_from_int(d(rng));

    // trivial character is the augmentation
    CHECK(iw_eval(x, {2, 0}) == iw_aug(x));
    CHECK(iw_eval(x, {0, 0}) == iw_aug(x));

    // multiplicativity for every level-2 character
    for (const auto& om : all_characters(5, 2))
        CHECK(iw_eval(iw_mul(x, y), om) == ctx->r_mul(iw_eval(x, om), iw_eval(y, om)));

    // levels: omega of level 1 with t sees zeta_5^t
    auto g = iw_gamma_pow(ctx, n, 1);
    CHECK(iw_eval(g, {1, 2}) == ctx->r_zeta_pow(2 * 5));
    CHECK_THROWS_AS(iw_eval(g, {3, 1}), InvalidInput);
}

TEST_CASE("twist by a unit") {
    auto ctx = PadicCtx::make(5, 1, 6);
    int n = 1;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    auto x = iw_zero(ctx, n);
    for (auto& v : x.c) v = ctx->r_from_int(d(rng));

    auto c = ctx->r_from_int(7);
    CHECK(iw_eq(iw_twist(iw_twist(x, c), ctx->r_inv(c)), x));
    // twisting by omega(gamma0) = zeta shifts character evaluation
    auto z = ctx->r_zeta_pow(1);
    for (i64 t = 0; t < 5; ++t)
        CHECK(iw_eval(iw_twist(x, z), {1, t}) == iw_eval(x, {1, (t + 4) % 5}));
    CHECK_THROWS_AS(iw_twist(x, ctx->r_from_int(10)), NotAUnit);
}

TEST_CASE("projection to lower level") {
    auto ctx = PadicCtx::make(3, 2, 6);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    auto x = iw_zero(ctx, 2);
    auto y = iw_zero(ctx, 2);
    for (auto& v : x.c) v = ctx->r_from_int(d(rng));
    for (auto& v : y.c) v = ctx->r_from_int(d(rng));

    // ring homomorphism
    CHECK(iw_eq(iw_project(iw_mul(x, y), 1), iw_mul(iw_project(x, 1), iw_project(y, 1))));
    CHECK(iw_eq(iw_project(iw_add(x, y), 1), iw_add(iw_project(x, 1), iw_project(y, 1))));
    // compatible with characters that factor through the quotient
    for (i64 t = 0; t < 3; ++t)
        CHECK(iw_eval(iw_project(x, 1), {1, t}) == iw_eval(x, {1, t}));
    CHECK(iw_eval(iw_project(x, 0), {0, 0}) == iw_aug(x));
}

TEST_CASE("norm elements") {
    auto ctx = PadicCtx::make(3, 2, 6);
    int n = 2, m = 1;
    auto nu = iw_norm_element(ctx, n, m);
    CHECK(iw_aug(nu) == ctx->r_from_int(3));
    // (gamma0^{p^m} - 1) nu = gamma0^{p^n} - 1 = 0
    auto w = iw_sub(iw_gamma_pow(ctx, n, 3), iw_one(ctx, n));
    CHECK(iw_is_zero(iw_mul(w, nu)));
    // characters through Gamma_m see the index, deeper characters see 0
    CHECK(iw_eval(nu, {1, 2}) == ctx->r_from_int(3));
    CHECK(ctx->r_is_zero(iw_eval(nu, {2, 1})));
    // t = 3 at level 2 has order 3, so it factors through Gamma_1
    CHECK(iw_eval(nu, {2, 3}) == ctx->r_from_int(3));
}

TEST_CASE("simple elements and zero sets") {
    auto ctx = PadicCtx::make(3, 2, 6);
    int n = 2;
    for (int k = 1; k <= n; ++k) {
        auto s = iw_simple_element(ctx, n, k);
        auto z = zero_set(s);
        // killed exactly by characters of exact order p^k
        size_t expect = static_cast<size_t>(gamma_order(3, k) - gamma_order(3, k - 1));
        CHECK(z.size() == expect);
        for (const auto& tup : z) {
            i64 t = tup[0];
            i64 ord = 9 / std::gcd<i64>(t == 0 ? 9 : t, 9);
            CHECK(ord == gamma_order(3, k));
        }
        // the sharp image is an associate: s^sharp = gamma0^{-(p-1)p^{k-1}} s
        auto assoc = iw_mul(iw_gamma_pow(ctx, n, -2 * gamma_order(3, k - 1)), s);
        CHECK(iw_eq(iw_sharp(s), assoc));
    }

    auto t = iw_sub(iw_gamma_pow(ctx, n, 1), iw_one(ctx, n));
    auto z = zero_set(t);
    REQUIRE(z.size() == 1);
    CHECK(z[0][0] == 0);
}

TEST_CASE("two-variable ring and the cross-term element") {
    auto ctx = PadicCtx::make(3, 2, 8);
    int n = 2;
    auto g1 = iw2_gamma(ctx, n, 1, 1);
    auto g2 = iw2_gamma(ctx, n, 2, 1);
    auto one = iw2_scalar(ctx, n, ctx->r_one());
    auto m1 = iw2_add(g1, iw2_scale(one, ctx->r_from_int(-1)));
    auto m2 = iw2_add(g2, iw2_scale(one, ctx->r_from_int(-1)));
    // generators commute
    CHECK(iw2_mul(g1, g2).c == iw2_mul(g2, g1).c);

    // xi = (g1-1) + p (g2-1) + p^2 (g1-1)(g2-1) vanishes only at the
    // trivial character pair: valuations of the three terms never tie
    auto xi = iw2_add(iw2_add(m1, iw2_scale(m2, ctx->r_from_int(3))),
                      iw2_scale(iw2_mul(m1, m2), ctx->r_from_int(9)));
    auto z = zero_set2(xi);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == std::vector<i64>{0, 0});

    // eval factors match the defining formula at a sample character pair
    PCharacter o1{2, 1}, o2{1, 1};
    auto e1 = ctx->r_sub(character_value(ctx, o1), ctx->r_one());
    auto e2 = ctx->r_sub(character_value(ctx, o2), ctx->r_one());
    auto expect = ctx->r_add(ctx->r_add(e1, ctx->r_scale(e2, 3)),
                             ctx->r_scale(ctx->r_mul(e1, e2), 9));
    CHECK(iw2_eval(xi, o1, o2) == expect);
}

TEST_CASE("series arithmetic and group-ring compatibility") {
    auto ctx = PadicCtx::make(5, 2, 8);
    int n = 1, D = 12;
    auto x = iw_from_Tpoly(ctx, n, {2, 1});           // 2 + T
    auto y = iw_from_Tpoly(ctx, n, {0, 0, 1});        // T^2
    // products of low-degree T-polynomials map to series products
    // (degrees stay below p^n, so no wrap-around interferes)
    auto lhs = iw_to_series(iw_mul(x, y), D);
    auto rhs = sr_mul(iw_to_series(x, D), iw_to_series(y, D));
    CHECK(sr_eq(lhs, rhs));

    // gamma0^k expands to binomial coefficients
    auto s = iw_to_series(iw_gamma_pow(ctx, n, 3), D);
    CHECK(s.a[0] == ctx->r_one());
    CHECK(s.a[1] == ctx->r_from_int(3));
    CHECK(s.a[2] == ctx->r_from_int(3));
    CHECK(s.a[3] == ctx->r_one());
    CHECK(ctx->r_is_zero(s.a[4]));

    // evaluation at a character matches the series at T = eps - 1
    auto el = iw_from_Tpoly(ctx, n, {1, 7, 0, 2, 3});
    auto sr = iw_to_series(el, D);
    for (i64 t = 0; t < 5; ++t) {
        auto exact = ctx->from_res(iw_eval(el, {1, t}));
        auto eps = character_value(ctx, PCharacter{1, t});
        auto pt = t == 0 ? ctx->zero() : ctx->from_res(ctx->r_sub(eps, ctx->r_one()));
        auto approx = sr_eval(sr, pt);
        CHECK(ctx->cmp(exact, approx).kind != CmpKind::Different);
    }
}

TEST_CASE("sharp and twist on series") {
    auto ctx = PadicCtx::make(5, 0, 8);
    int D = 16;
    std::mt19937_64 rng(17);
    auto f = random_series(ctx, D, rng);
    CHECK(sr_eq(sr_sharp(sr_sharp(f)), f));
    auto g = random_series(ctx, D, rng);
    CHECK(sr_eq(sr_sharp(sr_mul(f, g)), sr_mul(sr_sharp(f), sr_sharp(g))));

    // twist must refuse a non-1-unit
    CHECK_THROWS_AS(sr_twist(f, ctx->r_from_int(2)), Unsupported);

    // group-ring twist and series twist agree on polynomial elements
    auto ctx2 = PadicCtx::make(5, 0, 8);
    int n = 2, D2 = 32;
    auto el = iw_from_Tpoly(ctx2, n, {3, 1, 4, 1, 5, 9, 2, 6});
    auto c = ctx2->r_from_int(1 + 25 * 3);
    auto lhs = iw_to_series(iw_twist(el, c), D2);
    auto rhs = sr_twist(iw_to_series(el, D2), c);
    CHECK(sr_eq(lhs, rhs));
    // inverse twist undoes it
    CHECK(sr_eq(sr_twist(rhs, ctx2->r_inv(c)), iw_to_series(el, D2)));
}

TEST_CASE("ord and leading coefficient") {
    auto ctx = PadicCtx::make(3, 0, 6);
    int D = 10;
    auto f = sr_from_Tpoly(ctx, D, {0, 0, 5, 1});
    auto [ord, lead] = sr_ord_leading(f);
    CHECK(ord == 2);
    CHECK(ctx->to_res(lead) == ctx->r_from_int(5));

    // multiplicativity when leading coefficients are units
    auto g = sr_from_Tpoly(ctx, D, {0, 2, 1});
    auto fg = sr_mul(f, g);
    auto [ofg, lfg] = sr_ord_leading(fg);
    CHECK(ofg == 3);
    CHECK(ctx->to_res(lfg) == ctx->r_from_int(10));

    CHECK_THROWS_AS(sr_ord_leading(sr_zero(ctx, D)), PrecisionLoss);
}

TEST_CASE("weierstrass preparation: known factorization") {
    auto ctx = PadicCtx::make(5, 0, 8);
    int D = 64;  // comfortably above lambda * N, so dist is canonical
    // f = (T^2 - 5)(1 + 3T + T^2 + T^5)
    auto dist = sr_from_Tpoly(ctx, D, {-5, 0, 1});
    auto unit = sr_from_Tpoly(ctx, D, {1, 3, 1, 0, 0, 1});
    auto f = sr_mul(dist, unit);
    auto w = weierstrass_prep(f);
    CHECK(w.mu == 0);
    CHECK(w.digits == 8);
    REQUIRE(w.dist.size() == 3);
    CHECK(w.dist[0] == ctx->r_from_int(-5));
    CHECK(ctx->r_is_zero(w.dist[1]));
    CHECK(w.dist[2] == ctx->r_one());
    // the cofactor is a unit and the identity is exact
    CHECK(ctx->r_is_unit(w.unit.a[0]));
    CHECK(sr_eq(sr_mul(sr_make(ctx, D, w.dist), w.unit), f));

    // scaling by p^2 moves into mu and costs two digits
    auto f2 = sr_scale(f, ctx->r_from_int(25));
    auto w2 = weierstrass_prep(f2);
    CHECK(w2.mu == 2);
    CHECK(w2.digits == 6);
    for (size_t i = 0; i < 3; ++i)
        CHECK(ctx->r_valuation(ctx->r_sub(w2.dist[i], w.dist[i])) >= 6);
}

TEST_CASE("weierstrass preparation: random reconstruction") {
    auto ctx = PadicCtx::make(3, 0, 6);
    int D = 40;  // > lambda_max * (N+1): boundary corrections stay above p^N
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<i64> dmu(0, 2), dlam(0, 5), dc(0, ctx->pN() - 1),
        du(1, ctx->pN() - 1);
    for (int trial = 0; trial < 10; ++trial) {
        i64 mu = dmu(rng);
        int lam = static_cast<int>(dlam(rng));
        std::vector<ORes> dist(static_cast<size_t>(lam) + 1);
        for (int i = 0; i < lam; ++i) dist[static_cast<size_t>(i)] = ctx->r_from_int(3 * dc(rng));
        dist[static_cast<size_t>(lam)] = ctx->r_one();
        auto u = random_series(ctx, D, rng);
        i64 u0 = du(rng);
        u.a[0] = ctx->r_from_int(u0 % 3 == 0 ? u0 + 1 : u0);
        auto f = sr_mul(sr_make(ctx, D, dist), u);
        for (i64 k = 0; k < mu; ++k) f = sr_scale(f, ctx->r_from_int(3));

        auto w = weierstrass_prep(f);
        CHECK(w.mu == mu);
        CHECK(static_cast<int>(w.dist.size()) == lam + 1);
        // exact reconstruction: p^mu * dist * unit == f mod (p^N, T^D)
        auto back = sr_mul(sr_make(ctx, D, w.dist), w.unit);
        for (i64 k = 0; k < mu; ++k) back = sr_scale(back, ctx->r_from_int(3));
        CHECK(sr_eq(back, f));
        // and the recovered distinguished factor matches the planted one
        // to `digits` (canonical at this truncation)
        i64 bound = static_cast<i64>(w.digits);
        for (int i = 0; i <= lam; ++i)
            CHECK(ctx->r_valuation(ctx->r_sub(w.dist[static_cast<size_t>(i)],
                                              dist[static_cast<size_t>(i)])) >= bound);
    }
}

TEST_CASE("weierstrass preparation: ramified coefficients") {
    auto ctx = PadicCtx::make(3, 1, 6);  // e = 2, pi = zeta_3 - 1
    int D = 16;  // > lambda * (e*N + 1) = 13
    // f = (T - pi)(1 + T + 2T^2): distinguished part T - pi
    std::vector<ORes> dd = {ctx->r_neg(ctx->r_pi()), ctx->r_one()};
    auto unit = sr_from_Tpoly(ctx, D, {1, 1, 2});
    auto f = sr_mul(sr_make(ctx, D, dd), unit);
    auto w = weierstrass_prep(f);
    CHECK(w.mu == 0);
    REQUIRE(w.dist.size() == 2);
    CHECK(w.dist[0] == ctx->r_neg(ctx->r_pi()));
    CHECK(w.dist[1] == ctx->r_one());
    CHECK(sr_eq(sr_mul(sr_make(ctx, D, w.dist), w.unit), f));

    // odd pi-power: stripping pi costs one p-digit
    auto fp = sr_scale(f, ctx->r_pi());
    auto wp = weierstrass_prep(fp);
    CHECK(wp.mu == 1);
    CHECK(wp.digits == 5);
}

TEST_CASE("weierstrass preparation: failure modes") {
    auto ctx = PadicCtx::make(3, 0, 6);
    int D = 12;
    CHECK_THROWS_AS(weierstrass_prep(sr_zero(ctx, D)), PrecisionLoss);
    // all coefficients divisible by p^N
    auto f = sr_scale(sr_from_Tpoly(ctx, D, {1, 1}), ctx->r_from_int(729));
    CHECK_THROWS_AS(weierstrass_prep(f), PrecisionLoss);
    // distinguished degree inside the guard zone
    IPoly high(static_cast<size_t>(D), 0);
    high[static_cast<size_t>(D - 2)] = 1;
    high[0] = 3;
    CHECK_THROWS_AS(weierstrass_prep(sr_from_Tpoly(ctx, D, high)), InsufficientTruncation);
    // guard can be relaxed explicitly
    auto w = weierstrass_prep(sr_from_Tpoly(ctx, D, high), 1);
    CHECK(static_cast<int>(w.dist.size()) == D - 1);
}

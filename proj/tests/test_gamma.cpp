#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iwff/errors.hpp"
#include "iwff/gamma_systems.hpp"

using namespace iwff;

namespace {

const AxiomCheck* find_check(const AxiomReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool check_failed(const AxiomReport& rep, const std::string& name) {
    const AxiomCheck* c = find_check(rep, name);
    REQUIRE(c != nullptr);
    return !c->pass;
}

std::vector<int> exps_a(const GammaSystem& s, int n) { return s.a[(size_t)n].exps; }
std::vector<int> exps_b(const GammaSystem& s, int n) { return s.b[(size_t)n].exps; }

bool same_shape(const GammaSystem& x, const GammaSystem& y) {
    if (x.M != y.M) return false;
    for (int n = 0; n <= x.M; ++n)
        if (exps_a(x, n) != exps_a(y, n) || exps_b(x, n) != exps_b(y, n)) return false;
    return true;
}

// Two-level system with zero transition maps in one direction: every axiom
// holds (norms vanish identically on Z/p) but level 0 is invisible from above.
GammaSystem zero_transition_system() {
    GammaSystem s;
    s.p = 3;
    s.k = 1;
    s.M = 1;
    Mat one(1, 1), zero(1, 1);
    one.at(0, 0) = 1;
    for (int n = 0; n <= 1; ++n) {
        FiniteGammaModule m;
        m.p = 3;
        m.n = n;
        m.exps = {1};
        m.act = one;
        s.a.push_back(m);
        s.b.push_back(m);
        s.pairing.push_back(one);
        s.pair_exp.push_back(1);
    }
    s.r_a = {zero};
    s.k_a = {one};
    s.r_b = {one};
    s.k_b = {zero};
    return s;
}

}  // namespace

TEST_CASE("synthetic towers satisfy the finite-level axioms") {
    struct Cfg {
        i64 p;
        IPoly f;
        int k;
        int M;
    };
    std::vector<Cfg> cfgs = {
        {2, {2}, 1, 2},    {2, {2, 1}, 1, 2}, {2, {2, 0, 1}, 1, 2},
        {3, {3}, 1, 2},    {3, {3, 1}, 1, 2}, {3, {3, 0, 1}, 1, 2},
        {3, {3, 3, 1}, 1, 2},                  // Phi_3(1+T)
        {3, {3, 1}, 2, 1},                     // larger twist offset
    };
    for (const auto& cfg : cfgs) {
        CAPTURE(cfg.p);
        CAPTURE(cfg.k);
        GammaSystem sys = synthetic_system(cfg.p, cfg.f, cfg.k, cfg.M);
        AxiomReport rep = validate_axioms(sys);
        for (const auto& c : rep.checks) {
            CAPTURE(c.name);
            CAPTURE(c.witness);
            CHECK(c.pass);
        }
        CHECK(rep.all_pass);
        CHECK(rep.checks.size() == 10);
        for (int n = 0; n <= cfg.M; ++n) {
            // p^{n+k} kills level n, and f itself annihilates the b side.
            CHECK(fgm_max_exp(sys.b[(size_t)n]) <= n + cfg.k);
            CHECK(fgm_max_exp(sys.a[(size_t)n]) <= n + cfg.k);
            Mat z = tpoly_action(sys.b[(size_t)n], cfg.f);
            for (int i = 0; i < z.r; ++i) {
                i64 q = ppow_i64(cfg.p, sys.b[(size_t)n].exps[(size_t)i]);
                for (int j = 0; j < z.c; ++j) CHECK(z.at(i, j) % q == 0);
            }
        }
    }
}

TEST_CASE("synthetic levels match hand-computed module structures") {
    using V = std::vector<int>;

    // f = p: Lambda_n/(p, p^{n+1}) is the group algebra over F_p.
    GammaSystem s2 = synthetic_system(2, {2}, 1, 2);
    CHECK(exps_b(s2, 0) == V{1});
    CHECK(exps_b(s2, 1) == V(2, 1));
    CHECK(exps_b(s2, 2) == V(4, 1));
    GammaSystem s3 = synthetic_system(3, {3}, 1, 2);
    CHECK(exps_b(s3, 2) == V(9, 1));
    CHECK(exps_a(s3, 2) == V(9, 1));

    // f = T + p: gamma acts by 1-p on Z/p^{n+1}.
    GammaSystem t3 = synthetic_system(3, {3, 1}, 1, 2);
    CHECK(exps_b(t3, 0) == V{1});
    CHECK(exps_b(t3, 1) == V{2});
    CHECK(exps_b(t3, 2) == V{3});
    CHECK(t3.b[1].act.at(0, 0) == 7);  // 1 - 3 mod 9
    CHECK(t3.a[1].act.at(0, 0) == 4);  // inverse-transpose action: (1-3)^{-1} mod 9
    GammaSystem t2 = synthetic_system(2, {2, 1}, 1, 2);
    CHECK(exps_b(t2, 2) == V{3});

    // f = T^2 + p at p = 3: x^{3^n}-1 lies in (f(x-1), 3^{n+1}), so every level
    // is the free rank-2 quotient Z_3[t]/(t^2+3) reduced mod 3^{n+1}.
    GammaSystem q3 = synthetic_system(3, {3, 0, 1}, 1, 2);
    CHECK(exps_b(q3, 0) == V{1});
    CHECK(exps_b(q3, 1) == V{2, 2});
    CHECK(exps_b(q3, 2) == V{3, 3});

    // f = T^2 + 2 at p = 2: the relation 2^{n+1} interferes with x^{2^n}-1.
    GammaSystem q2 = synthetic_system(2, {2, 0, 1}, 1, 2);
    CHECK(exps_b(q2, 0) == V{1});
    CHECK(exps_b(q2, 1) == V{1, 1});
    CHECK(exps_b(q2, 2) == V{2, 3});

    // f = Phi_p(1+T): levels n >= 1 are Z_p[zeta_p]/p^{n+1}.
    GammaSystem ph = synthetic_system(3, {3, 3, 1}, 1, 2);
    CHECK(exps_b(ph, 0) == V{1});
    CHECK(exps_b(ph, 1) == V{2, 2});
    CHECK(exps_b(ph, 2) == V{3, 3});
    CHECK(exps_a(ph, 2) == V{3, 3});

    // A larger twist offset does not change the tower: the order of each
    // level is capped by the augmentation-type relation, not by p^{n+k}.
    GammaSystem tk = synthetic_system(3, {3, 1}, 2, 1);
    CHECK(exps_b(tk, 0) == V{1});
    CHECK(exps_b(tk, 1) == V{2});
}

TEST_CASE("synthetic construction rejects unusable input") {
    CHECK_THROWS_AS(synthetic_system(4, {2, 1}, 1, 1), InvalidInput);
    CHECK_THROWS_AS(synthetic_system(3, {3, 1}, 0, 1), InvalidInput);
    CHECK_THROWS_AS(synthetic_system(3, {3, 1}, 1, -1), InvalidInput);
    // f = p^2: multiplication by the norm element is not well-defined on the
    // quotients, and the construction refuses to guess.
    CHECK_THROWS_AS(synthetic_system(3, {9}, 1, 1), Unsupported);
    // f = 0 makes level 2 the full group ring mod 3^3, which exceeds the cap.
    CHECK_THROWS_AS(synthetic_system(3, IPoly{}, 1, 2), EnumerationTooLarge);
    CHECK_THROWS_AS(synthetic_system(3, {3}, 1, 1, 2), EnumerationTooLarge);

    GammaSystem small = synthetic_system(3, {3}, 1, 1);
    CHECK_THROWS_AS(validate_axioms(small, 4), EnumerationTooLarge);
}

TEST_CASE("series input feeds the synthetic construction") {
    CtxPtr ctx = PadicCtx::make(3, 0, 4);
    IwasawaSeries f = sr_from_Tpoly(ctx, 8, {3, 1});
    GammaSystem from_series = synthetic_system(f, 1, 1);
    GammaSystem from_ints = synthetic_system(3, {3, 1}, 1, 1);
    CHECK(same_shape(from_series, from_ints));
    CHECK(validate_axioms(from_series).all_pass);

    CtxPtr ram = PadicCtx::make(3, 1, 4);
    IwasawaSeries g = sr_from_Tpoly(ram, 8, {3, 1});
    CHECK_THROWS_AS(synthetic_system(g, 1, 1), Unsupported);

    CtxPtr coarse = PadicCtx::make(3, 0, 1);
    IwasawaSeries h = sr_from_Tpoly(coarse, 8, {3, 1});
    CHECK_THROWS_AS(synthetic_system(h, 1, 1), InvalidInput);

    IwasawaSeries shallow = sr_from_Tpoly(ctx, 5, {3, 1});
    CHECK_THROWS_AS(synthetic_system(shallow, 1, 1), InsufficientTruncation);
}

TEST_CASE("axiom violations are reported by name with witnesses") {
    GammaSystem base = synthetic_system(3, {3, 1}, 1, 2);

    SUBCASE("pairing scaled off a unit is no longer perfect") {
        GammaSystem sys = base;
        sys.pairing[1].at(0, 0) = 3 * sys.pairing[1].at(0, 0) % 9;
        AxiomReport rep = validate_axioms(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK(check_failed(rep, "pairing perfect"));
        CHECK_FALSE(find_check(rep, "pairing perfect")->witness.empty());
    }

    SUBCASE("action of the wrong order") {
        GammaSystem sys = base;
        sys.b[1].act.at(0, 0) = 2;  // 2^3 = 8 != 1 mod 9
        AxiomReport rep = validate_axioms(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK(check_failed(rep, "action order divides the group order"));
    }

    SUBCASE("transition map violating the precision filtration") {
        GammaSystem sys = base;
        sys.r_b[0].at(0, 0) = 1;  // image of a p-torsion class must be p-torsion
        AxiomReport rep = validate_axioms(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK(check_failed(rep, "transition maps well-defined"));
    }

    SUBCASE("corestriction off by a unit breaks norm compatibility") {
        GammaSystem sys = base;
        sys.k_b[0].at(0, 0) = 2;
        AxiomReport rep = validate_axioms(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK(check_failed(rep, "norm compatibility"));
        CHECK(check_failed(rep, "pairing adjointness"));
    }

    SUBCASE("ill-defined action entry") {
        GammaSystem sys = synthetic_system(2, {2, 0, 1}, 1, 2);
        REQUIRE(sys.b[2].exps == std::vector<int>{2, 3});
        sys.b[2].act.at(1, 0) = 1;  // needs valuation >= 3-2
        AxiomReport rep = validate_axioms(sys);
        CHECK_FALSE(rep.all_pass);
        CHECK(check_failed(rep, "action well-defined"));
    }

    SUBCASE("structurally malformed systems are rejected outright") {
        GammaSystem sys = base;
        sys.pairing.pop_back();
        CHECK_THROWS_AS(validate_axioms(sys), InvalidInput);
        GammaSystem sys2 = base;
        sys2.b[1].exps = {2, 2};
        CHECK_THROWS_AS(validate_axioms(sys2), InvalidInput);
    }
}

TEST_CASE("derived systems split along a stable submodule family") {
    GammaSystem sys = synthetic_system(3, {3, 1}, 1, 2);
    using V = std::vector<int>;

    SUBCASE("multiples of p") {
        std::vector<Mat> gens;
        for (int n = 0; n <= 2; ++n) {
            Mat g(1, 1);
            g.at(0, 0) = 3;
            gens.push_back(g);
        }
        DerivedSystems d = derived_systems(sys, gens);
        CHECK(d.c_report.all_pass);
        CHECK(d.e_report.all_pass);
        CHECK(d.exact_c);
        CHECK(d.exact_e);
        CHECK(exps_a(d.C, 0) == V{});
        CHECK(exps_a(d.C, 1) == V{1});
        CHECK(exps_a(d.C, 2) == V{2});
        CHECK(exps_b(d.C, 0) == V{});
        CHECK(exps_b(d.C, 1) == V{1});
        CHECK(exps_b(d.C, 2) == V{2});
        for (int n = 0; n <= 2; ++n) {
            CHECK(exps_a(d.E, n) == V{1});
            CHECK(exps_b(d.E, n) == V{1});
        }
    }

    SUBCASE("the zero family leaves everything in E") {
        std::vector<Mat> gens(3, Mat(1, 0));
        DerivedSystems d = derived_systems(sys, gens);
        CHECK(d.exact_c);
        CHECK(d.exact_e);
        for (int n = 0; n <= 2; ++n) {
            CHECK(exps_a(d.C, n) == V{});
            CHECK(exps_b(d.C, n) == V{});
            CHECK(exps_a(d.E, n) == exps_a(sys, n));
            CHECK(exps_b(d.E, n) == exps_b(sys, n));
        }
    }

    SUBCASE("the full family leaves everything in C") {
        std::vector<Mat> gens(3, mat_identity(1));
        DerivedSystems d = derived_systems(sys, gens);
        CHECK(d.exact_c);
        CHECK(d.exact_e);
        for (int n = 0; n <= 2; ++n) {
            CHECK(exps_a(d.C, n) == exps_a(sys, n));
            CHECK(exps_b(d.C, n) == exps_b(sys, n));
            CHECK(exps_a(d.E, n) == V{});
            CHECK(exps_b(d.E, n) == V{});
        }
    }

    SUBCASE("families that are not transition-stable are rejected") {
        std::vector<Mat> gens = {mat_identity(1), Mat(1, 0), Mat(1, 0)};
        CHECK_THROWS_AS(derived_systems(sys, gens), InvalidSubmoduleFamily);
    }

    SUBCASE("generator matrices must match the coordinate count") {
        std::vector<Mat> gens(3, mat_identity(2));
        CHECK_THROWS_AS(derived_systems(sys, gens), InvalidInput);
    }
}

TEST_CASE("derived systems along a cyclotomic multiple of the group algebra") {
    GammaSystem sys = synthetic_system(3, {3}, 1, 2);
    std::vector<Mat> gens;
    for (int n = 0; n <= 2; ++n)
        gens.push_back(gamma_poly_action(sys.a[(size_t)n], {1, 1, 1}));
    DerivedSystems d = derived_systems(sys, gens);
    CHECK(d.c_report.all_pass);
    CHECK(d.e_report.all_pass);
    CHECK(d.exact_c);
    CHECK(d.exact_e);
    // Phi_3(gamma) acts as (gamma-1)^2 on F_3[Gamma_n]: the image has
    // codimension 2 once the group is large enough.
    CHECK(fgm_order_exponent(d.C.a[0]) == 0);
    CHECK(fgm_order_exponent(d.C.a[1]) == 1);
    CHECK(fgm_order_exponent(d.C.a[2]) == 7);
    CHECK(fgm_order_exponent(d.E.a[2]) == 2);
}

TEST_CASE("control analysis certifies synthetic towers as strongly controlled") {
    for (const IPoly& f : {IPoly{3}, IPoly{3, 1}, IPoly{3, 3, 1}}) {
        GammaSystem sys = synthetic_system(3, f, 1, 2);
        ControlReport ctl = control_analysis(sys);
        CHECK(ctl.strongly_controlled);
        CHECK(ctl.lemma_consistent);
        for (i64 e : ctl.a0_exp) CHECK(e == 0);
        for (i64 e : ctl.b0_exp) CHECK(e == 0);
    }
}

TEST_CASE("the stabilized subquotient system reproduces controlled input") {
    for (const IPoly& f : {IPoly{3}, IPoly{3, 1}}) {
        GammaSystem sys = synthetic_system(3, f, 1, 2);
        APrime ap = aprime_construction(sys);
        CHECK(ap.report.all_pass);
        CHECK(ap.strongly_controlled);
        CHECK_FALSE(ap.truncation_warning);
        CHECK(same_shape(ap.sys, sys));
    }

    // For Phi_p the restriction into level 0 is the zero map, so level 0 is
    // outside the image of the tower and gets stripped.
    GammaSystem ph = synthetic_system(3, {3, 3, 1}, 1, 2);
    APrime ap = aprime_construction(ph);
    CHECK(ap.report.all_pass);
    CHECK(ap.strongly_controlled);
    CHECK_FALSE(ap.truncation_warning);
    CHECK(exps_a(ap.sys, 0) == std::vector<int>{});
    CHECK(exps_b(ap.sys, 0) == std::vector<int>{});
    CHECK(exps_a(ap.sys, 1) == std::vector<int>{2, 2});
    CHECK(exps_a(ap.sys, 2) == std::vector<int>{3, 3});
}

TEST_CASE("a control defect is detected, explained, and stripped") {
    GammaSystem sys = zero_transition_system();
    AxiomReport rep = validate_axioms(sys);
    CHECK(rep.all_pass);

    ControlReport ctl = control_analysis(sys);
    CHECK_FALSE(ctl.strongly_controlled);
    CHECK(ctl.lemma_consistent);
    CHECK(ctl.a0_exp == std::vector<i64>{1, 0});
    CHECK(ctl.b0_exp == std::vector<i64>{1, 0});

    APrime ap = aprime_construction(sys);
    CHECK(ap.report.all_pass);
    CHECK(ap.strongly_controlled);
    CHECK(exps_a(ap.sys, 0) == std::vector<int>{});
    CHECK(exps_b(ap.sys, 0) == std::vector<int>{});
    CHECK(exps_a(ap.sys, 1) == std::vector<int>{1});
    CHECK(exps_b(ap.sys, 1) == std::vector<int>{1});
    // With only two levels the kernel chain is still growing at the top, so
    // the stabilization depth is not certified.
    CHECK(ap.truncation_warning);
}

TEST_CASE("annihilator ideals realize the sharp duality") {
    GammaSystem t3 = synthetic_system(3, {3, 1}, 1, 2);
    DualityReport rep = duality_invariants(t3, IPoly{3, 1});
    CHECK(rep.all_pass);
    CHECK(rep.f_in_ann_b);
    CHECK(rep.fsharp_in_ann_a);
    REQUIRE(rep.levels.size() == 3);
    for (const auto& lv : rep.levels) {
        CHECK(lv.ann_sharp_duality);
        CHECK(lv.index_consistent);
        CHECK(lv.adjointness);
    }

    // T + p is not its own sharp: gamma - (1-p) vs gamma - (1-p)^{-1}.
    Mat annA = annihilator_generators(t3.a[1], 2);
    Mat annB = annihilator_generators(t3.b[1], 2);
    CHECK_FALSE(span_equal(annA, annB, 3, 2));
    CHECK(span_equal(annA, sharp_columns(annB, 3, 1), 3, 2));

    // p and Phi_p(1+T) are fixed by sharp, so the two ideals coincide.
    for (const IPoly& f : {IPoly{3}, IPoly{3, 3, 1}}) {
        GammaSystem sys = synthetic_system(3, f, 1, 2);
        CHECK(duality_invariants(sys, f).all_pass);
        for (int n = 0; n <= 2; ++n) {
            int W = n + 1;
            Mat ga = annihilator_generators(sys.a[(size_t)n], W);
            Mat gb = annihilator_generators(sys.b[(size_t)n], W);
            CHECK(span_equal(ga, gb, 3, W));
        }
    }

    // A unit is never in a proper annihilator ideal.
    DualityReport bad = duality_invariants(t3, IPoly{1});
    CHECK_FALSE(bad.f_in_ann_b);
    CHECK_FALSE(bad.all_pass);
}

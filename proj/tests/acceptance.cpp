// Acceptance gate: ten pinned criteria, one [PASS]/[FAIL] line each.
// Tolerances and runtime budgets are the constants below; the exit code is
// the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iwff/errors.hpp"
#include "iwff/gamma_systems.hpp"
#include "iwff/lambda_modules.hpp"
#include "iwff/stickelberger.hpp"

using namespace iwff;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kSlack = 2;             // agreement to N - 2 relative digits
constexpr double kRhTol = 1e-9;       // |alpha| vs sqrt(q), floating check
constexpr double kThetaBudget = 30.0;  // seconds, per base field
constexpr double kSweepBudget = 10.0;  // seconds, per interpolation sweep
constexpr double kMonskyBudget = 5.0;
constexpr double kGammaBudget = 60.0;  // seconds, whole synthetic suite

double sec(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_s(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

IwasawaElem random_elem(const CtxPtr& ctx, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    IwasawaElem x = iw_zero(ctx, n);
    for (auto& c : x.c) c = ctx->r_from_int(d(rng));
    return x;
}

IwasawaSeries random_series(const CtxPtr& ctx, int D, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> d(0, ctx->pN() - 1);
    std::vector<ORes> v((size_t)D, ctx->r_zero());
    for (auto& c : v) c = ctx->r_from_int(d(rng));
    return sr_make(ctx, D, v);
}

// monic of degree lambda with non-leading coefficients in (pi)
std::vector<ORes> random_dist(const CtxPtr& ctx, int lambda,
                              std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> d(1, ctx->pN() - 1);
    std::vector<ORes> f((size_t)lambda + 1, ctx->r_zero());
    f[(size_t)lambda] = ctx->r_one();
    for (int i = 0; i < lambda; ++i) {
        ORes c = ctx->r_mul_pi(ctx->r_from_int(d(rng)));
        if (rng() & 1) c = ctx->r_mul_pi(c);
        f[(size_t)i] = c;
    }
    return f;
}

// ---- criterion 1: closed-form theta equals the Euler-product oracle ----

bool crit1(std::string& detail) {
    std::ostringstream d;
    bool ok = true;
    struct Cfg {
        i64 p;
        int Du;
        const char* name;
    } cfgs[2] = {{3, 12, "F_3(t) mod u^13"}, {5, 8, "F_5(t) mod u^9"}};
    for (const auto& c : cfgs) {
        auto t0 = Clock::now();
        auto ctx = PadicCtx::make(c.p, 0, 8);
        BaseField K = base_field_rational(c.p, c.p);
        auto closed = theta_series(ctx, K, {}, 2, c.Du);
        auto oracle = theta_series_oracle(ctx, K, {}, 2, c.Du);
        double s = sec(t0);
        bool eq = theta_eq(closed, oracle);
        ok = ok && eq && s < kThetaBudget;
        d << c.name << " " << (eq ? "equal" : "DIFFER") << " " << fmt_s(s)
          << "; ";
    }
    detail = d.str();
    return ok;
}

// ---- criterion 2: interpolation sweeps over all characters ----

bool crit2(std::string& detail) {
    std::ostringstream d;
    bool ok = true;

    // F_5(t), A: y^2 = x^3 + x + 1, all 25 characters of Gamma_2
    {
        auto ctx = PadicCtx::make(5, 2, 8);
        BaseField K = base_field_rational(5, 5);
        FqField F5(5, 1);
        auto A = curve_elliptic_ints(F5, {0, 0, 0, 1, 1});
        i64 a = 5 + 1 - count_points(A, 1);
        ok = ok && (a % 5 != 0);  // ordinarity from enumeration
        auto fr = frobenius_from_elliptic(ctx, A);
        auto t0 = Clock::now();
        auto rep = interpolation_check(ctx, fr, K, 2, kSlack);
        double s = sec(t0);
        bool rows_ok = rep.all_pass && rep.rows.size() == 25;
        for (const auto& r : rep.rows)
            rows_ok = rows_ok && r.rel_digits >= ctx->N() - kSlack;
        ok = ok && rows_ok && s < kSweepBudget;
        d << "F_5(t) 25 chars " << (rows_ok ? "pass" : "FAIL") << " "
          << fmt_s(s) << "; ";
    }

    // genus-1 base over F_3 (kappa = 1), A distinct from the base Jacobian
    {
        auto ctx = PadicCtx::make(3, 2, 8);
        FqField F3(3, 1);
        auto X = curve_elliptic_ints(F3, {0, 1, 0, 0, 1});
        auto A = curve_elliptic_ints(F3, {0, -1, 0, 0, 1});
        i64 a = 3 + 1 - count_points(A, 1);
        ok = ok && (a % 3 != 0);
        BaseField K = base_field_from_curve(3, X);
        ok = ok && K.kappa == 1;
        auto fr = frobenius_from_elliptic(ctx, A);
        auto t0 = Clock::now();
        auto rep = interpolation_check(ctx, fr, K, 2, kSlack);
        double s = sec(t0);
        bool rows_ok = rep.all_pass && rep.rows.size() == 9;
        for (const auto& r : rep.rows) {
            rows_ok = rows_ok && r.rel_digits >= ctx->N() - kSlack;
            rows_ok = rows_ok && r.omega_order <= 9;
        }
        ok = ok && rows_ok && s < kSweepBudget;
        d << "F_3 genus-1 base 9 chars " << (rows_ok ? "pass" : "FAIL") << " "
          << fmt_s(s);
    }
    detail = d.str();
    return ok;
}

// ---- criterion 3: theta evaluation equals Dirichlet L-star values ----

bool crit3(std::string& detail) {
    auto ctx = PadicCtx::make(5, 2, 8);
    BaseField K = base_field_rational(5, 5);
    FqField F5(5, 1);
    auto fr = frobenius_from_elliptic(ctx, curve_elliptic_ints(F5, {0, 0, 0, 1, 1}));
    const i64 bound = (i64)ctx->e() * (ctx->N() - kSlack);

    std::vector<ORes> points{ctx->r_one()};
    for (const auto& al : fr.alphas) points.push_back(ctx->to_res(ctx->inv(al)));

    bool ok = true;
    int checked = 0;
    for (const PlaceSet& S : std::vector<PlaceSet>{{}, {2}}) {
        for (const auto& x : points) {
            auto Tx = theta_at_unit(ctx, K, S, 2, x);
            for (const auto& om : all_characters(5, 2)) {
                ORes lhs = iw_eval(Tx, om);
                ORes rhs = ctx->to_res(dirichlet_l_star_value(
                    ctx, K, S, character_value(ctx, om), ctx->from_res(x)));
                ok = ok && ctx->r_valuation(ctx->r_sub(lhs, rhs)) >= bound;
                ++checked;
            }
        }
    }
    std::ostringstream d;
    d << checked << " evaluations (S empty and S = {deg 2}) at >= N-" << kSlack
      << " digits";
    detail = d.str();
    return ok;
}

// ---- criterion 4: two-sided functional equation ----

bool crit4(std::string& detail) {
    std::ostringstream d;
    bool ok = true;
    {
        auto ctx = PadicCtx::make(5, 2, 8);
        BaseField K = base_field_rational(5, 5);
        std::vector<PCharacter> oms;
        for (i64 t = 0; t < 10; ++t) oms.push_back(PCharacter{2, t});
        auto rep = functional_equation_check(ctx, K, oms, 5, kSlack);
        bool b = rep.all_pass && rep.poly_identity && rep.rows.size() == 50;
        ok = ok && b;
        d << "F_5(t) 10 omegas x 5 points " << (b ? "pass" : "FAIL") << "; ";
    }
    {
        auto ctx = PadicCtx::make(3, 3, 8);
        FqField F3(3, 1);
        auto X = curve_elliptic_ints(F3, {0, 1, 0, 0, 1});
        BaseField K = base_field_from_curve(3, X);
        std::vector<PCharacter> oms;
        for (i64 t = 0; t < 10; ++t) oms.push_back(PCharacter{3, t});
        auto rep = functional_equation_check(ctx, K, oms, 5, kSlack);
        bool b = rep.all_pass && rep.poly_identity && rep.rows.size() == 50;
        ok = ok && b;
        d << "F_3 genus-1 base 10 omegas x 5 points " << (b ? "pass" : "FAIL")
          << " incl. polynomial identity";
    }
    detail = d.str();
    return ok;
}

// ---- criterion 5: zeta functional equation, RH, Weil recurrence ----

bool crit5(std::string& detail) {
    FqField F5(5, 1), F3(3, 1);
    std::vector<std::pair<CurveModel, const char*>> samples;
    samples.push_back({curve_elliptic_ints(F5, {0, 0, 0, 1, 1}), "genus 1 / F_5"});
    samples.push_back(
        {curve_hyperelliptic(F3, fqpoly_from_ints(F3, {1, 0, 0, 1, 0, 1})),
         "genus 2 / F_3"});

    std::ostringstream d;
    bool ok = true;
    for (const auto& [C, name] : samples) {
        i64 q = curve_q(C);
        IPoly P = zeta_numerator(C);
        bool fe = zeta_fe_symmetric(P, q);
        bool rh = zeta_rh_holds(P, q, kRhTol);
        bool weil = true;
        auto S = zeta_power_sums(P, q, 4);
        i64 qr = 1;
        for (int r = 1; r <= 4; ++r) {
            qr *= q;
            weil = weil && count_points(C, r) == qr + 1 - S[(size_t)r - 1];
        }
        ok = ok && fe && rh && weil;
        d << name << (fe && rh && weil ? " pass" : " FAIL") << "; ";
    }
    d << "RH tol " << kRhTol << ", recurrence n <= 4";
    detail = d.str();
    return ok;
}

// ---- criterion 6: Iwasawa-algebra identity suite ----

bool crit6(std::string& detail) {
    auto ctx = PadicCtx::make(3, 0, 8);
    const int D = 28;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> dc(0, ctx->pN() - 1);
    bool ok = true;

    // Weierstrass reconstruction, 50 random p^mu * dist * unit inputs
    int recon = 0;
    for (int trial = 0; trial < 50; ++trial) {
        i64 mu = (i64)(rng() % 3);
        int lam = (int)(rng() % 4);
        auto dist = random_dist(ctx, lam, rng);
        auto u = random_series(ctx, D, rng);
        i64 u0 = dc(rng) | 1;
        u.a[0] = ctx->r_from_int(u0 % 3 == 0 ? u0 + 1 : u0);
        auto f = sr_mul(sr_make(ctx, D, dist), u);
        for (i64 k = 0; k < mu; ++k) f = sr_scale(f, ctx->r_from_int(3));

        auto w = weierstrass_prep(f);
        bool b = w.mu == mu && (int)w.dist.size() == lam + 1;
        auto back = sr_mul(sr_make(ctx, D, w.dist), w.unit);
        for (i64 k = 0; k < mu; ++k) back = sr_scale(back, ctx->r_from_int(3));
        b = b && sr_eq(back, f);  // exact mod (p^8, T^28)
        for (size_t i = 0; i <= (size_t)lam; ++i)
            b = b && ctx->r_valuation(ctx->r_sub(w.dist[i], dist[i])) >= w.digits;
        ok = ok && b;
        recon += b;
    }

    // sharp involution: order two and multiplicative, series and group ring
    for (int t = 0; t < 5; ++t) {
        auto f = random_series(ctx, D, rng);
        auto g = random_series(ctx, D, rng);
        ok = ok && sr_eq(sr_sharp(sr_sharp(f)), f);
        ok = ok && sr_eq(sr_sharp(sr_mul(f, g)), sr_mul(sr_sharp(f), sr_sharp(g)));
        auto x = random_elem(ctx, 2, rng);
        auto y = random_elem(ctx, 2, rng);
        ok = ok && iw_eq(iw_sharp(iw_sharp(x)), x);
        ok = ok && iw_eq(iw_sharp(iw_mul(x, y)), iw_mul(iw_sharp(x), iw_sharp(y)));

        // projection Lambda_2 -> Lambda_1 is a ring map commuting with sharp
        ok = ok && iw_eq(iw_project(iw_mul(x, y), 1),
                         iw_mul(iw_project(x, 1), iw_project(y, 1)));
        ok = ok && iw_eq(iw_project(iw_sharp(x), 1), iw_sharp(iw_project(x, 1)));

        // ord/leading multiplicativity on unit-led series
        auto led = [&](int a) {
            std::vector<ORes> v((size_t)D, ctx->r_zero());
            i64 u0 = dc(rng);
            if (u0 % 3 == 0) ++u0;
            v[(size_t)a] = ctx->r_from_int(u0);
            for (size_t i = (size_t)a + 1; i < v.size(); ++i)
                v[i] = ctx->r_from_int(dc(rng));
            return sr_make(ctx, D, v);
        };
        int oa = (int)(rng() % 4), ob = (int)(rng() % 4);
        auto fa = led(oa), fb = led(ob);
        auto la = sr_ord_leading(fa), lb = sr_ord_leading(fb);
        auto lab = sr_ord_leading(sr_mul(fa, fb));
        ok = ok && lab.ord == oa + ob;
        ok = ok && ctx->to_res(lab.leading) ==
                       ctx->r_mul(ctx->to_res(la.leading), ctx->to_res(lb.leading));

        // twist followed by the inverse twist is the identity
        ORes c = ctx->r_from_int(1 + 3 * (dc(rng) % (ctx->pN() / 3)));
        ok = ok && sr_eq(sr_twist(sr_twist(f, c), ctx->r_inv(c)), f);
        ok = ok && iw_eq(iw_twist(iw_twist(x, c), ctx->r_inv(c)), x);
    }

    // simple elements are sharp-associates: s^sharp = gamma0^{-(p-1)p^{k-1}} s
    {
        auto c3 = PadicCtx::make(3, 2, 8);
        for (int k = 1; k <= 2; ++k) {
            auto s = iw_simple_element(c3, 2, k);
            auto assoc = iw_mul(iw_gamma_pow(c3, 2, -2 * gamma_order(3, k - 1)), s);
            ok = ok && iw_eq(iw_sharp(s), assoc);
        }
        auto c5 = PadicCtx::make(5, 1, 8);
        auto s = iw_simple_element(c5, 1, 1);
        ok = ok && iw_eq(iw_sharp(s), iw_mul(iw_gamma_pow(c5, 1, -4), s));
    }

    std::ostringstream d;
    d << recon << "/50 reconstructions mod (3^8, T^28); sharp/projection/"
      << "ord/twist/simple-associate identities exact";
    detail = d.str();
    return ok;
}

// ---- criterion 7: two-variable zero set of the cross-term element ----

bool crit7(std::string& detail) {
    auto ctx = PadicCtx::make(3, 2, 8);
    auto t0 = Clock::now();
    bool ok = true;
    for (int n = 1; n <= 2; ++n) {
        auto one = iw2_scalar(ctx, n, ctx->r_one());
        auto m1 = iw2_add(iw2_gamma(ctx, n, 1, 1), iw2_scale(one, ctx->r_from_int(-1)));
        auto m2 = iw2_add(iw2_gamma(ctx, n, 2, 1), iw2_scale(one, ctx->r_from_int(-1)));
        auto xi = iw2_add(iw2_add(m1, iw2_scale(m2, ctx->r_from_int(3))),
                          iw2_scale(iw2_mul(m1, m2), ctx->r_from_int(9)));
        auto z = zero_set2(xi);
        ok = ok && z.size() == 1 && z[0] == std::vector<i64>{0, 0};
    }
    double s = sec(t0);
    ok = ok && s < kMonskyBudget;
    detail = "zero set == {trivial} at levels 1 and 2, " + fmt_s(s);
    return ok;
}

// ---- criterion 8: Euler characteristic vs companion-model oracle ----

bool crit8(std::string& detail) {
    std::mt19937_64 rng(2024);
    bool ok = true;
    int checked = 0, attempts = 0;

    auto ctx0 = PadicCtx::make(3, 0, 8);
    PCharacter triv{0, 0};
    while (checked < 5 && attempts++ < 200) {
        CharElement f{ctx0, (i64)(rng() % 2), random_dist(ctx0, 1 + (int)(rng() % 3), rng),
                      ctx0->N()};
        auto ec = euler_characteristic(f, triv);
        if (!ec.finite) continue;  // omega^*(f)(0) not certified nonzero
        ok = ok && euler_characteristic_bruteforce(f, triv) == ec.exponent;
        ++checked;
    }

    auto ctx1 = PadicCtx::make(3, 1, 6);
    auto oms = all_characters(3, 1);
    size_t which = 0;
    while (checked < 10 && attempts++ < 400) {
        CharElement f{ctx1, (i64)(rng() % 2), random_dist(ctx1, 1 + (int)(rng() % 2), rng),
                      ctx1->N()};
        const PCharacter om = oms[which++ % oms.size()];
        auto ec = euler_characteristic(f, om);
        if (!ec.finite) continue;
        ok = ok && euler_characteristic_bruteforce(f, om) == ec.exponent;
        ++checked;
    }

    ok = ok && checked == 10;
    std::ostringstream d;
    d << checked << "/10 certified-finite inputs match the SNF order exactly";
    detail = d.str();
    return ok;
}

// ---- criterion 9: synthetic Gamma-system suite ----

bool crit9(std::string& detail) {
    auto t0 = Clock::now();
    bool ok = true;
    int systems = 0;
    for (i64 p : {2, 3}) {
        std::vector<IPoly> fs = {{p}, {p, 1}, {p, 0, 1}};
        // Phi_p(1+T): T+2 at p=2, T^2+3T+3 at p=3
        fs.push_back(p == 2 ? IPoly{2, 1} : IPoly{3, 3, 1});
        for (const IPoly& f : fs) {
            GammaSystem sys = synthetic_system(p, f, 1, 2);
            auto rep = validate_axioms(sys);
            bool norm_ok = false;
            for (const auto& c : rep.checks)
                if (c.name == "norm compatibility") norm_ok = c.pass;
            ok = ok && rep.all_pass && rep.checks.size() == 10 && norm_ok;

            // derived pair along the multiples-of-p family
            std::vector<Mat> gens;
            for (int n = 0; n <= 2; ++n) {
                int dim = (int)sys.a[(size_t)n].exps.size();
                Mat g(dim, dim);
                for (int i = 0; i < dim; ++i) g.at(i, i) = p;
                gens.push_back(g);
            }
            auto der = derived_systems(sys, gens);
            ok = ok && der.exact_c && der.exact_e && der.c_report.all_pass &&
                 der.e_report.all_pass;

            auto ctl = control_analysis(sys);
            ok = ok && ctl.strongly_controlled && ctl.lemma_consistent;

            auto dual = duality_invariants(sys, f);
            ok = ok && dual.all_pass && dual.f_in_ann_b && dual.fsharp_in_ann_a;
            ++systems;
        }
    }
    double s = sec(t0);
    ok = ok && s < kGammaBudget;
    std::ostringstream d;
    d << systems << " systems (p in {2,3}, k = 1, levels <= 2): axioms, "
      << "exactness, control, duality; " << fmt_s(s);
    detail = d.str();
    return ok;
}

// ---- criterion 10: theta certified nonzero on every configured input ----

bool crit10(std::string& detail) {
    bool ok = true;
    int certified = 0;
    auto cert = [&](const IwasawaElem& th) {
        ok = ok && theta_certified_nonzero(th);
        ++certified;
    };

    {
        auto ctx = PadicCtx::make(3, 0, 8);
        BaseField K = base_field_rational(3, 3);
        cert(stickelberger_element(ctx, K, {}, 2));
    }
    {
        auto ctx = PadicCtx::make(5, 2, 8);
        BaseField K = base_field_rational(5, 5);
        cert(stickelberger_element(ctx, K, {}, 2));
        cert(stickelberger_element(ctx, K, {2}, 2));
        FqField F5(5, 1);
        auto fr = frobenius_from_elliptic(ctx, curve_elliptic_ints(F5, {0, 0, 0, 1, 1}));
        auto L = padic_L(ctx, fr, K, {}, 2);
        cert(L.theta_plus);
        cert(L.theta);
    }
    {
        auto ctx = PadicCtx::make(3, 2, 8);
        FqField F3(3, 1);
        BaseField K = base_field_from_curve(3, curve_elliptic_ints(F3, {0, 1, 0, 0, 1}));
        cert(stickelberger_element(ctx, K, {}, 2));
        cert(stickelberger_element(ctx, K, {1}, 2));
        auto fr = frobenius_from_elliptic(ctx, curve_elliptic_ints(F3, {0, -1, 0, 0, 1}));
        auto L = padic_L(ctx, fr, K, {}, 2);
        cert(L.theta_plus);
        cert(L.theta);
    }

    std::ostringstream d;
    d << certified << " theta elements certified nonzero at working precision";
    detail = d.str();
    return ok;
}

struct Criterion {
    int id;
    const char* what;
    bool (*run)(std::string&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "stickelberger closed form equals the Euler-product oracle", crit1},
        {2, "interpolation: omega(Ltilde) = L(A, omega, 1) over all characters", crit2},
        {3, "theta evaluation equals Dirichlet L-star values", crit3},
        {4, "two-sided functional equation and polynomial identity", crit4},
        {5, "zeta coefficient symmetry, RH bound, Weil recurrence", crit5},
        {6, "Iwasawa-algebra suite: Weierstrass, sharp, projection, twist", crit6},
        {7, "two-variable cross-term element vanishes only at the trivial character", crit7},
        {8, "Euler characteristic matches the companion-model SNF oracle", crit8},
        {9, "synthetic Gamma-systems: axioms, exactness, control, duality", crit9},
        {10, "stickelberger elements certified nonzero on all configured inputs", crit10},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const Error& e) {
            detail = std::string("exception: ") + e.what();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %2d %s%s%s\n", pass ? "PASS" : "FAIL", c.id, c.what,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failed;
    }
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failed);
    return failed;
}

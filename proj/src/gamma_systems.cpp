#include "iwff/gamma_systems.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

i64 pmod(i64 x, i64 M) {
    x %= M;
    if (x < 0) x += M;
    return x;
}

bool small_prime(i64 p) {
    if (p < 2) return false;
    for (i64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int max_exp(const std::vector<int>& es) {
    int w = 0;
    for (int e : es) w = std::max(w, e);
    return w;
}

i64 exp_sum(const std::vector<int>& es) {
    i64 s = 0;
    for (int e : es) s += e;
    return s;
}

void cap_check_order(i64 p, i64 ord_exp, u64 cap, const std::string& what) {
    u64 v = 1;
    for (i64 i = 0; i < ord_exp; ++i) {
        if (v > cap / (u64)p) {
            // a lower bound on the order; later factors only push it further
            const u64 size = (v > UINT64_MAX / (u64)p) ? UINT64_MAX : v * (u64)p;
            throw EnumerationTooLarge(what + " order", size, cap);
        }
        v *= (u64)p;
    }
}

std::vector<i64> mat_col(const Mat& A, int j) {
    std::vector<i64> v(A.r);
    for (int i = 0; i < A.r; ++i) v[i] = A.at(i, j);
    return v;
}

Mat diag_pe(const std::vector<int>& es, i64 p) {
    Mat D((int)es.size(), (int)es.size());
    for (int i = 0; i < D.r; ++i) D.at(i, i) = ppow_i64(p, es[i]);
    return D;
}

// row i scaled by p^{W - es[i]}, entries reduced mod p^W
Mat rows_scaled(const Mat& A, const std::vector<int>& es, i64 p, int W) {
    const i64 M = ppow_i64(p, W);
    Mat S(A.r, A.c);
    for (int i = 0; i < A.r; ++i) {
        const i64 s = ppow_i64(p, W - es[i]);
        for (int j = 0; j < A.c; ++j)
            S.at(i, j) = (i64)((i128)pmod(A.at(i, j), M) * s % M);
    }
    return S;
}

// first entry whose valuation (read mod p^{cod[i]}) falls below cod[i]-dom[j];
// {-1,-1} when the matrix represents a hom of the coordinate groups
std::pair<int, int> hom_defect(const Mat& F, const std::vector<int>& cod,
                               const std::vector<int>& dom, i64 p) {
    if (F.r != (int)cod.size() || F.c != (int)dom.size())
        throw InvalidInput("hom dimension mismatch");
    for (int i = 0; i < F.r; ++i)
        for (int j = 0; j < F.c; ++j) {
            const int need = cod[i] - dom[j];
            if (need <= 0) continue;
            const i64 r = pmod(F.at(i, j), ppow_i64(p, cod[i]));
            if (r % ppow_i64(p, need) != 0) return {i, j};
        }
    return {-1, -1};
}

// first entry where F and G differ mod p^{cod[i]}; {-1,-1} when equal as homs
std::pair<int, int> hom_diff(const Mat& F, const Mat& G,
                             const std::vector<int>& cod, i64 p) {
    if (F.r != G.r || F.c != G.c || F.r != (int)cod.size())
        throw InvalidInput("hom dimension mismatch");
    for (int i = 0; i < F.r; ++i) {
        const i64 m = ppow_i64(p, cod[i]);
        for (int j = 0; j < F.c; ++j)
            if (pmod(F.at(i, j) - G.at(i, j), m) != 0) return {i, j};
    }
    return {-1, -1};
}

bool hom_eq(const Mat& F, const Mat& G, const std::vector<int>& cod, i64 p) {
    return hom_diff(F, G, cod, p) == std::pair<int, int>{-1, -1};
}

// dual of F : (dom coords) -> (cod coords) under the identifications
// Hom(Z/p^e, Q/Z) = Z/p^e; entry (j,i) = F_ij p^{dom[j]}/p^{cod[i]}, the
// division being exact for any well-defined hom
Mat dual_hom(const Mat& F, const std::vector<int>& cod,
             const std::vector<int>& dom, i64 p) {
    if (F.r != (int)cod.size() || F.c != (int)dom.size())
        throw InvalidInput("hom dimension mismatch");
    Mat D(F.c, F.r);
    for (int i = 0; i < F.r; ++i)
        for (int j = 0; j < F.c; ++j) {
            const i64 v = pmod(F.at(i, j), ppow_i64(p, cod[i]));
            if (dom[j] >= cod[i]) {
                const i64 m = ppow_i64(p, dom[j]);
                D.at(j, i) = (i64)((i128)v * ppow_i64(p, dom[j] - cod[i]) % m);
            } else {
                const i64 pe = ppow_i64(p, cod[i] - dom[j]);
                if (v % pe != 0)
                    throw InvalidInput("dual of a map that is not well-defined");
                D.at(j, i) = (v / pe) % ppow_i64(p, dom[j]);
            }
        }
    return D;
}

// membership of v in the subgroup generated by the columns of G inside
// the coordinate group with invariants es
bool group_member(const Mat& G, const std::vector<int>& es,
                  const std::vector<i64>& v, i64 p) {
    const int W = max_exp(es);
    if (W == 0) return true;
    Mat H = G.c ? mat_hcat(G, diag_pe(es, p)) : diag_pe(es, p);
    std::vector<i64> w(v.size());
    const i64 M = ppow_i64(p, W);
    for (size_t i = 0; i < v.size(); ++i) w[i] = pmod(v[i], M);
    return in_span(H, w, p, W);
}

// ---- subgroup coordinates: the group generated by columns of G inside
// the coordinate group with invariants amb, presented by the SNF of its
// relation kernel ----
struct SubCoord {
    std::vector<int> amb, exps;
    Mat gens, scaled, emb;
    SmithForm rel;
    std::vector<int> live;
    int W = 0;
    i64 p = 2;
};

SubCoord sub_coordinatize(const std::vector<int>& amb, const Mat& G, i64 p) {
    SubCoord sc;
    sc.amb = amb;
    sc.p = p;
    sc.gens = G;
    sc.W = max_exp(amb);
    const int na = (int)amb.size();
    if (G.r != na) throw InvalidInput("generator rows must match the ambient coordinates");
    if (na == 0 || sc.W == 0) {
        sc.emb = Mat(na, 0);
        return sc;
    }
    sc.scaled = rows_scaled(G, amb, p, sc.W);
    Mat K = kernel_generators(sc.scaled, p, sc.W);
    sc.rel = smith_form(K, p, sc.W);
    std::vector<int> d(G.c, sc.W);
    for (int i = 0; i < (int)sc.rel.exps.size(); ++i) d[i] = sc.rel.exps[i];
    for (int i = 0; i < G.c; ++i)
        if (d[i] > 0) {
            sc.live.push_back(i);
            sc.exps.push_back(d[i]);
        }
    Mat Ulive(G.c, (int)sc.live.size());
    for (int i = 0; i < G.c; ++i)
        for (int t = 0; t < (int)sc.live.size(); ++t)
            Ulive.at(i, t) = sc.rel.U.at(i, sc.live[t]);
    sc.emb = mat_mul(G, Ulive, ppow_i64(p, sc.W));
    return sc;
}

bool sub_express(const SubCoord& sc, const std::vector<i64>& v,
                 std::vector<i64>& out) {
    out.assign(sc.exps.size(), 0);
    const int na = (int)sc.amb.size();
    if (na == 0 || sc.W == 0) return true;
    const i64 M = ppow_i64(sc.p, sc.W);
    std::vector<i64> w(na);
    for (int i = 0; i < na; ++i)
        w[i] = (i64)((i128)pmod(v[i], M) * ppow_i64(sc.p, sc.W - sc.amb[i]) % M);
    std::vector<i64> x;
    if (!solve_mod(sc.scaled, w, sc.p, sc.W, x)) return false;
    if (sc.exps.empty()) return true;
    std::vector<i64> y = mat_apply(sc.rel.Uinv, x, M);
    for (int t = 0; t < (int)sc.live.size(); ++t)
        out[t] = pmod(y[sc.live[t]], ppow_i64(sc.p, sc.exps[t]));
    return true;
}

// ---- quotient coordinates: the coordinate group with invariants amb
// modulo the subgroup generated by columns of T ----
struct QuotCoord {
    std::vector<int> amb, exps;
    Mat proj, sect;
    int W = 0;
    i64 p = 2;
};

QuotCoord quot_coordinatize(const std::vector<int>& amb, const Mat& T, i64 p) {
    QuotCoord q;
    q.amb = amb;
    q.p = p;
    q.W = max_exp(amb);
    const int na = (int)amb.size();
    if (T.r != na) throw InvalidInput("generator rows must match the ambient coordinates");
    if (na == 0 || q.W == 0) {
        q.proj = Mat(0, na);
        q.sect = Mat(na, 0);
        return q;
    }
    Mat H = T.c ? mat_hcat(T, diag_pe(amb, p)) : diag_pe(amb, p);
    SmithForm S = smith_form(H, p, q.W);
    std::vector<int> live;
    for (int i = 0; i < na; ++i)
        if (S.exps[i] > 0) {
            live.push_back(i);
            q.exps.push_back(S.exps[i]);
        }
    q.proj = Mat((int)live.size(), na);
    q.sect = Mat(na, (int)live.size());
    for (int t = 0; t < (int)live.size(); ++t)
        for (int j = 0; j < na; ++j) {
            q.proj.at(t, j) = S.Uinv.at(live[t], j);
            q.sect.at(j, t) = S.U.at(j, live[t]);
        }
    return q;
}

std::vector<i64> quot_class(const QuotCoord& q, const std::vector<i64>& v) {
    if (q.exps.empty()) return {};
    std::vector<i64> y = mat_apply(q.proj, v, ppow_i64(q.p, q.W));
    for (size_t t = 0; t < q.exps.size(); ++t)
        y[t] = pmod(y[t], ppow_i64(q.p, q.exps[t]));
    return y;
}

// subquotient S/T: quotient by T first, then the subgroup generated by the
// images of the S generators
struct SubQuot {
    QuotCoord q;
    SubCoord s;
    std::vector<int> exps;
    Mat emb;  // representatives in ambient coordinates
};

SubQuot subquot_coordinatize(const std::vector<int>& amb, const Mat& Sgens,
                             const Mat& Tgens, i64 p) {
    SubQuot sq;
    sq.q = quot_coordinatize(amb, Tgens, p);
    Mat MS((int)sq.q.exps.size(), Sgens.c);
    for (int j = 0; j < Sgens.c; ++j) {
        std::vector<i64> y = quot_class(sq.q, mat_col(Sgens, j));
        for (int i = 0; i < MS.r; ++i) MS.at(i, j) = y[i];
    }
    sq.s = sub_coordinatize(sq.q.exps, MS, p);
    sq.exps = sq.s.exps;
    const i64 M = ppow_i64(p, std::max(max_exp(amb), 1));
    sq.emb = mat_mul(sq.q.sect, sq.s.emb, M);
    return sq;
}

bool subquot_express(const SubQuot& sq, const std::vector<i64>& v,
                     std::vector<i64>& out) {
    return sub_express(sq.s, quot_class(sq.q, v), out);
}

Mat induced_sub_hom(const SubCoord& from, const SubCoord& to, const Mat& Phi,
                    i64 p, const char* what) {
    const i64 M = ppow_i64(p, std::max({from.W, to.W, 1}));
    Mat R((int)to.exps.size(), (int)from.exps.size());
    for (int j = 0; j < (int)from.exps.size(); ++j) {
        std::vector<i64> w = mat_apply(Phi, mat_col(from.emb, j), M);
        std::vector<i64> c;
        if (!sub_express(to, w, c)) throw InvalidSubmoduleFamily(what);
        for (int i = 0; i < R.r; ++i) R.at(i, j) = c[i];
    }
    return R;
}

Mat induced_quot_hom(const QuotCoord& from, const QuotCoord& to, const Mat& Phi,
                     i64 p) {
    const i64 M = ppow_i64(p, std::max({from.W, to.W, 1}));
    return mat_mul(to.proj, mat_mul(Phi, from.sect, M), M);
}

Mat induced_subquot_hom(const SubQuot& from, const SubQuot& to, const Mat& Phi,
                        i64 p, const char* what) {
    const i64 M = ppow_i64(p, std::max({from.q.W, to.q.W, 1}));
    Mat R((int)to.exps.size(), (int)from.exps.size());
    for (int j = 0; j < (int)from.exps.size(); ++j) {
        std::vector<i64> w = mat_apply(Phi, mat_col(from.emb, j), M);
        std::vector<i64> c;
        if (!subquot_express(to, w, c)) throw InvalidSubmoduleFamily(what);
        for (int i = 0; i < R.r; ++i) R.at(i, j) = c[i];
    }
    return R;
}

// kernel of the hom F : (dom coords) -> (cod coords), as subgroup generators
Mat hom_kernel_gens(const Mat& F, const std::vector<int>& dom,
                    const std::vector<int>& cod, i64 p) {
    const int nd = (int)dom.size(), nc = (int)cod.size();
    if (nd == 0) return Mat(0, 0);
    if (nc == 0 || max_exp(cod) == 0) return mat_identity(nd);
    const int W = std::max(max_exp(dom), max_exp(cod));
    return kernel_generators(rows_scaled(F, cod, p, W), p, W);
}

bool hom_injective(const Mat& F, const std::vector<int>& dom,
                   const std::vector<int>& cod, i64 p) {
    Mat K = hom_kernel_gens(F, dom, cod, p);
    for (int j = 0; j < K.c; ++j)
        for (int i = 0; i < K.r; ++i)
            if (pmod(K.at(i, j), ppow_i64(p, dom[i])) != 0) return false;
    return true;
}

bool hom_surjective(const Mat& F, const std::vector<int>& cod, i64 p) {
    if (cod.empty() || max_exp(cod) == 0) return true;
    Mat H = F.c ? mat_hcat(F, diag_pe(cod, p)) : diag_pe(cod, p);
    return cokernel_exponent(H, p, max_exp(cod)) == 0;
}

// sum_{j<p} act^{j * step}
Mat norm_matrix(const FiniteGammaModule& m, i64 step, i64 M) {
    const int nm = (int)m.exps.size();
    Mat S(nm, nm);
    Mat stepM = mat_pow(m.act, step, M);
    Mat cur = mat_identity(nm);
    for (i64 j = 0; j < m.p; ++j) {
        S = mat_add(S, cur, M);
        cur = mat_mul(cur, stepM, M);
    }
    return S;
}

// numerator of <x, y> over the denominator p^{pair_exp}
i64 pair_num(const GammaSystem& sys, int n, const std::vector<i64>& x,
             const std::vector<i64>& y) {
    const i64 M = ppow_i64(sys.p, std::max(sys.pair_exp[n], 1));
    const Mat& P = sys.pairing[n];
    i64 acc = 0;
    for (int i = 0; i < P.r; ++i)
        for (int j = 0; j < P.c; ++j) {
            i64 t = (i64)((i128)pmod(P.at(i, j), M) * pmod(x[i], M) % M);
            t = (i64)((i128)t * pmod(y[j], M) % M);
            acc = (acc + t) % M;
        }
    return acc;
}

bool qz_equal(i64 n1, int E1, i64 n2, int E2, i64 p) {
    const int E = std::max({E1, E2, 1});
    const i64 M = ppow_i64(p, E);
    const i64 a = (i64)((i128)pmod(n1, M) * ppow_i64(p, E - E1) % M);
    const i64 b = (i64)((i128)pmod(n2, M) * ppow_i64(p, E - E2) % M);
    return a == b;
}

// coefficient vector of f(gamma0 - 1) in (Z/p^W)[Gamma_n]
std::vector<i64> cyc_tpoly_vec(i64 p, int n, int W, const IPoly& f) {
    const int P = (int)ppow_i64(p, n);
    const i64 M = ppow_i64(p, W);
    std::vector<i64> c(P, 0);
    if (f.empty()) return c;
    c[0] = pmod(f.back(), M);
    for (int j = (int)f.size() - 2; j >= 0; --j) {
        std::vector<i64> d(P, 0);
        for (int t = 0; t < P; ++t)
            d[t] = pmod(c[(t + P - 1) % P] - c[t], M);
        c = d;
        c[0] = pmod(c[0] + f[j], M);
    }
    return c;
}

std::vector<i64> sharp_vec(const std::vector<i64>& c) {
    const int P = (int)c.size();
    std::vector<i64> s(P);
    for (int t = 0; t < P; ++t) s[t] = c[(P - t) % P];
    return s;
}

void structural_check(const GammaSystem& sys) {
    if (!small_prime(sys.p)) throw InvalidInput("p must be a small prime");
    if (sys.k < 1) throw InvalidInput("twist order k must be at least 1");
    if (sys.M < 0) throw InvalidInput("negative top level");
    const size_t L = (size_t)sys.M + 1;
    if (sys.a.size() != L || sys.b.size() != L || sys.pairing.size() != L ||
        sys.pair_exp.size() != L)
        throw InvalidInput("level count mismatch");
    if (sys.r_a.size() != L - 1 || sys.r_b.size() != L - 1 ||
        sys.k_a.size() != L - 1 || sys.k_b.size() != L - 1)
        throw InvalidInput("adjacent map count mismatch");
    for (int n = 0; n <= sys.M; ++n) {
        for (const FiniteGammaModule* m : {&sys.a[n], &sys.b[n]}) {
            if (m->p != sys.p || m->n != n)
                throw InvalidInput("level module tags do not match the system");
            const int nm = (int)m->exps.size();
            if (m->act.r != nm || m->act.c != nm)
                throw InvalidInput("action matrix dimension mismatch");
            for (int e : m->exps)
                if (e < 1) throw InvalidInput("coordinate exponents must be positive");
        }
        if (sys.pairing[n].r != (int)sys.a[n].exps.size() ||
            sys.pairing[n].c != (int)sys.b[n].exps.size())
            throw InvalidInput("pairing matrix dimension mismatch");
        if (sys.pair_exp[n] < 0) throw InvalidInput("negative pairing exponent");
    }
    for (int n = 0; n < sys.M; ++n) {
        auto dims = [](const Mat& F, size_t r, size_t c) {
            return F.r == (int)r && F.c == (int)c;
        };
        if (!dims(sys.r_a[n], sys.a[n + 1].exps.size(), sys.a[n].exps.size()) ||
            !dims(sys.k_a[n], sys.a[n].exps.size(), sys.a[n + 1].exps.size()) ||
            !dims(sys.r_b[n], sys.b[n + 1].exps.size(), sys.b[n].exps.size()) ||
            !dims(sys.k_b[n], sys.b[n].exps.size(), sys.b[n + 1].exps.size()))
            throw InvalidInput("transition matrix dimension mismatch");
    }
}

int system_width(const GammaSystem& sys) {
    int W = 1;
    for (int n = 0; n <= sys.M; ++n) {
        W = std::max({W, fgm_max_exp(sys.a[n]), fgm_max_exp(sys.b[n]),
                      sys.pair_exp[n]});
    }
    return W;
}

Mat annihilator_or_full(const FiniteGammaModule& m, int W) {
    const int P = (int)ppow_i64(m.p, m.n);
    if (m.exps.empty()) return mat_identity(P);
    return annihilator_generators(m, W);
}

}  // namespace

i64 fgm_order_exponent(const FiniteGammaModule& m) { return exp_sum(m.exps); }

int fgm_max_exp(const FiniteGammaModule& m) { return max_exp(m.exps); }

Mat gamma_poly_action(const FiniteGammaModule& m, const std::vector<i64>& c) {
    const int nm = (int)m.exps.size();
    const i64 M = ppow_i64(m.p, std::max(fgm_max_exp(m), 1));
    Mat R(nm, nm);
    if (c.empty()) return R;
    R = mat_scale(mat_identity(nm), c.back(), M);
    for (int j = (int)c.size() - 2; j >= 0; --j) {
        R = mat_mul(R, m.act, M);
        R = mat_add(R, mat_scale(mat_identity(nm), c[j], M), M);
    }
    return R;
}

Mat tpoly_action(const FiniteGammaModule& m, const IPoly& f) {
    const int nm = (int)m.exps.size();
    const i64 M = ppow_i64(m.p, std::max(fgm_max_exp(m), 1));
    Mat X = mat_sub(m.act, mat_identity(nm), M);
    Mat R(nm, nm);
    if (f.empty()) return R;
    R = mat_scale(mat_identity(nm), f.back(), M);
    for (int j = (int)f.size() - 2; j >= 0; --j) {
        R = mat_mul(R, X, M);
        R = mat_add(R, mat_scale(mat_identity(nm), f[j], M), M);
    }
    return R;
}

Mat annihilator_generators(const FiniteGammaModule& m, int W) {
    if (W < std::max(fgm_max_exp(m), 1))
        throw InvalidInput("annihilator modulus below the module exponent");
    const int P = (int)ppow_i64(m.p, m.n);
    const int nm = (int)m.exps.size();
    if (nm == 0) return mat_identity(P);
    const i64 M = ppow_i64(m.p, W);
    std::vector<Mat> pw(P);
    pw[0] = mat_identity(nm);
    for (int t = 1; t < P; ++t) pw[t] = mat_mul(pw[t - 1], m.act, M);
    Mat A(nm * nm, P);
    for (int i = 0; i < nm; ++i) {
        const i64 s = ppow_i64(m.p, W - m.exps[i]);
        for (int j = 0; j < nm; ++j)
            for (int t = 0; t < P; ++t)
                A.at(i * nm + j, t) = (i64)((i128)pw[t].at(i, j) * s % M);
    }
    return kernel_generators(A, m.p, W);
}

Mat sharp_columns(const Mat& coeffs, i64 p, int n) {
    const int P = (int)ppow_i64(p, n);
    if (coeffs.r != P) throw InvalidInput("coefficient rows must equal p^n");
    Mat R(P, coeffs.c);
    for (int t = 0; t < P; ++t)
        for (int j = 0; j < coeffs.c; ++j) R.at(t, j) = coeffs.at((P - t) % P, j);
    return R;
}

AxiomReport validate_axioms(const GammaSystem& sys, u64 cap) {
    structural_check(sys);
    for (int n = 0; n <= sys.M; ++n) {
        cap_check_order(sys.p, fgm_order_exponent(sys.a[n]), cap, "a-level module");
        cap_check_order(sys.p, fgm_order_exponent(sys.b[n]), cap, "b-level module");
    }
    const i64 p = sys.p;
    const i64 Mbig = ppow_i64(p, system_width(sys));
    AxiomReport rep;
    auto add = [&](const std::string& name, bool ok, const std::string& wit) {
        rep.checks.push_back({name, ok, ok ? std::string() : wit});
        rep.all_pass = rep.all_pass && ok;
    };
    auto side = [&](int s) -> const std::vector<FiniteGammaModule>& {
        return s == 0 ? sys.a : sys.b;
    };
    const char* sname[2] = {"a", "b"};

    {
        bool ok = true;
        std::ostringstream w;
        for (int s = 0; s < 2 && ok; ++s)
            for (int n = 0; n <= sys.M && ok; ++n) {
                auto d = hom_defect(side(s)[n].act, side(s)[n].exps,
                                    side(s)[n].exps, p);
                if (d.first >= 0) {
                    ok = false;
                    w << sname[s] << " level " << n << ": action entry ("
                      << d.first << "," << d.second << ") is not well-defined";
                }
            }
        add("action well-defined", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int s = 0; s < 2 && ok; ++s)
            for (int n = 0; n <= sys.M && ok; ++n) {
                const auto& m = side(s)[n];
                Mat pw = mat_pow(m.act, ppow_i64(p, n), Mbig);
                if (!hom_eq(pw, mat_identity((int)m.exps.size()), m.exps, p)) {
                    ok = false;
                    w << sname[s] << " level " << n
                      << ": gamma0^(p^n) acts nontrivially";
                }
            }
        add("action order divides the group order", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int s = 0; s < 2 && ok; ++s)
            for (int n = 0; n <= sys.M && ok; ++n)
                if (fgm_max_exp(side(s)[n]) > n + sys.k) {
                    ok = false;
                    w << sname[s] << " level " << n << ": exponent "
                      << fgm_max_exp(side(s)[n]) << " exceeds n + k = "
                      << n + sys.k;
                }
        add("twist annihilation", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n < sys.M && ok; ++n) {
            struct Item {
                const Mat* F;
                const std::vector<int>*cod, *dom;
                const char* name;
            } items[4] = {
                {&sys.r_a[n], &sys.a[n + 1].exps, &sys.a[n].exps, "r_a"},
                {&sys.k_a[n], &sys.a[n].exps, &sys.a[n + 1].exps, "k_a"},
                {&sys.r_b[n], &sys.b[n + 1].exps, &sys.b[n].exps, "r_b"},
                {&sys.k_b[n], &sys.b[n].exps, &sys.b[n + 1].exps, "k_b"},
            };
            for (const auto& it : items) {
                auto d = hom_defect(*it.F, *it.cod, *it.dom, p);
                if (d.first >= 0) {
                    ok = false;
                    w << it.name << " at level " << n << ": entry (" << d.first
                      << "," << d.second << ") is not well-defined";
                    break;
                }
            }
        }
        add("transition maps well-defined", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n < sys.M && ok; ++n) {
            struct Item {
                const Mat *F, *lo, *hi;
                const std::vector<int>* cod;
                bool up;
                const char* name;
            } items[4] = {
                {&sys.r_a[n], &sys.a[n].act, &sys.a[n + 1].act,
                 &sys.a[n + 1].exps, true, "r_a"},
                {&sys.r_b[n], &sys.b[n].act, &sys.b[n + 1].act,
                 &sys.b[n + 1].exps, true, "r_b"},
                {&sys.k_a[n], &sys.a[n].act, &sys.a[n + 1].act,
                 &sys.a[n].exps, false, "k_a"},
                {&sys.k_b[n], &sys.b[n].act, &sys.b[n + 1].act,
                 &sys.b[n].exps, false, "k_b"},
            };
            for (const auto& it : items) {
                Mat lhs = it.up ? mat_mul(*it.F, *it.lo, Mbig)
                                : mat_mul(*it.F, *it.hi, Mbig);
                Mat rhs = it.up ? mat_mul(*it.hi, *it.F, Mbig)
                                : mat_mul(*it.lo, *it.F, Mbig);
                if (!hom_eq(lhs, rhs, *it.cod, p)) {
                    ok = false;
                    w << it.name << " at level " << n
                      << " does not commute with gamma0";
                    break;
                }
            }
        }
        add("transition equivariance", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n < sys.M && ok; ++n) {
            const i64 Pn = ppow_i64(p, n);
            struct Item {
                const Mat *R, *K;
                const FiniteGammaModule *lo, *hi;
                const char* name;
            } items[2] = {
                {&sys.r_a[n], &sys.k_a[n], &sys.a[n], &sys.a[n + 1], "a"},
                {&sys.r_b[n], &sys.k_b[n], &sys.b[n], &sys.b[n + 1], "b"},
            };
            for (const auto& it : items) {
                Mat kr = mat_mul(*it.K, *it.R, Mbig);
                Mat pid = mat_scale(mat_identity((int)it.lo->exps.size()), p, Mbig);
                if (!hom_eq(kr, pid, it.lo->exps, p)) {
                    ok = false;
                    w << it.name << " level " << n
                      << ": k o r is not multiplication by p";
                    break;
                }
                Mat rk = mat_mul(*it.R, *it.K, Mbig);
                Mat nm = norm_matrix(*it.hi, Pn, Mbig);
                if (!hom_eq(rk, nm, it.hi->exps, p)) {
                    ok = false;
                    w << it.name << " level " << n + 1
                      << ": r o k is not the norm element";
                    break;
                }
            }
        }
        add("norm compatibility", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n <= sys.M && ok; ++n) {
            const int E = sys.pair_exp[n];
            const i64 ME = ppow_i64(p, std::max(E, 1));
            const Mat& P = sys.pairing[n];
            for (int i = 0; i < P.r && ok; ++i)
                for (int j = 0; j < P.c && ok; ++j) {
                    const i64 v = pmod(P.at(i, j), ME);
                    const int need = std::max(
                        {0, E - sys.a[n].exps[i], E - sys.b[n].exps[j]});
                    if (need > 0 && v % ppow_i64(p, need) != 0) {
                        ok = false;
                        w << "level " << n << ": pairing entry (" << i << ","
                          << j << ") is not well-defined";
                    }
                }
        }
        add("pairing well-defined", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n <= sys.M && ok; ++n) {
            const auto& ea = sys.a[n].exps;
            const auto& eb = sys.b[n].exps;
            if (exp_sum(ea) != exp_sum(eb)) {
                ok = false;
                w << "level " << n << ": |a| and |b| differ";
                break;
            }
            if (eb.empty()) continue;
            const int E = sys.pair_exp[n];
            const i64 ME = ppow_i64(p, std::max(E, 1));
            // induced map a -> b^dual; entry (j,i) = P_ij p^{e_bj}/p^E
            Mat Psi((int)eb.size(), (int)ea.size());
            bool welldef = true;
            for (int i = 0; i < (int)ea.size() && welldef; ++i)
                for (int j = 0; j < (int)eb.size() && welldef; ++j) {
                    const i64 v = pmod(sys.pairing[n].at(i, j), ME);
                    if (eb[j] >= E) {
                        Psi.at(j, i) = (i64)((i128)v * ppow_i64(p, eb[j] - E) %
                                             ppow_i64(p, std::max(eb[j], 1)));
                    } else {
                        const i64 pe = ppow_i64(p, E - eb[j]);
                        if (v % pe != 0)
                            welldef = false;
                        else
                            Psi.at(j, i) = v / pe;
                    }
                }
            if (!welldef || !hom_surjective(Psi, eb, p)) {
                ok = false;
                w << "level " << n << ": the induced map a -> b^dual is not onto";
            }
        }
        add("pairing perfect", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n <= sys.M && ok; ++n) {
            const i64 ME = ppow_i64(p, std::max(sys.pair_exp[n], 1));
            Mat lhs = mat_mul(mat_mul(mat_transpose(sys.a[n].act), sys.pairing[n], ME),
                              sys.b[n].act, ME);
            Mat rhs = sys.pairing[n];
            bool eq = true;
            for (int i = 0; i < lhs.r && eq; ++i)
                for (int j = 0; j < lhs.c && eq; ++j)
                    if (pmod(lhs.at(i, j) - rhs.at(i, j), ME) != 0) eq = false;
            if (!eq) {
                ok = false;
                w << "level " << n << ": <gamma x, gamma y> != <x, y>";
            }
        }
        add("pairing invariance", ok, w.str());
    }
    {
        bool ok = true;
        std::ostringstream w;
        for (int n = 0; n < sys.M && ok; ++n) {
            const int E0 = sys.pair_exp[n], E1 = sys.pair_exp[n + 1];
            const int E = std::max({E0, E1, 1});
            const i64 ME = ppow_i64(p, E);
            // <k_a x, y>_n = <x, r_b y>_{n+1}
            Mat lhs = mat_scale(
                mat_mul(mat_transpose(sys.k_a[n]), sys.pairing[n], ME),
                ppow_i64(p, E - E0), ME);
            Mat rhs = mat_scale(mat_mul(sys.pairing[n + 1], sys.r_b[n], ME),
                                ppow_i64(p, E - E1), ME);
            if (!(lhs == rhs)) {
                ok = false;
                w << "level " << n << ": <k x, y> != <x, r y>";
                break;
            }
            // <r_a x, y>_{n+1} = <x, k_b y>_n
            Mat lhs2 = mat_scale(
                mat_mul(mat_transpose(sys.r_a[n]), sys.pairing[n + 1], ME),
                ppow_i64(p, E - E1), ME);
            Mat rhs2 = mat_scale(mat_mul(sys.pairing[n], sys.k_b[n], ME),
                                 ppow_i64(p, E - E0), ME);
            if (!(lhs2 == rhs2)) {
                ok = false;
                w << "level " << n << ": <r x, y> != <x, k y>";
            }
        }
        add("pairing adjointness", ok, w.str());
    }
    return rep;
}

GammaSystem synthetic_system(i64 p, const IPoly& f, int k, int M, u64 cap) {
    if (!small_prime(p)) throw InvalidInput("p must be a small prime");
    if (k < 1) throw InvalidInput("twist order k must be at least 1");
    if (M < 0) throw InvalidInput("negative top level");
    if (ppow_i64(p, M) > 2048)
        throw EnumerationTooLarge("group ring rank p^M", (u64)ppow_i64(p, M), 2048);
    ppow_i64(p, M + k);  // overflow check on the top modulus

    GammaSystem sys;
    sys.p = p;
    sys.k = k;
    sys.M = M;
    sys.a.resize(M + 1);
    sys.b.resize(M + 1);
    sys.pairing.resize(M + 1);
    sys.pair_exp.resize(M + 1);
    sys.r_a.resize(M);
    sys.r_b.resize(M);
    sys.k_a.resize(M);
    sys.k_b.resize(M);

    struct Level {
        int P, W;
        i64 mod;
        Mat G, F, proj, sect;
        std::vector<int> exps;
    };
    std::vector<Level> L(M + 1);

    for (int n = 0; n <= M; ++n) {
        Level& lv = L[n];
        lv.P = (int)ppow_i64(p, n);
        lv.W = n + k;
        lv.mod = ppow_i64(p, lv.W);
        lv.G = Mat(lv.P, lv.P);
        for (int t = 0; t < lv.P; ++t) lv.G.at((t + 1) % lv.P, t) = 1;
        Mat X = mat_sub(lv.G, mat_identity(lv.P), lv.mod);
        Mat F(lv.P, lv.P);
        if (!f.empty()) {
            F = mat_scale(mat_identity(lv.P), f.back(), lv.mod);
            for (int j = (int)f.size() - 2; j >= 0; --j) {
                F = mat_mul(F, X, lv.mod);
                F = mat_add(F, mat_scale(mat_identity(lv.P), f[j], lv.mod), lv.mod);
            }
        }
        lv.F = F;
        SmithForm S = smith_form(F, p, lv.W);
        std::vector<int> live;
        for (int i = 0; i < lv.P; ++i)
            if (S.exps[i] > 0) {
                live.push_back(i);
                lv.exps.push_back(S.exps[i]);
            }
        cap_check_order(p, exp_sum(lv.exps), cap, "synthetic level module");
        lv.proj = Mat((int)live.size(), lv.P);
        lv.sect = Mat(lv.P, (int)live.size());
        for (int t = 0; t < (int)live.size(); ++t)
            for (int j = 0; j < lv.P; ++j) {
                lv.proj.at(t, j) = S.Uinv.at(live[t], j);
                lv.sect.at(j, t) = S.U.at(j, live[t]);
            }
        Mat act_b = mat_mul(lv.proj, mat_mul(lv.G, lv.sect, lv.mod), lv.mod);
        sys.b[n] = {p, n, lv.exps, act_b};
        Mat act_a = dual_hom(mat_pow(act_b, lv.P - 1, lv.mod), lv.exps, lv.exps, p);
        sys.a[n] = {p, n, lv.exps, act_a};
        Mat D((int)lv.exps.size(), (int)lv.exps.size());
        for (int i = 0; i < D.r; ++i) D.at(i, i) = ppow_i64(p, lv.W - lv.exps[i]);
        sys.pairing[n] = D;
        sys.pair_exp[n] = lv.W;
    }

    for (int n = 0; n < M; ++n) {
        const Level& lo = L[n];
        const Level& hi = L[n + 1];
        Mat Pv(lo.P, hi.P);
        for (int t = 0; t < hi.P; ++t) Pv.at(t % lo.P, t) = 1;
        Mat Lift(hi.P, lo.P);
        for (int t = 0; t < lo.P; ++t) Lift.at(t, t) = 1;
        Mat Nm(hi.P, hi.P);
        {
            Mat step = mat_pow(hi.G, lo.P, hi.mod);
            Mat cur = mat_identity(hi.P);
            for (i64 j = 0; j < p; ++j) {
                Nm = mat_add(Nm, cur, hi.mod);
                cur = mat_mul(cur, step, hi.mod);
            }
        }
        // the norm transition is well-defined on b_n iff p^{W_n} nu lies in
        // the upper-level relation span; Gamma-equivariance reduces the whole
        // lift ambiguity to this single membership
        std::vector<i64> wellvec = mat_col(Nm, 0);
        for (auto& v : wellvec)
            v = (i64)((i128)v * ppow_i64(p, lo.W) % hi.mod);
        if (!in_span(hi.F, wellvec, p, hi.W))
            throw Unsupported(
                "norm transition is not well-defined for this f at level " +
                std::to_string(n));
        sys.k_b[n] =
            mat_mul(lo.proj, mat_mul(Pv, hi.sect, hi.mod), hi.mod);
        sys.r_b[n] = mat_mul(
            hi.proj, mat_mul(Nm, mat_mul(Lift, lo.sect, hi.mod), hi.mod), hi.mod);
        sys.r_a[n] = dual_hom(sys.k_b[n], lo.exps, hi.exps, p);
        sys.k_a[n] = dual_hom(sys.r_b[n], hi.exps, lo.exps, p);
    }
    return sys;
}

GammaSystem synthetic_system(const IwasawaSeries& f, int k, int M, u64 cap) {
    const auto& ctx = *f.ctx;
    if (ctx.m() != 0)
        throw Unsupported("synthetic systems need unramified coefficients (m = 0)");
    if (k < 1) throw InvalidInput("twist order k must be at least 1");
    if (M < 0) throw InvalidInput("negative top level");
    if (ctx.N() < M + k)
        throw InvalidInput("coefficient precision below the top-level modulus");
    // (gamma0 - 1)^{p^M (M+k)} = 0 mod p^{M+k} at every level, so the tail
    // beyond that degree cannot enter any level
    const i64 need = ppow_i64(ctx.p(), M) * (M + k);
    if ((i64)f.D < need)
        throw InsufficientTruncation(
            "series truncation cannot determine the top level; need D >= p^M (M+k)");
    const i64 mod = ppow_i64(ctx.p(), M + k);
    IPoly fi(std::min<size_t>(f.a.size(), (size_t)need), 0);
    for (size_t i = 0; i < fi.size(); ++i) fi[i] = pmod(f.a[i].c[0], mod);
    return synthetic_system(ctx.p(), fi, k, M, cap);
}

DerivedSystems derived_systems(const GammaSystem& sys,
                               const std::vector<Mat>& c_gens) {
    structural_check(sys);
    if ((int)c_gens.size() != sys.M + 1)
        throw InvalidInput("one generator block per level required");
    const i64 p = sys.p;
    const i64 Mbig = ppow_i64(p, system_width(sys));
    for (int n = 0; n <= sys.M; ++n)
        if (c_gens[n].r != (int)sys.a[n].exps.size())
            throw InvalidInput("generator rows must match the a-level coordinates");

    for (int n = 0; n <= sys.M; ++n) {
        Mat img = mat_mul(sys.a[n].act, c_gens[n], Mbig);
        for (int j = 0; j < img.c; ++j)
            if (!group_member(c_gens[n], sys.a[n].exps, mat_col(img, j), p))
                throw InvalidSubmoduleFamily(
                    "family is not stable under gamma0 at level " +
                    std::to_string(n));
    }
    for (int n = 0; n < sys.M; ++n) {
        Mat up = mat_mul(sys.r_a[n], c_gens[n], Mbig);
        for (int j = 0; j < up.c; ++j)
            if (!group_member(c_gens[n + 1], sys.a[n + 1].exps, mat_col(up, j), p))
                throw InvalidSubmoduleFamily(
                    "family is not stable under r at level " + std::to_string(n));
        Mat dn = mat_mul(sys.k_a[n], c_gens[n + 1], Mbig);
        for (int j = 0; j < dn.c; ++j)
            if (!group_member(c_gens[n], sys.a[n].exps, mat_col(dn, j), p))
                throw InvalidSubmoduleFamily(
                    "family is not stable under k at level " + std::to_string(n));
    }

    std::vector<SubCoord> subC(sys.M + 1), subF(sys.M + 1);
    std::vector<QuotCoord> quotE(sys.M + 1), quotD(sys.M + 1);
    std::vector<Mat> Fgens(sys.M + 1);
    for (int n = 0; n <= sys.M; ++n) {
        subC[n] = sub_coordinatize(sys.a[n].exps, c_gens[n], p);
        quotE[n] = quot_coordinatize(sys.a[n].exps, c_gens[n], p);
        const int nb = (int)sys.b[n].exps.size();
        const int E = sys.pair_exp[n];
        if (c_gens[n].c == 0 || E == 0) {
            Fgens[n] = mat_identity(nb);
        } else {
            Mat Rho = mat_mul(mat_transpose(c_gens[n]), sys.pairing[n],
                              ppow_i64(p, E));
            Fgens[n] = kernel_generators(Rho, p, E);
        }
        subF[n] = sub_coordinatize(sys.b[n].exps, Fgens[n], p);
        quotD[n] = quot_coordinatize(sys.b[n].exps, Fgens[n], p);
    }
    for (int n = 0; n < sys.M; ++n) {
        Mat up = mat_mul(sys.r_b[n], Fgens[n], Mbig);
        for (int j = 0; j < up.c; ++j)
            if (!group_member(Fgens[n + 1], sys.b[n + 1].exps, mat_col(up, j), p))
                throw InvalidSubmoduleFamily(
                    "pairing annihilators are not r-stable; the parent system "
                    "fails adjointness");
        Mat dn = mat_mul(sys.k_b[n], Fgens[n + 1], Mbig);
        for (int j = 0; j < dn.c; ++j)
            if (!group_member(Fgens[n], sys.b[n].exps, mat_col(dn, j), p))
                throw InvalidSubmoduleFamily(
                    "pairing annihilators are not k-stable; the parent system "
                    "fails adjointness");
    }

    DerivedSystems out;
    auto init = [&](GammaSystem& g) {
        g.p = p;
        g.k = sys.k;
        g.M = sys.M;
        g.a.resize(sys.M + 1);
        g.b.resize(sys.M + 1);
        g.pairing.resize(sys.M + 1);
        g.pair_exp = sys.pair_exp;
        g.r_a.resize(sys.M);
        g.r_b.resize(sys.M);
        g.k_a.resize(sys.M);
        g.k_b.resize(sys.M);
    };
    init(out.C);
    init(out.E);
    const char* unstable = "submodule family is not preserved by the induced maps";
    for (int n = 0; n <= sys.M; ++n) {
        const i64 ME = ppow_i64(p, std::max(sys.pair_exp[n], 1));
        out.C.a[n] = {p, n, subC[n].exps,
                      induced_sub_hom(subC[n], subC[n], sys.a[n].act, p, unstable)};
        out.C.b[n] = {p, n, quotD[n].exps,
                      induced_quot_hom(quotD[n], quotD[n], sys.b[n].act, p)};
        out.C.pairing[n] = mat_mul(
            mat_mul(mat_transpose(subC[n].emb), sys.pairing[n], ME),
            quotD[n].sect, ME);
        out.E.a[n] = {p, n, quotE[n].exps,
                      induced_quot_hom(quotE[n], quotE[n], sys.a[n].act, p)};
        out.E.b[n] = {p, n, subF[n].exps,
                      induced_sub_hom(subF[n], subF[n], sys.b[n].act, p, unstable)};
        out.E.pairing[n] = mat_mul(
            mat_mul(mat_transpose(quotE[n].sect), sys.pairing[n], ME),
            subF[n].emb, ME);
    }
    for (int n = 0; n < sys.M; ++n) {
        out.C.r_a[n] = induced_sub_hom(subC[n], subC[n + 1], sys.r_a[n], p, unstable);
        out.C.k_a[n] = induced_sub_hom(subC[n + 1], subC[n], sys.k_a[n], p, unstable);
        out.C.r_b[n] = induced_quot_hom(quotD[n], quotD[n + 1], sys.r_b[n], p);
        out.C.k_b[n] = induced_quot_hom(quotD[n + 1], quotD[n], sys.k_b[n], p);
        out.E.r_a[n] = induced_quot_hom(quotE[n], quotE[n + 1], sys.r_a[n], p);
        out.E.k_a[n] = induced_quot_hom(quotE[n + 1], quotE[n], sys.k_a[n], p);
        out.E.r_b[n] = induced_sub_hom(subF[n], subF[n + 1], sys.r_b[n], p, unstable);
        out.E.k_b[n] = induced_sub_hom(subF[n + 1], subF[n], sys.k_b[n], p, unstable);
    }

    out.exact_c = true;
    out.exact_e = true;
    for (int n = 0; n <= sys.M; ++n) {
        if (exp_sum(subC[n].exps) + exp_sum(quotE[n].exps) !=
            exp_sum(sys.a[n].exps))
            out.exact_c = false;
        Mat z = mat_mul(quotE[n].proj, subC[n].emb, Mbig);
        if (!hom_eq(z, Mat(z.r, z.c), quotE[n].exps, p)) out.exact_c = false;
        if (exp_sum(subF[n].exps) + exp_sum(quotD[n].exps) !=
            exp_sum(sys.b[n].exps))
            out.exact_e = false;
        Mat zb = mat_mul(quotD[n].proj, subF[n].emb, Mbig);
        if (!hom_eq(zb, Mat(zb.r, zb.c), quotD[n].exps, p)) out.exact_e = false;
    }
    out.c_report = validate_axioms(out.C);
    out.e_report = validate_axioms(out.E);
    return out;
}

ControlReport control_analysis(const GammaSystem& sys) {
    structural_check(sys);
    const i64 p = sys.p;
    const i64 Mbig = ppow_i64(p, system_width(sys));
    ControlReport rep;
    rep.truncation = sys.M;
    rep.a0_exp.resize(sys.M + 1);
    rep.b0_exp.resize(sys.M + 1);
    rep.a0_gens.resize(sys.M + 1);
    rep.b0_gens.resize(sys.M + 1);
    rep.strongly_controlled = true;
    for (int n = 0; n <= sys.M; ++n) {
        Mat Rcomp = mat_identity((int)sys.a[n].exps.size());
        for (int l = n; l < sys.M; ++l) Rcomp = mat_mul(sys.r_a[l], Rcomp, Mbig);
        Mat K = hom_kernel_gens(Rcomp, sys.a[n].exps, sys.a[sys.M].exps, p);
        SubCoord sk = sub_coordinatize(sys.a[n].exps, K, p);
        rep.a0_gens[n] = sk.emb;
        rep.a0_exp[n] = exp_sum(sk.exps);
        Mat Kcomp = mat_identity((int)sys.b[sys.M].exps.size());
        for (int l = sys.M - 1; l >= n; --l) Kcomp = mat_mul(sys.k_b[l], Kcomp, Mbig);
        QuotCoord qc = quot_coordinatize(sys.b[n].exps, Kcomp, p);
        rep.b0_gens[n] = qc.sect;
        rep.b0_exp[n] = exp_sum(qc.exps);
        if (rep.a0_exp[n] != 0 || rep.b0_exp[n] != 0)
            rep.strongly_controlled = false;
    }
    rep.lemma_consistent = true;
    for (int n = 0; n < sys.M; ++n) {
        const bool ra_inj =
            hom_injective(sys.r_a[n], sys.a[n].exps, sys.a[n + 1].exps, p);
        const bool kb_sur = hom_surjective(sys.k_b[n], sys.b[n].exps, p);
        const bool rb_inj =
            hom_injective(sys.r_b[n], sys.b[n].exps, sys.b[n + 1].exps, p);
        const bool ka_sur = hom_surjective(sys.k_a[n], sys.a[n].exps, p);
        if (ra_inj != kb_sur || rb_inj != ka_sur) rep.lemma_consistent = false;
    }
    return rep;
}

APrime aprime_construction(const GammaSystem& sys) {
    structural_check(sys);
    const i64 p = sys.p;
    const int M = sys.M;
    const i64 Mbig = ppow_i64(p, system_width(sys));
    std::vector<Mat> a0(M + 1), a1(M + 1), Sg(M + 1), sub1(M + 1), sub2(M + 1);
    std::vector<SubQuot> aSQ(M + 1), bSQ(M + 1);
    for (int n = 0; n <= M; ++n) {
        Mat Rcomp = mat_identity((int)sys.a[n].exps.size());
        for (int l = n; l < M; ++l) Rcomp = mat_mul(sys.r_a[l], Rcomp, Mbig);
        a0[n] = hom_kernel_gens(Rcomp, sys.a[n].exps, sys.a[M].exps, p);
        Mat Kcomp = mat_identity((int)sys.a[M].exps.size());
        for (int l = M - 1; l >= n; --l) Kcomp = mat_mul(sys.k_a[l], Kcomp, Mbig);
        a1[n] = Kcomp;
        Sg[n] = a0[n].c ? mat_hcat(a1[n], a0[n]) : a1[n];
        const int nb = (int)sys.b[n].exps.size();
        const int E = sys.pair_exp[n];
        auto perp = [&](const Mat& gens) {
            if (gens.c == 0 || E == 0) return mat_identity(nb);
            Mat Rho =
                mat_mul(mat_transpose(gens), sys.pairing[n], ppow_i64(p, E));
            return kernel_generators(Rho, p, E);
        };
        sub1[n] = perp(a0[n]);
        sub2[n] = perp(Sg[n]);
        aSQ[n] = subquot_coordinatize(sys.a[n].exps, Sg[n], a0[n], p);
        bSQ[n] = subquot_coordinatize(sys.b[n].exps, sub1[n], sub2[n], p);
    }

    APrime out;
    GammaSystem& g = out.sys;
    g.p = p;
    g.k = sys.k;
    g.M = M;
    g.a.resize(M + 1);
    g.b.resize(M + 1);
    g.pairing.resize(M + 1);
    g.pair_exp = sys.pair_exp;
    g.r_a.resize(M);
    g.r_b.resize(M);
    g.k_a.resize(M);
    g.k_b.resize(M);
    const char* unstable =
        "control subquotients are not transition-stable; the input system "
        "fails its axioms";
    for (int n = 0; n <= M; ++n) {
        const i64 ME = ppow_i64(p, std::max(sys.pair_exp[n], 1));
        g.a[n] = {p, n, aSQ[n].exps,
                  induced_subquot_hom(aSQ[n], aSQ[n], sys.a[n].act, p, unstable)};
        g.b[n] = {p, n, bSQ[n].exps,
                  induced_subquot_hom(bSQ[n], bSQ[n], sys.b[n].act, p, unstable)};
        g.pairing[n] = mat_mul(
            mat_mul(mat_transpose(aSQ[n].emb), sys.pairing[n], ME), bSQ[n].emb, ME);
    }
    for (int n = 0; n < M; ++n) {
        g.r_a[n] = induced_subquot_hom(aSQ[n], aSQ[n + 1], sys.r_a[n], p, unstable);
        g.k_a[n] = induced_subquot_hom(aSQ[n + 1], aSQ[n], sys.k_a[n], p, unstable);
        g.r_b[n] = induced_subquot_hom(bSQ[n], bSQ[n + 1], sys.r_b[n], p, unstable);
        g.k_b[n] = induced_subquot_hom(bSQ[n + 1], bSQ[n], sys.k_b[n], p, unstable);
    }
    out.report = validate_axioms(g);
    out.strongly_controlled = control_analysis(g).strongly_controlled;
    out.truncation_warning = (M == 0);
    // the kernel chains are only trustworthy if the last level added nothing
    for (int n = 0; n < M && !out.truncation_warning; ++n) {
        Mat R1 = mat_identity((int)sys.a[n].exps.size());
        for (int l = n; l < M - 1; ++l) R1 = mat_mul(sys.r_a[l], R1, Mbig);
        Mat K1 = hom_kernel_gens(R1, sys.a[n].exps, sys.a[M - 1].exps, p);
        Mat R2 = mat_mul(sys.r_a[M - 1], R1, Mbig);
        Mat K2 = hom_kernel_gens(R2, sys.a[n].exps, sys.a[M].exps, p);
        const i64 o1 = exp_sum(sub_coordinatize(sys.a[n].exps, K1, p).exps);
        const i64 o2 = exp_sum(sub_coordinatize(sys.a[n].exps, K2, p).exps);
        if (o1 != o2) out.truncation_warning = true;
    }
    return out;
}

DualityReport duality_invariants(const GammaSystem& sys,
                                 const std::optional<IPoly>& f, u64 seed) {
    structural_check(sys);
    const i64 p = sys.p;
    DualityReport rep;
    rep.all_pass = true;
    std::mt19937_64 rng(seed);
    auto rand_vec = [&](const std::vector<int>& es) {
        std::vector<i64> v(es.size());
        for (size_t i = 0; i < es.size(); ++i)
            v[i] = (i64)(rng() % (u64)ppow_i64(p, es[i]));
        return v;
    };
    for (int n = 0; n <= sys.M; ++n) {
        const int W = n + sys.k;
        const i64 mod = ppow_i64(p, W);
        const int P = (int)ppow_i64(p, n);
        DualityLevel lvl;
        lvl.level = n;
        Mat AnnB = annihilator_or_full(sys.b[n], W);
        Mat AnnA = annihilator_or_full(sys.a[n], W);
        lvl.ann_sharp_duality = span_equal(AnnA, sharp_columns(AnnB, p, n), p, W);
        lvl.index_consistent =
            cokernel_exponent(AnnB, p, W) == fgm_order_exponent(sys.b[n]);
        lvl.adjointness = true;
        for (int trial = 0; trial < 8; ++trial) {
            // lambda-sharp adjointness at level n
            std::vector<i64> lam(P);
            for (auto& v : lam) v = (i64)(rng() % (u64)mod);
            std::vector<i64> x = rand_vec(sys.a[n].exps);
            std::vector<i64> y = rand_vec(sys.b[n].exps);
            const i64 MA = ppow_i64(p, std::max(fgm_max_exp(sys.a[n]), 1));
            const i64 MB = ppow_i64(p, std::max(fgm_max_exp(sys.b[n]), 1));
            std::vector<i64> lx =
                mat_apply(gamma_poly_action(sys.a[n], sharp_vec(lam)), x, MA);
            std::vector<i64> ly =
                mat_apply(gamma_poly_action(sys.b[n], lam), y, MB);
            if (!qz_equal(pair_num(sys, n, lx, y), sys.pair_exp[n],
                          pair_num(sys, n, x, ly), sys.pair_exp[n], p))
                lvl.adjointness = false;
            if (n < sys.M) {
                std::vector<i64> xh = rand_vec(sys.a[n + 1].exps);
                const i64 MAl = ppow_i64(p, std::max(fgm_max_exp(sys.a[n]), 1));
                const i64 MBh = ppow_i64(p, std::max(fgm_max_exp(sys.b[n + 1]), 1));
                std::vector<i64> kx = mat_apply(sys.k_a[n], xh, MAl);
                std::vector<i64> ry = mat_apply(sys.r_b[n], y, MBh);
                if (!qz_equal(pair_num(sys, n, kx, y), sys.pair_exp[n],
                              pair_num(sys, n + 1, xh, ry), sys.pair_exp[n + 1], p))
                    lvl.adjointness = false;
            }
        }
        if (f) {
            std::vector<i64> cv = cyc_tpoly_vec(p, n, W, *f);
            if (!in_span(AnnB, cv, p, W)) rep.f_in_ann_b = false;
            if (!in_span(AnnA, sharp_vec(cv), p, W)) rep.fsharp_in_ann_a = false;
        }
        rep.all_pass = rep.all_pass && lvl.ann_sharp_duality &&
                       lvl.index_consistent && lvl.adjointness;
        rep.levels.push_back(lvl);
    }
    rep.all_pass = rep.all_pass && rep.f_in_ann_b && rep.fsharp_in_ann_a;
    return rep;
}

}  // namespace iwff

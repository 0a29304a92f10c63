#pragma once
#include <optional>
#include <string>
#include <vector>

#include "iwff/intpoly.hpp"
#include "iwff/iwasawa.hpp"
#include "iwff/snf.hpp"

namespace iwff {

// Finite abelian p-group in cyclic coordinates z_i mod p^{exps[i]} carrying
// a Gamma_n-action: gamma0 acts by `act`, a well-defined endomorphism
// (v_p(act[i][j]) >= exps[i] - exps[j]) whose hom-order divides p^n.
struct FiniteGammaModule {
    i64 p = 0;
    int n = 0;
    std::vector<int> exps;
    Mat act;
};
i64 fgm_order_exponent(const FiniteGammaModule& m);  // log_p of the order
int fgm_max_exp(const FiniteGammaModule& m);
// action of sum_t c[t] gamma0^t on coordinates
Mat gamma_poly_action(const FiniteGammaModule& m, const std::vector<i64>& c);
// action of an integer polynomial in T = gamma0 - 1
Mat tpoly_action(const FiniteGammaModule& m, const IPoly& f);

// Levels 0..M of a Gamma-system: modules a_n (inductive via r) and b_n
// (projective via k), perfect pairings <x,y>_n = x^T P_n y / p^{pair_exp[n]}
// in Q/Z, and transition maps r (up) and k (down) stored per adjacent pair.
struct GammaSystem {
    i64 p = 0;
    int k = 1;  // twist order: p^{n+k} annihilates level n
    int M = 0;
    std::vector<FiniteGammaModule> a, b;  // size M+1
    std::vector<Mat> r_a, r_b;            // [n]: level n -> n+1
    std::vector<Mat> k_a, k_b;            // [n]: level n+1 -> n
    std::vector<Mat> pairing;             // [n]: rows = a-coords, cols = b-coords
    std::vector<int> pair_exp;
};

struct AxiomCheck {
    std::string name;
    bool pass = false;
    std::string witness;  // failure details, empty on pass
};
struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass = true;
};

// Exact verification of the defining axioms: well-defined Gamma-actions of
// order dividing p^n with p^{n+k} annihilation, well-defined equivariant
// transition maps, the composite identities k o r = p and r o k = norm, and
// perfect Gamma-invariant pairings adjoint to the transitions.  Failures
// land in the report with a witness; malformed dimensions throw
// InvalidInput, module orders beyond cap throw EnumerationTooLarge.
AxiomReport validate_axioms(const GammaSystem& sys, u64 cap = 1000000);

// b_n := (Z/p^{n+k})[Gamma_n]/(f(gamma0 - 1)) with k-maps the ring
// projections, r-maps multiplication by the norm element of
// ker(Gamma_{n+1} -> Gamma_n), a_n the Pontryagin dual of b_n with dual
// maps, and the evaluation pairing.  Unsupported when norm multiplication
// fails to be well-defined across the p-power step for this f.
GammaSystem synthetic_system(i64 p, const IPoly& f, int k, int M,
                             u64 cap = 1000000);
// bridge for unramified series coefficients (ctx->m() == 0, N >= M + k)
GammaSystem synthetic_system(const IwasawaSeries& f, int k, int M,
                             u64 cap = 1000000);

// Derived systems from a stable submodule family c_n <= a_n (generator
// columns in a_n coordinates): C = (c, b/Ann(c)) and E = (a/c, Ann(c)),
// annihilators taken via the pairing.  Both are re-validated and the
// levelwise exactness of 0 -> c -> a -> e -> 0 and 0 -> f -> b -> d -> 0
// is checked.  InvalidSubmoduleFamily when the family is not map-stable.
struct DerivedSystems {
    GammaSystem C, E;
    AxiomReport c_report, e_report;
    bool exact_c = false, exact_e = false;
};
DerivedSystems derived_systems(const GammaSystem& sys,
                               const std::vector<Mat>& c_gens);

// Truncated a_n^0 = Ker(r_n^M) (the union over n' <= M collapses to the top
// kernel since the kernels grow), the strong-control flag, and the
// injective-r <-> surjective-k cross-check.
struct ControlReport {
    int truncation = 0;
    std::vector<i64> a0_exp, b0_exp;
    std::vector<Mat> a0_gens, b0_gens;
    bool strongly_controlled = false;
    bool lemma_consistent = false;
};
ControlReport control_analysis(const GammaSystem& sys);

// A' = image(a^1 -> a/a^0) with a^1 the truncated universal image of the
// k-maps; strips truncation-visible kernels and re-validates.
struct APrime {
    GammaSystem sys;
    AxiomReport report;
    bool strongly_controlled = false;
    bool truncation_warning = false;
};
APrime aprime_construction(const GammaSystem& sys);

// Annihilator-ideal duality Ann(a_n) = Ann(b_n)^sharp inside
// Lambda_n/p^{n+k}, cyclicity index check |Ann(b_n)| * |b_n| = |Lambda_n|,
// lambda-adjointness spot checks, and (when f is supplied) membership of f
// in Ann(b_n) and of f^sharp in Ann(a_n) at every level.
struct DualityLevel {
    int level = 0;
    bool ann_sharp_duality = false;
    bool index_consistent = false;
    bool adjointness = false;
};
struct DualityReport {
    std::vector<DualityLevel> levels;
    bool f_in_ann_b = true;
    bool fsharp_in_ann_a = true;
    bool all_pass = false;
};
DualityReport duality_invariants(const GammaSystem& sys,
                                 const std::optional<IPoly>& f = std::nullopt,
                                 u64 seed = 1);

// Generators (columns of gamma0-power coefficient vectors mod p^W) of the
// annihilator ideal of the module inside (Z/p^W)[Gamma_n]; W >= max exponent.
Mat annihilator_generators(const FiniteGammaModule& m, int W);
// coefficient-column form of the involution gamma -> gamma^{-1} at level n
Mat sharp_columns(const Mat& coeffs, i64 p, int n);

}  // namespace iwff

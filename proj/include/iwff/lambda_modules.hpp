#pragma once
#include <utility>
#include <vector>

#include "iwff/iwasawa.hpp"
#include "iwff/snf.hpp"

namespace iwff {

// Characteristic element in associate-normal form: pi^mu * dist with dist a
// monic distinguished polynomial (little-endian, length lambda+1).  `digits`
// records the p-digit accuracy of dist inherited from Weierstrass
// preparation; exact polynomial inputs carry digits = N.
struct CharElement {
    CtxPtr ctx;
    i64 mu = 0;
    std::vector<ORes> dist;
    int digits = 0;
};

// Square presentation M = Lambda^r / (column span of rel), entries truncated
// series at a common D.  The optional factored form lists (xi_i, r_i) pairs
// whose product is an associate of det(rel).
struct ModulePresentation {
    CtxPtr ctx;
    int r = 0;
    std::vector<IwasawaSeries> rel;  // r*r entries, row-major
    std::vector<std::pair<IwasawaSeries, int>> factors;
};

// diagonal presentation assembled from a factored list
ModulePresentation pres_from_factors(
    const CtxPtr& ctx, int D,
    std::vector<std::pair<IwasawaSeries, int>> factors);
// determinant of the relation matrix (Laplace expansion, r <= 10)
IwasawaSeries pres_det(const ModulePresentation& pres);

// characteristic element = Weierstrass-normalized determinant;
// NotTorsionAtPrecision when det vanishes at working precision
CharElement char_element(const ModulePresentation& pres, int guard = 4);
CharElement char_normalize(const IwasawaSeries& f, int guard = 4);
// product in the associate-class monoid (exact: no re-preparation)
CharElement char_mul(const CharElement& x, const CharElement& y);
// equality of associate classes at the shared digit accuracy
bool char_assoc_eq(const CharElement& x, const CharElement& y);
// sharp / phi^* images re-normalized at truncation D
CharElement char_sharp(const CharElement& f, int D, int guard = 4);
CharElement char_twist(const CharElement& f, const ORes& c, int D, int guard = 4);

// entrywise twist of the relation matrix (factors included)
ModulePresentation module_twist_sharp(const ModulePresentation& pres);
ModulePresentation module_twist_phi(const ModulePresentation& pres, const ORes& c);

// Generalized Euler characteristic data of M = Lambda_O/(f) twisted by
// omega.  ord is ord(omega^*(f)) at working precision; when ord = 0 the
// characteristic is certified finite with value p^exponent, the exponent
// being v_pi(omega^*(f)(0)) (+ mu), i.e. |leading|_p^{-d_O} in p-units.
struct EulerChar {
    int ord = 0;
    bool finite = false;
    i64 exponent = 0;
};
EulerChar euler_characteristic(const CharElement& f, const PCharacter& om);

// Independent realization of |Coker(g_M)| / |Ker(g_M)| on the companion
// model of the twisted distinguished part: T acts on O^lambda by the
// companion matrix, expanded to an integer matrix mod p^N, and the
// kernel/cokernel orders come from integer Smith normal form.  The pi^mu
// part contributes |O/pi^mu| = p^mu.  PrecisionLoss when the cokernel order
// is not certified below p^N per invariant factor; EnumerationTooLarge when
// the claimed model order exceeds cap.
i64 euler_characteristic_bruteforce(const CharElement& f, const PCharacter& om,
                                    u64 cap = 1000000);

// Classification of factored data into p-part / simple / non-simple.  A
// factor pi^mu * dist contributes its mu to the p-part and its dist (when
// nontrivial) to the simple or non-simple part; simple means dist matches
// the minimal polynomial of zeta - 1 for some p-power root of unity zeta,
// tested by degree match plus vanishing on the full Galois orbit.
// Unclassified when a candidate orbit lives above the coefficient level m.
struct PartSplit {
    std::vector<int> p_idx, si_idx, ns_idx;  // indices into pres.factors
    CharElement p_part, si_part, ns_part;
};
PartSplit part_split(const ModulePresentation& pres, int guard = 4);

}  // namespace iwff

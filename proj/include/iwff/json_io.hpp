#pragma once
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwff/curve.hpp"
#include "iwff/frobenius.hpp"
#include "iwff/gamma_systems.hpp"
#include "iwff/lambda_modules.hpp"
#include "iwff/stickelberger.hpp"

namespace iwff {

using Json = nlohmann::json;

// Every file read or written carries this tag at top level.
inline constexpr const char* kSchemaTag = "iwasawa-ff/v1";

Json load_json_file(const std::string& path);  // InvalidInput on parse failure
void save_json_file(const std::string& path, const Json& j);
void require_schema(const Json& j);

// ---- curve files ----
// {schema, kind: "p1"|"elliptic"|"hyperelliptic"|"raw", p, a, ...}
//   elliptic:       coefficients = [a1, a2, a3, a4, a6]
//   hyperelliptic:  coefficients = f little-endian
//   raw:            q or (p, a), genus, counts = [N_1, ...]
// Field elements are integers (prime subfield) or coefficient arrays.
CurveModel curve_from_json(const Json& j);
Json curve_to_json(const CurveModel& C);  // canonical form, used for hashing

// ---- abelian-variety files ----
// {schema, kind: "elliptic"|"jacobian"|"charpoly"|"product", ...}
//   elliptic/jacobian: curve fields inline (counts go through the cache)
//   charpoly:          q, h = [c0, ..., c_{2g}] little-endian
//   product:           q, parts = [h, h, ...]
struct CountCache;
struct AvData {
    IPoly h;
    i64 q = 0;
};
AvData av_from_json(const Json& j, CountCache* cache = nullptr,
                    i64 cap = kDefaultEnumCap);

// ---- module presentation files ----
// {schema, p, m, N, D, factors: [{coeffs: series, mult}]} or
// {schema, p, m, N, D, r, rel: [series, ...]} (r*r entries, row-major).
// A series is an array of at most D residues (little-endian in T, truncation
// mod T^D); a residue is an int or a zeta-basis coefficient array.
ModulePresentation presentation_from_json(const Json& j);

// ---- gamma-system files ----
// {schema, p, k, M, a: [level...], b: [level...], r_a, r_b, k_a, k_b,
//  pairing, pair_exp}; a level is {exps, act}.  Matrices are arrays of rows,
// or {r, c, data} objects when a dimension is zero.
GammaSystem system_from_json(const Json& j);
Json system_to_json(const GammaSystem& sys);

// ---- group-ring elements ----
// {schema, p, m, N, n, coeffs}: coeffs[t] is the zeta-basis array of the
// gamma0^t coefficient, t = 0 .. p^n - 1.
Json iw_to_json(const IwasawaElem& x);
// With a context supplied the stored p/m/N must match it; otherwise a fresh
// context is created from the file.
IwasawaElem iw_from_json(const Json& j, CtxPtr ctx = nullptr);

// ---- residues and numbers ----
Json ores_to_json(const CtxPtr& ctx, const ORes& x);  // zeta-basis array
ORes ores_from_json(const CtxPtr& ctx, const Json& j);
Json padic_to_json(const CtxPtr& ctx, const PadicNum& x);

// ---- report serialization ----
Json interp_report_to_json(const InterpReport& r);
Json fe_report_to_json(const FEReport& r);
Json axiom_report_to_json(const AxiomReport& r);
Json control_report_to_json(const ControlReport& r);
Json duality_report_to_json(const DualityReport& r);

// ---- point-count cache ----
// Advisory cache keyed by (model content-hash, extension degree).  A missing
// or corrupt file is treated as empty; corruption is reported in `warnings`,
// never thrown.
struct CountCache {
    std::string path;  // empty: caching disabled
    std::map<std::string, i64> entries;
    bool dirty = false;
    std::vector<std::string> warnings;
};

CountCache load_count_cache(const std::string& path);
void save_count_cache(CountCache& cache);
std::string model_cache_key(const CurveModel& C);
// #C(F_{q^r}) through the cache; enumerates and records on a miss.
i64 cached_count(CountCache& cache, const CurveModel& C, int r,
                 i64 cap = kDefaultEnumCap, bool* hit = nullptr);

}  // namespace iwff

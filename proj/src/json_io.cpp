#include "iwff/json_io.hpp"

#include <fstream>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

i64 need_i64(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        throw InvalidInput(std::string("field \"") + key + "\" must be an integer");
    return v.get<i64>();
}

int need_int(const Json& j, const char* key) {
    i64 v = need_i64(j, key);
    if (v < -(1 << 30) || v > (1 << 30))
        throw InvalidInput(std::string("field \"") + key + "\" out of range");
    return static_cast<int>(v);
}

i64 opt_i64(const Json& j, const char* key, i64 dflt) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    return need_i64(j, key);
}

std::string need_str(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string())
        throw InvalidInput(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<i64> int_vector(const Json& v, const char* what) {
    if (!v.is_array())
        throw InvalidInput(std::string(what) + " must be an array of integers");
    std::vector<i64> out;
    out.reserve(v.size());
    for (const Json& e : v) {
        if (!e.is_number_integer())
            throw InvalidInput(std::string(what) + " must be an array of integers");
        out.push_back(e.get<i64>());
    }
    return out;
}

std::vector<int> exp_vector(const Json& v, const char* what) {
    std::vector<i64> raw = int_vector(v, what);
    std::vector<int> out;
    out.reserve(raw.size());
    for (i64 e : raw) out.push_back(static_cast<int>(e));
    return out;
}

FqElem elem_from_json(const FqField& F, const Json& v) {
    if (v.is_number_integer()) return F.from_int(v.get<i64>());
    if (v.is_array()) {
        std::vector<i64> c = int_vector(v, "field element");
        if (static_cast<int>(c.size()) > F.degree())
            throw InvalidInput("field element has more coefficients than the field degree");
        c.resize(static_cast<size_t>(F.degree()), 0);
        return F.element(std::move(c));
    }
    throw InvalidInput("field element must be an integer or a coefficient array");
}

Json mat_to_json(const Mat& A) {
    if (A.r > 0 && A.c > 0) {
        Json rows = Json::array();
        for (int i = 0; i < A.r; ++i) {
            Json row = Json::array();
            for (int j = 0; j < A.c; ++j) row.push_back(A.at(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    }
    return Json{{"r", A.r}, {"c", A.c}};
}

Mat mat_from_json(const Json& v, const char* what) {
    if (v.is_array()) {
        if (v.empty()) return Mat(0, 0);
        int r = static_cast<int>(v.size());
        if (!v.at(0).is_array())
            throw InvalidInput(std::string(what) + ": matrix rows must be arrays");
        int c = static_cast<int>(v.at(0).size());
        Mat A(r, c);
        for (int i = 0; i < r; ++i) {
            std::vector<i64> row = int_vector(v.at((size_t)i), what);
            if (static_cast<int>(row.size()) != c)
                throw InvalidInput(std::string(what) + ": matrix rows have unequal lengths");
            for (int j = 0; j < c; ++j) A.at(i, j) = row[(size_t)j];
        }
        return A;
    }
    if (v.is_object()) {
        int r = need_int(v, "r"), c = need_int(v, "c");
        if (r < 0 || c < 0)
            throw InvalidInput(std::string(what) + ": matrix dimensions must be nonnegative");
        Mat A(r, c);
        if (v.contains("data")) {
            std::vector<i64> flat = int_vector(v.at("data"), what);
            if (flat.size() != A.a.size())
                throw InvalidInput(std::string(what) + ": matrix data length mismatch");
            A.a = std::move(flat);
        }
        return A;
    }
    throw InvalidInput(std::string(what) + ": matrix must be an array of rows or {r, c, data}");
}

std::vector<ORes> series_from_json(const CtxPtr& ctx, int D, const Json& v,
                                   const char* what) {
    if (!v.is_array())
        throw InvalidInput(std::string(what) + " must be an array of residues");
    if (static_cast<int>(v.size()) > D)
        throw InvalidInput(std::string(what) + " has more coefficients than the truncation D");
    std::vector<ORes> out(static_cast<size_t>(D), ctx->r_zero());
    for (size_t i = 0; i < v.size(); ++i) out[i] = ores_from_json(ctx, v.at(i));
    return out;
}

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(u64 h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[(size_t)i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

}  // namespace

Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open " + path);
    Json j = Json::parse(f, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("cannot parse " + path + " as JSON");
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    f << j.dump(2) << "\n";
}

void require_schema(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string() ||
        j.at("schema").get<std::string>() != kSchemaTag)
        throw InvalidInput(std::string("input must carry \"schema\": \"") + kSchemaTag + "\"");
}

CurveModel curve_from_json(const Json& j) {
    require_schema(j);
    std::string kind = need_str(j, "kind");
    if (kind == "raw") {
        i64 q = j.contains("q") ? need_i64(j, "q") : 0;
        if (q == 0) {
            i64 p = need_i64(j, "p");
            int a = static_cast<int>(opt_i64(j, "a", 1));
            q = 1;
            for (int i = 0; i < a; ++i) q *= p;
        }
        return curve_raw(q, need_int(j, "genus"),
                         int_vector(need(j, "counts"), "counts"));
    }
    i64 p = need_i64(j, "p");
    int a = static_cast<int>(opt_i64(j, "a", 1));
    FqField F(p, a);
    CurveModel C;
    if (kind == "p1") {
        C = curve_p1(F);
    } else if (kind == "elliptic") {
        const Json& co = need(j, "coefficients");
        if (!co.is_array() || co.size() != 5)
            throw InvalidInput("elliptic model needs coefficients [a1, a2, a3, a4, a6]");
        std::vector<FqElem> cs;
        for (const Json& e : co) cs.push_back(elem_from_json(F, e));
        C = curve_elliptic(F, cs);
    } else if (kind == "hyperelliptic") {
        const Json& co = need(j, "coefficients");
        if (!co.is_array()) throw InvalidInput("hyperelliptic model needs coefficient array");
        std::vector<FqElem> cs;
        for (const Json& e : co) cs.push_back(elem_from_json(F, e));
        C = curve_hyperelliptic(F, fqpoly_make(F, cs));
    } else {
        throw InvalidInput("unknown curve kind \"" + kind + "\"");
    }
    curve_validate(C);
    return C;
}

Json curve_to_json(const CurveModel& C) {
    Json j;
    j["schema"] = kSchemaTag;
    j["p"] = C.F.p();
    j["a"] = C.F.degree();
    switch (C.kind) {
        case CurveModel::Kind::P1:
            j["kind"] = "p1";
            break;
        case CurveModel::Kind::Elliptic: {
            j["kind"] = "elliptic";
            Json co = Json::array();
            for (const FqElem& e : C.a) co.push_back(e.c);
            j["coefficients"] = std::move(co);
            break;
        }
        case CurveModel::Kind::Hyperelliptic: {
            j["kind"] = "hyperelliptic";
            Json co = Json::array();
            for (const FqElem& e : C.f.c) co.push_back(e.c);
            j["coefficients"] = std::move(co);
            break;
        }
        case CurveModel::Kind::RawCounts:
            j["kind"] = "raw";
            j["q"] = curve_q(C);
            j["genus"] = C.genus_raw;
            j["counts"] = C.counts;
            break;
    }
    return j;
}

AvData av_from_json(const Json& j, CountCache* cache, i64 cap) {
    require_schema(j);
    std::string kind = need_str(j, "kind");
    AvData out;
    if (kind == "charpoly") {
        out.q = need_i64(j, "q");
        out.h = int_vector(need(j, "h"), "h");
        return out;
    }
    if (kind == "product") {
        out.q = need_i64(j, "q");
        const Json& parts = need(j, "parts");
        if (!parts.is_array() || parts.empty())
            throw InvalidInput("product needs a nonempty parts array");
        std::vector<IPoly> hs;
        for (const Json& part : parts) hs.push_back(int_vector(part, "parts entry"));
        out.h = charpoly_product(hs);
        return out;
    }
    if (kind == "elliptic") {
        CurveModel E = curve_from_json(j);
        out.q = curve_q(E);
        i64 n1 = cache ? cached_count(*cache, E, 1, cap) : count_points(E, 1, cap);
        i64 tr = out.q + 1 - n1;
        out.h = IPoly{out.q, -tr, 1};
        return out;
    }
    if (kind == "jacobian") {
        CurveModel C = curve_from_json(need(j, "curve"));
        out.q = curve_q(C);
        int g = curve_genus(C);
        IPoly P;
        if (cache) {
            std::vector<i64> counts;
            for (int r = 1; r <= g; ++r)
                counts.push_back(cached_count(*cache, C, r, cap));
            P = zeta_numerator(curve_raw(out.q, g, counts), cap);
        } else {
            P = zeta_numerator(C, cap);
        }
        out.h = frobenius_charpoly_from_zeta(P);
        return out;
    }
    throw InvalidInput("unknown abelian-variety kind \"" + kind + "\"");
}

ModulePresentation presentation_from_json(const Json& j) {
    require_schema(j);
    i64 p = need_i64(j, "p");
    int m = need_int(j, "m"), N = need_int(j, "N"), D = need_int(j, "D");
    if (D < 0) throw InvalidInput("D must be nonnegative");
    CtxPtr ctx = PadicCtx::make(p, m, N);
    if (j.contains("factors")) {
        if (j.contains("rel"))
            throw InvalidInput("give either \"factors\" or \"rel\", not both");
        const Json& fs = j.at("factors");
        if (!fs.is_array() || fs.empty())
            throw InvalidInput("factors must be a nonempty array");
        std::vector<std::pair<IwasawaSeries, int>> factors;
        for (const Json& f : fs) {
            int mult = need_int(f, "mult");
            if (mult < 1) throw InvalidInput("factor multiplicity must be >= 1");
            factors.emplace_back(
                sr_make(ctx, D, series_from_json(ctx, D, need(f, "coeffs"), "factor coeffs")),
                mult);
        }
        return pres_from_factors(ctx, D, std::move(factors));
    }
    int r = need_int(j, "r");
    if (r < 1) throw InvalidInput("presentation rank must be >= 1");
    const Json& rel = need(j, "rel");
    if (!rel.is_array() || rel.size() != static_cast<size_t>(r) * static_cast<size_t>(r))
        throw InvalidInput("rel must list r*r series, row-major");
    ModulePresentation pres;
    pres.ctx = ctx;
    pres.r = r;
    for (const Json& entry : rel)
        pres.rel.push_back(sr_make(ctx, D, series_from_json(ctx, D, entry, "rel entry")));
    return pres;
}

GammaSystem system_from_json(const Json& j) {
    require_schema(j);
    GammaSystem sys;
    sys.p = need_i64(j, "p");
    sys.k = need_int(j, "k");
    sys.M = need_int(j, "M");
    auto levels = [&](const char* key, std::vector<FiniteGammaModule>& dst) {
        const Json& arr = need(j, key);
        if (!arr.is_array() || arr.size() != static_cast<size_t>(sys.M) + 1)
            throw InvalidInput(std::string(key) + " must list M+1 levels");
        for (size_t n = 0; n < arr.size(); ++n) {
            FiniteGammaModule m;
            m.p = sys.p;
            m.n = static_cast<int>(n);
            m.exps = exp_vector(need(arr.at(n), "exps"), "exps");
            m.act = mat_from_json(need(arr.at(n), "act"), "act");
            dst.push_back(std::move(m));
        }
    };
    levels("a", sys.a);
    levels("b", sys.b);
    auto mats = [&](const char* key, std::vector<Mat>& dst, size_t count) {
        const Json& arr = need(j, key);
        if (!arr.is_array() || arr.size() != count)
            throw InvalidInput(std::string(key) + " has the wrong number of matrices");
        for (const Json& v : arr) dst.push_back(mat_from_json(v, key));
    };
    size_t M = static_cast<size_t>(sys.M);
    mats("r_a", sys.r_a, M);
    mats("r_b", sys.r_b, M);
    mats("k_a", sys.k_a, M);
    mats("k_b", sys.k_b, M);
    mats("pairing", sys.pairing, M + 1);
    std::vector<i64> pe = int_vector(need(j, "pair_exp"), "pair_exp");
    if (pe.size() != M + 1)
        throw InvalidInput("pair_exp must list M+1 exponents");
    for (i64 e : pe) sys.pair_exp.push_back(static_cast<int>(e));
    return sys;
}

Json system_to_json(const GammaSystem& sys) {
    Json j;
    j["schema"] = kSchemaTag;
    j["p"] = sys.p;
    j["k"] = sys.k;
    j["M"] = sys.M;
    auto levels = [&](const std::vector<FiniteGammaModule>& src) {
        Json arr = Json::array();
        for (const FiniteGammaModule& m : src)
            arr.push_back(Json{{"exps", m.exps}, {"act", mat_to_json(m.act)}});
        return arr;
    };
    j["a"] = levels(sys.a);
    j["b"] = levels(sys.b);
    auto mats = [&](const std::vector<Mat>& src) {
        Json arr = Json::array();
        for (const Mat& A : src) arr.push_back(mat_to_json(A));
        return arr;
    };
    j["r_a"] = mats(sys.r_a);
    j["r_b"] = mats(sys.r_b);
    j["k_a"] = mats(sys.k_a);
    j["k_b"] = mats(sys.k_b);
    j["pairing"] = mats(sys.pairing);
    j["pair_exp"] = sys.pair_exp;
    return j;
}

Json iw_to_json(const IwasawaElem& x) {
    Json j;
    j["schema"] = kSchemaTag;
    j["p"] = x.ctx->p();
    j["m"] = x.ctx->m();
    j["N"] = x.ctx->N();
    j["n"] = x.n;
    Json coeffs = Json::array();
    for (const ORes& c : x.c) coeffs.push_back(x.ctx->to_zeta_basis(c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

IwasawaElem iw_from_json(const Json& j, CtxPtr ctx) {
    require_schema(j);
    if (ctx) {
        if (need_i64(j, "p") != ctx->p() || need_int(j, "m") != ctx->m() ||
            need_int(j, "N") != ctx->N())
            throw InvalidInput("stored element was built over a different ring");
    } else {
        ctx = PadicCtx::make(need_i64(j, "p"), need_int(j, "m"), need_int(j, "N"));
    }
    int n = need_int(j, "n");
    IwasawaElem x = iw_zero(ctx, n);
    const Json& coeffs = need(j, "coeffs");
    if (!coeffs.is_array() || coeffs.size() != x.c.size())
        throw InvalidInput("coeffs must list p^n residues");
    for (size_t t = 0; t < coeffs.size(); ++t)
        x.c[t] = ores_from_json(ctx, coeffs.at(t));
    return x;
}

Json ores_to_json(const CtxPtr& ctx, const ORes& x) {
    return Json(ctx->to_zeta_basis(x));
}

ORes ores_from_json(const CtxPtr& ctx, const Json& j) {
    if (j.is_number_integer()) return ctx->r_from_int(j.get<i64>());
    if (!j.is_array())
        throw InvalidInput("residue must be an integer or a zeta-basis array");
    std::vector<i64> z = int_vector(j, "residue");
    if (static_cast<int>(z.size()) > ctx->e())
        throw InvalidInput("residue has more coefficients than [O : Z_p]");
    z.resize(static_cast<size_t>(ctx->e()), 0);
    return ctx->from_zeta_basis(z);
}

Json padic_to_json(const CtxPtr& ctx, const PadicNum& x) {
    Json j;
    switch (x.st) {
        case PState::Zero:
            j["state"] = "zero";
            break;
        case PState::AZero:
            j["state"] = "azero";
            j["bound"] = x.v;
            break;
        case PState::Reg:
            j["state"] = "reg";
            j["valuation"] = x.v;
            j["relprec"] = x.relprec;
            j["unit"] = ores_to_json(ctx, x.u);
            break;
    }
    j["str"] = ctx->to_string(x);
    return j;
}

Json interp_report_to_json(const InterpReport& r) {
    Json rows = Json::array();
    for (const InterpRecord& rec : r.rows) {
        Json row;
        row["omega_level"] = rec.omega_level;
        row["omega_exponent"] = rec.omega_exponent;
        row["omega_order"] = rec.omega_order;
        row["lhs"] = rec.lhs;
        row["rhs"] = rec.rhs;
        row["diff_valuation"] = rec.diff_bound;
        row["rel_digits"] = rec.rel_digits;
        row["pass"] = rec.pass;
        if (!rec.note.empty()) row["note"] = rec.note;
        rows.push_back(std::move(row));
    }
    return Json{{"all_pass", r.all_pass}, {"rows", std::move(rows)}};
}

Json fe_report_to_json(const FEReport& r) {
    Json rows = Json::array();
    for (const FERecord& rec : r.rows) {
        Json row;
        row["omega_level"] = rec.omega_level;
        row["omega_exponent"] = rec.omega_exponent;
        row["x"] = rec.x;
        row["rel_digits"] = rec.rel_digits;
        row["pass"] = rec.pass;
        if (!rec.note.empty()) row["note"] = rec.note;
        rows.push_back(std::move(row));
    }
    return Json{{"all_pass", r.all_pass},
                {"poly_identity", r.poly_identity},
                {"rows", std::move(rows)}};
}

Json axiom_report_to_json(const AxiomReport& r) {
    Json checks = Json::array();
    for (const AxiomCheck& c : r.checks) {
        Json row;
        row["name"] = c.name;
        row["pass"] = c.pass;
        if (!c.witness.empty()) row["witness"] = c.witness;
        checks.push_back(std::move(row));
    }
    return Json{{"all_pass", r.all_pass}, {"checks", std::move(checks)}};
}

Json control_report_to_json(const ControlReport& r) {
    return Json{{"truncation", r.truncation},
                {"a0_exponents", r.a0_exp},
                {"b0_exponents", r.b0_exp},
                {"strongly_controlled", r.strongly_controlled},
                {"lemma_consistent", r.lemma_consistent}};
}

Json duality_report_to_json(const DualityReport& r) {
    Json levels = Json::array();
    for (const DualityLevel& lv : r.levels)
        levels.push_back(Json{{"level", lv.level},
                              {"annihilator_sharp_duality", lv.ann_sharp_duality},
                              {"index_consistent", lv.index_consistent},
                              {"adjointness", lv.adjointness}});
    return Json{{"all_pass", r.all_pass},
                {"f_in_annihilator_b", r.f_in_ann_b},
                {"fsharp_in_annihilator_a", r.fsharp_in_ann_a},
                {"levels", std::move(levels)}};
}

CountCache load_count_cache(const std::string& path) {
    CountCache cache;
    cache.path = path;
    if (path.empty()) return cache;
    std::ifstream f(path);
    if (!f) return cache;  // not created yet
    Json j = Json::parse(f, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("schema") ||
        !j.at("schema").is_string() ||
        j.at("schema").get<std::string>() != kSchemaTag ||
        !j.contains("counts") || !j.at("counts").is_object()) {
        cache.warnings.push_back("count cache " + path + " is corrupt; ignoring it");
        return cache;
    }
    for (const auto& [key, val] : j.at("counts").items()) {
        if (!val.is_number_integer() || val.get<i64>() < 0) {
            cache.warnings.push_back("count cache entry \"" + key + "\" is corrupt; skipping it");
            continue;
        }
        cache.entries[key] = val.get<i64>();
    }
    return cache;
}

void save_count_cache(CountCache& cache) {
    if (cache.path.empty() || !cache.dirty) return;
    Json counts = Json::object();
    for (const auto& [key, val] : cache.entries) counts[key] = val;
    Json j{{"schema", kSchemaTag}, {"counts", std::move(counts)}};
    std::ofstream f(cache.path);
    if (!f) {
        cache.warnings.push_back("cannot write count cache " + cache.path);
        return;
    }
    f << j.dump(2) << "\n";
    cache.dirty = false;
}

std::string model_cache_key(const CurveModel& C) {
    return hex64(fnv1a(curve_to_json(C).dump()));
}

i64 cached_count(CountCache& cache, const CurveModel& C, int r, i64 cap, bool* hit) {
    if (hit) *hit = false;
    if (cache.path.empty()) return count_points(C, r, cap);
    std::string key = model_cache_key(C) + ":" + std::to_string(r);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) {
        if (hit) *hit = true;
        return it->second;
    }
    i64 n = count_points(C, r, cap);
    cache.entries[key] = n;
    cache.dirty = true;
    return n;
}

}  // namespace iwff

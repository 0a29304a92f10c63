// Command-line front end: computes zeta numerators, Frobenius data,
// Stickelberger/theta elements, p-adic L-fractions, interpolation and
// functional-equation sweeps, characteristic ideals, and gamma-system
// reports from JSON inputs.  Verification subcommands exit 1 on any FAIL;
// malformed or unusable input exits 2.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "iwff/errors.hpp"
#include "iwff/json_io.hpp"

using namespace iwff;

namespace {

struct Opts {
    i64 p = 0;            // 0: take the characteristic from the input file
    int a = 0;            // 0: unchecked; otherwise must match the input
    int N = 8;            // --precision
    int n = 1;            // --level
    int Du = 12;          // --u-degree
    int D = 0;            // --series-degree override (0: from file)
    i64 cap = static_cast<i64>(kDefaultEnumCap);
    u64 gcap = 1000000;   // gamma-system order cap (reuses --cap when set)
    std::string cache_path;
    bool verify_cache = false;
    std::string out = "json";
    int slack = 2;
    std::string S;        // comma-separated place degrees
    std::string omega;    // "t@level"
    std::string synthetic;
    int levels = 1;       // gamma tower height
};

std::string error_type(const Error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) return "invalid_input";
    if (dynamic_cast<const EnumerationTooLarge*>(&e)) return "enumeration_too_large";
    if (dynamic_cast<const DivisionByZero*>(&e)) return "division_by_zero";
    if (dynamic_cast<const PrecisionLoss*>(&e)) return "precision_loss";
    if (dynamic_cast<const LiftFails*>(&e)) return "lift_fails";
    if (dynamic_cast<const NotOrdinary*>(&e)) return "not_ordinary";
    if (dynamic_cast<const NotAUnit*>(&e)) return "not_a_unit";
    if (dynamic_cast<const InsufficientTruncation*>(&e)) return "insufficient_truncation";
    if (dynamic_cast<const PoleOrPrecision*>(&e)) return "pole_or_precision";
    if (dynamic_cast<const BadModel*>(&e)) return "bad_model";
    if (dynamic_cast<const NotTorsionAtPrecision*>(&e)) return "not_torsion_at_precision";
    if (dynamic_cast<const Unclassified*>(&e)) return "unclassified";
    if (dynamic_cast<const Unsupported*>(&e)) return "unsupported";
    if (dynamic_cast<const InvalidSubmoduleFamily*>(&e)) return "invalid_submodule_family";
    return "error";
}

PlaceSet parse_S(const std::string& s) {
    PlaceSet out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            size_t pos = 0;
            int d = std::stoi(part, &pos);
            if (pos != part.size() || d < 1) throw std::invalid_argument("");
            out.push_back(d);
        } catch (const std::exception&) {
            throw InvalidInput("--S expects a comma-separated list of place degrees");
        }
    }
    return out;
}

PCharacter parse_omega(const std::string& s) {
    if (s.empty()) return PCharacter{0, 0};
    size_t at = s.find('@');
    if (at == std::string::npos)
        throw InvalidInput("--omega expects \"t@level\"");
    try {
        size_t pos = 0;
        i64 t = std::stoll(s.substr(0, at), &pos);
        if (pos != at) throw std::invalid_argument("");
        int level = std::stoi(s.substr(at + 1), &pos);
        if (pos != s.size() - at - 1 || level < 0) throw std::invalid_argument("");
        return PCharacter{level, t};
    } catch (const std::exception&) {
        throw InvalidInput("--omega expects \"t@level\"");
    }
}

// "c*T^k + ... + c0" with integer coefficients, e.g. "T^2+3", "-2*T + 9".
IPoly parse_tpoly(const std::string& src) {
    std::string s;
    for (char c : src)
        if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw InvalidInput("empty polynomial");
    IPoly f;
    size_t i = 0;
    auto grow = [&f](size_t deg) {
        if (f.size() <= deg) f.resize(deg + 1, 0);
    };
    while (i < s.size()) {
        i64 sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        }
        bool have_coeff = false;
        i64 coeff = 1;
        size_t start = i;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) {
            coeff = std::stoll(s.substr(start, i - start));
            have_coeff = true;
        }
        size_t deg = 0;
        if (i < s.size() && (s[i] == '*' || s[i] == 'T')) {
            if (s[i] == '*') ++i;
            if (i >= s.size() || s[i] != 'T')
                throw InvalidInput("cannot parse polynomial \"" + src + "\"");
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                start = i;
                while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == start)
                    throw InvalidInput("cannot parse polynomial \"" + src + "\"");
                deg = static_cast<size_t>(std::stoull(s.substr(start, i - start)));
            }
        } else if (!have_coeff) {
            throw InvalidInput("cannot parse polynomial \"" + src + "\"");
        }
        grow(deg);
        f[deg] += sign * coeff;
    }
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

// ---- output plumbing ----

void emit_warnings(const CountCache& cache, Json& report) {
    if (cache.warnings.empty()) return;
    for (const std::string& w : cache.warnings) std::cerr << "warning: " << w << "\n";
    report["warnings"] = cache.warnings;
}

void print_kv(std::ostream& os, const Json& j, const std::string& prefix) {
    for (const auto& [key, val] : j.items()) {
        if (val.is_object()) {
            print_kv(os, val, prefix + key + ".");
        } else {
            os << prefix << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
               << "\n";
        }
    }
}

void emit(const Opts& o, const Json& report) {
    if (o.out == "table")
        print_kv(std::cout, report, "");
    else
        std::cout << report.dump(2) << "\n";
}

void emit_rows_table(const Json& rows, const std::vector<std::string>& cols) {
    std::vector<size_t> w(cols.size());
    auto cell = [](const Json& row, const std::string& c) -> std::string {
        if (!row.contains(c)) return "";
        const Json& v = row.at(c);
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    for (size_t i = 0; i < cols.size(); ++i) w[i] = cols[i].size();
    for (const Json& row : rows)
        for (size_t i = 0; i < cols.size(); ++i) w[i] = std::max(w[i], cell(row, cols[i]).size());
    auto line = [&](auto get) {
        for (size_t i = 0; i < cols.size(); ++i) {
            std::string s = get(i);
            std::cout << s << std::string(w[i] - s.size() + 2, ' ');
        }
        std::cout << "\n";
    };
    line([&](size_t i) { return cols[i]; });
    for (const Json& row : rows)
        line([&](size_t i) { return cell(row, cols[i]); });
}

// ---- shared input assembly ----

struct BaseInput {
    CurveModel model;
    BaseField K;
    std::vector<i64> counts;
};

// Counts through the cache, with the optional one-entry recheck.
std::vector<i64> model_counts(const CurveModel& C, int rmax, CountCache& cache,
                              const Opts& o) {
    if (C.kind == CurveModel::Kind::RawCounts) {
        if (static_cast<int>(C.counts.size()) < rmax)
            throw InvalidInput("raw model carries too few counts");
        return {C.counts.begin(), C.counts.begin() + rmax};
    }
    std::vector<i64> counts;
    std::vector<int> hits;
    for (int r = 1; r <= rmax; ++r) {
        bool hit = false;
        counts.push_back(cached_count(cache, C, r, o.cap, &hit));
        if (hit) hits.push_back(r);
    }
    if (o.verify_cache && !hits.empty()) {
        int r0 = hits.front();
        i64 fresh = count_points(C, r0, o.cap);
        if (fresh != counts[(size_t)r0 - 1]) {
            cache.warnings.push_back("cache mismatch for N_" + std::to_string(r0) +
                                     "; recomputing all cached counts for this model");
            std::string base = model_cache_key(C);
            for (int r : hits) {
                i64 v = count_points(C, r, o.cap);
                counts[(size_t)r - 1] = v;
                cache.entries[base + ":" + std::to_string(r)] = v;
            }
            cache.dirty = true;
        }
    }
    return counts;
}

BaseInput base_input(const std::string& file, CountCache& cache, const Opts& o) {
    BaseInput in;
    in.model = curve_from_json(load_json_file(file));
    i64 p = in.model.F.p();
    if (o.p != 0 && o.p != p)
        throw InvalidInput("--p disagrees with the characteristic of " + file);
    if (o.a != 0 && o.a != in.model.F.degree())
        throw InvalidInput("--a disagrees with the constant field of " + file);
    int g = curve_genus(in.model);
    in.counts = model_counts(in.model, g, cache, o);
    IPoly P = zeta_numerator(curve_raw(curve_q(in.model), g, in.counts), o.cap);
    in.K = BaseField{P, g, curve_q(in.model), in.model.F.degree()};
    return in;
}

FrobeniusData frobenius_input(const std::string& file, const CtxPtr& ctx,
                              CountCache& cache, const Opts& o, i64 expect_q) {
    AvData av = av_from_json(load_json_file(file), &cache, o.cap);
    if (expect_q != 0 && av.q != expect_q)
        throw InvalidInput("the abelian variety and the base curve live over different constant fields");
    return frobenius_from_charpoly(ctx, av.h, av.q);
}

// ---- subcommands ----

int cmd_zeta(const std::string& file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    CurveModel C = curve_from_json(load_json_file(file));
    if (o.p != 0 && o.p != C.F.p())
        throw InvalidInput("--p disagrees with the characteristic of " + file);
    int g = curve_genus(C);
    i64 q = curve_q(C);
    int rmax = C.kind == CurveModel::Kind::RawCounts
                   ? static_cast<int>(C.counts.size())
                   : g;
    std::vector<i64> counts = model_counts(C, rmax, cache, o);
    IPoly P = zeta_numerator(curve_raw(q, g, counts), o.cap);
    bool fe = zeta_fe_symmetric(P, q);
    bool rh = zeta_rh_holds(P, q);
    Json report;
    report["schema"] = kSchemaTag;
    report["q"] = q;
    report["kappa"] = g;
    report["counts"] = counts;
    report["P"] = P;
    report["charpoly"] = frobenius_charpoly_from_zeta(P);
    report["fe_symmetric"] = fe;
    report["rh"] = rh;
    report["pass"] = fe && rh;
    emit_warnings(cache, report);
    save_count_cache(cache);
    emit(o, report);
    return (fe && rh) ? 0 : 1;
}

int cmd_frob(const std::string& file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    AvData av = av_from_json(load_json_file(file), &cache, o.cap);
    i64 p = o.p;
    if (p == 0) {
        // the characteristic is the unique prime dividing q
        i64 q = av.q;
        for (p = 2; p * p <= q; ++p)
            if (q % p == 0) break;
        if (av.q % p != 0) p = av.q;
    }
    if (p < 2 || av.q % p != 0)
        throw InvalidInput("--p must be the characteristic of the constant field");
    CtxPtr ctx = PadicCtx::make(p, 0, o.N);
    FrobeniusData fr = frobenius_from_charpoly(ctx, av.h, av.q);
    Json report;
    report["schema"] = kSchemaTag;
    report["q"] = fr.q;
    report["g"] = fr.g;
    report["h"] = fr.h;
    report["trace"] = frobenius_trace(fr);
    report["ordinary"] = true;  // frobenius_from_charpoly certifies or throws
    Json alphas = Json::array();
    for (const PadicNum& al : fr.alphas) alphas.push_back(padic_to_json(ctx, al));
    report["alphas"] = std::move(alphas);
    emit_warnings(cache, report);
    save_count_cache(cache);
    emit(o, report);
    return 0;
}

int cmd_theta(const std::string& file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    BaseInput in = base_input(file, cache, o);
    PlaceSet S = parse_S(o.S);
    CtxPtr ctx = PadicCtx::make(in.model.F.p(), o.n, o.N);
    ThetaSeries t = theta_series(ctx, in.K, S, o.n, o.Du);
    bool decay = theta_decay_holds(t, in.K, S);
    IwasawaElem theta = stickelberger_element(ctx, in.K, S, o.n);
    bool nonzero = theta_certified_nonzero(theta);
    Json report;
    report["schema"] = kSchemaTag;
    report["q"] = in.K.q;
    report["kappa"] = in.K.kappa;
    report["level"] = o.n;
    report["S"] = S;
    report["u_degree"] = o.Du;
    report["theta"] = iw_to_json(theta);
    report["theta_nonzero"] = nonzero;
    report["decay_ok"] = decay;
    report["pass"] = nonzero && decay;
    emit_warnings(cache, report);
    save_count_cache(cache);
    emit(o, report);
    return (nonzero && decay) ? 0 : 1;
}

int cmd_oracle_theta(const std::string& file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    BaseInput in = base_input(file, cache, o);
    PlaceSet S = parse_S(o.S);
    CtxPtr ctx = PadicCtx::make(in.model.F.p(), o.n, o.N);
    ThetaSeries closed = theta_series(ctx, in.K, S, o.n, o.Du);
    ThetaSeries oracle = theta_series_oracle(ctx, in.K, S, o.n, o.Du);
    bool match = theta_eq(closed, oracle);
    Json report;
    report["schema"] = kSchemaTag;
    report["q"] = in.K.q;
    report["kappa"] = in.K.kappa;
    report["level"] = o.n;
    report["S"] = S;
    report["u_degree"] = o.Du;
    report["match"] = match;
    report["pass"] = match;
    emit_warnings(cache, report);
    save_count_cache(cache);
    emit(o, report);
    return match ? 0 : 1;
}

int cmd_lfun(const std::string& curve_file, const std::string& av_file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    BaseInput in = base_input(curve_file, cache, o);
    PlaceSet S = parse_S(o.S);
    CtxPtr ctx = PadicCtx::make(in.model.F.p(), o.n, o.N);
    FrobeniusData fr = frobenius_input(av_file, ctx, cache, o, in.K.q);
    PadicLData L = padic_L(ctx, fr, in.K, S, o.n);
    bool nonzero = theta_certified_nonzero(L.theta);
    Json report;
    report["schema"] = kSchemaTag;
    report["q"] = in.K.q;
    report["kappa"] = in.K.kappa;
    report["level"] = o.n;
    report["S"] = S;
    report["g"] = fr.g;
    report["theta_plus"] = iw_to_json(L.theta_plus);
    report["theta"] = iw_to_json(L.theta);
    report["Ltilde"] = Json{{"num", iw_to_json(L.Ltilde.num)}, {"den", iw_to_json(L.Ltilde.den)}};
    report["theta_nonzero"] = nonzero;
    report["pass"] = nonzero;
    emit_warnings(cache, report);
    save_count_cache(cache);
    emit(o, report);
    return nonzero ? 0 : 1;
}

int cmd_interp(const std::string& curve_file, const std::string& av_file, const Opts& o) {
    CountCache cache = load_count_cache(o.cache_path);
    BaseInput in = base_input(curve_file, cache, o);
    PlaceSet S = parse_S(o.S);
    CtxPtr ctx = PadicCtx::make(in.model.F.p(), o.n, o.N);
    FrobeniusData fr = frobenius_input(av_file, ctx, cache, o, in.K.q);
    InterpReport rep = S.empty()
                           ? interpolation_check(ctx, fr, in.K, o.n, o.slack)
                           : interpolation_check_theorem(ctx, fr, in.K, S, o.n, o.slack);
    Json report = interp_report_to_json(rep);
    report["schema"] = kSchemaTag;
    report["q"] = in.K.q;
    report["kappa"] = in.K.kappa;
    report["level"] = o.n;
    report["S"] = S;
    emit_warnings(cache, report);
    save_count_cache(cache);
    if (o.out == "table") {
        emit_rows_table(report["rows"],
                        {"omega_level", "omega_exponent", "omega_order", "lhs", "rhs",
                         "diff_valuation", "rel_digits", "pass", "note"});
        std::cout << (rep.all_pass ? "all PASS" : "FAIL") << "\n";
    } else {
        emit(o, report);
    }
    return rep.all_pass ? 0 : 1;
}

int cmd_charideal(const std::string& file, const Opts& o) {
    Json input = load_json_file(file);
    ModulePresentation pres = presentation_from_json(input);
    if (o.D > 0) {
        int fileD = pres.rel.empty() ? o.D : pres.rel.front().D;
        if (o.D > fileD)
            throw InvalidInput("--series-degree exceeds the truncation stored in the file");
        auto cut = [&](const IwasawaSeries& s) {
            return sr_make(pres.ctx, o.D,
                           std::vector<ORes>(s.a.begin(), s.a.begin() + o.D));
        };
        for (IwasawaSeries& s : pres.rel) s = cut(s);
        for (auto& [fs, mult] : pres.factors) fs = cut(fs);
    }
    CharElement ce = char_element(pres);
    PCharacter om = parse_omega(o.omega);
    EulerChar ec = euler_characteristic(ce, om);
    Json report;
    report["schema"] = kSchemaTag;
    report["mu"] = ce.mu;
    report["lambda"] = static_cast<i64>(ce.dist.size()) - 1;
    Json dist = Json::array();
    for (const ORes& c : ce.dist) dist.push_back(ores_to_json(ce.ctx, c));
    report["dist"] = std::move(dist);
    report["digits"] = ce.digits;
    report["omega"] = Json{{"level", om.level}, {"t", om.t}};
    report["euler"] = Json{{"ord", ec.ord}, {"finite", ec.finite}, {"exponent", ec.exponent}};
    bool pass = true;
    if (ec.finite) {
        try {
            i64 brute = euler_characteristic_bruteforce(ce, om, static_cast<u64>(o.cap));
            report["euler"]["bruteforce_exponent"] = brute;
            pass = (brute == ec.exponent);
            report["euler"]["bruteforce_match"] = pass;
        } catch (const Error& e) {
            report["euler"]["bruteforce_note"] = std::string(e.what());
        }
    }
    if (!pres.factors.empty()) {
        PartSplit split = part_split(pres);
        report["parts"] = Json{{"p_indices", split.p_idx},
                               {"simple_indices", split.si_idx},
                               {"nonsimple_indices", split.ns_idx}};
    }
    report["pass"] = pass;
    emit(o, report);
    return pass ? 0 : 1;
}

int cmd_gamma(const std::string& file, const Opts& o) {
    GammaSystem sys;
    Json report;
    report["schema"] = kSchemaTag;
    IPoly f;
    bool have_f = false;
    if (!o.synthetic.empty()) {
        if (!file.empty())
            throw InvalidInput("give either a system file or --synthetic, not both");
        if (o.p == 0) throw InvalidInput("--synthetic needs --p");
        std::string spec = o.synthetic;
        int k = 1;
        size_t comma = spec.rfind(',');
        if (comma != std::string::npos) {
            try {
                size_t pos = 0;
                k = std::stoi(spec.substr(comma + 1), &pos);
                if (pos != spec.size() - comma - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw InvalidInput("--synthetic expects \"f,k\"");
            }
            spec = spec.substr(0, comma);
        }
        f = parse_tpoly(spec);
        have_f = true;
        sys = synthetic_system(o.p, f, k, o.levels, o.gcap);
        report["synthetic"] = Json{{"f", f}, {"k", k}};
    } else {
        if (file.empty())
            throw InvalidInput("gamma needs a system file or --synthetic");
        sys = system_from_json(load_json_file(file));
    }
    report["p"] = sys.p;
    report["k"] = sys.k;
    report["M"] = sys.M;
    AxiomReport axioms = validate_axioms(sys, o.gcap);
    report["axioms"] = axiom_report_to_json(axioms);
    ControlReport ctl = control_analysis(sys);
    report["control"] = control_report_to_json(ctl);
    bool pass = axioms.all_pass && ctl.lemma_consistent;
    if (axioms.all_pass) {
        DualityReport dual =
            duality_invariants(sys, have_f ? std::optional<IPoly>(f) : std::nullopt);
        report["duality"] = duality_report_to_json(dual);
        pass = pass && dual.all_pass;
    }
    if (!ctl.strongly_controlled) {
        try {
            APrime ap = aprime_construction(sys);
            Json exps = Json::array();
            for (const FiniteGammaModule& m : ap.sys.a) exps.push_back(m.exps);
            report["aprime"] = Json{{"a_exps", std::move(exps)},
                                    {"axioms_pass", ap.report.all_pass},
                                    {"strongly_controlled", ap.strongly_controlled},
                                    {"truncation_warning", ap.truncation_warning}};
        } catch (const Error& e) {
            report["aprime"] = Json{{"error", std::string(e.what())}};
        }
    }
    report["pass"] = pass;
    if (o.out == "table") {
        emit_rows_table(report["axioms"]["checks"], {"name", "pass", "witness"});
        print_kv(std::cout, report["control"], "control.");
        if (report.contains("duality")) {
            emit_rows_table(report["duality"]["levels"],
                            {"level", "annihilator_sharp_duality", "index_consistent",
                             "adjointness"});
        }
        std::cout << (pass ? "all PASS" : "FAIL") << "\n";
    } else {
        emit(o, report);
    }
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-precision p-adic L-functions of constant abelian varieties "
                 "over function fields"};
    app.require_subcommand(1);
    app.fallthrough();

    Opts o;
    app.add_option("--p", o.p, "residue characteristic");
    app.add_option("--a", o.a, "constant-field degree check (q = p^a)");
    app.add_option("--precision", o.N, "p-adic working precision N")->capture_default_str();
    app.add_option("--level", o.n, "tower level n")->capture_default_str();
    app.add_option("--u-degree", o.Du, "u-adic truncation degree")->capture_default_str();
    app.add_option("--series-degree", o.D, "T-adic truncation override");
    app.add_option("--cap", o.cap, "enumeration cap")->capture_default_str();
    app.add_option("--cache", o.cache_path, "point-count cache file");
    app.add_flag("--verify-cache", o.verify_cache,
                 "recheck one cached entry against a fresh enumeration");
    app.add_option("--out", o.out, "output mode: json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    app.add_option("--slack", o.slack, "allowed precision slack in digits")
        ->capture_default_str();

    std::string curve_file, av_file, pres_file, sys_file;

    CLI::App* zeta = app.add_subcommand("zeta", "zeta numerator, FE and RH checks");
    zeta->add_option("curve", curve_file, "curve JSON file")->required();

    CLI::App* frob = app.add_subcommand("frob", "Frobenius data of a constant ordinary variety");
    frob->add_option("av", av_file, "abelian-variety JSON file")->required();

    CLI::App* theta = app.add_subcommand("theta", "Stickelberger element and decay check");
    theta->add_option("curve", curve_file, "curve JSON file")->required();
    theta->add_option("--S", o.S, "comma-separated degrees of excluded places");

    CLI::App* oracle = app.add_subcommand("oracle-theta",
                                          "closed form vs Euler-product expansion");
    oracle->add_option("curve", curve_file, "curve JSON file")->required();
    oracle->add_option("--S", o.S, "comma-separated degrees of excluded places");

    CLI::App* lfun = app.add_subcommand("lfun", "theta_A and the p-adic L-fraction");
    lfun->add_option("curve", curve_file, "curve JSON file")->required();
    lfun->add_option("av", av_file, "abelian-variety JSON file")->required();
    lfun->add_option("--S", o.S, "comma-separated degrees of excluded places");

    CLI::App* interp = app.add_subcommand("interp", "interpolation sweep over characters");
    interp->add_option("curve", curve_file, "curve JSON file")->required();
    interp->add_option("av", av_file, "abelian-variety JSON file")->required();
    interp->add_option("--S", o.S, "comma-separated degrees of excluded places");

    CLI::App* charideal = app.add_subcommand("charideal",
                                             "characteristic element and Euler characteristic");
    charideal->add_option("presentation", pres_file, "module presentation JSON file")
        ->required();
    charideal->add_option("--omega", o.omega, "character \"t@level\" (default trivial)");

    CLI::App* gamma = app.add_subcommand("gamma", "gamma-system axiom and duality report");
    gamma->add_option("system", sys_file, "system description JSON file");
    gamma->add_option("--synthetic", o.synthetic, "synthetic tower \"f,k\", e.g. \"T^2+3,1\"");
    gamma->add_option("--levels", o.levels, "tower height M")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (o.N < 1 || o.n < 0 || o.Du < 0 || o.slack < 0 || o.cap < 1)
            throw InvalidInput("flag out of range");
        if (o.cap < static_cast<i64>(o.gcap)) o.gcap = static_cast<u64>(o.cap);
        if (zeta->parsed()) return cmd_zeta(curve_file, o);
        if (frob->parsed()) return cmd_frob(av_file, o);
        if (theta->parsed()) return cmd_theta(curve_file, o);
        if (oracle->parsed()) return cmd_oracle_theta(curve_file, o);
        if (lfun->parsed()) return cmd_lfun(curve_file, av_file, o);
        if (interp->parsed()) return cmd_interp(curve_file, av_file, o);
        if (charideal->parsed()) return cmd_charideal(pres_file, o);
        if (gamma->parsed()) return cmd_gamma(sys_file, o);
        throw InvalidInput("no subcommand selected");
    } catch (const Error& e) {
        if (o.out == "table") {
            std::cerr << "error: " << e.what() << "\n";
        } else {
            Json err{{"schema", kSchemaTag},
                     {"error", Json{{"type", error_type(e)}, {"message", std::string(e.what())}}}};
            std::cout << err.dump(2) << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "relstruct/core.hpp"
#include "relstruct/families.hpp"
#include "relstruct/moddec.hpp"
#include "relstruct/monomorph.hpp"
#include "relstruct/permlib.hpp"
#include "relstruct/separable.hpp"
#include "relstruct/series.hpp"

namespace rs::cli {

using nlohmann::json;

namespace {

constexpr int kMismatch = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json num(const BigInt& v) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return static_cast<long long>(v);
    return v.str();
}

json nums(const std::vector<BigInt>& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(num(x));
    return a;
}

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_array()) {
        std::string s;
        for (auto& x : v) s += (s.empty() ? "" : " ") + cell(x);
        return s;
    }
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void text_value(std::ostream& o, const std::string& key, const json& v, int indent) {
    std::string pad(indent, ' ');
    if (v.is_array() && !v.empty() && v[0].is_object()) {
        o << pad << key << ":\n";
        for (auto& item : v) {
            o << pad << "  -";
            for (auto& [k, x] : item.items()) o << " " << k << "=" << cell(x);
            o << "\n";
        }
    } else if (v.is_array() && !v.empty() && v[0].is_array()) {
        o << pad << key << ":";
        for (auto& item : v) o << " {" << cell(item) << "}";
        o << "\n";
    } else if (v.is_object()) {
        o << pad << key << ":\n";
        for (auto& [k, x] : v.items()) text_value(o, k, x, indent + 2);
    } else {
        o << pad << key << ": " << cell(v) << "\n";
    }
}

Structure read_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read structure file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return from_text(ss.str());
    } catch (const StructureError& e) {
        throw UsageError("malformed structure file '" + path + "': " + e.what());
    }
}

json classes_json(const std::vector<std::vector<int>>& cs) {
    json a = json::array();
    for (auto& c : cs) a.push_back(c);
    return a;
}

json masks_json(const std::vector<Mask>& ms) {
    json a = json::array();
    for (Mask m : ms) a.push_back(mask_to_vector(m));
    return a;
}

Structure random_structure(std::mt19937_64& rng, int n, Kind kind) {
    std::bernoulli_distribution coin(0.5);
    const bool ordered = kind == Kind::ordered_binary || kind == Kind::bichain;
    Structure s(n, 1, ordered, kind);
    if (kind == Kind::bichain) {
        Perm p(n);
        for (int i = 0; i < n; ++i) p[i] = i + 1;
        std::shuffle(p.begin(), p.end(), rng);
        return perm_to_bichain(p);
    }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            switch (kind) {
                case Kind::graph:
                    if (coin(rng)) s.set(0, x, y, true), s.set(0, y, x, true);
                    break;
                case Kind::tournament:
                    if (coin(rng)) s.set(0, x, y, true);
                    else s.set(0, y, x, true);
                    break;
                default:
                    s.set(0, x, y, coin(rng));
                    s.set(0, y, x, coin(rng));
            }
        }
    return s;
}

// ------------------------------------------------------------------ handlers

struct Common {
    std::string format = "text";
    std::string out;
    std::uint64_t seed = 0;
    int threads = 1;
};

int cmd_profile(const std::string& name, int n, bool verify, double max_codes, const Common& c, Report& r) {
    FamilySpec f = parse_family(name);
    auto cost = sweep_cost(f, n);
    if (double(cost) > max_codes)
        throw UsageError("budget exceeded: the sweep needs " + std::to_string(cost) + " code computations (limit " +
                         std::to_string(static_cast<std::uint64_t>(max_codes)) + ")");
    auto rep = profile(f, n, {c.threads, 0});
    json checks = json::array();
    bool ok = true;
    for (int i = 0; i <= n; ++i) {
        auto e = closed_form(f, i);
        if (!e) {
            checks.push_back(nullptr);
            continue;
        }
        checks.push_back(*e == rep.phi[i]);
        ok = ok && *e == rep.phi[i];
    }
    r.data = {{"family", rep.family}, {"n", rep.n},         {"phi", nums(rep.phi)},
              {"m_used", rep.m_used}, {"m_final", rep.m_final}, {"codes_computed", rep.codes_computed},
              {"formula_check", checks}};
    r.columns = {"n", "phi", "m_used", "formula_check"};
    for (int i = 0; i <= n; ++i) r.rows.push_back({std::to_string(i), cell(num(rep.phi[i])), std::to_string(rep.m_used[i]), cell(checks[i])});
    return verify && !ok ? kMismatch : 0;
}

int cmd_closed_form(const std::string& name, int n, const Common& c, Report& r) {
    FamilySpec f = parse_family(name);
    auto phi = profile(f, n, {c.threads, 0}).phi;
    auto checks = closed_form_check(f, phi);
    auto ref = reference_series(f, n);
    bool ok = true;
    json arr = json::array();
    r.columns = {"n", "expected", "actual", "pass"};
    for (auto& ch : checks) {
        ok = ok && ch.pass;
        arr.push_back({{"n", ch.n}, {"expected", num(ch.expected)}, {"actual", num(ch.actual)}, {"pass", ch.pass}});
        r.rows.push_back({std::to_string(ch.n), cell(num(ch.expected)), cell(num(ch.actual)), ch.pass ? "true" : "false"});
    }
    r.data = {{"family", family_name(f)}, {"checks", arr}, {"all_pass", ok}};
    if (ref) {
        bool gf_ok = *ref == phi;
        r.data["generating_function_match"] = gf_ok;
        ok = ok && gf_ok;
    } else {
        r.data["generating_function_match"] = nullptr;
    }
    return ok ? 0 : kMismatch;
}

int cmd_separable(int k, const std::string& mode_s, int n, const std::string& method, int max_bits, const Common& c,
                  Report& r) {
    DiagMode mode = parse_diag_mode(mode_s);
    EnumerationBudget budget{max_bits};
    std::vector<SeparableMethod> methods;
    if (method == "all") methods = {SeparableMethod::split, SeparableMethod::gallai, SeparableMethod::forbidden, SeparableMethod::tree};
    else methods = {parse_method(method)};
    json results = json::array();
    std::optional<BigInt> first;
    bool agree = true;
    r.columns = {"method", "count"};
    for (auto m : methods) {
        try {
            BigInt v = count_separable(k, mode, n, m, budget, c.threads);
            if (first && *first != v) agree = false;
            if (!first) first = v;
            results.push_back({{"method", method_name(m)}, {"count", num(v)}});
            r.rows.push_back({method_name(m), cell(num(v))});
        } catch (const StructureError& e) {
            if (methods.size() == 1 || std::string(e.what()).rfind("budget exceeded", 0) == 0) throw;
            results.push_back({{"method", method_name(m)}, {"skipped", e.what()}});
        }
    }
    if (!first) throw UsageError("no counting method applies");
    r.data = {{"k", k}, {"mode", diag_mode_name(mode)}, {"n", n}, {"count", num(*first)}, {"methods", results}, {"agree", agree}};
    return agree ? 0 : kMismatch;
}

int cmd_decompose(const std::string& path, Report& r) {
    Structure s = read_structure(path);
    auto p = gallai_partition(s);
    r.data = {{"n", s.n},
              {"blocks", masks_json(p.blocks)},
              {"quotient_kind", quotient_kind_name(p.kind)},
              {"mixed_diagonal", p.mixed_diagonal},
              {"strong_intervals", masks_json(strong_intervals(s))},
              {"indecomposable", is_indecomposable(s)}};
    r.columns = {"block", "vertices"};
    for (std::size_t b = 0; b < p.blocks.size(); ++b) r.rows.push_back({std::to_string(b), cell(json(mask_to_vector(p.blocks[b])))});
    return 0;
}

int cmd_equiv(const std::string& path, bool verify, int sample, const std::string& kind_s, int size, const Common& c,
              Report& r) {
    const EquivMode mode = verify ? EquivMode::verify : EquivMode::threshold;
    if (sample > 0) {
        Kind kind = parse_kind(kind_s);
        if (size < 1 || size > 12) throw UsageError("--size must be in 1..12");
        std::mt19937_64 rng(c.seed);
        int mismatches = 0, intransitive = 0;
        for (int t = 0; t < sample; ++t) {
            auto res = equivalence_classes(random_structure(rng, size, kind), EquivMode::verify, c.threads);
            mismatches += res.mismatch;
            intransitive += !res.transitive;
        }
        r.data = {{"kind", kind_name(kind)}, {"size", size}, {"samples", sample}, {"seed", c.seed},
                  {"threshold", kind_threshold(kind, size)}, {"mismatches", mismatches}, {"intransitive", intransitive}};
        r.columns = {"kind", "size", "samples", "mismatches"};
        r.rows.push_back({kind_name(kind), std::to_string(size), std::to_string(sample), std::to_string(mismatches)});
        return mismatches ? kMismatch : 0;
    }
    if (path.empty()) throw UsageError("equiv needs --in <file> or --sample <count>");
    Structure s = read_structure(path);
    auto res = equivalence_classes(s, mode, c.threads);
    auto notes = class_annotations(s, res.classes);
    r.data = {{"n", s.n},
              {"level", res.level},
              {"classes", classes_json(res.classes)},
              {"class_count", res.classes.size()},
              {"dim_mon", res.dim_mon},
              {"threshold_used", res.threshold_used},
              {"transitive", res.transitive},
              {"annotations", notes},
              {"verified", res.verified},
              {"mismatch", res.mismatch}};
    if (verify) r.data["full_classes"] = classes_json(res.full_classes);
    r.columns = {"class", "members", "annotation"};
    for (std::size_t i = 0; i < res.classes.size(); ++i)
        r.rows.push_back({std::to_string(i), cell(json(res.classes[i])), notes[i]});
    return res.mismatch ? kMismatch : 0;
}

int cmd_classify(const std::string& name, int n, Report& r) {
    FamilySpec f = parse_family(name);
    auto g = growth_classify(f, n);
    r.data = {{"family", family_name(f)}, {"verdict", g.verdict}, {"sizes", g.sizes},
              {"dim_mon", g.dim_mon},     {"phi", nums(g.profile)}, {"ratio", g.ratio}};
    r.columns = {"n", "dim_mon", "phi"};
    for (int i = 0; i < int(g.profile.size()); ++i) {
        std::string dm = i >= 1 && i <= int(g.dim_mon.size()) ? std::to_string(g.dim_mon[i - 1]) : "";
        r.rows.push_back({std::to_string(i), dm, cell(num(g.profile[i]))});
    }
    return 0;
}

void series_rows(Report& r, const std::vector<BigInt>& c) {
    r.columns = {"n", "coefficient"};
    for (std::size_t i = 0; i < c.size(); ++i) r.rows.push_back({std::to_string(i), cell(num(c[i]))});
}

IntPolynomial poly(const std::string& s, const char* what) {
    try {
        return parse_polynomial(s);
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad coefficient list for ") + what + ": " + e.what());
    }
}

int cmd_series_expand(const std::string& num_s, const std::string& den_s, int n, Report& r) {
    auto s = expand_rational({poly(num_s, "--num"), poly(den_s, "--den")}, n);
    r.data = {{"numerator", num_s}, {"denominator", den_s}, {"coefficients", nums(s.c)}};
    series_rows(r, s.c);
    return 0;
}

int cmd_series_residual(const std::string& a, const std::string& b, const std::string& c, const std::string& series,
                        int n, bool verify, Report& r) {
    IntPolynomial sp = poly(series, "--series");
    auto res = algebraic_residual(quadratic(poly(a, "--a"), poly(b, "--b"), poly(c, "--c")), truncate(sp, n), n);
    r.data = {{"residual", nums(res.c)}, {"zero", res.is_zero()}, {"order", n}};
    series_rows(r, res.c);
    return verify && !res.is_zero() ? kMismatch : 0;
}

int cmd_series_solve(const std::string& a, const std::string& b, const std::string& c, long long seed, int n,
                     const std::string& expect, Report& r) {
    auto s = solve_quadratic_series(poly(a, "--a"), poly(b, "--b"), poly(c, "--c"), seed, n);
    r.data = {{"coefficients", nums(s.c)}, {"seed", seed}};
    series_rows(r, s.c);
    if (expect.empty()) return 0;
    auto e = poly(expect, "--expect");
    bool ok = true;
    for (std::size_t i = 0; i < s.c.size(); ++i) ok = ok && e.at(i) == s.c[i];
    r.data["expected_match"] = ok;
    return ok ? 0 : kMismatch;
}

int cmd_perm_simple(int n, Report& r) {
    r.columns = {"n", "simple"};
    json counts = json::array();
    for (int i = 1; i <= n; ++i) {
        auto v = count_simple(i);
        counts.push_back(v);
        r.rows.push_back({std::to_string(i), std::to_string(v)});
    }
    r.data = {{"n", n}, {"counts", counts}};
    return 0;
}

int cmd_perm_separable(const std::string& perm, int n, Report& r) {
    if (!perm.empty()) {
        Perm p = parse_perm(perm);
        bool a = is_separable_perm(p), b = is_separable_recursive(p);
        r.data = {{"perm", format_perm(p)}, {"separable", a}, {"routes_agree", a == b}};
        r.columns = {"perm", "separable"};
        r.rows.push_back({format_perm(p), a ? "true" : "false"});
        return a == b ? 0 : kMismatch;
    }
    if (n < 1) throw UsageError("perm separable needs --perm <p> or --n <N>");
    auto ref = solve_quadratic_series({0, 1}, {-1, 1}, {1}, 1, n).c;
    json counts = json::array();
    bool ok = true;
    r.columns = {"n", "separable", "series"};
    for (int i = 1; i <= n; ++i) {
        auto v = count_separable_perms(i);
        // f = 1 + x f + x f^2 counts length i at index i-1
        ok = ok && BigInt(v) == ref[i - 1];
        counts.push_back(v);
        r.rows.push_back({std::to_string(i), std::to_string(v), cell(num(ref[i - 1]))});
    }
    r.data = {{"n", n}, {"counts", counts}, {"series_match", ok}};
    return ok ? 0 : kMismatch;
}

int cmd_perm_decompose(const std::string& perm, Report& r) {
    Perm p = parse_perm(perm);
    auto t = substitution_decompose(p);
    r.data = {{"perm", format_perm(p)}, {"tree", format_tree(t)}, {"simple", is_simple(p)}, {"roundtrip", inflate(t) == p}};
    r.columns = {"perm", "tree"};
    r.rows.push_back({format_perm(p), format_tree(t)});
    return inflate(t) == p ? 0 : kMismatch;
}

int cmd_catalog(Report& r) {
    json fams = json::array();
    r.columns = {"name", "ordered", "formula", "generating_function", "anchor"};
    for (auto& info : family_registry()) {
        FamilySpec f = parse_family(info.name);
        bool formula = closed_form(f, 0).has_value(), gf = reference_series(f, 0).has_value();
        fams.push_back({{"name", info.name}, {"anchor", info.anchor}, {"ordered", info.ordered}, {"formula", formula},
                        {"generating_function", gf}});
        r.rows.push_back({info.name, info.ordered ? "true" : "false", formula ? "true" : "false", gf ? "true" : "false", info.anchor});
    }
    r.data = {{"count", fams.size()}, {"families", fams}};
    return 0;
}

}  // namespace

std::string emit(const Report& r, Format f) {
    std::ostringstream o;
    switch (f) {
        case Format::json: o << r.data.dump(2) << "\n"; break;
        case Format::csv:
            for (std::size_t i = 0; i < r.columns.size(); ++i) o << (i ? "," : "") << csv_field(r.columns[i]);
            o << "\n";
            for (auto& row : r.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << csv_field(row[i]);
                o << "\n";
            }
            break;
        case Format::text:
            for (auto& [k, v] : r.data.items()) text_value(o, k, v, 0);
            break;
    }
    return o.str();
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Enumerate finite binary relational structures and check their counting claims"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", c.out, "write the report to this path");
    app.add_option("--seed", c.seed, "seed for random sampling");
    app.add_option("--threads", c.threads, "worker cap")->check(CLI::Range(1, 256));

    std::string family, in, mode = "reflexive", method = "split", kind = "graph", perm, expect;
    std::string a, b, cc, series, num_s, den_s;
    int n = -1, k = 1, max_bits = 22, sample = 0, size = 7;
    long long seed_term = 0;
    bool verify = false;
    double max_codes = 5e7;
    std::function<int(Report&)> run;

    auto* profile_c = app.add_subcommand("profile", "saturated profile of a family");
    profile_c->add_option("--family", family)->required();
    profile_c->add_option("--n", n)->required()->check(CLI::Range(0, 16));
    profile_c->add_flag("--verify", verify, "exit 2 if a registered formula disagrees");
    profile_c->add_option("--max-codes", max_codes, "refuse sweeps above this many code computations");
    profile_c->callback([&] { run = [&](Report& r) { return cmd_profile(family, n, verify, max_codes, c, r); }; });

    auto* closed_c = app.add_subcommand("closed-form", "compare a profile with the registered formula");
    closed_c->add_option("--family", family)->required();
    closed_c->add_option("--n", n)->required()->check(CLI::Range(0, 16));
    closed_c->callback([&] { run = [&](Report& r) { return cmd_closed_form(family, n, c, r); }; });

    auto* sep_c = app.add_subcommand("separable-count", "separable ordered structures up to isomorphism");
    sep_c->add_option("--k", k)->check(CLI::Range(1, 6));
    sep_c->add_option("--mode", mode);
    sep_c->add_option("--n", n)->required()->check(CLI::Range(0, 12));
    sep_c->add_option("--method", method, "split, gallai, forbidden, tree or all");
    sep_c->add_option("--max-bits", max_bits, "enumeration budget in free table bits");
    sep_c->callback([&] { run = [&](Report& r) { return cmd_separable(k, mode, n, method, max_bits, c, r); }; });

    auto* dec_c = app.add_subcommand("decompose", "Gallai decomposition of a structure file");
    dec_c->add_option("--in", in)->required();
    dec_c->callback([&] { run = [&](Report& r) { return cmd_decompose(in, r); }; });

    auto* eq_c = app.add_subcommand("equiv", "equivalence classes and monomorphic decomposition");
    eq_c->add_option("--in", in);
    eq_c->add_flag("--verify", verify, "also compute full equivalence and compare");
    eq_c->add_option("--sample", sample, "verify this many random structures instead of a file");
    eq_c->add_option("--kind", kind, "kind for --sample");
    eq_c->add_option("--size", size, "vertex count for --sample");
    eq_c->callback([&] { run = [&](Report& r) { return cmd_equiv(in, verify, sample, kind, size, c, r); }; });

    auto* cls_c = app.add_subcommand("classify", "growth classification of an ordered family");
    cls_c->add_option("--family", family)->required();
    cls_c->add_option("--n", n)->required()->check(CLI::Range(1, 14));
    cls_c->callback([&] { run = [&](Report& r) { return cmd_classify(family, n, r); }; });

    auto* ser_c = app.add_subcommand("series", "power series utilities");
    ser_c->require_subcommand(1);
    auto* exp_c = ser_c->add_subcommand("expand", "expand num/den");
    exp_c->add_option("--num", num_s, "coefficients, constant term first")->required();
    exp_c->add_option("--den", den_s)->required();
    exp_c->add_option("--n", n)->required()->check(CLI::Range(0, 10000));
    exp_c->callback([&] { run = [&](Report& r) { return cmd_series_expand(num_s, den_s, n, r); }; });
    auto* res_c = ser_c->add_subcommand("residual", "a S^2 + b S + c truncated");
    res_c->add_option("--a", a)->required();
    res_c->add_option("--b", b)->required();
    res_c->add_option("--c", cc)->required();
    res_c->add_option("--series", series)->required();
    res_c->add_option("--n", n)->required()->check(CLI::Range(0, 10000));
    res_c->add_flag("--verify", verify, "exit 2 unless the residual vanishes");
    res_c->callback([&] { run = [&](Report& r) { return cmd_series_residual(a, b, cc, series, n, verify, r); }; });
    auto* sol_c = ser_c->add_subcommand("solve", "the series root of a S^2 + b S + c = 0 with a given constant term");
    sol_c->add_option("--a", a)->required();
    sol_c->add_option("--b", b)->required();
    sol_c->add_option("--c", cc)->required();
    sol_c->add_option("--seed-term", seed_term, "constant term of the root");
    sol_c->add_option("--n", n)->required()->check(CLI::Range(0, 10000));
    sol_c->add_option("--expect", expect, "exit 2 unless the prefix matches");
    sol_c->callback([&] { run = [&](Report& r) { return cmd_series_solve(a, b, cc, seed_term, n, expect, r); }; });

    auto* perm_c = app.add_subcommand("perm", "permutation utilities");
    perm_c->require_subcommand(1);
    auto* simple_c = perm_c->add_subcommand("simple-count", "simple permutations of each length up to n");
    simple_c->add_option("--n", n)->required()->check(CLI::Range(1, 9));
    simple_c->callback([&] { run = [&](Report& r) { return cmd_perm_simple(n, r); }; });
    auto* psep_c = perm_c->add_subcommand("separable", "test a permutation or count separable ones");
    psep_c->add_option("--perm", perm);
    psep_c->add_option("--n", n)->check(CLI::Range(1, 11));
    psep_c->callback([&] { run = [&](Report& r) { return cmd_perm_separable(perm, n, r); }; });
    auto* pdec_c = perm_c->add_subcommand("decompose", "substitution decomposition tree");
    pdec_c->add_option("--perm", perm)->required();
    pdec_c->callback([&] { run = [&](Report& r) { return cmd_perm_decompose(perm, r); }; });

    auto* cat_c = app.add_subcommand("catalog", "registered families");
    cat_c->callback([&] { run = [&](Report& r) { return cmd_catalog(r); }; });
    auto* fam_c = app.add_subcommand("family", "family registry");
    fam_c->require_subcommand(1);
    auto* list_c = fam_c->add_subcommand("list", "registered families with anchors");
    list_c->callback([&] { run = [&](Report& r) { return cmd_catalog(r); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }
    if (!run) {
        err << "usage error: no command\n";
        return 1;
    }
    try {
        Report r;
        int code = run(r);
        Format f = c.format == "json" ? Format::json : c.format == "csv" ? Format::csv : Format::text;
        std::string text = emit(r, f);
        if (c.out.empty()) {
            out << text;
        } else {
            std::ofstream file(c.out);
            if (!file) throw UsageError("cannot write '" + c.out + "'");
            file << text;
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rs::cli

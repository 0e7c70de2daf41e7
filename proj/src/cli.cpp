#include "rprime/cli.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <omp.h>

#include "rprime/analysis.hpp"

namespace rprime
{

using json = nlohmann::ordered_json;

namespace
{

struct Options
{
    std::string spec;
    std::string x;
    int samples = 0;
    int m = 2;
    int r = 1;
    std::uint64_t N = 0;
    std::string cache_dir;
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 1;
    double slack = 0.15;
    bool delta = false;
    bool targets = false;
    std::string xmax;
    int n = 0;
    std::string family;
    int threads = 0;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

json json_int(i128 v)
{
    if (fits_int64(v)) return static_cast<std::int64_t>(v);
    return to_string(v);
}

// Non-finite doubles have no JSON form; they go out as strings.
json json_real(double v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string fmt_real(double v)
{
    return fmt::format("{}", v);
}

json header_json(const char* command)
{
    json j;
    j["version"] = kSchemaVersion;
    j["tool"] = "rprime";
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    return j;
}

json field_json(const FieldDescriptor& f)
{
    json j;
    j["spec"] = f.spec();
    j["degree"] = f.degree();
    j["r1"] = f.r1();
    j["r2"] = f.r2();
    j["D"] = f.signed_disc();
    return j;
}

json residue_json(const ResidueInfo& res)
{
    json j;
    j["c"] = res.c;
    j["method"] = std::string(to_string(res.method));
    if (res.method != ResidueMethod::regression_estimate) {
        j["h"] = res.h;
        j["R"] = res.R;
        j["w"] = res.w;
    }
    j["uncertainty"] = res.uncertainty;
    return j;
}

json fit_json(const FitResult& f)
{
    json j;
    j["exponent"] = json_real(f.exponent);
    j["intercept"] = json_real(f.intercept);
    j["stderr"] = f.std_error;
    j["points_used"] = f.points_used;
    j["envelope"] = f.envelope;
    j["all_zero"] = f.all_zero;
    return j;
}

std::string csv_preamble(const char* command, const std::string& columns)
{
    return fmt::format("# rprime {} {} schema={}\n# columns: {}\n", kToolVersion, command, kSchemaVersion, columns);
}

std::vector<double> make_grid(const std::string& text, int samples, int default_samples)
{
    if (text.empty()) fail(ErrorKind::Usage, "--x is required");
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {parse_x_value(text)};
    const double lo = parse_x_value(text.substr(0, dots));
    const double hi = parse_x_value(text.substr(dots + 2));
    return half_integer_grid(lo, hi, samples > 0 ? samples : default_samples);
}

std::optional<std::filesystem::path> cache_dir_of(const Options& o)
{
    if (!o.cache_dir.empty()) return std::filesystem::path(o.cache_dir);
    if (const char* env = std::getenv("RPRIME_CACHE_DIR"); env != nullptr && *env != '\0')
        return std::filesystem::path(env);
    return std::nullopt;
}

// Table bound: the grid top, raised so non-quadratic fields can regress their residue.
std::uint64_t table_bound(const FieldDescriptor& field, const Options& o, double xmax)
{
    std::uint64_t N = std::max<std::uint64_t>(o.N, static_cast<std::uint64_t>(std::floor(std::max(xmax, 1.0))));
    if (!field.is_quadratic_or_rational()) N = std::max<std::uint64_t>(N, ResidueOptions{}.min_regression_N);
    return N;
}

std::string splitting_summary(const FieldDescriptor& field, std::uint64_t seed)
{
    std::string out;
    for (std::uint64_t p : primes_up_to(29)) {
        if (!out.empty()) out += " ";
        out += fmt::format("{}:{}", p, splitting_type(field, p).str());
        if (field.kind() == FieldKind::monogenic && field.degree() > 2) {
            std::string fs;
            for (const auto& f : factor_defining_polynomial(field, p, seed)) {
                std::string poly;
                for (auto c : f.poly.coeffs()) poly += (poly.empty() ? "" : ",") + std::to_string(c);
                fs += fmt::format("{}({})^{}", fs.empty() ? "" : "*", poly, f.multiplicity);
            }
            out += "=" + fs;
        }
    }
    return out;
}

int cmd_info(const Options& o, std::ostream& out)
{
    const FieldDescriptor field = parse_field_spec(o.spec);
    std::optional<CoeffTable> table;
    if (!field.is_quadratic_or_rational()) {
        const std::uint64_t N = std::max<std::uint64_t>(o.N, 1'000'000);
        table = cached_tables(field, N, cache_dir_of(o));
    }
    const ResidueInfo res = residue_c(field, table ? &*table : nullptr);

    if (o.format == "json") {
        json j = header_json("info");
        j["field"] = field_json(field);
        j["residue"] = residue_json(res);
        if (table) j["residue_N"] = table->N;
        json split = json::array();
        for (std::uint64_t p : primes_up_to(29)) split.push_back({{"p", p}, {"type", splitting_type(field, p).str()}});
        j["splitting"] = split;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    out << csv_preamble("info", "key,value") << "key,value\n";
    auto kv = [&](const std::string& k, const std::string& v) { out << k << "," << csv_field(v) << "\n"; };
    kv("field", field.spec());
    kv("degree", std::to_string(field.degree()));
    kv("signature", fmt::format("({},{})", field.r1(), field.r2()));
    kv("D", std::to_string(field.signed_disc()));
    kv("c", fmt_real(res.c));
    kv("c_method", std::string(to_string(res.method)));
    kv("c_uncertainty", fmt_real(res.uncertainty));
    if (res.method == ResidueMethod::exact_quadratic) {
        kv("h", std::to_string(res.h));
        kv("R", fmt_real(res.R));
        kv("w", std::to_string(res.w));
    }
    if (table) kv("residue_N", std::to_string(table->N));
    kv("splitting", splitting_summary(field, o.seed));
    return exit_ok;
}

int cmd_count(const Options& o, std::ostream& out)
{
    const FieldDescriptor field = parse_field_spec(o.spec);
    const auto xs = make_grid(o.x, o.samples, 10);
    const double xmax = *std::max_element(xs.begin(), xs.end());
    const CoeffTable table = cached_tables(field, table_bound(field, o, xmax), cache_dir_of(o));
    const ResidueInfo res = residue_c(field, &table);

    std::vector<CountResult> rows;
    std::optional<double> zeta;
    if (o.m * o.r >= 2) {
        rows = error_series(field, table, res, xs, o.m, o.r);
        zeta = zeta_K_special(field, o.m * o.r).value;
    } else {
        // V_1^1 counts only the unit ideal; there is no main term.
        for (double x : xs) {
            CountResult row;
            row.x = x;
            row.I = ideal_count(table, x);
            row.V = count_rprime(table, x, 1, 1);
            row.E = error_from(row.V, 0.0);
            rows.push_back(row);
        }
    }

    if (o.format == "json") {
        json j = header_json("count");
        j["field"] = field_json(field);
        j["residue"] = residue_json(res);
        j["zeta_rm"] = zeta ? json(*zeta) : json(nullptr);
        j["m"] = o.m;
        j["r"] = o.r;
        j["N"] = table.N;
        json arr = json::array();
        for (const auto& row : rows)
            arr.push_back({{"x", row.x}, {"I", json_int(row.I)}, {"V", json_int(row.V)}, {"main", row.main}, {"E", row.E}});
        j["rows"] = arr;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    out << csv_preamble("count", "x,I,V,main,E");
    out << fmt::format("# field={} degree={} D={} c={} c_method={} c_uncertainty={} zeta_rm={} m={} r={} N={}\n",
                       field.spec(), field.degree(), field.signed_disc(), fmt_real(res.c), to_string(res.method),
                       fmt_real(res.uncertainty), zeta ? fmt_real(*zeta) : "none", o.m, o.r, table.N);
    out << "x,I,V,main,E\n";
    for (const auto& row : rows)
        out << fmt::format("{},{},{},{},{}\n", fmt_real(row.x), to_string(row.I), to_string(row.V), fmt_real(row.main),
                           fmt_real(row.E));
    return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const FieldDescriptor field = parse_field_spec(o.spec);
    if (o.xmax.empty()) fail(ErrorKind::Usage, "--xmax is required");
    const double xmax = parse_x_value(o.xmax);
    const OracleLimits limits;
    if (xmax > limits.max_x)
        fail(ErrorKind::OracleBoundExceeded, fmt::format("oracle bound {} exceeded by x = {}", limits.max_x, xmax));
    const auto X = static_cast<std::uint64_t>(std::floor(std::max(xmax, 0.0)));
    const CoeffTable table = cached_tables(field, std::max<std::uint64_t>(X, 1), cache_dir_of(o));
    const auto oracle = brute_force_rprime_series(field, X, o.m, o.r, limits);

    std::optional<std::uint64_t> bad;
    i128 fast_at_bad = 0;
    for (std::uint64_t x = 1; x <= X; ++x) {
        const i128 fast = count_rprime(table, static_cast<double>(x), o.m, o.r);
        if (fast != oracle[x]) {
            bad = x;
            fast_at_bad = fast;
            break;
        }
    }
    if (o.format == "json") {
        json j = header_json("verify");
        j["field"] = field_json(field);
        j["m"] = o.m;
        j["r"] = o.r;
        j["xmax"] = X;
        j["pass"] = !bad;
        if (bad)
            j["first_mismatch"] = {{"x", *bad}, {"count", json_int(fast_at_bad)}, {"oracle", json_int(oracle[*bad])}};
        else
            j["first_mismatch"] = nullptr;
        out << j.dump(2) << "\n";
    } else if (bad) {
        out << fmt::format("FAIL {} m={} r={}: x={} count={} oracle={}\n", field.spec(), o.m, o.r, *bad,
                           to_string(fast_at_bad), to_string(oracle[*bad]));
    } else {
        out << fmt::format("PASS {} m={} r={}: {} values of x checked\n", field.spec(), o.m, o.r, X);
    }
    return bad ? exit_verify_failed : exit_ok;
}

json verdicts_json(const std::vector<TargetVerdict>& verdicts)
{
    json arr = json::array();
    for (const auto& v : verdicts) {
        arr.push_back({{"name", v.target->name},
                       {"status", std::string(to_string(v.target->status))},
                       {"n", v.target->scope.n_min},
                       {"bound_x_exp", v.bound},
                       {"verdict", v.consistent ? "consistent" : "exceeds"}});
    }
    return arr;
}

int cmd_scan(const Options& o, std::ostream& out)
{
    const FieldDescriptor field = parse_field_spec(o.spec);
    const auto xs = make_grid(o.x, o.samples, 200);
    const double xmax = *std::max_element(xs.begin(), xs.end());
    const CoeffTable table = cached_tables(field, table_bound(field, o, xmax), cache_dir_of(o));
    const ResidueInfo res = residue_c(field, &table);

    std::vector<std::pair<double, double>> points;
    std::vector<DeltaRow> drows;
    std::vector<CountResult> erows;
    if (o.delta) {
        drows = delta_series(table, res, xs);
        for (const auto& row : drows) points.push_back({row.x, row.delta});
    } else {
        erows = error_series(field, table, res, xs, o.m, o.r);
        for (const auto& row : erows) points.push_back({row.x, row.E});
    }
    const FitResult fit = fit_exponent(points, true);
    std::vector<TargetVerdict> verdicts;
    if (o.targets)
        verdicts = compare_with_targets(fit.exponent, field.degree(), field.signed_disc(), o.delta, o.m, o.r, o.slack);

    json summary;
    summary["version"] = kSchemaVersion;
    summary["mode"] = o.delta ? "delta" : "rprime";
    summary["fit"] = fit_json(fit);
    summary["slack"] = o.slack;
    if (o.targets) summary["targets"] = verdicts_json(verdicts);

    if (o.format == "json") {
        json j = header_json("scan");
        j["field"] = field_json(field);
        j["residue"] = residue_json(res);
        j["m"] = o.m;
        j["r"] = o.r;
        j["delta"] = o.delta;
        j["N"] = table.N;
        json arr = json::array();
        for (const auto& row : drows) arr.push_back({{"x", row.x}, {"I", row.I}, {"main", row.main}, {"delta", row.delta}});
        for (const auto& row : erows)
            arr.push_back({{"x", row.x}, {"I", json_int(row.I)}, {"V", json_int(row.V)}, {"main", row.main}, {"E", row.E}});
        j["rows"] = arr;
        j["fit"] = summary["fit"];
        j["slack"] = o.slack;
        if (o.targets) j["targets"] = summary["targets"];
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    const std::string cols = o.delta ? "x,I,main,delta" : "x,I,V,main,E";
    out << csv_preamble("scan", cols);
    out << fmt::format("# field={} degree={} D={} c={} c_method={} m={} r={} N={} mode={}\n", field.spec(),
                       field.degree(), field.signed_disc(), fmt_real(res.c), to_string(res.method), o.m, o.r, table.N,
                       o.delta ? "delta" : "rprime");
    out << cols << "\n";
    for (const auto& row : drows)
        out << fmt::format("{},{},{},{}\n", fmt_real(row.x), row.I, fmt_real(row.main), fmt_real(row.delta));
    for (const auto& row : erows)
        out << fmt::format("{},{},{},{},{}\n", fmt_real(row.x), to_string(row.I), to_string(row.V), fmt_real(row.main),
                           fmt_real(row.E));
    out << "# summary " << summary.dump() << "\n";
    return exit_ok;
}

std::vector<FieldDescriptor> parse_quad_range(const std::string& spec)
{
    if (spec.rfind("quad:", 0) != 0) fail(ErrorKind::Usage, fmt::format("sweep needs a quad:<a>..<b> range, got '{}'", spec));
    const std::string body = spec.substr(5);
    const auto dots = body.find("..");
    std::int64_t a = 0, b = 0;
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            a = b = std::stoll(body, &used);
            if (used != body.size()) throw std::invalid_argument(body);
        } else {
            const std::string lo = body.substr(0, dots), hi = body.substr(dots + 2);
            a = std::stoll(lo, &used);
            if (used != lo.size()) throw std::invalid_argument(lo);
            b = std::stoll(hi, &used);
            if (used != hi.size()) throw std::invalid_argument(hi);
        }
    } catch (const std::logic_error&) {
        fail(ErrorKind::Usage, fmt::format("cannot parse quadratic range '{}'", spec));
    }
    if (std::llabs(a) > 1'000'000 || std::llabs(b) > 1'000'000) fail(ErrorKind::Usage, "quadratic range too large");
    std::vector<FieldDescriptor> fields;
    const std::int64_t step = a <= b ? 1 : -1;
    for (std::int64_t d = a;; d += step) {
        if (d != 0 && d != 1 && is_squarefree(static_cast<std::uint64_t>(std::llabs(d)))) fields.push_back(make_quadratic(d));
        if (d == b) break;
    }
    if (fields.empty()) fail(ErrorKind::Usage, fmt::format("range '{}' contains no quadratic field", spec));
    return fields;
}

int cmd_sweep(const Options& o, std::ostream& out)
{
    const auto fields = parse_quad_range(o.spec);
    const auto xs = make_grid(o.x, o.samples, 30);
    const SweepResult res = discriminant_sweep(fields, xs, o.m, o.r);

    json summary;
    summary["version"] = kSchemaVersion;
    summary["m"] = o.m;
    summary["r"] = o.r;
    summary["fields"] = res.rows.size();
    summary["trial_exponents"] = res.trial_exponents;
    summary["x_fit"] = res.x_fit ? fit_json(*res.x_fit) : json(nullptr);
    summary["D_fit"] = res.D_fit ? fit_json(*res.D_fit) : json(nullptr);
    if (!res.D_fit_error.empty()) summary["D_fit_error"] = res.D_fit_error;
    if (res.joint_fit) {
        summary["joint_fit"] = {{"x_exp", res.joint_fit->x_exp},
                                {"x_stderr", res.joint_fit->x_stderr},
                                {"D_exp", res.joint_fit->D_exp},
                                {"D_stderr", res.joint_fit->D_stderr},
                                {"intercept", res.joint_fit->intercept},
                                {"points_used", res.joint_fit->points_used}};
    } else {
        summary["joint_fit"] = nullptr;
        summary["joint_fit_error"] = res.joint_fit_error;
    }
    summary["side_condition"] = "x^4 > D^6";

    if (o.format == "json") {
        json j = header_json("sweep");
        j["family"] = o.spec;
        j["xs"] = res.xs;
        json arr = json::array();
        for (const auto& row : res.rows) {
            json rj = {{"field", row.field}, {"d", row.d},           {"D", row.D},
                       {"c", row.c},         {"max_abs_E", row.max_abs_E}, {"x_at_max", row.x_at_max}};
            rj["fit"] = row.fit ? fit_json(*row.fit) : json(nullptr);
            rj["ratios"] = row.ratios;
            rj["side_condition_points"] = row.side_condition_points;
            rj["grid_points"] = row.grid_points;
            arr.push_back(rj);
        }
        j["rows"] = arr;
        j["summary"] = summary;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    std::string cols = "field,d,D,c,max_abs_E,x_at_max,exponent,exponent_stderr";
    for (double a : res.trial_exponents) cols += fmt::format(",ratio_a{}", a);
    cols += ",side_condition_points,grid_points";
    out << csv_preamble("sweep", cols);
    out << fmt::format("# family={} m={} r={} grid_points={} xmax={}\n", o.spec, o.m, o.r, res.xs.size(),
                       fmt_real(res.xs.back()));
    out << cols << "\n";
    for (const auto& row : res.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{}", row.field, row.d, row.D, fmt_real(row.c), fmt_real(row.max_abs_E),
                           fmt_real(row.x_at_max), row.fit ? fmt_real(row.fit->exponent) : "",
                           row.fit ? fmt_real(row.fit->std_error) : "");
        for (double v : row.ratios) out << "," << fmt_real(v);
        out << fmt::format(",{},{}\n", row.side_condition_points, row.grid_points);
    }
    out << "# summary " << summary.dump() << "\n";
    return exit_ok;
}

std::string terms_text(const std::vector<BoundTerm>& terms)
{
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += " + ";
        s += fmt::format("x^{} D^{}", t.x_exp, t.D_exp);
        if (t.log_pow != 0) s += fmt::format(" log^{}", t.log_pow);
    }
    return s;
}

int cmd_targets(const Options& o, std::ostream& out)
{
    TargetFilter filter;
    if (o.n > 0) filter.n = o.n;
    if (!o.family.empty()) {
        filter.family = parse_family(o.family);
        if (!filter.family) fail(ErrorKind::Usage, fmt::format("unknown family '{}'", o.family));
    }
    const auto entries = applicable_targets(filter);

    // The as-stated sibling of each proof-display entry, for the discrepancy note.
    auto sibling = [&](const ExponentTarget& t) -> const ExponentTarget* {
        for (const auto& u : target_catalog())
            if (u.name == t.name + "-as-stated" && u.scope.n_min == t.scope.n_min) return &u;
        return nullptr;
    };

    json arr = json::array();
    for (const ExponentTarget* t : entries) {
        json j;
        j["name"] = t->name;
        j["status"] = std::string(to_string(t->status));
        j["family"] = std::string(to_string(t->scope.family));
        j["n_min"] = t->scope.n_min;
        j["n_max"] = t->scope.n_max == INT_MAX ? json("any") : json(t->scope.n_max);
        j["term"] = std::string(to_string(t->term));
        j["x_exp"] = t->x_exp;
        j["D_exp"] = t->D_exp;
        j["log_pow"] = t->log_pow;
        j["alpha"] = t->alpha ? json(*t->alpha) : json(nullptr);
        j["beta"] = t->beta ? json(*t->beta) : json(nullptr);
        j["c_n"] = (t->name == "abelian-uniform" && t->scope.n_min >= 6 && t->scope.n_min <= 95)
                       ? json(abelian_c(t->scope.n_min))
                       : json(nullptr);
        j["side_condition"] = t->scope.side_condition;
        j["mr"] = t->scope.mr;
        const auto tr = t->transferred(o.m, o.r);
        const auto st = t->stated(o.m, o.r);
        if (tr) {
            json terms = json::array();
            for (const auto& b : tr->terms) terms.push_back({{"x_exp", b.x_exp}, {"D_exp", b.D_exp}, {"log_pow", b.log_pow}});
            j["transfer"] = {{"case", std::string(to_string(tr->which))},
                             {"terms", terms},
                             {"terms_text", terms_text(tr->terms)},
                             {"dominant_x_exp", tr->dominant_x()},
                             {"side_condition", tr->side_condition_numeric}};
        } else {
            j["transfer"] = nullptr;
        }
        j["stated_E"] = st ? json{{"x_exp", st->x_exp}, {"D_exp", st->D_exp}, {"log_pow", st->log_pow}} : json(nullptr);
        std::string note;
        if (t->status == TargetStatus::proof_display) {
            note = "operative";
            if (const auto* s = sibling(*t)) {
                if (auto se = s->stated(o.m, o.r); se && tr && std::abs(se->x_exp - tr->dominant_x()) > 1e-9)
                    note += fmt::format("; as-stated variant gives x^{} where this transfer gives x^{}", se->x_exp,
                                        tr->dominant_x());
                else if (std::abs(s->x_exp - t->x_exp) > 1e-9)
                    note += fmt::format("; as-stated variant gives Delta x^{} where this gives x^{}", s->x_exp, t->x_exp);
            }
        } else if (tr && st && std::abs(st->x_exp - tr->dominant_x()) > 1e-9) {
            note = fmt::format("stated E x^{} differs from transfer x^{}", st->x_exp, tr->dominant_x());
        }
        j["note"] = note;
        arr.push_back(j);
    }

    if (o.format == "json") {
        json j = header_json("targets");
        j["n"] = o.n > 0 ? json(o.n) : json(nullptr);
        j["family"] = o.family.empty() ? json(nullptr) : json(o.family);
        j["m"] = o.m;
        j["r"] = o.r;
        j["entries"] = arr;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    const std::string cols = "name,status,family,n_min,n_max,term,x_exp,D_exp,log_pow,alpha,beta,c_n,side_condition,"
                             "transfer_case,transfer_terms,transfer_x_exp,stated_x_exp,stated_D_exp,stated_log_pow,note";
    out << csv_preamble("targets", cols);
    out << fmt::format("# n={} family={} m={} r={}\n", o.n > 0 ? std::to_string(o.n) : "any",
                       o.family.empty() ? "any" : o.family, o.m, o.r);
    out << cols << "\n";
    auto num = [](const json& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return fmt_real(v.get<double>());
        return v.dump();
    };
    for (const auto& j : arr) {
        const json& tr = j["transfer"];
        const json& st = j["stated_E"];
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(j["name"]), num(j["status"]),
                           num(j["family"]), num(j["n_min"]), num(j["n_max"]), num(j["term"]), num(j["x_exp"]),
                           num(j["D_exp"]), num(j["log_pow"]), num(j["alpha"]), num(j["beta"]), num(j["c_n"]),
                           csv_field(num(j["side_condition"])), tr.is_null() ? "" : csv_field(num(tr["case"])),
                           tr.is_null() ? "" : csv_field(num(tr["terms_text"])), tr.is_null() ? "" : num(tr["dominant_x_exp"]),
                           st.is_null() ? "" : num(st["x_exp"]), st.is_null() ? "" : num(st["D_exp"]),
                           st.is_null() ? "" : num(st["log_pow"]), csv_field(num(j["note"])));
    }
    return exit_ok;
}

} // namespace

double parse_x_value(const std::string& text)
{
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::logic_error&) {
            fail(ErrorKind::Usage, fmt::format("cannot parse x value '{}'", text));
        }
        if (used != s.size()) fail(ErrorKind::Usage, fmt::format("cannot parse x value '{}'", text));
        return v;
    };
    double v = 0;
    if (const auto caret = text.find('^'); caret != std::string::npos)
        v = std::pow(number(text.substr(0, caret)), number(text.substr(caret + 1)));
    else
        v = number(text);
    if (!std::isfinite(v) || v < 0) fail(ErrorKind::Usage, fmt::format("x value '{}' out of range", text));
    return v;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Counts relatively r-prime m-tuples of ideals in number fields.", "rprime"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1, 1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", o.output, "write here instead of stdout");
        sub->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", o.seed, "seed for randomized factorization");
        sub->add_option("--cache-dir", o.cache_dir, "sieve cache directory (default $RPRIME_CACHE_DIR)");
        sub->add_option("--N", o.N, "minimum sieve bound");
    };
    auto add_mr = [&](CLI::App* sub) {
        sub->add_option("--m", o.m, "tuple size")->check(CLI::Range(1, 16));
        sub->add_option("--r", o.r, "coprimality power")->check(CLI::Range(1, 64));
    };

    auto* info = app.add_subcommand("info", "field invariants, residue and splitting of small primes");
    info->add_option("field", o.spec, "rational | quad:<d> | poly:<c0,...,cn>")->required();
    add_common(info);

    auto* count = app.add_subcommand("count", "I, V, main term and E on an x grid");
    count->add_option("field", o.spec)->required();
    count->add_option("--x", o.x, "x value or range a..b (10^3, 2^22, 1e5 accepted)")->required();
    count->add_option("--samples", o.samples, "grid points for a range")->check(CLI::PositiveNumber);
    add_mr(count);
    add_common(count);

    auto* verify = app.add_subcommand("verify", "compare the sieve count with tuple enumeration for all x <= xmax");
    verify->add_option("field", o.spec)->required();
    verify->add_option("--xmax", o.xmax, "largest x")->required();
    add_mr(verify);
    add_common(verify);

    auto* scan = app.add_subcommand("scan", "error series and envelope exponent fit");
    scan->add_option("field", o.spec)->required();
    scan->add_option("--x", o.x, "x range a..b")->required();
    scan->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
    scan->add_flag("--delta", o.delta, "fit the ideal-count error I - cx instead of E");
    scan->add_flag("--targets", o.targets, "compare the fit with applicable catalog entries");
    scan->add_option("--slack", o.slack, "allowed excess over a catalog exponent")->check(CLI::NonNegativeNumber);
    add_mr(scan);
    add_common(scan);

    auto* sweep = app.add_subcommand("sweep", "E over a range of quadratic fields with joint x/D fits");
    sweep->add_option("family", o.spec, "quad:<a>..<b>")->required();
    sweep->add_option("--x", o.x, "x value or range")->required();
    sweep->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
    add_mr(sweep);
    add_common(sweep);

    auto* targets = app.add_subcommand("targets", "exponent catalog with transferred E bounds");
    targets->add_option("--n", o.n, "field degree")->check(CLI::Range(1, kCatalogMaxDegree));
    targets->add_option("--family", o.family, "all | abelian | cubic | fixed-field");
    add_mr(targets);
    add_common(targets);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (o.threads > 0) omp_set_num_threads(o.threads);

    std::ostringstream buf;
    try {
        int code = exit_ok;
        if (*info) code = cmd_info(o, buf);
        else if (*count) code = cmd_count(o, buf);
        else if (*verify) code = cmd_verify(o, buf);
        else if (*scan) code = cmd_scan(o, buf);
        else if (*sweep) code = cmd_sweep(o, buf);
        else code = cmd_targets(o, buf);

        if (o.output.empty()) {
            out << buf.str();
        } else {
            std::ofstream file(o.output, std::ios::binary);
            if (!file) fail(ErrorKind::Usage, fmt::format("cannot write '{}'", o.output));
            file << buf.str();
        }
        return code;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what();
        if (e.detail()) err << " (p = " << *e.detail() << ")";
        err << "\n";
        return e.kind() == ErrorKind::Usage ? exit_usage : exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_domain;
    }
}

} // namespace rprime

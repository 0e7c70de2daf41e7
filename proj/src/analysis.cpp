#include "rprime/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include <fmt/format.h>

namespace rprime
{

std::vector<CountResult> error_series(const FieldDescriptor& field, const CoeffTable& table,
                                      const ResidueInfo& residue, const std::vector<double>& xs, int m, int r)
{
    if (m < 1 || r < 1 || m * r < 2) fail(ErrorKind::InvalidCase, "error series needs rm >= 2");
    std::vector<CountResult> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        CountResult row;
        row.x = x;
        row.m = m;
        row.r = r;
        row.I = ideal_count(table, x);
        row.V = count_rprime(table, x, m, r);
        row.main = main_term(field, x, m, r, residue);
        row.E = error_from(row.V, row.main);
        rows.push_back(row);
    }
    return rows;
}

std::vector<DeltaRow> delta_series(const CoeffTable& table, const ResidueInfo& residue, const std::vector<double>& xs)
{
    std::vector<DeltaRow> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        DeltaRow row;
        row.x = x;
        row.I = ideal_count(table, x);
        row.main = residue.c * x;
        row.delta = static_cast<double>(static_cast<long double>(row.I) - static_cast<long double>(row.main));
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::pair<double, double>> dyadic_envelope(const std::vector<std::pair<double, double>>& points)
{
    std::map<int, std::pair<double, double>> windows;
    for (auto [x, v] : points) {
        const int j = static_cast<int>(std::floor(std::log2(x)));
        const double a = std::abs(v);
        auto it = windows.find(j);
        if (it == windows.end() || a > it->second.second) windows[j] = {x, a};
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(windows.size());
    for (const auto& [j, p] : windows) out.push_back(p);
    return out;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, bool envelope)
{
    std::vector<std::pair<double, double>> usable;
    for (auto [x, v] : points)
        if (x > 1 && std::isfinite(v)) usable.push_back({x, std::abs(v)});
    if (usable.size() < 3)
        fail(ErrorKind::TooFewPoints, fmt::format("exponent fit needs at least 3 points with x > 1, got {}", usable.size()));

    FitResult fit;
    fit.envelope = envelope;
    if (std::all_of(usable.begin(), usable.end(), [](auto p) { return p.second == 0; })) {
        fit.all_zero = true;
        fit.exponent = -std::numeric_limits<double>::infinity();
        fit.intercept = -std::numeric_limits<double>::infinity();
        fit.points_used = static_cast<int>(usable.size());
        return fit;
    }
    if (envelope) usable = dyadic_envelope(usable);
    std::erase_if(usable, [](auto p) { return p.second == 0; });
    if (usable.size() < 3)
        fail(ErrorKind::TooFewPoints, fmt::format("only {} nonzero points remain for the exponent fit", usable.size()));

    const double n = static_cast<double>(usable.size());
    double mu = 0, mv = 0;
    for (auto [x, v] : usable) {
        mu += std::log(x);
        mv += std::log(v);
    }
    mu /= n;
    mv /= n;
    double suu = 0, suv = 0;
    for (auto [x, v] : usable) {
        const double u = std::log(x) - mu;
        suu += u * u;
        suv += u * (std::log(v) - mv);
    }
    if (!(suu > 1e-12 * n * std::max(1.0, mu * mu))) fail(ErrorKind::TooFewPoints, "exponent fit needs distinct x values");
    fit.exponent = suv / suu;
    fit.intercept = mv - fit.exponent * mu;
    double ssr = 0;
    for (auto [x, v] : usable) {
        const double e = std::log(v) - (fit.intercept + fit.exponent * std::log(x));
        ssr += e * e;
    }
    fit.std_error = n > 2 ? std::sqrt(ssr / (n - 2) / suu) : 0.0;
    fit.points_used = static_cast<int>(usable.size());
    return fit;
}

std::vector<double> half_integer_grid(double lo, double hi, int samples)
{
    if (samples < 1) fail(ErrorKind::Usage, "samples must be positive");
    if (!(lo >= 1) || !(hi >= lo)) fail(ErrorKind::Usage, fmt::format("bad x range {}..{}", lo, hi));
    std::vector<double> xs;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        double x = lo * std::pow(hi / lo, t);
        x = std::floor(x) + 0.5;
        if (x > hi) x -= 1;
        if (x < 1) x = 1.5;
        if (xs.empty() || xs.back() != x) xs.push_back(x);
    }
    return xs;
}

std::vector<TargetVerdict> compare_with_targets(double fitted, int degree, long long signed_disc, bool delta_mode,
                                                int m, int r, double slack)
{
    std::vector<TargetVerdict> out;
    const auto families = field_families(degree, signed_disc);
    for (const auto& t : target_catalog()) {
        if (!t.scope.covers_degree(degree)) continue;
        if (std::find(families.begin(), families.end(), t.scope.family) == families.end()) continue;
        const auto bound = t.comparison_exponent(delta_mode, m, r);
        if (!bound) continue;
        out.push_back({&t, *bound, fitted <= *bound + slack});
    }
    return out;
}

namespace
{

struct FieldRun
{
    SweepRow row;
    std::vector<std::pair<double, double>> envelope;
};

FieldRun sweep_one(const FieldDescriptor& field, const std::vector<double>& xs, int m, int r, const SweepOptions& opts)
{
    FieldRun run;
    SweepRow& row = run.row;
    row.field = field.spec();
    row.d = field.quadratic_d();
    row.D = field.signed_disc();
    const auto N = static_cast<std::uint64_t>(std::floor(xs.back()));
    const CoeffTable table = build_tables_reference(field, N);
    const ResidueInfo residue = residue_c(field);
    row.c = residue.c;

    std::vector<std::pair<double, double>> points;
    const double absD = static_cast<double>(field.disc());
    for (double x : xs) {
        const auto X = static_cast<std::uint64_t>(std::floor(x));
        const i128 V = (m == 1 && r == 1) ? i128{1} : moebius_sum_reference(table, X, m, r);
        const double E = error_from(V, main_term(field, x, m, r, residue));
        points.push_back({x, E});
        if (std::abs(E) > row.max_abs_E) {
            row.max_abs_E = std::abs(E);
            row.x_at_max = x;
        }
        if (4 * std::log(x) > 6 * std::log(absD)) ++row.side_condition_points;
    }
    row.grid_points = static_cast<int>(xs.size());
    for (double a : opts.trial_exponents) {
        double best = 0;
        for (auto [x, E] : points) best = std::max(best, std::abs(E) / std::pow(x, a));
        row.ratios.push_back(best);
    }
    try {
        row.fit = fit_exponent(points, true);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPoints) throw;
    }
    for (auto p : dyadic_envelope(points))
        if (p.second > 0) run.envelope.push_back(p);
    return run;
}

std::optional<JointFit> joint_fit(const std::vector<std::array<double, 3>>& pts, std::string& error)
{
    // pts: (log x, log D, log |E|)
    const double n = static_cast<double>(pts.size());
    if (pts.size() < 4) {
        error = "joint fit needs at least 4 points";
        return std::nullopt;
    }
    double mu = 0, mv = 0, my = 0;
    for (const auto& p : pts) {
        mu += p[0];
        mv += p[1];
        my += p[2];
    }
    mu /= n;
    mv /= n;
    my /= n;
    double suu = 0, svv = 0, suv = 0, suy = 0, svy = 0;
    for (const auto& p : pts) {
        const double u = p[0] - mu, v = p[1] - mv, y = p[2] - my;
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suy += u * y;
        svy += v * y;
    }
    const double det = suu * svv - suv * suv;
    if (!(det > 1e-12 * std::max(1.0, suu * svv))) {
        error = "joint fit design is degenerate (x or D does not vary)";
        return std::nullopt;
    }
    JointFit f;
    f.x_exp = (svv * suy - suv * svy) / det;
    f.D_exp = (suu * svy - suv * suy) / det;
    f.intercept = my - f.x_exp * mu - f.D_exp * mv;
    double ssr = 0;
    for (const auto& p : pts) {
        const double e = p[2] - (f.intercept + f.x_exp * p[0] + f.D_exp * p[1]);
        ssr += e * e;
    }
    const double s2 = n > 3 ? ssr / (n - 3) : 0.0;
    f.x_stderr = std::sqrt(s2 * svv / det);
    f.D_stderr = std::sqrt(s2 * suu / det);
    f.points_used = static_cast<int>(pts.size());
    return f;
}

} // namespace

SweepResult discriminant_sweep(const std::vector<FieldDescriptor>& fields, const std::vector<double>& xs, int m, int r,
                               const SweepOptions& opts)
{
    if (fields.empty()) fail(ErrorKind::Usage, "sweep needs at least one field");
    for (const auto& f : fields)
        if (f.kind() != FieldKind::quadratic)
            fail(ErrorKind::Usage, fmt::format("sweep takes quadratic fields only, got {}", f.spec()));
    if (xs.empty()) fail(ErrorKind::Usage, "sweep needs a nonempty x grid");
    if (m < 1 || r < 1 || m * r < 2) fail(ErrorKind::InvalidCase, "sweep needs rm >= 2");

    SweepResult res;
    res.m = m;
    res.r = r;
    res.xs = xs;
    std::sort(res.xs.begin(), res.xs.end());
    res.trial_exponents = opts.trial_exponents;

    std::vector<FieldRun> runs(fields.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < fields.size(); ++i) {
        try {
            runs[i] = sweep_one(fields[i], res.xs, m, r, opts);
        } catch (...) {
#pragma omp critical(sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::pair<double, double>> pooled, per_field_max;
    std::vector<std::array<double, 3>> joint;
    for (auto& run : runs) {
        for (auto p : run.envelope) {
            pooled.push_back(p);
            joint.push_back({std::log(p.first), std::log(static_cast<double>(std::llabs(run.row.D))), std::log(p.second)});
        }
        if (run.row.max_abs_E > 0) per_field_max.push_back({static_cast<double>(std::llabs(run.row.D)), run.row.max_abs_E});
        res.rows.push_back(std::move(run.row));
    }
    try {
        res.x_fit = fit_exponent(pooled, false);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPoints) throw;
    }
    try {
        res.D_fit = fit_exponent(per_field_max, false);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPoints) throw;
        res.D_fit_error = fmt::format("{}: {}", to_string(e.kind()), e.what());
    }
    res.joint_fit = joint_fit(joint, res.joint_fit_error);
    return res;
}

} // namespace rprime

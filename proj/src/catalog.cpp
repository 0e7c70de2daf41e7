#include "rprime/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace rprime
{

std::string_view to_string(TransferCase c)
{
    switch (c) {
    case TransferCase::r_above_one: return "r>1, alpha != (mr-2)/(r-1)";
    case TransferCase::r_above_one_critical: return "r>1, alpha = (mr-2)/(r-1)";
    case TransferCase::r_one_m_above_two: return "r=1, m>2";
    case TransferCase::r_one_m_two: return "r=1, m=2";
    }
    return "?";
}

double TransferResult::dominant_x() const
{
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) best = std::max(best, t.x_exp);
    return best;
}

bool TransferResult::side_condition_holds(double x, double D) const
{
    return 2 * alpha * std::log(x) > (1 + 2 * beta) * std::log(D);
}

TransferResult transfer_error_exponents(double alpha, double beta, int m, int r)
{
    if (m < 1 || r < 1 || m * r < 2)
        fail(ErrorKind::InvalidCase, fmt::format("transfer needs rm >= 2, got m = {}, r = {}", m, r));
    if (!(alpha > 0 && alpha <= 1) || !std::isfinite(beta))
        fail(ErrorKind::InvalidCase, fmt::format("alpha must lie in (0, 1], got {}", alpha));

    const double half = (m - 1) / 2.0;
    TransferResult out;
    out.alpha = alpha;
    out.beta = beta;
    out.side_condition = "x^(2*alpha) > D^(1+2*beta)";
    out.side_condition_numeric = fmt::format("x^{} > D^{}", 2 * alpha, 1 + 2 * beta);
    if (r > 1) {
        const double critical = static_cast<double>(m * r - 2) / (r - 1);
        if (std::abs(alpha - critical) > kCaseTolerance) {
            out.which = TransferCase::r_above_one;
            out.terms = {{m - alpha, beta - half, 0}, {(2 - alpha) / r, 2 * beta - half, 0}};
        } else {
            out.which = TransferCase::r_above_one_critical;
            out.terms = {{m - alpha, beta - half, 1}, {(2 - alpha) / r, beta - m / 2.0, 0}};
        }
    } else if (m > 2) {
        out.which = TransferCase::r_one_m_above_two;
        out.terms = {{m - alpha, beta - half, 0}, {2 - alpha, 2 * beta - half, 0}};
    } else {
        out.which = TransferCase::r_one_m_two;
        out.terms = {{2 - alpha, beta - half, 1}, {2 - alpha, beta - 1, 0}};
    }
    return out;
}

std::string_view to_string(TargetStatus s)
{
    switch (s) {
    case TargetStatus::theorem: return "theorem";
    case TargetStatus::conjecture: return "conjecture";
    case TargetStatus::prior_work: return "prior-work";
    case TargetStatus::proof_display: return "proof-display";
    }
    return "?";
}

std::string_view to_string(Family f)
{
    switch (f) {
    case Family::all: return "all";
    case Family::abelian: return "abelian";
    case Family::cubic: return "cubic";
    case Family::fixed_field: return "fixed-field";
    }
    return "?";
}

std::string_view to_string(TargetTerm t)
{
    return t == TargetTerm::delta ? "delta" : "rprime";
}

std::optional<Family> parse_family(std::string_view s)
{
    for (Family f : {Family::all, Family::abelian, Family::cubic, Family::fixed_field})
        if (s == to_string(f)) return f;
    return std::nullopt;
}

std::optional<TransferResult> ExponentTarget::transferred(int m, int r) const
{
    if (!alpha || !beta || m * r < 2 || !(*alpha > 0 && *alpha <= 1)) return std::nullopt;
    return transfer_error_exponents(*alpha, *beta, m, r);
}

std::optional<BoundTerm> ExponentTarget::stated(int m, int r) const
{
    if (!stated_E) return std::nullopt;
    return stated_E(m, r);
}

std::optional<double> ExponentTarget::comparison_exponent(bool delta_mode, int m, int r) const
{
    if (delta_mode) {
        if (term == TargetTerm::delta) return x_exp;
        return std::nullopt;
    }
    if (auto s = stated(m, r)) return s->x_exp;
    if (auto t = transferred(m, r)) return t->dominant_x();
    return std::nullopt;
}

double abelian_c(int n)
{
    return 2388.0 / (70844.0 * n + 453093.0);
}

namespace
{

// E bound written in the "rm = 2 / otherwise" shape shared by the uniform results.
std::function<std::optional<BoundTerm>(int, int)> uniform_E(double x_rm2_num, double D_rm2, double alpha, double beta)
{
    return [=](int m, int r) -> std::optional<BoundTerm> {
        if (m * r < 2) return std::nullopt;
        const double half = (m - 1) / 2.0;
        if (m * r == 2) return BoundTerm{x_rm2_num / r, D_rm2 - half, 0};
        return BoundTerm{m - alpha, beta - half, 0};
    };
}

std::function<bool(double, double)> power_condition(double x_pow, double D_pow)
{
    return [=](double x, double D) { return x_pow * std::log(x) > D_pow * std::log(D); };
}

std::vector<ExponentTarget> build_catalog()
{
    std::vector<ExponentTarget> cat;
    constexpr int top = kCatalogMaxDegree;

    for (int n = 2; n <= top; ++n) {
        const double a_proof = 2.0 / (n + 2), a_stmt = static_cast<double>(n) / (n + 2), b = 1.0 / (n + 2);
        const std::string side = fmt::format("x^{} > D^{}", 2 * n, n + 4);

        ExponentTarget proof;
        proof.name = "uniform-all-fields";
        proof.status = TargetStatus::proof_display;
        proof.scope = {Family::all, n, n, "rm >= 2", side, power_condition(2.0 * n, n + 4.0)};
        proof.x_exp = 1 - a_proof;
        proof.D_exp = b;
        proof.alpha = a_proof;
        proof.beta = b;
        cat.push_back(proof);

        // As stated, together with the E bound stated next to it.
        ExponentTarget stmt = proof;
        stmt.name = "uniform-all-fields-as-stated";
        stmt.status = TargetStatus::theorem;
        stmt.x_exp = 1 - a_stmt;
        stmt.alpha = a_stmt;
        stmt.stated_E = uniform_E(2 - a_stmt, 2 * b, a_stmt, b);
        cat.push_back(stmt);

        ExponentTarget ab;
        ab.name = "abelian-uniform";
        ab.status = TargetStatus::theorem;
        ab.scope.family = Family::abelian;
        ab.scope.n_min = ab.scope.n_max = n;
        ab.scope.side_condition = "x^(1/753+eps) > D";
        ab.scope.side_holds = power_condition(1.0 / 753, 1.0);
        if (n >= 6 && n <= 95) {
            const double c = abelian_c(n);
            ab.alpha = 95 * c;
            ab.beta = 31 * c;
            ab.stated_E = uniform_E(2 - 95 * c, 62 * c, 95 * c, 31 * c);
        } else {
            ab.alpha = a_proof;
            ab.beta = b;
        }
        ab.x_exp = 1 - *ab.alpha;
        ab.D_exp = *ab.beta;
        cat.push_back(ab);
    }

    {
        ExponentTarget cubic;
        cubic.name = "cubic-uniform";
        cubic.status = TargetStatus::theorem;
        cubic.scope = {Family::cubic, 3, 3, "rm >= 2", "x^(53/96-eps) > D^(5/6)", power_condition(53.0 / 96, 5.0 / 6)};
        cubic.alpha = 53.0 / 96;
        cubic.beta = 1.0 / 3;
        cubic.x_exp = 43.0 / 96;
        cubic.D_exp = 1.0 / 3;
        cubic.stated_E = uniform_E(139.0 / 96, 2.0 / 3, 53.0 / 96, 1.0 / 3);
        cat.push_back(cubic);
    }

    {
        // eps is stored as 0.
        ExponentTarget conj;
        conj.name = "conjectural-ideal-count";
        conj.status = TargetStatus::conjecture;
        conj.scope = {Family::all, 2, std::numeric_limits<int>::max(), "rm >= 2", "x^(1-2eps) > D^(1+2eps)",
                      power_condition(1.0, 1.0)};
        conj.alpha = 0.5;
        conj.beta = 0.0;
        conj.x_exp = 0.5;
        conj.D_exp = 0.0;
        conj.stated_E = uniform_E(1.5, 0.0, 0.5, 0.0);
        cat.push_back(conj);
    }

    auto fixed = [&](std::string name, int n, double x_exp, double log_pow) {
        ExponentTarget t;
        t.name = std::move(name);
        t.status = TargetStatus::prior_work;
        t.scope.family = Family::fixed_field;
        t.scope.n_min = t.scope.n_max = n;
        t.x_exp = x_exp;
        t.log_pow = log_pow;
        t.alpha = 1 - x_exp;
        t.beta = 0.0;
        cat.push_back(std::move(t));
    };
    fixed("fixed-field-best", 2, 23.0 / 73, 315.0 / 146);
    fixed("fixed-field-best", 3, 43.0 / 96, 0);
    for (int n = 4; n <= top; ++n) {
        double e = 0;
        if (n == 4) e = 41.0 / 72;
        else if (n <= 10) e = 1 - 4.0 / (2 * n + 1);
        else e = 1 - 3.0 / (n + 6);
        fixed("fixed-field-hitherto", n, e, 0);
    }

    for (int n = 3; n <= top; ++n) {
        double a = 0, b = 0;
        if (n <= 6) {
            a = 2.0 / n - 8.0 / (n * (5.0 * n + 2));
            b = 10.0 / (5.0 * n + 2);
        } else if (n <= 9) {
            a = 2.0 / n - 3.0 / (2.0 * n * n);
            b = 2.0 / n;
        } else {
            a = 3.0 / (n + 6);
            b = 0;
        }
        ExponentTarget t;
        t.name = "prior-fixed-field-alpha-beta";
        t.status = TargetStatus::prior_work;
        t.scope.family = Family::fixed_field;
        t.scope.n_min = t.scope.n_max = n;
        t.x_exp = 1 - a;
        t.log_pow = b;
        t.alpha = a;
        // β(n) here is a power of log x, not of D.
        t.beta = 0.0;
        t.stated_E = [a, b](int m, int r) -> std::optional<BoundTerm> {
            if (m * r < 2) return std::nullopt;
            if (m == 2 && r == 1) return BoundTerm{2 - a, 0, 2 * b + 1};
            if (m == 1 && r == 2) return BoundTerm{1 - a / 2, 0, 2 * b};
            return BoundTerm{m - a, 0, b};
        };
        cat.push_back(std::move(t));
    }

    for (int n = 1; n <= top; ++n) {
        ExponentTarget t;
        t.name = "prior-fixed-field-rprime";
        t.status = TargetStatus::prior_work;
        t.term = TargetTerm::rprime;
        t.scope.family = Family::fixed_field;
        t.scope.n_min = t.scope.n_max = n;
        t.x_exp = 2 - 1.0 / n;
        t.log_pow = 1;
        t.stated_E = [n](int m, int r) -> std::optional<BoundTerm> {
            if (m * r < 2) return std::nullopt;
            const double inv = 1.0 / n;
            if (m >= 3 || (m == 2 && r >= 2)) return BoundTerm{m - inv, 0, 0};
            if (m == 2) return BoundTerm{2 - inv, 0, 1};
            const double k = n * (r - 2.0) / (r - 1.0);
            if (std::abs(k - 1) <= kCaseTolerance) return BoundTerm{1 - inv, 0, 1};
            if (k > 1) return BoundTerm{1 - inv, 0, 0};
            return BoundTerm{(2 - inv) / r, 0, 0};
        };
        cat.push_back(std::move(t));
    }
    return cat;
}

} // namespace

const std::vector<ExponentTarget>& target_catalog()
{
    static const std::vector<ExponentTarget> catalog = build_catalog();
    return catalog;
}

std::vector<const ExponentTarget*> applicable_targets(const TargetFilter& filter)
{
    std::vector<const ExponentTarget*> out;
    for (const auto& t : target_catalog()) {
        if (filter.n && !t.scope.covers_degree(*filter.n)) continue;
        if (filter.family && t.scope.family != Family::all && t.scope.family != *filter.family) continue;
        out.push_back(&t);
    }
    return out;
}

std::vector<Family> field_families(int degree, long long signed_disc)
{
    std::vector<Family> fams{Family::all, Family::fixed_field};
    bool abelian = degree <= 2;
    if (degree == 3) {
        // A cubic field is cyclic exactly when its discriminant is a square.
        const long long root = std::llround(std::sqrt(static_cast<long double>(signed_disc > 0 ? signed_disc : 0)));
        abelian = signed_disc > 0 && root * root == signed_disc;
        fams.push_back(Family::cubic);
    }
    if (abelian) fams.push_back(Family::abelian);
    return fams;
}

} // namespace rprime

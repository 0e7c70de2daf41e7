#include "rprime/analytic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>

#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace rprime
{

namespace mp = boost::multiprecision;

std::string_view to_string(ResidueMethod method)
{
    switch (method) {
    case ResidueMethod::exact_rational: return "exact-rational";
    case ResidueMethod::exact_quadratic: return "exact-quadratic";
    case ResidueMethod::regression_estimate: return "regression-estimate";
    }
    return "unknown";
}

namespace
{

constexpr long double kPi = std::numbers::pi_v<long double>;

void require_fundamental(std::int64_t D)
{
    if (!is_fundamental_discriminant(D))
        fail(ErrorKind::NotFundamental, fmt::format("{} is not a fundamental discriminant", D));
}

// Squarefree d with ℚ(√d) of discriminant D.
std::int64_t radicand(std::int64_t D)
{
    return (((D % 4) + 4) % 4 == 1) ? D : D / 4;
}

} // namespace

double dirichlet_L1(std::int64_t D)
{
    require_fundamental(D);
    const std::uint64_t q = static_cast<std::uint64_t>(D < 0 ? -D : D);
    long double sum = 0;
    if (D < 0) {
        for (std::uint64_t a = 1; a < q; ++a) sum += kronecker(D, a) * static_cast<long double>(a);
        return static_cast<double>(-kPi * sum / std::pow(static_cast<long double>(q), 1.5L));
    }
    for (std::uint64_t a = 1; a < q; ++a) {
        const int chi = kronecker(D, a);
        if (chi != 0) sum += chi * std::log(std::sin(kPi * static_cast<long double>(a) / static_cast<long double>(q)));
    }
    return static_cast<double>(-sum / std::sqrt(static_cast<long double>(q)));
}

double fundamental_unit_regulator(std::int64_t d)
{
    if (d <= 1) fail(ErrorKind::InvalidD, fmt::format("regulator needs squarefree d > 1, got {}", d));
    if (!is_squarefree(static_cast<std::uint64_t>(d))) fail(ErrorKind::NonSquarefree, fmt::format("{} is not squarefree", d));

    using Int = mp::cpp_int;
    // ω = (P0 + √d)/Q0 generates O_K; trace and norm of ω give the norm form of p - qω̄.
    const bool one_mod_four = d % 4 == 1;
    const Int P0 = one_mod_four ? 1 : 0;
    const Int Q0 = one_mod_four ? 2 : 1;
    const Int trace = one_mod_four ? 1 : 0;
    const Int norm_omega = one_mod_four ? Int((1 - d) / 4) : Int(-d);

    Int s = mp::sqrt(Int(d));
    Int P = P0, Q = Q0;
    Int p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
    auto floor_div = [](const Int& a, const Int& b) {
        Int qd = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --qd;
        return qd;
    };
    for (;;) {
        const Int a = floor_div(P + s + (Q < 0 ? 1 : 0), Q);
        const Int p = a * p_prev + p_prev2;
        const Int q = a * q_prev + q_prev2;
        const Int nrm = p * p - trace * p * q + norm_omega * q * q;
        if (nrm == 1 || nrm == -1) {
            using Float = mp::cpp_bin_float_50;
            const Float omega = (Float(P0) + mp::sqrt(Float(d))) / Float(Q0);
            const Float unit = Float(p - q * trace) + Float(q) * omega;
            return static_cast<double>(mp::log(unit));
        }
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
        P = a * Q - P;
        Q = (Int(d) - P * P) / Q;
    }
}

std::int64_t class_number_quadratic(std::int64_t D, std::uint64_t max_abs_D)
{
    require_fundamental(D);
    const std::uint64_t absD = static_cast<std::uint64_t>(D < 0 ? -D : D);
    if (absD > max_abs_D) fail(ErrorKind::OutOfRange, fmt::format("|D| = {} exceeds the configured bound {}", absD, max_abs_D));
    if (D < 0) {
        std::int64_t h = 0;
        for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
            for (std::int64_t b = -a + 1; b <= a; ++b) {
                if (((b - D) & 1) != 0) continue;
                const std::int64_t num = b * b - D;
                if (num % (4 * a) != 0) continue;
                const std::int64_t c = num / (4 * a);
                if (c < a) continue;
                if (b < 0 && a == c) continue;
                if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
                ++h;
            }
        }
        return h;
    }
    const double R = fundamental_unit_regulator(radicand(D));
    const double estimate = std::sqrt(static_cast<double>(D)) * dirichlet_L1(D) / (2 * R);
    const double rounded = std::round(estimate);
    if (std::abs(estimate - rounded) >= 0.25 || rounded < 1)
        fail(ErrorKind::RoundingUnsafe, fmt::format("class number estimate {} is not safely integral", estimate));
    return static_cast<std::int64_t>(rounded);
}

int roots_of_unity(const FieldDescriptor& field)
{
    if (field.degree() == 2) {
        if (field.signed_disc() == -4) return 4;
        if (field.signed_disc() == -3) return 6;
    }
    return 2;
}

ResidueInfo residue_by_regression(const CoeffTable& table, int points)
{
    if (table.A.empty() || table.N < 10) fail(ErrorKind::InsufficientTable, "regression needs a table of ideal counts");
    const double lo = static_cast<double>(table.N) / 10.0;
    const double hi = static_cast<double>(table.N);
    std::vector<std::uint64_t> xs;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
        auto x = static_cast<std::uint64_t>(std::floor(lo * std::pow(hi / lo, t)));
        x = std::clamp<std::uint64_t>(x, 1, table.N);
        if (xs.empty() || xs.back() != x) xs.push_back(x);
    }
    if (xs.size() < 3) fail(ErrorKind::InsufficientTable, "too few distinct regression points");
    long double sx = 0, sy = 0;
    for (auto x : xs) {
        sx += x;
        sy += table.A[x];
    }
    const long double n = static_cast<long double>(xs.size());
    const long double mx = sx / n, my = sy / n;
    long double sxx = 0, sxy = 0;
    for (auto x : xs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (table.A[x] - my);
    }
    const long double slope = sxy / sxx;
    const long double intercept = my - slope * mx;
    long double ssr = 0;
    for (auto x : xs) {
        const long double e = table.A[x] - (intercept + slope * x);
        ssr += e * e;
    }
    ResidueInfo info;
    info.c = static_cast<double>(slope);
    info.method = ResidueMethod::regression_estimate;
    info.h = 0;
    info.R = 0;
    info.w = 0;
    info.uncertainty = static_cast<double>(std::sqrt(ssr / (n - 2) / sxx));
    return info;
}

ResidueInfo residue_c(const FieldDescriptor& field, const CoeffTable* table, const ResidueOptions& opts)
{
    if (!opts.force_regression) {
        if (field.degree() == 1) return ResidueInfo{};
        if (field.degree() == 2) {
            const std::int64_t D = field.signed_disc();
            ResidueInfo info;
            info.method = ResidueMethod::exact_quadratic;
            info.h = class_number_quadratic(D);
            info.R = D > 0 ? fundamental_unit_regulator(radicand(D)) : 1.0;
            info.w = roots_of_unity(field);
            const long double num = std::pow(2.0L, field.r1()) * std::pow(2 * kPi, field.r2()) * info.h * info.R;
            info.c = static_cast<double>(num / (info.w * std::sqrt(static_cast<long double>(field.disc()))));
            return info;
        }
    }
    if (table == nullptr || table->N < opts.min_regression_N)
        fail(ErrorKind::InsufficientTable,
             fmt::format("residue of {} needs a coefficient table with N >= {}", field.spec(), opts.min_regression_N));
    return residue_by_regression(*table, opts.regression_points);
}

double ZetaValue::abs_error_bound() const
{
    return value * std::expm1(tail_bound);
}

ZetaValue zeta_K_real(const FieldDescriptor& field, double s, std::uint64_t P)
{
    if (!(s > 1)) fail(ErrorKind::SNotGreaterThanOne, fmt::format("Euler product needs s > 1, got {}", s));
    if (P < 100) fail(ErrorKind::OutOfRange, "prime cutoff must be at least 100");
    const auto primes = primes_up_to(P);
    std::vector<long double> logs(primes.size());
#pragma omp parallel for schedule(dynamic, 512)
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const long double p = static_cast<long double>(primes[i]);
        long double acc = 0;
        const SplittingType st = splitting_type(field, primes[i]);
        for (const auto& slot : st.entries())
            acc -= std::log1p(-std::pow(p, -static_cast<long double>(slot.f) * s));
        logs[i] = acc;
    }
    long double total = 0;
    for (auto v : logs) total += v;
    const long double Pl = static_cast<long double>(P);
    const long double tail =
        field.degree() * std::pow(Pl, 1.0L - s) / ((s - 1.0L) * (1.0L - std::pow(Pl, -static_cast<long double>(s))));
    return {static_cast<double>(std::exp(total)), static_cast<double>(tail)};
}

double dirichlet_L(std::int64_t D, int s)
{
    require_fundamental(D);
    if (s < 2) fail(ErrorKind::SNotGreaterThanOne, "closed-form L(s, chi) needs integer s >= 2");
    const std::uint64_t q = static_cast<std::uint64_t>(D < 0 ? -D : D);
    // ζ(s, a/q) = (-1)^s ψ^{(s-1)}(a/q) / (s-1)!
    const long double fact = std::tgamma(static_cast<long double>(s));
    const long double sign = (s % 2 == 0) ? 1.0L : -1.0L;
    long double sum = 0;
    for (std::uint64_t a = 1; a < q; ++a) {
        const int chi = kronecker(D, a);
        if (chi == 0) continue;
        const long double hz =
            sign * boost::math::polygamma(s - 1, static_cast<long double>(a) / static_cast<long double>(q)) / fact;
        sum += chi * hz;
    }
    return static_cast<double>(sum / std::pow(static_cast<long double>(q), static_cast<long double>(s)));
}

ZetaValue zeta_K_special(const FieldDescriptor& field, int s, std::uint64_t max_P)
{
    static std::mutex memo_mutex;
    static std::map<std::tuple<std::string, int, std::uint64_t>, ZetaValue> memo;
    const auto key = std::make_tuple(field.spec(), s, max_P);
    {
        std::lock_guard lock(memo_mutex);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    if (s < 2) fail(ErrorKind::SNotGreaterThanOne, fmt::format("need integer s >= 2, got {}", s));
    ZetaValue z;
    if (field.degree() <= 2) {
        const long double zq = boost::math::zeta(static_cast<long double>(s));
        const long double L = field.degree() == 2 ? dirichlet_L(field.signed_disc(), s) : 1.0L;
        z.value = static_cast<double>(zq * L);
        z.tail_bound = 1e-14;
    } else {
        // n P^{1-s} / (s-1) ≤ 1e-10
        const long double target = field.degree() / ((s - 1) * 1e-10L);
        const long double needed = std::ceil(std::pow(target, 1.0L / (s - 1)));
        const std::uint64_t P = static_cast<std::uint64_t>(std::clamp<long double>(needed, 100.0L, static_cast<long double>(max_P)));
        z = zeta_K_real(field, s, P);
    }
    std::lock_guard lock(memo_mutex);
    memo.emplace(key, z);
    return z;
}

double main_term(const FieldDescriptor& field, double x, int m, int r, const ResidueInfo& residue)
{
    if (m < 1 || r < 1 || m * r < 2) fail(ErrorKind::InvalidCase, "main term needs rm >= 2");
    const ZetaValue z = zeta_K_special(field, m * r);
    return static_cast<double>(std::pow(static_cast<long double>(residue.c) * x, m) / z.value);
}

} // namespace rprime

#include "rprime/numberfield.hpp"

#include <algorithm>
#include <bitset>
#include <charconv>
#include <cstdlib>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace rprime
{

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::InvalidD: return "InvalidD";
    case ErrorKind::NonSquarefree: return "NonSquarefree";
    case ErrorKind::InvalidPolynomial: return "InvalidPolynomial";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::ReducibleUndetermined: return "ReducibleUndetermined";
    case ErrorKind::NotMonogenic: return "NotMonogenic";
    case ErrorKind::DiscTooLarge: return "DiscTooLarge";
    case ErrorKind::Capacity: return "Capacity";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::OracleBoundExceeded: return "OracleBoundExceeded";
    case ErrorKind::NotFundamental: return "NotFundamental";
    case ErrorKind::RoundingUnsafe: return "RoundingUnsafe";
    case ErrorKind::InsufficientTable: return "InsufficientTable";
    case ErrorKind::SNotGreaterThanOne: return "SNotGreaterThanOne";
    case ErrorKind::InvalidCase: return "InvalidCase";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::CacheFormat: return "CacheFormat";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// SplittingType

SplittingType::SplittingType(std::vector<PrimeSlot> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) fail(ErrorKind::InvalidCase, "empty splitting type");
    std::sort(entries_.begin(), entries_.end(), [](const PrimeSlot& a, const PrimeSlot& b) {
        return a.f != b.f ? a.f < b.f : a.e < b.e;
    });
}

int SplittingType::degree_sum() const noexcept
{
    int s = 0;
    for (const auto& slot : entries_) s += slot.e * slot.f;
    return s;
}

bool SplittingType::unramified() const noexcept
{
    return std::all_of(entries_.begin(), entries_.end(), [](const PrimeSlot& s) { return s.e == 1; });
}

int SplittingType::count_degree_one() const noexcept
{
    return static_cast<int>(std::count_if(entries_.begin(), entries_.end(), [](const PrimeSlot& s) { return s.f == 1; }));
}

std::string SplittingType::str() const
{
    std::string s = "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ",";
        s += fmt::format("({},{})", entries_[i].e, entries_[i].f);
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// Integer helpers

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<char> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    // Deterministic Miller-Rabin for n < 3.3e24 with these bases.
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    };
    auto powmod = [&](std::uint64_t b, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1;
        b %= m;
        while (e) {
            if (e & 1) r = mulmod(r, b, m);
            b = mulmod(b, b, m);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_squarefree(std::uint64_t n)
{
    if (n == 0) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        n /= q;
        if (n % q == 0) return false;
    }
    return true;
}

int kronecker(std::int64_t a, std::uint64_t n)
{
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int t = 1;
    while ((n & 1) == 0) {
        n >>= 1;
        if ((a & 1) == 0) return 0;
        const std::int64_t a8 = ((a % 8) + 8) % 8;
        if (a8 == 3 || a8 == 5) t = -t;
    }
    // Jacobi symbol (a/n), n odd.
    const std::int64_t sn = static_cast<std::int64_t>(n);
    std::uint64_t x = static_cast<std::uint64_t>(((a % sn) + sn) % sn);
    std::uint64_t y = n;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const std::uint64_t r = y % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(x, y);
        if (x % 4 == 3 && y % 4 == 3) t = -t;
        x %= y;
    }
    return y == 1 ? t : 0;
}

std::int64_t fundamental_discriminant(std::int64_t d)
{
    const std::int64_t r = ((d % 4) + 4) % 4;
    return r == 1 ? d : 4 * d;
}

bool is_fundamental_discriminant(std::int64_t D)
{
    if (D == 0 || D == 1) return false;
    const std::int64_t r = ((D % 4) + 4) % 4;
    if (r == 1) return is_squarefree(static_cast<std::uint64_t>(std::llabs(D)));
    if (r != 0) return false;
    const std::int64_t d = D / 4;
    const std::int64_t dr = ((d % 4) + 4) % 4;
    return (dr == 2 || dr == 3) && is_squarefree(static_cast<std::uint64_t>(std::llabs(d)));
}

namespace
{

std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Trial division up to `bound`; returns (prime, exponent) pairs.
std::vector<std::pair<std::uint64_t, int>> factor_with_bound(std::uint64_t n, std::uint64_t bound)
{
    std::vector<std::pair<std::uint64_t, int>> out;
    std::uint64_t q = 2;
    for (; q <= bound && q * q <= n; ++q) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.emplace_back(q, e);
    }
    if (n > 1) {
        if (q * q <= n)
            fail(ErrorKind::DiscTooLarge,
                 fmt::format("discriminant cofactor {} not factored by trial division up to {}", n, bound));
        out.emplace_back(n, 1);
    }
    return out;
}

BigInt eval(const std::vector<std::int64_t>& coeffs, const BigInt& t)
{
    BigInt acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m)
{
    const std::size_t n = m.size();
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

using RatPoly = std::vector<BigRat>;

void trim(RatPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly rat_rem(RatPoly a, const RatPoly& b)
{
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const BigRat factor = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= factor * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

int sign_of(const BigRat& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sign_changes(const std::vector<int>& signs)
{
    int changes = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

bool has_rational_root(const std::vector<std::int64_t>& coeffs)
{
    const std::uint64_t a0 = static_cast<std::uint64_t>(std::llabs(coeffs.front()));
    if (a0 == 0) return true;
    for (std::uint64_t d = 1; d * d <= a0; ++d) {
        if (a0 % d) continue;
        for (std::uint64_t cand : {d, a0 / d}) {
            const BigInt c = static_cast<std::int64_t>(cand);
            if (eval(coeffs, c) == 0 || eval(coeffs, -c) == 0) return true;
        }
    }
    return false;
}

// Intersects the possible degrees of a rational factor over several primes of good reduction.
bool irreducible_by_reduction(const std::vector<std::int64_t>& coeffs, std::int64_t disc, int prime_count)
{
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::bitset<256> possible;
    possible.set();
    int used = 0;
    const std::uint64_t disc_abs = static_cast<std::uint64_t>(disc < 0 ? -disc : disc);
    for (std::uint64_t p = 2; used < prime_count; ++p) {
        if (!is_prime(p) || disc_abs % p == 0) continue;
        ++used;
        const auto f = polymod::PolyModP::from_integers(p, coeffs);
        std::bitset<256> sums;
        sums.set(0);
        for (const auto& [mult, deg] : polymod::factor_degrees(f)) {
            for (int k = 0; k < mult; ++k) sums |= sums << static_cast<std::size_t>(deg);
        }
        possible &= sums;
        bool proper = false;
        for (int d = 1; d < n; ++d) proper = proper || possible.test(static_cast<std::size_t>(d));
        if (!proper) return true;
    }
    return false;
}

void dedekind_check(const std::vector<std::int64_t>& coeffs, std::uint64_t p)
{
    using polymod::PolyModP;
    const PolyModP fbar = PolyModP::from_integers(p, coeffs);
    PolyModP radical = PolyModP::one(p);
    for (const auto& part : polymod::squarefree_decomposition(fbar)) radical = polymod::mul(radical, part.poly);
    const PolyModP cofactor = polymod::quot(fbar, radical);

    // F = (g*h - f)/p with g, h the lifts of the radical and cofactor.
    const auto& g = radical.coeffs();
    const auto& h = cofactor.coeffs();
    std::vector<__int128> prod(std::max(coeffs.size(), g.size() + h.size()), 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) prod[i + j] += static_cast<__int128>(g[i]) * h[j];
    std::vector<std::int64_t> fcoeffs;
    const __int128 sp = static_cast<__int128>(p);
    for (std::size_t i = 0; i < prod.size(); ++i) {
        const __int128 diff = prod[i] - (i < coeffs.size() ? coeffs[i] : 0);
        if (diff % sp != 0) fail(ErrorKind::InvalidCase, "Dedekind lift not divisible by p");
        __int128 q = (diff / sp) % sp;
        if (q < 0) q += sp;
        fcoeffs.push_back(static_cast<std::int64_t>(q));
    }
    const PolyModP fq = PolyModP::from_integers(p, fcoeffs);
    const PolyModP common = polymod::gcd(polymod::gcd(fq, radical), cofactor);
    if (common.degree() > 0)
        fail(ErrorKind::NotMonogenic,
             fmt::format("Dedekind criterion fails at p = {}: Z[theta] is not the maximal order", p),
             static_cast<std::int64_t>(p));
}

} // namespace

std::int64_t polynomial_discriminant(const std::vector<std::int64_t>& coeffs)
{
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<BigInt> f(coeffs.rbegin(), coeffs.rend()); // leading first
    std::vector<BigInt> df;
    for (int i = n; i >= 1; --i) df.push_back(BigInt(coeffs[static_cast<std::size_t>(i)]) * i);
    const std::size_t size = static_cast<std::size_t>(2 * n - 1);
    std::vector<std::vector<BigInt>> syl(size, std::vector<BigInt>(size, 0));
    for (int row = 0; row < n - 1; ++row)
        for (std::size_t j = 0; j < f.size(); ++j) syl[static_cast<std::size_t>(row)][static_cast<std::size_t>(row) + j] = f[j];
    for (int row = 0; row < n; ++row)
        for (std::size_t j = 0; j < df.size(); ++j)
            syl[static_cast<std::size_t>(n - 1 + row)][static_cast<std::size_t>(row) + j] = df[j];
    BigInt res = bareiss_determinant(std::move(syl));
    if ((n * (n - 1) / 2) % 2 == 1) res = -res;
    res /= BigInt(coeffs.back());
    if (res > BigInt(INT64_MAX) || res < BigInt(INT64_MIN))
        fail(ErrorKind::DiscTooLarge, "polynomial discriminant exceeds 64 bits");
    return static_cast<std::int64_t>(res);
}

int count_real_roots(const std::vector<std::int64_t>& coeffs)
{
    RatPoly s0(coeffs.begin(), coeffs.end());
    trim(s0);
    RatPoly s1;
    for (std::size_t i = 1; i < s0.size(); ++i) s1.push_back(s0[i] * static_cast<long long>(i));
    std::vector<RatPoly> seq{s0, s1};
    while (!seq.back().empty() && seq.back().size() > 1) {
        RatPoly r = rat_rem(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        seq.push_back(std::move(r));
    }
    std::vector<int> at_pos, at_neg;
    for (const auto& poly : seq) {
        if (poly.empty()) continue;
        const int lead = sign_of(poly.back());
        const int deg = static_cast<int>(poly.size()) - 1;
        at_pos.push_back(lead);
        at_neg.push_back(deg % 2 == 0 ? lead : -lead);
    }
    return sign_changes(at_neg) - sign_changes(at_pos);
}

// ---------------------------------------------------------------------------
// Constructors

FieldDescriptor make_rational()
{
    return FieldDescriptor{};
}

FieldDescriptor make_quadratic(std::int64_t d)
{
    if (d == 0 || d == 1) fail(ErrorKind::InvalidD, fmt::format("quadratic field needs d not in {{0, 1}}, got {}", d));
    if (!is_squarefree(static_cast<std::uint64_t>(std::llabs(d))))
        fail(ErrorKind::NonSquarefree, fmt::format("d = {} is not squarefree", d));
    FieldDescriptor k;
    k.kind_ = FieldKind::quadratic;
    k.degree_ = 2;
    k.r1_ = d > 0 ? 2 : 0;
    k.r2_ = d > 0 ? 0 : 1;
    k.quad_d_ = d;
    k.disc_signed_ = fundamental_discriminant(d);
    k.disc_abs_ = static_cast<std::uint64_t>(std::llabs(k.disc_signed_));
    k.ramified_ = prime_divisors(k.disc_abs_);
    k.spec_ = fmt::format("quad:{}", d);
    return k;
}

FieldDescriptor make_monogenic(std::vector<std::int64_t> coeffs, const FieldLimits& limits)
{
    if (coeffs.size() < 3) fail(ErrorKind::InvalidPolynomial, "defining polynomial must have degree >= 2");
    if (coeffs.back() != 1) fail(ErrorKind::InvalidPolynomial, "defining polynomial must be monic");
    if (coeffs.size() > 64) fail(ErrorKind::InvalidPolynomial, "degree too large");
    for (auto c : coeffs) {
        if (c > limits.max_coefficient || c < -limits.max_coefficient)
            fail(ErrorKind::InvalidPolynomial, fmt::format("coefficient {} exceeds the supported bound", c));
    }
    const int n = static_cast<int>(coeffs.size()) - 1;

    if (has_rational_root(coeffs)) fail(ErrorKind::Reducible, "polynomial has a rational root");
    const std::int64_t disc = polynomial_discriminant(coeffs);
    if (disc == 0) fail(ErrorKind::Reducible, "polynomial has a repeated factor");
    if (n > 3 && !irreducible_by_reduction(coeffs, disc, limits.irreducibility_primes))
        fail(ErrorKind::ReducibleUndetermined,
             "irreducibility could not be established from reductions modulo small primes");

    const std::uint64_t disc_abs = static_cast<std::uint64_t>(disc < 0 ? -disc : disc);
    const auto factored = factor_with_bound(disc_abs, limits.trial_division_bound);
    for (const auto& [p, e] : factored) {
        if (e >= 2) dedekind_check(coeffs, p);
    }

    FieldDescriptor k;
    k.kind_ = FieldKind::monogenic;
    k.degree_ = n;
    k.r1_ = count_real_roots(coeffs);
    k.r2_ = (n - k.r1_) / 2;
    k.disc_signed_ = disc;
    k.disc_abs_ = disc_abs;
    for (const auto& [p, e] : factored) k.ramified_.push_back(p);
    k.poly_ = coeffs;
    std::string spec = "poly:";
    for (std::size_t i = 0; i < coeffs.size(); ++i) spec += (i ? "," : "") + std::to_string(coeffs[i]);
    k.spec_ = spec;
    return k;
}

SplittingType splitting_type(const FieldDescriptor& field, std::uint64_t p)
{
    if (p < 2 || p >= (std::uint64_t{1} << 32) || !is_prime(p))
        fail(ErrorKind::OutOfRange, fmt::format("{} is not a supported prime", p));
    switch (field.kind()) {
    case FieldKind::rational: return SplittingType({{1, 1}});
    case FieldKind::quadratic: {
        const int chi = kronecker(field.signed_disc(), p);
        if (chi > 0) return SplittingType({{1, 1}, {1, 1}});
        if (chi < 0) return SplittingType({{1, 2}});
        return SplittingType({{2, 1}});
    }
    case FieldKind::monogenic: {
        const auto f = polymod::PolyModP::from_integers(p, field.polynomial());
        std::vector<PrimeSlot> slots;
        for (const auto& [mult, deg] : polymod::factor_degrees(f)) slots.push_back({mult, deg});
        return SplittingType(std::move(slots));
    }
    }
    return SplittingType({{1, 1}});
}

std::vector<polymod::Factor> factor_defining_polynomial(const FieldDescriptor& field, std::uint64_t p,
                                                        std::uint64_t seed)
{
    if (field.kind() != FieldKind::monogenic) fail(ErrorKind::Usage, "field has no stored defining polynomial");
    return polymod::factor(polymod::PolyModP::from_integers(p, field.polynomial()), seed);
}

FieldDescriptor parse_field_spec(std::string_view spec, const FieldLimits& limits)
{
    auto parse_int = [&](std::string_view text) {
        std::int64_t v = 0;
        const auto* first = text.data();
        const auto* last = text.data() + text.size();
        if (!text.empty() && text.front() == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || first == last)
            fail(ErrorKind::Usage, fmt::format("bad integer '{}' in field spec '{}'", text, spec));
        return v;
    };
    if (spec == "rational" || spec == "Q") return make_rational();
    if (spec.starts_with("quad:")) return make_quadratic(parse_int(spec.substr(5)));
    if (spec.starts_with("poly:")) {
        std::vector<std::int64_t> coeffs;
        std::string_view rest = spec.substr(5);
        while (true) {
            const auto comma = rest.find(',');
            coeffs.push_back(parse_int(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return make_monogenic(std::move(coeffs), limits);
    }
    fail(ErrorKind::Usage, fmt::format("unrecognized field spec '{}' (use rational, quad:<d>, poly:<c0,...,cn>)", spec));
}

} // namespace rprime

#include "rprime/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace rprime
{

#pragma omp declare reduction(i128_sum : __int128 : omp_out += omp_in) initializer(omp_priv = 0)

namespace
{

std::uint64_t floor_x(double x)
{
    return static_cast<std::uint64_t>(std::floor(x));
}

// Largest k with k^r ≤ X.
std::uint64_t integer_root(std::uint64_t X, int r)
{
    if (r == 1) return X;
    auto fits = [&](std::uint64_t k) {
        unsigned __int128 acc = 1;
        for (int i = 0; i < r; ++i) {
            acc *= k;
            if (acc > X) return false;
        }
        return true;
    };
    auto k = static_cast<std::uint64_t>(std::pow(static_cast<long double>(X), 1.0L / r));
    while (k > 0 && !fits(k)) --k;
    while (fits(k + 1)) ++k;
    return k;
}

std::uint64_t ipow(std::uint64_t k, int r)
{
    std::uint64_t v = 1;
    for (int i = 0; i < r; ++i) v *= k;
    return v;
}

bool checked_pow(i128 base, int e, i128& out)
{
    i128 acc = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(acc, base, &acc)) return false;
    }
    out = acc;
    return true;
}

void validate(const CoeffTable& table, std::uint64_t X, int m, int r)
{
    if (m < 1 || r < 1) fail(ErrorKind::InvalidCase, fmt::format("need m >= 1 and r >= 1, got m = {}, r = {}", m, r));
    if (m > 16) fail(ErrorKind::InvalidCase, "m above 16 is not supported");
    if (!table.has_moebius() || table.A.empty())
        fail(ErrorKind::InsufficientTable, "count needs both the ideal counts and the Moebius coefficients");
    if (X > table.N)
        fail(ErrorKind::OutOfRange, fmt::format("x = {} exceeds the table bound N = {}", X, table.N));
}

} // namespace

std::int64_t ideal_count(const CoeffTable& table, double x)
{
    if (!(x >= 1)) return 0;
    const std::uint64_t X = floor_x(x);
    if (table.A.empty()) fail(ErrorKind::InsufficientTable, "table has no ideal counts");
    if (X > table.N) fail(ErrorKind::OutOfRange, fmt::format("x = {} exceeds the table bound N = {}", x, table.N));
    return table.A[X];
}

i128 moebius_sum(const CoeffTable& table, std::uint64_t X, int m, int r)
{
    validate(table, X, m, r);
    if (X == 0) return 0;
    const std::int64_t K = static_cast<std::int64_t>(integer_root(X, r));
    const auto* mu = table.m.data();
    const auto* A = table.A.data();
    i128 total = 0;
    std::atomic<bool> overflow{false};
#pragma omp parallel for schedule(static, 4096) reduction(i128_sum : total)
    for (std::int64_t k = 1; k <= K; ++k) {
        const std::int64_t mk = mu[k];
        if (mk == 0) continue;
        const std::uint64_t q = X / ipow(static_cast<std::uint64_t>(k), r);
        i128 term = 0;
        if (!checked_pow(A[q], m, term)) {
            overflow = true;
            continue;
        }
        total += mk * term;
    }
    if (overflow) fail(ErrorKind::Overflow, "I_K(x)^m exceeds 127 bits");
    return total;
}

i128 moebius_sum_reference(const CoeffTable& table, std::uint64_t X, int m, int r)
{
    validate(table, X, m, r);
    i128 total = 0;
    for (std::uint64_t k = 1; ipow(k, r) <= X; ++k) {
        if (table.m[k] == 0) continue;
        i128 term = 0;
        if (!checked_pow(table.A[X / ipow(k, r)], m, term)) fail(ErrorKind::Overflow, "I_K(x)^m exceeds 127 bits");
        total += table.m[k] * term;
    }
    return total;
}

i128 count_rprime(const CoeffTable& table, double x, int m, int r)
{
    if (!(x >= 1)) return 0;
    const std::uint64_t X = floor_x(x);
    if (m == 1 && r == 1) return 1;
    return moebius_sum(table, X, m, r);
}

// ---------------------------------------------------------------------------
// Oracle

namespace
{

struct PrimeIdeal
{
    std::uint64_t p;
    int slot;
    std::uint64_t norm;
};

void enumerate_rec(const std::vector<PrimeIdeal>& pis, std::size_t start, std::uint64_t norm, std::uint64_t X,
                   std::vector<IdealFactor>& current, std::vector<IdealHandle>& out)
{
    IdealHandle h{current, norm};
    std::sort(h.factorization.begin(), h.factorization.end());
    out.push_back(std::move(h));
    for (std::size_t i = start; i < pis.size(); ++i) {
        const std::uint64_t np = pis[i].norm;
        if (norm > X / np) break;
        std::uint64_t power = np;
        for (int e = 1;; ++e) {
            current.push_back({pis[i].p, pis[i].slot, e});
            enumerate_rec(pis, i + 1, norm * power, X, current, out);
            current.pop_back();
            if (norm * power > X / np) break;
            power *= np;
        }
    }
}

} // namespace

std::vector<IdealHandle> enumerate_ideals(const FieldDescriptor& field, double x, const OracleLimits& limits)
{
    if (x > limits.max_x)
        fail(ErrorKind::OracleBoundExceeded, fmt::format("oracle bound {} exceeded by x = {}", limits.max_x, x));
    std::vector<IdealHandle> out;
    if (!(x >= 1)) return out;
    const std::uint64_t X = floor_x(x);

    std::vector<PrimeIdeal> pis;
    for (std::uint64_t p : primes_up_to(X)) {
        const SplittingType st = splitting_type(field, p);
        for (std::size_t slot = 0; slot < st.entries().size(); ++slot) {
            std::uint64_t norm = 1;
            bool small = true;
            for (int i = 0; i < st.entries()[slot].f && small; ++i) {
                norm *= p;
                small = norm <= X;
            }
            if (small) pis.push_back({p, static_cast<int>(slot), norm});
        }
    }
    std::stable_sort(pis.begin(), pis.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.norm < b.norm; });

    std::vector<IdealFactor> current;
    enumerate_rec(pis, 0, 1, X, current, out);
    std::sort(out.begin(), out.end(), [](const IdealHandle& a, const IdealHandle& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return a.factorization < b.factorization;
    });
    return out;
}

namespace
{

struct TupleWalker
{
    int m;
    const std::vector<std::vector<int>>& support; // prime ideals with exponent ≥ r, per ideal
    const std::vector<std::uint64_t>& norms;
    std::vector<std::vector<int>> common;        // running intersection per depth
    std::vector<i128>& buckets;                   // tuples by max norm

    void walk(int depth, std::uint64_t max_norm)
    {
        const std::size_t count = norms.size();
        for (std::size_t j = 0; j < count; ++j) {
            const std::uint64_t mx = std::max(max_norm, norms[j]);
            auto& next = common[static_cast<std::size_t>(depth) + 1];
            if (depth == 0) {
                next = support[j];
            } else {
                const auto& cur = common[static_cast<std::size_t>(depth)];
                next.clear();
                std::set_intersection(cur.begin(), cur.end(), support[j].begin(), support[j].end(),
                                      std::back_inserter(next));
            }
            if (depth + 1 == m) {
                if (next.empty()) ++buckets[mx];
            } else {
                walk(depth + 1, mx);
            }
        }
    }
};

} // namespace

std::vector<i128> brute_force_rprime_series(const FieldDescriptor& field, std::uint64_t X, int m, int r,
                                            const OracleLimits& limits)
{
    if (m < 1 || r < 1) fail(ErrorKind::InvalidCase, "need m >= 1 and r >= 1");
    const auto ideals = enumerate_ideals(field, static_cast<double>(X), limits);
    if (std::pow(static_cast<double>(ideals.size()), m) > limits.max_tuples)
        fail(ErrorKind::OracleBoundExceeded,
             fmt::format("{}^{} tuples exceed the oracle budget {}", ideals.size(), m, limits.max_tuples));

    std::map<std::pair<std::uint64_t, int>, int> ids;
    std::vector<std::vector<int>> support(ideals.size());
    std::vector<std::uint64_t> norms(ideals.size());
    for (std::size_t i = 0; i < ideals.size(); ++i) {
        norms[i] = ideals[i].norm;
        for (const auto& f : ideals[i].factorization) {
            if (f.exponent < r) continue;
            auto [it, inserted] = ids.try_emplace({f.p, f.slot}, static_cast<int>(ids.size()));
            support[i].push_back(it->second);
        }
        std::sort(support[i].begin(), support[i].end());
    }

    std::vector<i128> buckets(X + 1, 0);
    if (!ideals.empty()) {
        TupleWalker walker{m, support, norms, std::vector<std::vector<int>>(static_cast<std::size_t>(m) + 1), buckets};
        walker.walk(0, 0);
    }
    for (std::uint64_t x = 1; x <= X; ++x) buckets[x] += buckets[x - 1];
    return buckets;
}

i128 brute_force_rprime(const FieldDescriptor& field, double x, int m, int r, const OracleLimits& limits)
{
    if (x > limits.max_x)
        fail(ErrorKind::OracleBoundExceeded, fmt::format("oracle bound {} exceeded by x = {}", limits.max_x, x));
    if (!(x >= 1)) return 0;
    const std::uint64_t X = floor_x(x);
    return brute_force_rprime_series(field, X, m, r, limits)[X];
}

} // namespace rprime

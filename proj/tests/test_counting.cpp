#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "rprime/counting.hpp"
#include "support.hpp"

using namespace rprime;

namespace
{

std::vector<std::uint64_t> norms(const std::vector<IdealHandle>& ideals)
{
    std::vector<std::uint64_t> out;
    for (const auto& h : ideals) out.push_back(h.norm);
    return out;
}

} // namespace

TEST_SUITE("counting")
{
    TEST_CASE("ideal counts")
    {
        const auto q = build_tables(make_rational(), 100);
        const auto gi = build_tables(make_quadratic(-1), 100);
        CHECK(ideal_count(q, 7.9) == 7);
        CHECK(ideal_count(gi, 10) == 9);
        CHECK(ideal_count(q, 1) == 1);
        CHECK(ideal_count(gi, 1) == 1);
        CHECK(ideal_count(gi, 0.5) == 0);
        for (double x = 1; x <= 100; x += 0.37) CHECK(ideal_count(gi, x) == ideal_count(gi, std::floor(x)));
        try {
            ideal_count(gi, 101);
            FAIL("read past the table");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OutOfRange);
        }
    }

    TEST_CASE("r-prime counts")
    {
        const auto q = build_tables(make_rational(), 1000);
        const auto gi = build_tables(make_quadratic(-1), 1000);
        CHECK(count_rprime(q, 10, 2, 1) == 63);
        CHECK(count_rprime(q, 10, 1, 2) == 7);
        CHECK(count_rprime(gi, 10, 1, 2) == 7);
        for (const auto& k : testing::five_fields()) CHECK(count_rprime(build_tables(k, 100), 100, 1, 1) == 1);
        // The grouped sum itself gives 1 at (1,1) too.
        CHECK(moebius_sum(gi, 1000, 1, 1) == 1);
        CHECK(moebius_sum_reference(gi, 1000, 1, 1) == 1);
        try {
            count_rprime(q, 2000, 2, 1);
            FAIL("read past the table");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OutOfRange);
        }
    }

    TEST_CASE("frozen rational r-prime counts")
    {
        const auto q = build_tables(make_rational(), 200);
        const auto& block = testing::frozen()["rational_rprime"];
        for (auto it = block.begin(); it != block.end(); ++it) {
            const int m = it.key()[0] - '0';
            const int r = it.key()[2] - '0';
            const auto want = it.value().get<std::vector<std::int64_t>>();
            for (std::size_t x = 1; x < want.size(); ++x) {
                INFO("m=", m, " r=", r, " x=", x);
                CHECK(count_rprime(q, static_cast<double>(x), m, r) == want[x]);
            }
        }
    }

    TEST_CASE("enumerated ideals")
    {
        const auto gi = enumerate_ideals(make_quadratic(-1), 5);
        CHECK(norms(gi) == std::vector<std::uint64_t>{1, 2, 4, 5, 5});
        CHECK(norms(enumerate_ideals(make_rational(), 4)) == std::vector<std::uint64_t>{1, 2, 3, 4});

        // Oracle and table agree on every norm, cubic field included.
        for (const auto& k : testing::five_fields()) {
            const auto t = build_tables(k, 3000);
            std::vector<std::int64_t> per_norm(3001, 0);
            for (const auto& h : enumerate_ideals(k, 3000)) {
                ++per_norm[h.norm];
                std::uint64_t prod = 1;
                for (const auto& f : h.factorization) {
                    const int fdeg = splitting_type(k, f.p).entries()[static_cast<std::size_t>(f.slot)].f;
                    for (int i = 0; i < fdeg * f.exponent; ++i) prod *= f.p;
                }
                CHECK(prod == h.norm);
            }
            for (std::uint64_t n = 1; n <= 3000; ++n)
                if (per_norm[n] != t.a[n]) FAIL(k.spec(), " n=", n);
        }
        try {
            enumerate_ideals(make_rational(), 1e9);
            FAIL("oracle bound ignored");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OracleBoundExceeded);
        }
    }

    TEST_CASE("brute force examples")
    {
        CHECK(brute_force_rprime(make_rational(), 10, 2, 1) == 63);
        CHECK(brute_force_rprime(make_quadratic(-1), 10, 1, 2) == 7);
        CHECK(brute_force_rprime(make_quadratic(-5), 20, 1, 1) == 1);
        OracleLimits tight;
        tight.max_tuples = 100;
        try {
            brute_force_rprime(make_rational(), 100, 2, 1, tight);
            FAIL("tuple guard ignored");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OracleBoundExceeded);
        }
    }

    TEST_CASE("monotonicity and the I^m bound")
    {
        for (const auto& k : testing::five_fields()) {
            const auto t = build_tables(k, 5000);
            for (auto [m, r] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 2}, {3, 1}, {1, 3}}) {
                i128 prev = 0;
                for (std::uint64_t x = 1; x <= 5000; x += 7) {
                    const i128 v = count_rprime(t, static_cast<double>(x), m, r);
                    const i128 I = ideal_count(t, static_cast<double>(x));
                    i128 Im = 1;
                    for (int i = 0; i < m; ++i) Im *= I;
                    if (v < prev || v < 0 || v > Im) FAIL(k.spec(), " m=", m, " r=", r, " x=", x);
                    prev = v;
                    if (r < 4 && count_rprime(t, static_cast<double>(x), m, r + 1) < v)
                        FAIL(k.spec(), " not monotone in r at x=", x);
                }
            }
            // Far enough out in r every tuple qualifies.
            CHECK(count_rprime(t, 5000, 2, 13) == i128(ideal_count(t, 5000)) * ideal_count(t, 5000));
        }
    }

    TEST_CASE("brute force agrees with the Moebius sum on a random grid")
    {
        auto g = testing::rng(30);
        for (const auto& k : testing::five_fields()) {
            const auto t = build_tables(k, 400);
            for (int trial = 0; trial < 25; ++trial) {
                const int m = static_cast<int>(testing::uniform(g, 1, 3));
                const int r = static_cast<int>(testing::uniform(g, m == 1 ? 2 : 1, 3));
                const double x = static_cast<double>(testing::uniform(g, 1, m == 3 ? 40 : 150)) + 0.5;
                INFO(k.spec(), " m=", m, " r=", r, " x=", x);
                CHECK(count_rprime(t, x, m, r) == brute_force_rprime(k, x, m, r));
            }
        }
    }

    TEST_CASE("series oracle equals pointwise oracle")
    {
        const auto k = make_quadratic(2);
        const auto series = brute_force_rprime_series(k, 60, 2, 2);
        REQUIRE(series.size() == 61);
        for (std::uint64_t x = 1; x <= 60; x += 11) CHECK(series[x] == brute_force_rprime(k, static_cast<double>(x), 2, 2));
    }

    TEST_CASE("parallel and serial sums agree for every thread count")
    {
        for (const auto& k : testing::five_fields()) {
            const auto t = build_tables(k, 300'000);
            for (auto [m, r] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {3, 1}, {2, 3}}) {
                const i128 ref = moebius_sum_reference(t, 300'000, m, r);
                for (int threads : {1, 2, 4}) {
                    omp_set_num_threads(threads);
                    CHECK(moebius_sum(t, 300'000, m, r) == ref);
                }
            }
        }
        omp_set_num_threads(omp_get_num_procs());
    }

    TEST_CASE("128-bit headroom at x = 10^7, m = 3")
    {
        const auto t = build_tables(make_rational(), 10'000'000);
        const i128 v = count_rprime(t, 1e7, 3, 1);
        // 10^21 / zeta(3) to well within the error term.
        const long double expect = 1e21L / 1.2020569031595942L;
        CHECK(std::fabs(static_cast<long double>(v) - expect) / expect < 1e-5);
        CHECK_FALSE(fits_int64(v));
    }
}

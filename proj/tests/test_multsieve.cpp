#include <doctest.h>

#include <filesystem>
#include <numeric>

#include <omp.h>

#include "rprime/multsieve.hpp"
#include "support.hpp"

using namespace rprime;

namespace
{

std::vector<std::int64_t> slice(const std::vector<std::int64_t>& v, std::size_t hi)
{
    return {v.begin() + 1, v.begin() + static_cast<std::ptrdiff_t>(hi) + 1};
}

} // namespace

TEST_SUITE("multsieve")
{
    TEST_CASE("local coefficients")
    {
        const auto split = local_coeffs(SplittingType({{1, 1}, {1, 1}}), 3);
        CHECK(split.a == std::vector<std::int64_t>{1, 2, 3, 4});
        CHECK(split.m == std::vector<std::int64_t>{1, -2, 1, 0});

        const auto ram = local_coeffs(SplittingType({{2, 1}}), 3);
        CHECK(ram.a == std::vector<std::int64_t>{1, 1, 1, 1});
        CHECK(ram.m == std::vector<std::int64_t>{1, -1, 0, 0});

        const auto inert = local_coeffs(SplittingType({{1, 2}}), 2);
        CHECK(inert.a == std::vector<std::int64_t>{1, 0, 1});
        CHECK(inert.m == std::vector<std::int64_t>{1, 0, -1});

        // Ramification indices do not enter.
        const auto c1 = local_coeffs(SplittingType({{1, 1}, {2, 1}}), 6);
        const auto c2 = local_coeffs(SplittingType({{1, 1}, {1, 1}}), 6);
        CHECK(c1.a == c2.a);
        CHECK(c1.m == c2.m);
    }

    TEST_CASE("local coefficients invert each other")
    {
        auto g = testing::rng(20);
        for (int t = 0; t < 200; ++t) {
            std::vector<PrimeSlot> slots;
            const int g_count = static_cast<int>(testing::uniform(g, 1, 4));
            for (int i = 0; i < g_count; ++i)
                slots.push_back({static_cast<int>(testing::uniform(g, 1, 2)), static_cast<int>(testing::uniform(g, 1, 3))});
            const auto lc = local_coeffs(SplittingType(slots), 12);
            for (int j = 0; j <= 12; ++j) {
                std::int64_t s = 0;
                for (int i = 0; i <= j; ++i) s += lc.a[i] * lc.m[j - i];
                CHECK(s == (j == 0 ? 1 : 0));
            }
        }
    }

    TEST_CASE("small tables")
    {
        const auto q = build_tables(make_rational(), 10);
        CHECK(slice(q.a, 10) == std::vector<std::int64_t>(10, 1));
        CHECK(slice(q.m, 10) == std::vector<std::int64_t>{1, -1, -1, 0, -1, 1, -1, 0, 0, 1});

        const auto gi = build_tables(make_quadratic(-1), 25);
        CHECK(slice(gi.a, 10) == std::vector<std::int64_t>{1, 1, 0, 1, 2, 0, 0, 1, 1, 2});
        CHECK(slice(gi.m, 10) == std::vector<std::int64_t>{1, -1, 0, 0, -2, 0, 0, 0, -1, 2});
        CHECK(gi.m[25] == 1);
        CHECK(gi.A[10] == 9);

        CHECK(sieve_zeta_coeffs(make_quadratic(-5), 3).a[3] == 2);
        const auto zeta_only = sieve_zeta_coeffs(make_quadratic(-1), 10);
        CHECK(zeta_only.has_zeta());
        CHECK_FALSE(zeta_only.has_moebius());
        const auto mob_only = sieve_moebius_coeffs(make_quadratic(-1), 10);
        CHECK(mob_only.has_moebius());
        CHECK_FALSE(mob_only.has_zeta());
        CHECK(slice(mob_only.m, 10) == slice(gi.m, 10));
    }

    TEST_CASE("frozen coefficient arrays")
    {
        const auto& coeffs = testing::frozen()["coeffs"];
        for (const auto& spec : testing::five_specs()) {
            const auto want_a = coeffs[spec]["a"].get<std::vector<std::int64_t>>();
            const auto want_m = coeffs[spec]["m"].get<std::vector<std::int64_t>>();
            const auto t = build_tables(parse_field_spec(spec), want_a.size());
            INFO(spec);
            CHECK(slice(t.a, want_a.size()) == want_a);
            CHECK(slice(t.m, want_m.size()) == want_m);
            const auto r = build_tables_reference(parse_field_spec(spec), want_a.size());
            CHECK(slice(r.a, want_a.size()) == want_a);
            CHECK(slice(r.m, want_m.size()) == want_m);
        }
    }

    TEST_CASE("table invariants over the five fields")
    {
        const std::uint64_t N = 10'000;
        auto g = testing::rng(21);
        for (const auto& k : testing::five_fields()) {
            const auto t = build_tables(k, N);
            INFO(k.spec());
            CHECK(t.a[1] == 1);
            CHECK(t.m[1] == 1);
            bool nonneg = true, monotone = true;
            for (std::uint64_t n = 1; n <= N; ++n) {
                nonneg = nonneg && t.a[n] >= 0;
                monotone = monotone && t.A[n] == t.A[n - 1] + t.a[n];
            }
            CHECK(nonneg);
            CHECK(monotone);

            // Dirichlet inverse, every n.
            std::vector<std::int64_t> conv(N + 1, 0);
            for (std::uint64_t d = 1; d <= N; ++d)
                for (std::uint64_t e = 1; d * e <= N; ++e) conv[d * e] += t.a[d] * t.m[e];
            bool inverse = conv[1] == 1;
            for (std::uint64_t n = 2; n <= N; ++n) inverse = inverse && conv[n] == 0;
            CHECK(inverse);

            for (int trial = 0; trial < 1000; ++trial) {
                std::uint64_t u, v;
                do {
                    u = static_cast<std::uint64_t>(testing::uniform(g, 1, 200));
                    v = static_cast<std::uint64_t>(testing::uniform(g, 1, static_cast<std::int64_t>(N / u)));
                } while (std::gcd(u, v) != 1);
                if (t.a[u * v] != t.a[u] * t.a[v] || t.m[u * v] != t.m[u] * t.m[v]) FAIL("u=", u, " v=", v);
            }

            for (auto p : primes_up_to(1000)) CHECK(t.a[p] == splitting_type(k, p).count_degree_one());
        }
    }

    TEST_CASE("Gaussian ideal counts match lattice enumeration")
    {
        const auto t = build_tables(make_quadratic(-1), 10'000);
        const auto& counts = testing::frozen()["gaussian_ideal_counts"];
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            const auto x = std::stoull(it.key());
            CHECK(t.A[x] == it.value().get<std::int64_t>());
        }
    }

    TEST_CASE("parallel kernel equals the serial reference for every thread count")
    {
        SieveOptions small_segments;
        small_segments.segment_size = 1000;
        for (const auto& k : testing::five_fields()) {
            const auto ref = build_tables_reference(k, 200'000);
            for (int threads : {1, 2, 4}) {
                omp_set_num_threads(threads);
                for (const auto& opts : {SieveOptions{}, small_segments}) {
                    const auto t = build_tables(k, 200'000, opts);
                    INFO(k.spec(), " threads=", threads, " segment=", opts.segment_size);
                    CHECK(t.a == ref.a);
                    CHECK(t.m == ref.m);
                    CHECK(t.A == ref.A);
                }
            }
        }
        omp_set_num_threads(omp_get_num_procs());
    }

    TEST_CASE("overflow-checked mode agrees")
    {
        SieveOptions checked;
        checked.overflow_checked = true;
        const auto k = make_monogenic({-1, -1, 0, 1});
        CHECK(build_tables(k, 50'000, checked).m == build_tables(k, 50'000).m);
    }

    TEST_CASE("capacity budget")
    {
        SieveOptions tiny;
        tiny.memory_budget_bytes = 1000;
        try {
            build_tables(make_rational(), 100'000, tiny);
            FAIL("budget ignored");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Capacity);
        }
    }

    TEST_CASE("cache round trip")
    {
        const auto dir = std::filesystem::temp_directory_path() / "rprime_cache_test";
        std::filesystem::remove_all(dir);
        const auto k = make_quadratic(-5);
        const auto first = cached_tables(k, 5000, dir);
        const auto path = cache_path(dir, k.spec(), 5000);
        CHECK(std::filesystem::exists(path));
        const auto loaded = load_table(path, k.spec(), 5000);
        REQUIRE(loaded.has_value());
        CHECK(loaded->a == first.a);
        CHECK(loaded->m == first.m);
        CHECK(loaded->A == first.A);
        CHECK_FALSE(load_table(path, "quad:-1", 5000).has_value());
        CHECK_FALSE(load_table(path, k.spec(), 4000).has_value());
        const auto second = cached_tables(k, 5000, dir);
        CHECK(second.m == first.m);
        CHECK(spec_hash("quad:-5") != spec_hash("quad:-1"));

        // A truncated file is treated as a miss and rebuilt.
        std::filesystem::resize_file(path, 40);
        CHECK_FALSE(load_table(path, k.spec(), 5000).has_value());
        CHECK(cached_tables(k, 5000, dir).A == first.A);
        CHECK(load_table(path, k.spec(), 5000).has_value());
        std::filesystem::remove_all(dir);
    }
}

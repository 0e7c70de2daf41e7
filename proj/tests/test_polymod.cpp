#include <doctest.h>

#include <algorithm>

#include "rprime/polymod.hpp"
#include "support.hpp"

using namespace rprime::polymod;

namespace
{

PolyModP random_monic(std::mt19937_64& g, std::uint64_t p, int deg)
{
    Coeffs c(deg + 1);
    for (int i = 0; i < deg; ++i) c[i] = static_cast<std::uint64_t>(testing::uniform(g, 0, p - 1));
    c[deg] = 1;
    return PolyModP(p, c);
}

// Irreducibility by trying every monic divisor of degree up to deg/2; only for tiny p.
bool irreducible_brute(const PolyModP& f)
{
    const std::uint64_t p = f.modulus();
    const int n = f.degree();
    for (int d = 1; d <= n / 2; ++d) {
        std::uint64_t total = 1;
        for (int i = 0; i < d; ++i) total *= p;
        for (std::uint64_t code = 0; code < total; ++code) {
            Coeffs c(d + 1);
            std::uint64_t t = code;
            for (int i = 0; i < d; ++i) {
                c[i] = t % p;
                t /= p;
            }
            c[d] = 1;
            if (rem(f, PolyModP(p, c)).is_zero()) return false;
        }
    }
    return true;
}

} // namespace

TEST_SUITE("polymod")
{
    TEST_CASE("arithmetic basics")
    {
        const std::uint64_t p = 7;
        const PolyModP a(p, {1, 2, 3});
        const PolyModP b(p, {6, 1});
        CHECK(add(a, b) == PolyModP(p, {0, 3, 3}));
        CHECK(sub(a, a).is_zero());
        CHECK(mul(b, b) == PolyModP(p, {1, 5, 1}));
        CHECK(PolyModP(p, {0, 7, 14}).is_zero());
        CHECK(derivative(a) == PolyModP(p, {2, 6}));
        CHECK(pow_mod(3, 6, 7) == 1);
        CHECK(inv_mod(3, 7) * 3 % 7 == 1);
        const std::int64_t neg[] = {-1, -1, 0, 1};
        CHECK(PolyModP::from_integers(2, neg) == PolyModP(2, {1, 1, 0, 1}));
    }

    TEST_CASE("divmod reconstructs the dividend")
    {
        auto g = testing::rng(1);
        for (int trial = 0; trial < 300; ++trial) {
            const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 101, 65521}[trial % 5];
            const auto a = random_monic(g, p, static_cast<int>(testing::uniform(g, 0, 12)));
            const auto b = random_monic(g, p, static_cast<int>(testing::uniform(g, 0, 6)));
            const auto [q, r] = divmod(a, b);
            CHECK(add(mul(q, b), r) == a);
            CHECK(r.degree() < b.degree());
        }
    }

    TEST_CASE("gcd divides both and absorbs a planted common factor")
    {
        auto g = testing::rng(2);
        for (int trial = 0; trial < 200; ++trial) {
            const std::uint64_t p = std::vector<std::uint64_t>{3, 7, 257}[trial % 3];
            const auto c = random_monic(g, p, static_cast<int>(testing::uniform(g, 1, 4)));
            const auto a = mul(c, random_monic(g, p, static_cast<int>(testing::uniform(g, 0, 5))));
            const auto b = mul(c, random_monic(g, p, static_cast<int>(testing::uniform(g, 0, 5))));
            const auto d = gcd(a, b);
            CHECK(d.lead() == 1);
            CHECK(rem(a, d).is_zero());
            CHECK(rem(b, d).is_zero());
            CHECK(rem(d, c).is_zero());
        }
    }

    TEST_CASE("powmod agrees with repeated multiplication")
    {
        auto g = testing::rng(3);
        for (int trial = 0; trial < 50; ++trial) {
            const std::uint64_t p = 11;
            const auto m = random_monic(g, p, 5);
            const auto b = random_monic(g, p, 3);
            PolyModP acc = PolyModP::one(p);
            for (std::uint64_t e = 0; e < 40; ++e) {
                CHECK(powmod(b, e, m) == rem(acc, m));
                acc = rem(mul(acc, b), m);
            }
        }
    }

    TEST_CASE("factorization multiplies back and has irreducible parts")
    {
        auto g = testing::rng(4);
        for (int trial = 0; trial < 400; ++trial) {
            const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[trial % 3];
            // Plant repeated factors half the time.
            auto f = random_monic(g, p, static_cast<int>(testing::uniform(g, 1, 6)));
            if (trial % 2) {
                const auto h = random_monic(g, p, static_cast<int>(testing::uniform(g, 1, 2)));
                f = mul(f, mul(h, h));
            }
            const auto parts = factor(f, 42);
            PolyModP prod = PolyModP::one(p);
            int deg_sum = 0;
            for (const auto& [q, e] : parts) {
                CHECK(q.lead() == 1);
                CHECK(irreducible_brute(q));
                for (int k = 0; k < e; ++k) prod = mul(prod, q);
                deg_sum += q.degree() * e;
            }
            CHECK(prod == f);

            auto degs = factor_degrees(f);
            std::vector<std::pair<int, int>> from_full;
            for (const auto& [q, e] : parts) from_full.emplace_back(e, q.degree());
            std::sort(degs.begin(), degs.end());
            std::sort(from_full.begin(), from_full.end());
            CHECK(degs == from_full);
            CHECK(deg_sum == f.degree());
        }
    }

    TEST_CASE("factorization is seed independent")
    {
        auto g = testing::rng(5);
        for (int trial = 0; trial < 60; ++trial) {
            const auto f = random_monic(g, 10007, 8);
            const auto a = factor(f, 1);
            const auto b = factor(f, 987654321);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].poly == b[i].poly);
                CHECK(a[i].multiplicity == b[i].multiplicity);
            }
        }
    }

    TEST_CASE("known factorizations")
    {
        // x^3 + x + 1 is irreducible mod 2; x^4 - 1 = (x-1)(x+1)(x^2+1) mod 3.
        CHECK(factor(PolyModP(2, {1, 1, 0, 1}), 0).size() == 1);
        const auto parts = factor(PolyModP(3, {2, 0, 0, 0, 1}), 0);
        REQUIRE(parts.size() == 3);
        CHECK(parts[0].poly.degree() == 1);
        CHECK(parts[1].poly.degree() == 1);
        CHECK(parts[2].poly == PolyModP(3, {1, 0, 1}));
        // (x+1)^2 (x+2) mod 5 keeps the multiplicity.
        const auto sq = factor(mul(mul(PolyModP(5, {1, 1}), PolyModP(5, {1, 1})), PolyModP(5, {2, 1})), 0);
        REQUIRE(sq.size() == 2);
        CHECK(sq[0].poly == PolyModP(5, {1, 1}));
        CHECK(sq[0].multiplicity == 2);
    }
}

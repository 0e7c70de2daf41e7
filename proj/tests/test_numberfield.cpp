#include <doctest.h>

#include "rprime/numberfield.hpp"
#include "support.hpp"

using namespace rprime;

namespace
{

SplittingType st(std::vector<PrimeSlot> e) { return SplittingType(std::move(e)); }

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an rprime::Error");
    return ErrorKind::Usage;
}

} // namespace

TEST_SUITE("numberfield")
{
    TEST_CASE("rational field")
    {
        const auto q = make_rational();
        CHECK(q.degree() == 1);
        CHECK(q.disc() == 1);
        CHECK(q.r1() == 1);
        CHECK(q.r2() == 0);
        CHECK(splitting_type(q, 7) == st({{1, 1}}));
        CHECK(splitting_type(q, 2) == st({{1, 1}}));
    }

    TEST_CASE("quadratic constructor")
    {
        const auto gi = make_quadratic(-1);
        CHECK(gi.disc() == 4);
        CHECK(gi.signed_disc() == -4);
        CHECK(gi.r1() == 0);
        CHECK(gi.r2() == 1);
        CHECK(splitting_type(gi, 5) == st({{1, 1}, {1, 1}}));
        CHECK(splitting_type(gi, 3) == st({{1, 2}}));
        CHECK(splitting_type(gi, 2) == st({{2, 1}}));
        CHECK(splitting_type(gi, 13) == st({{1, 1}, {1, 1}}));
        CHECK(splitting_type(make_quadratic(-5), 3) == st({{1, 1}, {1, 1}}));

        CHECK(make_quadratic(5).disc() == 5);
        CHECK(make_quadratic(-3).disc() == 3);
        CHECK(make_quadratic(2).disc() == 8);
        CHECK(make_quadratic(2).r1() == 2);
        CHECK(make_quadratic(-5).ramified_primes() == std::vector<std::uint64_t>{2, 5});

        CHECK(kind_of([] { make_quadratic(0); }) == ErrorKind::InvalidD);
        CHECK(kind_of([] { make_quadratic(1); }) == ErrorKind::InvalidD);
        CHECK(kind_of([] { make_quadratic(12); }) == ErrorKind::NonSquarefree);
        CHECK(kind_of([] { make_quadratic(-9); }) == ErrorKind::NonSquarefree);
    }

    TEST_CASE("monogenic constructor")
    {
        const auto k = make_monogenic({-1, -1, 0, 1});
        CHECK(k.degree() == 3);
        CHECK(k.disc() == 23);
        CHECK(k.signed_disc() == -23);
        CHECK(k.r1() == 1);
        CHECK(k.r2() == 1);
        CHECK(splitting_type(k, 2) == st({{1, 3}}));
        CHECK(splitting_type(k, 23) == st({{1, 1}, {2, 1}}));

        try {
            make_monogenic({-5, 0, 1});
            FAIL("x^2 - 5 accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotMonogenic);
            CHECK(e.detail() == 2);
        }
        CHECK(kind_of([] { make_monogenic({-1, 0, 1}); }) == ErrorKind::Reducible);
        CHECK(kind_of([] { make_monogenic({0, 1, 1}); }) == ErrorKind::Reducible);
        CHECK(kind_of([] { make_monogenic({4, 0, 0, 0, 1}); }) == ErrorKind::ReducibleUndetermined);
        CHECK(kind_of([] { make_monogenic({1, 2}); }) == ErrorKind::InvalidPolynomial);
        CHECK(kind_of([] { make_monogenic({1, 0, 2}); }) == ErrorKind::InvalidPolynomial);

        // Totally real cubic x^3 - 3x + 1, discriminant 81 = 3^4; index 1 (cyclotomic-type).
        const auto c9 = make_monogenic({1, -3, 0, 1});
        CHECK(c9.r1() == 3);
        CHECK(c9.disc() == 81);
        // Quartic x^4 - x - 1, discriminant -283.
        const auto q4 = make_monogenic({-1, -1, 0, 0, 1});
        CHECK(q4.signed_disc() == -283);
        CHECK(q4.r1() == 2);
        CHECK(q4.r2() == 1);
    }

    TEST_CASE("discriminant and real roots of small polynomials")
    {
        CHECK(polynomial_discriminant({1, 0, 1}) == -4);
        CHECK(polynomial_discriminant({-1, -1, 0, 1}) == -23);
        CHECK(polynomial_discriminant({-2, 0, 1}) == 8);
        // x^3 + a x + b: -4a^3 - 27b^2
        auto g = testing::rng(10);
        for (int t = 0; t < 100; ++t) {
            const auto a = testing::uniform(g, -50, 50), b = testing::uniform(g, -50, 50);
            CHECK(polynomial_discriminant({b, a, 0, 1}) == -4 * a * a * a - 27 * b * b);
        }
        CHECK(count_real_roots({-2, 0, 1}) == 2);
        CHECK(count_real_roots({2, 0, 1}) == 0);
        CHECK(count_real_roots({-6, 11, -6, 1}) == 3);
        CHECK(count_real_roots({-1, -1, 0, 1}) == 1);
    }

    TEST_CASE("arithmetic helpers")
    {
        CHECK(kronecker(-4, 3) == -1);
        CHECK(kronecker(-4, 2) == 0);
        CHECK(kronecker(-20, 3) == 1);
        CHECK(kronecker(8, 7) == 1);
        CHECK(kronecker(5, 2) == -1);
        CHECK(is_fundamental_discriminant(-4));
        CHECK(is_fundamental_discriminant(5));
        CHECK(is_fundamental_discriminant(8));
        CHECK_FALSE(is_fundamental_discriminant(-8 * 2));
        CHECK_FALSE(is_fundamental_discriminant(1));
        CHECK_FALSE(is_fundamental_discriminant(12 * 4));
        CHECK(fundamental_discriminant(-1) == -4);
        CHECK(fundamental_discriminant(13) == 13);
        CHECK(primes_up_to(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
        CHECK(is_squarefree(30));
        CHECK_FALSE(is_squarefree(50));
    }

    TEST_CASE("spec strings")
    {
        CHECK(parse_field_spec("rational").kind() == FieldKind::rational);
        CHECK(parse_field_spec("quad:-1").quadratic_d() == -1);
        CHECK(parse_field_spec("poly:-1,-1,0,1").disc() == 23);
        CHECK(parse_field_spec("poly:-1,-1,0,1").spec() == "poly:-1,-1,0,1");
        CHECK(kind_of([] { parse_field_spec("quad:x"); }) == ErrorKind::Usage);
        CHECK(kind_of([] { parse_field_spec("cubic"); }) == ErrorKind::Usage);
    }

    TEST_CASE("splitting matches the frozen factorization table")
    {
        const auto& table = testing::frozen()["splitting"];
        for (auto it = table.begin(); it != table.end(); ++it) {
            const auto field = parse_field_spec(it.key());
            for (auto row = it.value().begin(); row != it.value().end(); ++row) {
                const auto p = std::stoull(row.key());
                INFO(it.key(), " p=", p);
                CHECK(splitting_type(field, p).str() == row.value().get<std::string>());
            }
        }
    }

    TEST_CASE("degree sum, ramification and purity up to 10^4")
    {
        auto fields = testing::five_fields();
        fields.push_back(make_quadratic(-3));
        fields.push_back(make_quadratic(13));
        fields.push_back(make_monogenic({1, -3, 0, 1}));
        fields.push_back(make_monogenic({-1, -1, 0, 0, 1}));
        for (const auto& k : fields) {
            for (auto p : primes_up_to(10'000)) {
                const auto s = splitting_type(k, p);
                if (s.degree_sum() != k.degree()) FAIL(k.spec(), " p=", p);
                if (s.unramified() != (k.disc() % p != 0)) FAIL(k.spec(), " ramification at p=", p);
                if (!(s == splitting_type(k, p))) FAIL(k.spec(), " impure at p=", p);
            }
        }
    }

    TEST_CASE("quadratic and monogenic constructors agree")
    {
        const auto gi = make_quadratic(-1);
        const auto x2p1 = make_monogenic({1, 0, 1});
        CHECK(x2p1.disc() == 4);
        for (auto p : primes_up_to(1000)) CHECK(splitting_type(gi, p) == splitting_type(x2p1, p));

        for (std::int64_t d : {2, 3, -2, -5, 6, 7, -6, -10, 11, 14, -13, 15}) {
            if (((d % 4) + 4) % 4 == 1) continue;
            const auto a = make_quadratic(d);
            const auto b = make_monogenic({-d, 0, 1});
            CHECK(a.disc() == b.disc());
            for (auto p : primes_up_to(10'000))
                if (!(splitting_type(a, p) == splitting_type(b, p))) FAIL("d=", d, " p=", p);
        }
        // d = 1 mod 4 through x^2 - x + (1-d)/4.
        for (std::int64_t d : {5, -3, -7, 13, 17, -15}) {
            const auto a = make_quadratic(d);
            const auto b = make_monogenic({(1 - d) / 4, -1, 1});
            for (auto p : primes_up_to(10'000))
                if (!(splitting_type(a, p) == splitting_type(b, p))) FAIL("d=", d, " p=", p);
        }
    }

    TEST_CASE("factor_defining_polynomial is seed independent and matches the splitting type")
    {
        const auto k = make_monogenic({-1, -1, 0, 0, 1});
        for (auto p : primes_up_to(500)) {
            const auto a = factor_defining_polynomial(k, p, 1);
            const auto b = factor_defining_polynomial(k, p, 99);
            REQUIRE(a.size() == b.size());
            std::vector<PrimeSlot> slots;
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].poly == b[i].poly);
                slots.push_back({a[i].multiplicity, a[i].poly.degree()});
            }
            CHECK(SplittingType(slots) == splitting_type(k, p));
        }
    }
}

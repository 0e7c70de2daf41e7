#pragma once

// Dense univariate polynomials over the prime field F_p, p < 2^32.
// Coefficients are stored constant term first; the zero polynomial is empty.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rprime::polymod
{

using Coeffs = std::vector<std::uint64_t>;

class PolyModP
{
public:
    PolyModP(std::uint64_t p, Coeffs c);
    static PolyModP from_integers(std::uint64_t p, std::span<const std::int64_t> coeffs);
    static PolyModP zero(std::uint64_t p) { return PolyModP(p, {}); }
    static PolyModP one(std::uint64_t p) { return PolyModP(p, {1}); }
    static PolyModP x(std::uint64_t p) { return PolyModP(p, {0, 1}); }

    std::uint64_t modulus() const noexcept { return p_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    const Coeffs& coeffs() const noexcept { return c_; }
    std::uint64_t lead() const { return c_.back(); }

    friend bool operator==(const PolyModP&, const PolyModP&) = default;

private:
    std::uint64_t p_;
    Coeffs c_;
};

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

PolyModP add(const PolyModP& a, const PolyModP& b);
PolyModP sub(const PolyModP& a, const PolyModP& b);
PolyModP mul(const PolyModP& a, const PolyModP& b);
std::pair<PolyModP, PolyModP> divmod(const PolyModP& a, const PolyModP& b);
PolyModP rem(const PolyModP& a, const PolyModP& b);
PolyModP quot(const PolyModP& a, const PolyModP& b);
PolyModP monic(const PolyModP& a);
PolyModP gcd(PolyModP a, PolyModP b);
PolyModP derivative(const PolyModP& a);
PolyModP powmod(const PolyModP& base, std::uint64_t exp, const PolyModP& modulus);

struct Factor
{
    PolyModP poly;
    int multiplicity;
};

// f = prod g_i^{i}, each g_i squarefree and pairwise coprime; input must be monic.
std::vector<Factor> squarefree_decomposition(const PolyModP& f);

// Splits a squarefree monic polynomial into (product of all degree-d irreducible factors, d).
std::vector<std::pair<PolyModP, int>> distinct_degree(const PolyModP& f);

// Splits a product of distinct degree-d irreducibles into its irreducible factors.
std::vector<PolyModP> equal_degree(const PolyModP& f, int d, std::uint64_t seed);

// Complete factorization of a monic polynomial into monic irreducibles with multiplicity,
// sorted by (degree, coefficients).
std::vector<Factor> factor(const PolyModP& f, std::uint64_t seed);

// (multiplicity, degree) of each irreducible factor of a monic f, using squarefree and
// distinct-degree factorization only.
std::vector<std::pair<int, int>> factor_degrees(const PolyModP& f);

} // namespace rprime::polymod

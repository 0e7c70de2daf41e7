#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rprime/errors.hpp"
#include "rprime/polymod.hpp"

namespace rprime
{

enum class FieldKind
{
    rational,
    quadratic,
    monogenic,
};

/// Ramification index and residue degree of one prime ideal above p.
struct PrimeSlot
{
    int e;
    int f;
    friend auto operator<=>(const PrimeSlot&, const PrimeSlot&) = default;
};

/// Multiset of (e_i, f_i) over the primes above a rational prime, sorted by (f, e).
class SplittingType
{
public:
    explicit SplittingType(std::vector<PrimeSlot> entries);

    const std::vector<PrimeSlot>& entries() const noexcept { return entries_; }
    int degree_sum() const noexcept;
    bool unramified() const noexcept;
    int count_degree_one() const noexcept;
    std::string str() const;

    friend bool operator==(const SplittingType&, const SplittingType&) = default;

private:
    std::vector<PrimeSlot> entries_;
};

struct FieldLimits
{
    std::uint64_t trial_division_bound = 10'000'000;
    std::int64_t max_coefficient = 1'000'000'000;
    int irreducibility_primes = 25;
};

/// An absolute number field: ℚ, a quadratic field ℚ(√d), or ℚ(θ) with f(θ) = 0 and O_K = ℤ[θ].
/// Immutable once built; safe to query concurrently.
class FieldDescriptor
{
public:
    FieldKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return degree_; }
    int r1() const noexcept { return r1_; }
    int r2() const noexcept { return r2_; }
    /// Absolute value of the field discriminant.
    std::uint64_t disc() const noexcept { return disc_abs_; }
    std::int64_t signed_disc() const noexcept { return disc_signed_; }
    /// Squarefree d for quadratic kind; 0 otherwise.
    std::int64_t quadratic_d() const noexcept { return quad_d_; }
    /// Defining polynomial, constant term first (monogenic kind only).
    const std::vector<std::int64_t>& polynomial() const noexcept { return poly_; }
    /// Canonical field-spec string (`rational`, `quad:<d>`, `poly:<c0,...,cn>`).
    const std::string& spec() const noexcept { return spec_; }
    /// Rational primes dividing the discriminant.
    const std::vector<std::uint64_t>& ramified_primes() const noexcept { return ramified_; }
    /// True for ℚ, quadratic fields and degree-2 monogenic fields.
    bool is_quadratic_or_rational() const noexcept { return degree_ <= 2; }

    friend FieldDescriptor make_rational();
    friend FieldDescriptor make_quadratic(std::int64_t d);
    friend FieldDescriptor make_monogenic(std::vector<std::int64_t> coeffs, const FieldLimits& limits);

private:
    FieldDescriptor() = default;

    FieldKind kind_ = FieldKind::rational;
    int degree_ = 1;
    int r1_ = 1;
    int r2_ = 0;
    std::uint64_t disc_abs_ = 1;
    std::int64_t disc_signed_ = 1;
    std::int64_t quad_d_ = 0;
    std::vector<std::int64_t> poly_;
    std::vector<std::uint64_t> ramified_;
    std::string spec_ = "rational";
};

FieldDescriptor make_rational();
FieldDescriptor make_quadratic(std::int64_t d);
FieldDescriptor make_monogenic(std::vector<std::int64_t> coeffs, const FieldLimits& limits = {});

/// How the rational prime p decomposes in O_K. Pure; p must be prime and < 2^32.
SplittingType splitting_type(const FieldDescriptor& field, std::uint64_t p);

/// Full factorization of the defining polynomial modulo p (monogenic kind only).
std::vector<polymod::Factor> factor_defining_polynomial(const FieldDescriptor& field, std::uint64_t p,
                                                        std::uint64_t seed);

/// Parses `rational`, `quad:<d>` or `poly:<c0,...,cn>`.
FieldDescriptor parse_field_spec(std::string_view spec, const FieldLimits& limits = {});

// Arithmetic helpers shared with the analytic module.
int kronecker(std::int64_t a, std::uint64_t n);
bool is_squarefree(std::uint64_t n);
bool is_prime(std::uint64_t n);
std::int64_t fundamental_discriminant(std::int64_t squarefree_d);
bool is_fundamental_discriminant(std::int64_t D);
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Exact discriminant of a monic integer polynomial; throws DiscTooLarge if it leaves int64.
std::int64_t polynomial_discriminant(const std::vector<std::int64_t>& coeffs);
/// Number of distinct real roots, by a Sturm sequence in exact rational arithmetic.
int count_real_roots(const std::vector<std::int64_t>& coeffs);

} // namespace rprime

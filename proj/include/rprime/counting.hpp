#pragma once

#include <cstdint>
#include <vector>

#include "rprime/int128.hpp"
#include "rprime/multsieve.hpp"
#include "rprime/numberfield.hpp"

namespace rprime
{

/// One evaluation row: I_K(x), V_m^r(x,K), the main term c^m x^m / ζ_K(rm) and E = V - main.
struct CountResult
{
    double x = 0;
    i128 I = 0;
    i128 V = 0;
    double main = 0;
    double E = 0;
    int m = 1;
    int r = 1;
};

/// E exactly as stored in CountResult.
inline double error_from(i128 V, double main)
{
    return static_cast<double>(static_cast<long double>(V) - static_cast<long double>(main));
}

/// I_K(x) = A(⌊x⌋); zero for x < 1.
std::int64_t ideal_count(const CoeffTable& table, double x);

/// V_m^r(x,K) = Σ_{k ≤ x^{1/r}} m(k) I_K(x/k^r)^m, parallel over k. Returns 1 for (m,r) = (1,1).
i128 count_rprime(const CoeffTable& table, double x, int m, int r);

/// The same grouped Möbius sum without the (1,1) shortcut, parallel over k.
i128 moebius_sum(const CoeffTable& table, std::uint64_t X, int m, int r);
/// Serial reference for moebius_sum.
i128 moebius_sum_reference(const CoeffTable& table, std::uint64_t X, int m, int r);

struct IdealFactor
{
    std::uint64_t p;
    int slot;
    int exponent;
    friend auto operator<=>(const IdealFactor&, const IdealFactor&) = default;
};

/// An ideal given by its prime-ideal factorization; prime ideals are (p, slot) with norm p^{f_slot}.
struct IdealHandle
{
    std::vector<IdealFactor> factorization;
    std::uint64_t norm = 1;
    friend bool operator==(const IdealHandle&, const IdealHandle&) = default;
};

struct OracleLimits
{
    double max_x = 10'000;
    double max_tuples = 1e8;
};

/// Every ideal of norm ≤ x exactly once, sorted by norm then factorization.
std::vector<IdealHandle> enumerate_ideals(const FieldDescriptor& field, double x, const OracleLimits& limits = {});

/// Number of relatively r-prime m-tuples of ideals of norm ≤ x, by direct tuple enumeration.
i128 brute_force_rprime(const FieldDescriptor& field, double x, int m, int r, const OracleLimits& limits = {});

/// brute_force_rprime at every integer 0..X in one enumeration (index = x).
std::vector<i128> brute_force_rprime_series(const FieldDescriptor& field, std::uint64_t X, int m, int r,
                                            const OracleLimits& limits = {});

} // namespace rprime

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "rprime/multsieve.hpp"
#include "rprime/numberfield.hpp"

namespace rprime
{

enum class ResidueMethod
{
    exact_rational,
    exact_quadratic,
    regression_estimate,
};

std::string_view to_string(ResidueMethod method);

/// Residue c of ζ_K at s = 1, with the class-number data when it is exact.
struct ResidueInfo
{
    double c = 1;
    ResidueMethod method = ResidueMethod::exact_rational;
    std::int64_t h = 1;
    double R = 1;
    int w = 2;
    double uncertainty = 0;
};

struct ResidueOptions
{
    bool force_regression = false;
    int regression_points = 200;
    std::uint64_t min_regression_N = 100'000;
};

ResidueInfo residue_c(const FieldDescriptor& field, const CoeffTable* table = nullptr, const ResidueOptions& opts = {});

/// Least-squares slope of I_K(x) against x on a geometric grid over [N/10, N].
ResidueInfo residue_by_regression(const CoeffTable& table, int points = 200);

/// L(1, χ_D) by the finite character sums.
double dirichlet_L1(std::int64_t D);

/// Class number of the quadratic field of fundamental discriminant D.
std::int64_t class_number_quadratic(std::int64_t D, std::uint64_t max_abs_D = 1'000'000);

/// log of the fundamental unit of ℚ(√d), d squarefree > 1, via continued fractions.
double fundamental_unit_regulator(std::int64_t d);

/// Roots of unity in a quadratic field of discriminant D (2 for real fields and ℚ).
int roots_of_unity(const FieldDescriptor& field);

struct ZetaValue
{
    double value = 0;
    /// Bound on |log ζ_K(s) - log value|.
    double tail_bound = 0;
    /// Bound on |ζ_K(s) - value| implied by tail_bound.
    double abs_error_bound() const;
};

/// Truncated Euler product over p ≤ P with a certified tail bound.
ZetaValue zeta_K_real(const FieldDescriptor& field, double s, std::uint64_t P);

/// ζ_K(s) for integer s ≥ 2 through ζ(s)·L(s, χ_D) (ℚ and quadratic fields) or the Euler
/// product with the cutoff needed for a 1e-10 relative tail, capped at `max_P` (other fields).
/// Memoized per (field, s).
ZetaValue zeta_K_special(const FieldDescriptor& field, int s, std::uint64_t max_P = 1'000'000);

/// L(s, χ_D) for integer s ≥ 2 via Hurwitz zeta values.
double dirichlet_L(std::int64_t D, int s);

/// c^m x^m / ζ_K(rm).
double main_term(const FieldDescriptor& field, double x, int m, int r, const ResidueInfo& residue);

} // namespace rprime

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rprime/errors.hpp"

namespace rprime
{

/// One O-term x^{x_exp} D^{D_exp} (log x)^{log_pow}.
struct BoundTerm
{
    double x_exp = 0;
    double D_exp = 0;
    double log_pow = 0;
};

enum class TransferCase
{
    r_above_one,
    r_above_one_critical,
    r_one_m_above_two,
    r_one_m_two,
};

std::string_view to_string(TransferCase c);

struct TransferResult
{
    TransferCase which;
    std::vector<BoundTerm> terms;
    /// The lemma's hypothesis, as written and with alpha, beta substituted.
    std::string side_condition;
    std::string side_condition_numeric;

    /// Largest x-exponent among the terms (the growth rate for a fixed field).
    double dominant_x() const;
    bool side_condition_holds(double x, double D) const;

    double alpha = 0;
    double beta = 0;
};

inline constexpr double kCaseTolerance = 1e-12;

/// Maps I_K(x) = cx + O(x^{1-alpha} D^beta) to the E_m^r(x,K) bound, case by case.
/// InvalidCase when rm < 2 or alpha is outside (0, 1].
TransferResult transfer_error_exponents(double alpha, double beta, int m, int r);

enum class TargetStatus
{
    theorem,
    conjecture,
    prior_work,
    proof_display,
};

enum class Family
{
    all,
    abelian,
    cubic,
    fixed_field,
};

/// Which error the base exponents describe: Δ_K(x) = I_K(x) - cx or E_m^r(x,K) directly.
enum class TargetTerm
{
    delta,
    rprime,
};

std::string_view to_string(TargetStatus s);
std::string_view to_string(Family f);
std::string_view to_string(TargetTerm t);
std::optional<Family> parse_family(std::string_view s);

struct TargetScope
{
    Family family = Family::all;
    int n_min = 1;
    int n_max = 1;
    std::string mr = "rm >= 2";
    std::string side_condition;
    /// Numeric form of side_condition with eps = 0; empty means no condition.
    std::function<bool(double x, double D)> side_holds;

    bool covers_degree(int n) const { return n >= n_min && n <= n_max; }
};

struct ExponentTarget
{
    std::string name;
    TargetStatus status = TargetStatus::theorem;
    TargetScope scope;
    TargetTerm term = TargetTerm::delta;
    /// Delta entries: the Δ_K bound. Rprime-only entries: the (m,r) = (2,1) form.
    double x_exp = 0;
    double D_exp = 0;
    double log_pow = 0;
    std::optional<double> alpha;
    std::optional<double> beta;
    /// E bound as written alongside the entry, when the source states one.
    std::function<std::optional<BoundTerm>(int m, int r)> stated_E;

    /// Lemma transfer of (alpha, beta); empty without alpha or when the pair is outside the lemma.
    std::optional<TransferResult> transferred(int m, int r) const;
    std::optional<BoundTerm> stated(int m, int r) const;
    /// x-exponent to compare an empirical fit with: Δ exponent in delta mode, otherwise the
    /// stated E exponent when present, else the transferred dominant exponent.
    std::optional<double> comparison_exponent(bool delta_mode, int m, int r) const;
};

/// Largest degree for which degree-parametrised entries are instantiated.
inline constexpr int kCatalogMaxDegree = 100;

const std::vector<ExponentTarget>& target_catalog();

struct TargetFilter
{
    std::optional<int> n;
    std::optional<Family> family;
};

std::vector<const ExponentTarget*> applicable_targets(const TargetFilter& filter);

/// Families a field belongs to, for matching scan results against catalog scopes.
std::vector<Family> field_families(int degree, long long signed_disc);

double abelian_c(int n);

} // namespace rprime

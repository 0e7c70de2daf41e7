#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rprime/analytic.hpp"
#include "rprime/catalog.hpp"
#include "rprime/counting.hpp"

namespace rprime
{

/// Rows of I, V, main term and E at each x. Requires rm >= 2.
std::vector<CountResult> error_series(const FieldDescriptor& field, const CoeffTable& table,
                                      const ResidueInfo& residue, const std::vector<double>& xs, int m, int r);

struct DeltaRow
{
    double x = 0;
    std::int64_t I = 0;
    double main = 0; ///< c·x
    double delta = 0;
};

/// Δ_K(x) = I_K(x) - c·x at each x.
std::vector<DeltaRow> delta_series(const CoeffTable& table, const ResidueInfo& residue, const std::vector<double>& xs);

struct FitResult
{
    double exponent = 0;
    double intercept = 0;
    double std_error = 0;
    int points_used = 0;
    bool envelope = false;
    /// Every value was zero; exponent is -inf.
    bool all_zero = false;
};

/// Least-squares slope of log|value| against log x, optionally on the dyadic max-envelope.
/// Throws TooFewPoints when fewer than three usable points remain.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, bool envelope);

/// One point per window [2^j, 2^{j+1}) carrying the largest |value|.
std::vector<std::pair<double, double>> dyadic_envelope(const std::vector<std::pair<double, double>>& points);

/// `samples` geometric points in [lo, hi], snapped to k + 1/2 and deduplicated.
std::vector<double> half_integer_grid(double lo, double hi, int samples);

struct TargetVerdict
{
    const ExponentTarget* target = nullptr;
    double bound = 0;
    bool consistent = false;
};

/// Compares a fitted x-exponent with every catalog entry that covers the field, within `slack`.
std::vector<TargetVerdict> compare_with_targets(double fitted, int degree, long long signed_disc, bool delta_mode,
                                                int m, int r, double slack);

struct SweepOptions
{
    std::vector<double> trial_exponents{0.5, 1.0, 1.5};
};

struct SweepRow
{
    std::string field;
    std::int64_t d = 0;
    std::int64_t D = 0;
    double c = 0;
    double max_abs_E = 0;
    double x_at_max = 0;
    /// Per-field envelope fit; empty when the grid is too short.
    std::optional<FitResult> fit;
    std::vector<double> ratios; ///< max |E|/x^a for each trial exponent
    /// Grid points meeting x^{2n} > D^{n+4} at n = 2 (reported, nothing is filtered).
    int side_condition_points = 0;
    int grid_points = 0;
};

/// Coefficients of log|E| ~ b0 + bx log x + bD log D.
struct JointFit
{
    double x_exp = 0, x_stderr = 0;
    double D_exp = 0, D_stderr = 0;
    double intercept = 0;
    int points_used = 0;
};

struct SweepResult
{
    int m = 2, r = 1;
    std::vector<double> xs;
    std::vector<double> trial_exponents;
    std::vector<SweepRow> rows;
    std::optional<FitResult> x_fit;
    std::optional<FitResult> D_fit;
    std::string D_fit_error;
    std::optional<JointFit> joint_fit;
    std::string joint_fit_error;
};

/// E_m^r over quadratic fields; parallel across fields, rows kept in input order.
SweepResult discriminant_sweep(const std::vector<FieldDescriptor>& fields, const std::vector<double>& xs, int m, int r,
                               const SweepOptions& opts = {});

} // namespace rprime

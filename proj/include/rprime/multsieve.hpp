#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rprime/numberfield.hpp"

namespace rprime
{

/// Coefficients of ζ_K(s) = Σ a(n) n^{-s} and 1/ζ_K(s) = Σ m(n) n^{-s} for n ≤ N.
/// Arrays are 1-indexed (slot 0 is unused and zero). Empty arrays mean "not computed".
struct CoeffTable
{
    std::string field_spec;
    std::uint64_t N = 0;
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> m;
    std::vector<std::int64_t> A; ///< A(n) = a(1) + ... + a(n)

    bool has_zeta() const noexcept { return !a.empty(); }
    bool has_moebius() const noexcept { return !m.empty(); }
};

struct LocalCoeffs
{
    std::vector<std::int64_t> a; ///< a(p^0..p^k)
    std::vector<std::int64_t> m; ///< m(p^0..p^k)
};

/// Euler-factor coefficients at one prime: a via unbounded partitions of j into the
/// residue degrees, m via signed subset sums.
LocalCoeffs local_coeffs(const SplittingType& st, int max_exponent);

struct SieveOptions
{
    std::uint64_t memory_budget_bytes = std::uint64_t{2} << 30;
    std::uint64_t segment_size = std::uint64_t{1} << 16;
    bool overflow_checked = false;
};

/// a, m and A up to N with the segmented OpenMP kernel.
CoeffTable build_tables(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts = {});
/// a and A only.
CoeffTable sieve_zeta_coeffs(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts = {});
/// m only.
CoeffTable sieve_moebius_coeffs(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts = {});

/// Serial linear sieve over the smallest-prime-factor array; reference for the parallel kernel.
CoeffTable build_tables_reference(const FieldDescriptor& field, std::uint64_t N);

/// Splitting data for all primes up to `limit`, computed in parallel, indexed like primes_up_to(limit).
std::vector<SplittingType> splitting_table(const FieldDescriptor& field, std::span<const std::uint64_t> primes);

// On-disk cache: magic, version, field spec, N, then a, m and A as little-endian int64.
inline constexpr std::uint32_t kCacheVersion = 1;

std::uint64_t spec_hash(std::string_view spec);
std::filesystem::path cache_path(const std::filesystem::path& dir, std::string_view spec, std::uint64_t N);
void save_table(const std::filesystem::path& path, const CoeffTable& table);
std::optional<CoeffTable> load_table(const std::filesystem::path& path, std::string_view spec, std::uint64_t N);

/// build_tables, reusing or populating the cache when a directory is given.
CoeffTable cached_tables(const FieldDescriptor& field, std::uint64_t N,
                         const std::optional<std::filesystem::path>& cache_dir, const SieveOptions& opts = {});

} // namespace rprime

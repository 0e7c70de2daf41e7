#include "rprime/multsieve.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <omp.h>

namespace rprime
{

LocalCoeffs local_coeffs(const SplittingType& st, int max_exponent)
{
    const std::size_t k = static_cast<std::size_t>(std::max(max_exponent, 0));
    LocalCoeffs out{std::vector<std::int64_t>(k + 1, 0), std::vector<std::int64_t>(k + 1, 0)};
    out.a[0] = 1;
    out.m[0] = 1;
    for (const auto& slot : st.entries()) {
        const std::size_t f = static_cast<std::size_t>(slot.f);
        for (std::size_t j = f; j <= k; ++j) out.a[j] += out.a[j - f];
        for (std::size_t j = k + 1; j-- > f;) out.m[j] -= out.m[j - f];
    }
    return out;
}

namespace
{

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

int max_exponent(std::uint64_t p, std::uint64_t N)
{
    int k = 0;
    std::uint64_t pk = 1;
    while (pk <= N / p) {
        pk *= p;
        ++k;
    }
    return k;
}

void check_capacity(std::uint64_t N, const SieveOptions& opts)
{
    if (N < 1) fail(ErrorKind::OutOfRange, "sieve bound must be at least 1");
    // a, m, A (8 bytes each) + degree-one counts + prime list (~N/ln N entries).
    const long double bytes = static_cast<long double>(N + 1) * 25.0L +
                              static_cast<long double>(N) / std::max(1.0L, std::log(static_cast<long double>(N))) * 8.0L;
    if (bytes > static_cast<long double>(opts.memory_budget_bytes))
        fail(ErrorKind::Capacity,
             fmt::format("N = {} needs about {:.0f} MiB, above the {} MiB budget", N, static_cast<double>(bytes / 1048576.0L),
                         opts.memory_budget_bytes >> 20));
}

inline bool mul_into(std::int64_t& acc, std::int64_t factor, bool checked)
{
    if (!checked) {
        acc *= factor;
        return true;
    }
    return !__builtin_mul_overflow(acc, factor, &acc);
}

void fill_prefix(CoeffTable& t)
{
    t.A.assign(t.N + 1, 0);
    std::int64_t acc = 0;
    for (std::uint64_t n = 1; n <= t.N; ++n) {
        acc += t.a[n];
        t.A[n] = acc;
    }
}

} // namespace

std::vector<SplittingType> splitting_table(const FieldDescriptor& field, std::span<const std::uint64_t> primes)
{
    std::vector<SplittingType> out(primes.size(), SplittingType({{1, 1}}));
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t i = 0; i < primes.size(); ++i) out[i] = splitting_type(field, primes[i]);
    return out;
}

CoeffTable build_tables(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts)
{
    check_capacity(N, opts);
    const auto primes = primes_up_to(N);
    const std::uint64_t root = isqrt(N);

    // Degree-one prime counts for every p ≤ N; full local series for p ≤ √N.
    std::vector<std::int8_t> deg1(N + 1, 0);
    std::size_t small_count = 0;
    while (small_count < primes.size() && primes[small_count] <= root) ++small_count;
    std::vector<LocalCoeffs> small(small_count);
#pragma omp parallel for schedule(dynamic, 512)
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        const SplittingType st = splitting_type(field, p);
        deg1[p] = static_cast<std::int8_t>(st.count_degree_one());
        if (i < small_count) small[i] = local_coeffs(st, max_exponent(p, N));
    }

    CoeffTable t;
    t.field_spec = field.spec();
    t.N = N;
    t.a.assign(N + 1, 0);
    t.m.assign(N + 1, 0);

    const std::uint64_t seg = std::max<std::uint64_t>(opts.segment_size, 64);
    const std::uint64_t segments = (N + seg - 1) / seg;
    std::atomic<bool> overflow{false};
    const bool checked = opts.overflow_checked;

#pragma omp parallel
    {
        std::vector<std::uint64_t> rem(seg);
#pragma omp for schedule(dynamic, 1)
        for (std::uint64_t s = 0; s < segments; ++s) {
            const std::uint64_t lo = 1 + s * seg;
            const std::uint64_t hi = std::min(N + 1, lo + seg);
            for (std::uint64_t n = lo; n < hi; ++n) {
                rem[n - lo] = n;
                t.a[n] = 1;
                t.m[n] = 1;
            }
            const std::uint64_t seg_root = isqrt(hi - 1);
            bool ok = true;
            for (std::size_t i = 0; i < small_count && primes[i] <= seg_root; ++i) {
                const std::uint64_t p = primes[i];
                const auto& loc = small[i];
                for (std::uint64_t n = (lo + p - 1) / p * p; n < hi; n += p) {
                    std::uint64_t& r = rem[n - lo];
                    std::size_t j = 0;
                    do {
                        r /= p;
                        ++j;
                    } while (r % p == 0);
                    ok &= mul_into(t.a[n], loc.a[j], checked);
                    ok &= mul_into(t.m[n], loc.m[j], checked);
                }
            }
            for (std::uint64_t n = lo; n < hi; ++n) {
                const std::uint64_t q = rem[n - lo];
                if (q == 1) continue;
                const std::int64_t c = deg1[q];
                ok &= mul_into(t.a[n], c, checked);
                ok &= mul_into(t.m[n], -c, checked);
            }
            if (!ok) overflow = true;
        }
    }
    if (overflow) fail(ErrorKind::Overflow, fmt::format("coefficient overflow while sieving {} to {}", field.spec(), N));
    fill_prefix(t);
    return t;
}

CoeffTable sieve_zeta_coeffs(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts)
{
    CoeffTable t = build_tables(field, N, opts);
    t.m.clear();
    t.m.shrink_to_fit();
    return t;
}

CoeffTable sieve_moebius_coeffs(const FieldDescriptor& field, std::uint64_t N, const SieveOptions& opts)
{
    CoeffTable t = build_tables(field, N, opts);
    t.a.clear();
    t.a.shrink_to_fit();
    t.A.clear();
    t.A.shrink_to_fit();
    return t;
}

CoeffTable build_tables_reference(const FieldDescriptor& field, std::uint64_t N)
{
    if (N < 1) fail(ErrorKind::OutOfRange, "sieve bound must be at least 1");
    CoeffTable t;
    t.field_spec = field.spec();
    t.N = N;
    t.a.assign(N + 1, 0);
    t.m.assign(N + 1, 0);
    std::vector<std::uint64_t> spf(N + 1, 0), low(N + 1, 0), primes;
    t.a[1] = t.m[1] = 1;
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (spf[i] == 0) {
            spf[i] = i;
            low[i] = i;
            primes.push_back(i);
            const LocalCoeffs loc = local_coeffs(splitting_type(field, i), max_exponent(i, N));
            std::uint64_t pk = i;
            for (std::size_t j = 1; j < loc.a.size(); ++j, pk *= i) {
                t.a[pk] = loc.a[j];
                t.m[pk] = loc.m[j];
            }
        }
        for (std::uint64_t p : primes) {
            if (p > spf[i] || i * p > N) break;
            const std::uint64_t n = i * p;
            spf[n] = p;
            low[n] = (p == spf[i]) ? low[i] * p : p;
        }
        if (low[i] != i) {
            t.a[i] = t.a[low[i]] * t.a[i / low[i]];
            t.m[i] = t.m[low[i]] * t.m[i / low[i]];
        }
    }
    fill_prefix(t);
    return t;
}

// ---------------------------------------------------------------------------
// Cache

namespace
{

constexpr char kMagic[8] = {'R', 'P', 'R', 'I', 'M', 'E', 'C', 'T'};

template <typename T>
T byteswap(T v)
{
    if constexpr (sizeof(T) == 4) {
        return std::bit_cast<T>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    } else {
        return std::bit_cast<T>(__builtin_bswap64(std::bit_cast<std::uint64_t>(v)));
    }
}

template <typename T>
void write_le(std::ostream& os, T v)
{
    if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool read_le(std::istream& is, T& v)
{
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) return false;
    if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
    return true;
}

void write_array(std::ostream& os, const std::vector<std::int64_t>& v)
{
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data() + 1), static_cast<std::streamsize>((v.size() - 1) * sizeof(std::int64_t)));
    } else {
        for (std::size_t i = 1; i < v.size(); ++i) write_le(os, v[i]);
    }
}

bool read_array(std::istream& is, std::vector<std::int64_t>& v, std::uint64_t N)
{
    v.assign(N + 1, 0);
    if (!is.read(reinterpret_cast<char*>(v.data() + 1), static_cast<std::streamsize>(N * sizeof(std::int64_t)))) return false;
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& x : v) x = byteswap(x);
    }
    return true;
}

} // namespace

std::uint64_t spec_hash(std::string_view spec)
{
    // FNV-1a, 64-bit.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : spec) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, std::string_view spec, std::uint64_t N)
{
    return dir / fmt::format("{:016x}-{}.bin", spec_hash(spec), N);
}

void save_table(const std::filesystem::path& path, const CoeffTable& table)
{
    if (!table.has_zeta() || !table.has_moebius()) fail(ErrorKind::CacheFormat, "only complete tables can be cached");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::CacheFormat, fmt::format("cannot write cache file {}", path.string()));
    os.write(kMagic, sizeof kMagic);
    write_le<std::uint32_t>(os, kCacheVersion);
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(table.field_spec.size()));
    os.write(table.field_spec.data(), static_cast<std::streamsize>(table.field_spec.size()));
    write_le<std::uint64_t>(os, table.N);
    write_array(os, table.a);
    write_array(os, table.m);
    write_array(os, table.A);
    if (!os) fail(ErrorKind::CacheFormat, fmt::format("short write to {}", path.string()));
}

std::optional<CoeffTable> load_table(const std::filesystem::path& path, std::string_view spec, std::uint64_t N)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    std::uint32_t version = 0, len = 0;
    if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
    if (!read_le(is, version) || version != kCacheVersion || !read_le(is, len)) return std::nullopt;
    std::string stored(len, '\0');
    if (!is.read(stored.data(), len) || stored != spec) return std::nullopt;
    CoeffTable t;
    t.field_spec = stored;
    if (!read_le(is, t.N) || t.N != N) return std::nullopt;
    if (!read_array(is, t.a, N) || !read_array(is, t.m, N) || !read_array(is, t.A, N)) return std::nullopt;
    return t;
}

CoeffTable cached_tables(const FieldDescriptor& field, std::uint64_t N,
                         const std::optional<std::filesystem::path>& cache_dir, const SieveOptions& opts)
{
    if (!cache_dir) return build_tables(field, N, opts);
    const auto path = cache_path(*cache_dir, field.spec(), N);
    if (auto hit = load_table(path, field.spec(), N)) return std::move(*hit);
    CoeffTable t = build_tables(field, N, opts);
    std::filesystem::create_directories(*cache_dir);
    save_table(path, t);
    return t;
}

} // namespace rprime

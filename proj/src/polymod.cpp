#include "rprime/polymod.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace rprime::polymod
{

namespace
{

void trim(Coeffs& c)
{
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t p)
{
    const std::int64_t sp = static_cast<std::int64_t>(p);
    std::int64_t r = v % sp;
    if (r < 0) r += sp;
    return static_cast<std::uint64_t>(r);
}

PolyModP pth_root(const PolyModP& f)
{
    const std::uint64_t p = f.modulus();
    Coeffs out;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) out.push_back(f.coeffs()[i]);
    return PolyModP(p, std::move(out));
}

PolyModP random_poly(std::uint64_t p, int below_degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    Coeffs c(static_cast<std::size_t>(below_degree));
    for (auto& v : c) v = dist(rng);
    return PolyModP(p, std::move(c));
}

bool poly_less(const PolyModP& a, const PolyModP& b)
{
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs().rbegin(), a.coeffs().rend(),
                                        b.coeffs().rbegin(), b.coeffs().rend());
}

} // namespace

PolyModP::PolyModP(std::uint64_t p, Coeffs c) : p_(p), c_(std::move(c))
{
    if (p < 2 || p >= (std::uint64_t{1} << 32)) throw std::invalid_argument("modulus out of range");
    for (auto& v : c_) v %= p_;
    trim(c_);
}

PolyModP PolyModP::from_integers(std::uint64_t p, std::span<const std::int64_t> coeffs)
{
    Coeffs c;
    c.reserve(coeffs.size());
    for (auto v : coeffs) c.push_back(reduce_signed(v, p));
    return PolyModP(p, std::move(c));
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p)
{
    std::uint64_t result = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1) result = result * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p)
{
    assert(a % p != 0);
    return pow_mod(a, p - 2, p);
}

PolyModP add(const PolyModP& a, const PolyModP& b)
{
    const auto p = a.modulus();
    Coeffs c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] = a.coeffs()[i];
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] = (c[i] + b.coeffs()[i]) % p;
    return PolyModP(p, std::move(c));
}

PolyModP sub(const PolyModP& a, const PolyModP& b)
{
    const auto p = a.modulus();
    Coeffs c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] = a.coeffs()[i];
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] = (c[i] + p - b.coeffs()[i]) % p;
    return PolyModP(p, std::move(c));
}

PolyModP mul(const PolyModP& a, const PolyModP& b)
{
    const auto p = a.modulus();
    if (a.is_zero() || b.is_zero()) return PolyModP::zero(p);
    Coeffs c(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const std::uint64_t ai = a.coeffs()[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] = (c[i + j] + ai * b.coeffs()[j]) % p;
    }
    return PolyModP(p, std::move(c));
}

std::pair<PolyModP, PolyModP> divmod(const PolyModP& a, const PolyModP& b)
{
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    const auto p = a.modulus();
    if (a.degree() < b.degree()) return {PolyModP::zero(p), a};
    Coeffs r = a.coeffs();
    Coeffs q(static_cast<std::size_t>(a.degree() - b.degree() + 1), 0);
    const std::uint64_t inv_lead = inv_mod(b.lead(), p);
    const auto& bc = b.coeffs();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        const std::uint64_t top = r[static_cast<std::size_t>(k) + bc.size() - 1];
        if (top == 0) continue;
        const std::uint64_t factor = top * inv_lead % p;
        q[static_cast<std::size_t>(k)] = factor;
        for (std::size_t j = 0; j < bc.size(); ++j) {
            auto& slot = r[static_cast<std::size_t>(k) + j];
            slot = (slot + p - factor * bc[j] % p) % p;
        }
    }
    return {PolyModP(p, std::move(q)), PolyModP(p, std::move(r))};
}

PolyModP rem(const PolyModP& a, const PolyModP& b) { return divmod(a, b).second; }
PolyModP quot(const PolyModP& a, const PolyModP& b) { return divmod(a, b).first; }

PolyModP monic(const PolyModP& a)
{
    if (a.is_zero()) return a;
    const auto p = a.modulus();
    const std::uint64_t inv = inv_mod(a.lead(), p);
    Coeffs c = a.coeffs();
    for (auto& v : c) v = v * inv % p;
    return PolyModP(p, std::move(c));
}

PolyModP gcd(PolyModP a, PolyModP b)
{
    while (!b.is_zero()) {
        PolyModP r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

PolyModP derivative(const PolyModP& a)
{
    const auto p = a.modulus();
    Coeffs c;
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) c.push_back(a.coeffs()[i] * (i % p) % p);
    return PolyModP(p, std::move(c));
}

PolyModP powmod(const PolyModP& base, std::uint64_t exp, const PolyModP& modulus)
{
    const auto p = base.modulus();
    PolyModP result = rem(PolyModP::one(p), modulus);
    PolyModP b = rem(base, modulus);
    while (exp > 0) {
        if (exp & 1) result = rem(mul(result, b), modulus);
        exp >>= 1;
        if (exp > 0) b = rem(mul(b, b), modulus);
    }
    return result;
}

std::vector<Factor> squarefree_decomposition(const PolyModP& f)
{
    const auto p = f.modulus();
    std::vector<Factor> out;
    if (f.degree() < 1) return out;

    const PolyModP fd = derivative(f);
    if (fd.is_zero()) {
        for (auto& [g, k] : squarefree_decomposition(pth_root(f)))
            out.push_back({std::move(g), k * static_cast<int>(p)});
        return out;
    }

    PolyModP c = gcd(f, fd);
    PolyModP w = quot(f, c);
    int i = 1;
    while (!w.is_one()) {
        PolyModP y = gcd(w, c);
        PolyModP fac = monic(quot(w, y));
        if (fac.degree() > 0) out.push_back({std::move(fac), i});
        ++i;
        w = std::move(y);
        c = quot(c, w);
    }
    if (!c.is_one() && c.degree() > 0) {
        for (auto& [g, k] : squarefree_decomposition(monic(pth_root(c))))
            out.push_back({std::move(g), k * static_cast<int>(p)});
    }
    return out;
}

std::vector<std::pair<PolyModP, int>> distinct_degree(const PolyModP& f)
{
    const auto p = f.modulus();
    std::vector<std::pair<PolyModP, int>> out;
    PolyModP g = monic(f);
    PolyModP h = rem(PolyModP::x(p), g);
    int d = 1;
    while (g.degree() >= 2 * d) {
        h = powmod(h, p, g);
        PolyModP dd = gcd(sub(h, PolyModP::x(p)), g);
        if (!dd.is_one()) {
            g = quot(g, dd);
            h = rem(h, g);
            out.emplace_back(std::move(dd), d);
        }
        ++d;
    }
    if (g.degree() > 0) {
        const int deg = g.degree();
        out.emplace_back(std::move(g), deg);
    }
    return out;
}

std::vector<PolyModP> equal_degree(const PolyModP& f, int d, std::uint64_t seed)
{
    const auto p = f.modulus();
    const int count = f.degree() / d;
    std::vector<PolyModP> done;
    std::vector<PolyModP> pending{monic(f)};
    std::mt19937_64 rng(seed);

    while (!pending.empty()) {
        PolyModP u = std::move(pending.back());
        pending.pop_back();
        if (u.degree() == d) {
            done.push_back(std::move(u));
            continue;
        }
        for (;;) {
            PolyModP a = random_poly(p, u.degree(), rng);
            if (a.degree() < 1) continue;
            PolyModP probe = PolyModP::zero(p);
            if (p == 2) {
                // Trace map from F_{2^d} down to F_2.
                PolyModP t = a;
                probe = a;
                for (int j = 1; j < d; ++j) {
                    t = rem(mul(t, t), u);
                    probe = add(probe, t);
                }
            } else {
                // a^{(p^d - 1)/2} = (a * a^p * ... * a^{p^{d-1}})^{(p-1)/2}
                PolyModP t = a;
                PolyModP norm = rem(a, u);
                for (int j = 1; j < d; ++j) {
                    t = powmod(t, p, u);
                    norm = rem(mul(norm, t), u);
                }
                probe = sub(powmod(norm, (p - 1) / 2, u), PolyModP::one(p));
            }
            PolyModP g = gcd(probe, u);
            if (g.degree() > 0 && g.degree() < u.degree()) {
                PolyModP other = monic(quot(u, g));
                pending.push_back(std::move(g));
                pending.push_back(std::move(other));
                break;
            }
        }
    }
    assert(static_cast<int>(done.size()) == count);
    (void)count;
    std::sort(done.begin(), done.end(), poly_less);
    return done;
}

std::vector<Factor> factor(const PolyModP& f, std::uint64_t seed)
{
    std::vector<Factor> out;
    std::uint64_t salt = 0;
    for (const auto& [g, mult] : squarefree_decomposition(monic(f))) {
        for (const auto& [block, d] : distinct_degree(g)) {
            if (block.degree() == d) {
                out.push_back({block, mult});
                continue;
            }
            for (auto& irr : equal_degree(block, d, seed + 0x9e3779b97f4a7c15ULL * ++salt))
                out.push_back({std::move(irr), mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        if (!(a.poly == b.poly)) return poly_less(a.poly, b.poly);
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

std::vector<std::pair<int, int>> factor_degrees(const PolyModP& f)
{
    std::vector<std::pair<int, int>> out;
    for (const auto& [g, mult] : squarefree_decomposition(monic(f))) {
        for (const auto& [block, d] : distinct_degree(g)) {
            for (int k = 0; k < block.degree() / d; ++k) out.emplace_back(mult, d);
        }
    }
    return out;
}

} // namespace rprime::polymod

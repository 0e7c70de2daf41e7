#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rprime
{

enum class ErrorKind
{
    Usage,
    InvalidD,
    NonSquarefree,
    InvalidPolynomial,
    Reducible,
    ReducibleUndetermined,
    NotMonogenic,
    DiscTooLarge,
    Capacity,
    Overflow,
    OutOfRange,
    OracleBoundExceeded,
    NotFundamental,
    RoundingUnsafe,
    InsufficientTable,
    SNotGreaterThanOne,
    InvalidCase,
    TooFewPoints,
    CacheFormat,
};

std::string_view to_string(ErrorKind kind);

// Domain failure. `detail` carries the offending prime for NotMonogenic.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::int64_t> detail = std::nullopt)
        : std::runtime_error(what), kind_(kind), detail_(detail)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::int64_t> detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::optional<std::int64_t> detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              std::optional<std::int64_t> detail = std::nullopt)
{
    throw Error(kind, what, detail);
}

} // namespace rprime

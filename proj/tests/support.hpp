#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rprime/numberfield.hpp"

namespace testing
{

inline const nlohmann::json& frozen()
{
    static const nlohmann::json j = [] {
        std::ifstream in(RPRIME_FROZEN);
        return nlohmann::json::parse(in);
    }();
    return j;
}

// The five fields every cross-check runs over.
inline const std::vector<std::string>& five_specs()
{
    static const std::vector<std::string> s{"rational", "quad:-1", "quad:2", "quad:-5", "poly:-1,-1,0,1"};
    return s;
}

inline std::vector<rprime::FieldDescriptor> five_fields()
{
    std::vector<rprime::FieldDescriptor> out;
    for (const auto& s : five_specs()) out.push_back(rprime::parse_field_spec(s));
    return out;
}

// Fixed seeds so a failing property reproduces.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed'0000ULL + salt); }

inline std::int64_t uniform(std::mt19937_64& g, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

} // namespace testing

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chaintopo {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Strict full-string numeric parsing; return false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

std::vector<std::string_view> split(std::string_view line, char sep);

// Satoshi amount rendered in BTC (e.g. 150000000 -> "1.5").
std::string format_btc(std::int64_t satoshi);

}  // namespace chaintopo

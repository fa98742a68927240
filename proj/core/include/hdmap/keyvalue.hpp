#pragma once

#include <map>
#include <string>
#include <string_view>

namespace hdmap {

/// Flat `key=value` text: one pair per line, `#` starts a comment, whitespace
/// around keys and values is ignored, order is irrelevant. Duplicate keys and
/// lines without '=' raise InputError naming the line.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Locale-independent double parsing; throws InputError naming `key`.
double parse_double(std::string_view key, std::string_view value);
int parse_int(std::string_view key, std::string_view value);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);
/// Fixed-point text with `decimals` digits, locale independent.
std::string format_fixed(double v, int decimals);

std::string read_text_file(const std::string& path);
/// Writes to `path.tmp` then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace hdmap

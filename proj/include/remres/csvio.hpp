#ifndef REMRES_CSVIO_HPP
#define REMRES_CSVIO_HPP

#include <string>
#include <string_view>
#include <vector>

namespace remres::csv {

// Split one line on commas. Fields never contain commas or quotes in any of
// the formats this tool reads or writes, so no quoting rules are needed.
std::vector<std::string> split_line(std::string_view line);

// Split text into lines, accepting LF and CRLF, dropping a trailing blank.
std::vector<std::string> split_lines(std::string_view text);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

double parse_double(std::string_view field);
long long parse_int(std::string_view field);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace remres::csv

#endif

#ifndef REMRES_PROVENANCE_HPP
#define REMRES_PROVENANCE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace remres {

std::string tool_version();

// Hex FNV-1a digest of a blob, used to fingerprint configs in output files.
std::string content_digest(std::string_view content);

// `#`-prefixed header embedded in every artifact written to disk: tool
// version, config digest, master seed, and a timestamp. The timestamp line
// is the only part excluded from determinism comparisons.
void write_provenance(std::ostream& os, const std::string& config_digest,
                      std::uint64_t master_seed);

// Lines of a file with `#` comment lines removed (what determinism and
// round-trip comparisons operate on).
std::vector<std::string> data_lines(std::string_view content);

} // namespace remres

#endif

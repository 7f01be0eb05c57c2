#include "remres/provenance.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>

#include "remres/csvio.hpp"
#include "remres/rng.hpp"

namespace remres {

std::string tool_version()
{
#ifdef REMRES_VERSION_STRING
    return REMRES_VERSION_STRING;
#else
    return "dev";
#endif
}

std::string content_digest(std::string_view content)
{
    rng::StableHash h;
    h.mix_bytes(content.data(), content.size());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h.value());
    return buf;
}

void write_provenance(std::ostream& os, const std::string& config_digest,
                      std::uint64_t master_seed)
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[40];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

    os << "# remres " << tool_version() << "\n";
    os << "# config: " << config_digest << "\n";
    os << "# master_seed: " << master_seed << "\n";
    os << "# timestamp: " << stamp << "\n";
}

std::vector<std::string> data_lines(std::string_view content)
{
    std::vector<std::string> out;
    for (auto& line : csv::split_lines(content)) {
        if (!line.empty() && line[0] == '#')
            continue;
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace remres

#ifndef REMRES_SUMMARY_HPP
#define REMRES_SUMMARY_HPP

#include <optional>
#include <string>
#include <vector>

#include "remres/experiment.hpp"
#include "remres/stats.hpp"

namespace remres {

// Which cell coordinates define a summary group.
struct GroupBy {
    bool attack = false;
    bool fraction = false;
    bool specialist = false;

    static GroupBy parse(const std::string& comma_list); // "attack,fraction,specialist"
};

// Whether treatment/control samples pool replicates across networks or
// collapse each network to its replicate mean first.
enum class BaselineMode { Pooled, NetworkMeans };

BaselineMode baseline_mode_from_name(const std::string& name);

// One group x metric comparison. comparison is "vs_control" for
// treatment-against-baseline cells, or "specialist_vs_nonspecialist" for the
// between-group test on per-row percent changes.
struct SummaryCell {
    std::optional<AttackKind> attack;
    std::optional<double> fraction;
    std::optional<bool> specialist;
    std::string comparison;
    std::string metric;
    std::size_t n_treatment = 0;
    std::size_t n_control = 0;
    double treatment_mean = 0.0;
    double control_mean = 0.0;
    std::optional<double> pct_diff;
    std::optional<WelchResult> welch;
    std::string stars; // "***" p<0.001, "**" p<0.01, "*" p<0.05
};

// Per group and metric: treatment mean, the same networks' control mean, the
// percent difference, and a Welch test of treatment vs control. Missing
// metric values are excluded pairwise; the n columns report what survived.
// When the grouping includes specialist, specialist-vs-nonspecialist cells
// compare per-row percent changes from each network's own control mean.
std::vector<SummaryCell> summarize_vs_baseline(const std::vector<ResultRow>& rows,
                                               const GroupBy& group_by,
                                               BaselineMode mode = BaselineMode::Pooled);

extern const std::string kSummaryCsvHeader;
std::string summary_cell_csv(const SummaryCell& cell);

void write_summary_csv(const std::string& path, const std::vector<SummaryCell>& cells,
                       const std::string& config_digest, std::uint64_t master_seed);

} // namespace remres

#endif

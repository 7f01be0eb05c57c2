#include "remres/summary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "remres/csvio.hpp"
#include "remres/errors.hpp"
#include "remres/provenance.hpp"

namespace remres {

GroupBy GroupBy::parse(const std::string& comma_list)
{
    GroupBy g;
    std::stringstream ss(comma_list);
    std::string key;
    bool any = false;
    while (std::getline(ss, key, ',')) {
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  key.end());
        if (key.empty())
            continue;
        any = true;
        if (key == "attack")
            g.attack = true;
        else if (key == "fraction")
            g.fraction = true;
        else if (key == "specialist")
            g.specialist = true;
        else
            throw ValidationError("unknown group-by key '" + key +
                                  "' (expected attack|fraction|specialist)");
    }
    if (!any)
        throw ValidationError("group-by list is empty");
    return g;
}

BaselineMode baseline_mode_from_name(const std::string& name)
{
    if (name == "pooled")
        return BaselineMode::Pooled;
    if (name == "network_means")
        return BaselineMode::NetworkMeans;
    throw ValidationError("unknown baseline mode '" + name +
                          "' (expected pooled|network_means)");
}

namespace {

std::string stars_for(double p)
{
    if (p < 0.001)
        return "***";
    if (p < 0.01)
        return "**";
    if (p < 0.05)
        return "*";
    return "";
}

// Group key over the enabled coordinates; disabled ones collapse together.
struct GroupKey {
    int attack = -1;       // AttackKind as int, -1 when not grouped
    double fraction = -1.0; // -1 when not grouped
    int specialist = -1;    // 0/1, -1 when not grouped

    bool operator<(const GroupKey& o) const
    {
        if (attack != o.attack)
            return attack < o.attack;
        if (fraction != o.fraction)
            return fraction < o.fraction;
        return specialist < o.specialist;
    }
};

GroupKey key_of(const ResultRow& row, const GroupBy& g, bool keep_specialist)
{
    GroupKey k;
    if (g.attack)
        k.attack = static_cast<int>(row.attack);
    if (g.fraction)
        k.fraction = row.fraction;
    if (g.specialist && keep_specialist)
        k.specialist = row.specialist ? 1 : 0;
    return k;
}

double mean_of(const std::vector<double>& xs)
{
    return sample_mean(std::span<const double>(xs.data(), xs.size()));
}

// Collapse (network, value) pairs to one mean per network, network-name order.
std::vector<double> network_means(const std::vector<std::pair<std::string, double>>& pairs)
{
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (const auto& [net, v] : pairs) {
        auto& slot = acc[net];
        slot.first += v;
        ++slot.second;
    }
    std::vector<double> out;
    out.reserve(acc.size());
    for (const auto& [net, slot] : acc)
        out.push_back(slot.first / static_cast<double>(slot.second));
    return out;
}

std::vector<double> values_only(const std::vector<std::pair<std::string, double>>& pairs)
{
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [net, v] : pairs)
        out.push_back(v);
    return out;
}

std::optional<WelchResult> try_welch(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() < 2 || b.size() < 2)
        return std::nullopt;
    try {
        return welch_t_test(std::span<const double>(a.data(), a.size()),
                            std::span<const double>(b.data(), b.size()));
    } catch (const ValidationError&) {
        return std::nullopt; // both samples constant
    }
}

void fill_key(SummaryCell& cell, const GroupKey& k)
{
    if (k.attack >= 0)
        cell.attack = static_cast<AttackKind>(k.attack);
    if (k.fraction >= 0.0)
        cell.fraction = k.fraction;
    if (k.specialist >= 0)
        cell.specialist = k.specialist == 1;
}

} // namespace

std::vector<SummaryCell> summarize_vs_baseline(const std::vector<ResultRow>& rows,
                                               const GroupBy& group_by, BaselineMode mode)
{
    if (!group_by.attack && !group_by.fraction && !group_by.specialist)
        throw ValidationError("group-by list is empty");

    // Ok control rows per network, and each network's per-metric control mean
    // (needed for per-row percent changes in the specialist comparison).
    std::vector<const ResultRow*> controls;
    for (const ResultRow& row : rows)
        if (row.attack == AttackKind::None && row.ok())
            controls.push_back(&row);

    // Treatment groups in deterministic key order.
    std::map<GroupKey, std::vector<const ResultRow*>> groups;
    for (const ResultRow& row : rows)
        if (row.attack != AttackKind::None && row.ok())
            groups[key_of(row, group_by, true)].push_back(&row);

    std::vector<SummaryCell> cells;
    for (const auto& [key, members] : groups) {
        // Networks in scope for this group's baseline.
        std::vector<std::string> nets;
        for (const ResultRow* row : members)
            nets.push_back(row->network);
        std::sort(nets.begin(), nets.end());
        nets.erase(std::unique(nets.begin(), nets.end()), nets.end());

        for (const std::string& metric : kMetricNames) {
            std::vector<std::pair<std::string, double>> treat, ctrl;
            for (const ResultRow* row : members)
                if (const auto v = metric_value(row->metrics, metric))
                    treat.emplace_back(row->network, *v);
            for (const ResultRow* row : controls)
                if (std::binary_search(nets.begin(), nets.end(), row->network))
                    if (const auto v = metric_value(row->metrics, metric))
                        ctrl.emplace_back(row->network, *v);
            if (treat.empty())
                continue; // metric entirely missing in this group
            if (ctrl.empty())
                throw ValidationError("no control rows with metric '" + metric +
                                      "' for the networks of a summary group");

            const std::vector<double> a =
                mode == BaselineMode::Pooled ? values_only(treat) : network_means(treat);
            const std::vector<double> b =
                mode == BaselineMode::Pooled ? values_only(ctrl) : network_means(ctrl);

            SummaryCell cell;
            fill_key(cell, key);
            cell.comparison = "vs_control";
            cell.metric = metric;
            cell.n_treatment = a.size();
            cell.n_control = b.size();
            cell.treatment_mean = mean_of(a);
            cell.control_mean = mean_of(b);
            if (cell.control_mean != 0.0)
                cell.pct_diff =
                    100.0 * (cell.treatment_mean - cell.control_mean) / cell.control_mean;
            cell.welch = try_welch(a, b);
            if (cell.welch)
                cell.stars = stars_for(cell.welch->p);
            cells.push_back(std::move(cell));
        }
    }

    if (!group_by.specialist)
        return cells;

    // Between-group comparison: specialist vs non-specialist per-row percent
    // changes from each network's own control mean, keyed by the remaining
    // coordinates.
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> net_control;
    for (const ResultRow* row : controls)
        for (const std::string& metric : kMetricNames)
            if (const auto v = metric_value(row->metrics, metric)) {
                auto& slot = net_control[{row->network, metric}];
                slot.first += *v;
                ++slot.second;
            }

    std::map<GroupKey, std::vector<const ResultRow*>> outer;
    for (const ResultRow& row : rows)
        if (row.attack != AttackKind::None && row.ok())
            outer[key_of(row, group_by, false)].push_back(&row);

    for (const auto& [key, members] : outer) {
        for (const std::string& metric : kMetricNames) {
            std::vector<std::pair<std::string, double>> spec, nonspec;
            for (const ResultRow* row : members) {
                const auto v = metric_value(row->metrics, metric);
                if (!v)
                    continue;
                const auto it = net_control.find({row->network, metric});
                if (it == net_control.end())
                    continue;
                const double base = it->second.first / static_cast<double>(it->second.second);
                if (base == 0.0)
                    continue;
                const double pct = 100.0 * (*v - base) / base;
                (row->specialist ? spec : nonspec).emplace_back(row->network, pct);
            }
            if (spec.empty() || nonspec.empty())
                continue;

            const std::vector<double> a =
                mode == BaselineMode::Pooled ? values_only(spec) : network_means(spec);
            const std::vector<double> b =
                mode == BaselineMode::Pooled ? values_only(nonspec) : network_means(nonspec);

            SummaryCell cell;
            fill_key(cell, key);
            cell.comparison = "specialist_vs_nonspecialist";
            cell.metric = metric;
            cell.n_treatment = a.size();
            cell.n_control = b.size();
            cell.treatment_mean = mean_of(a); // mean specialist percent change
            cell.control_mean = mean_of(b);   // mean non-specialist percent change
            cell.welch = try_welch(a, b);
            if (cell.welch)
                cell.stars = stars_for(cell.welch->p);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

// --- persistence -----------------------------------------------------------

const std::string kSummaryCsvHeader =
    "attack,fraction,specialist,comparison,metric,n_treatment,n_control,"
    "treatment_mean,control_mean,pct_diff,t,df,p,stars";

std::string summary_cell_csv(const SummaryCell& cell)
{
    std::ostringstream os;
    os << (cell.attack ? std::string(attack_kind_name(*cell.attack)) : std::string("NA")) << ','
       << (cell.fraction ? csv::format_double(*cell.fraction) : std::string("NA")) << ','
       << (cell.specialist ? (*cell.specialist ? "1" : "0") : "NA") << ',' << cell.comparison
       << ',' << cell.metric << ',' << cell.n_treatment << ',' << cell.n_control << ','
       << csv::format_double(cell.treatment_mean) << ',' << csv::format_double(cell.control_mean)
       << ',' << (cell.pct_diff ? csv::format_double(*cell.pct_diff) : std::string("NA")) << ',';
    if (cell.welch)
        os << csv::format_double(cell.welch->t) << ',' << csv::format_double(cell.welch->df)
           << ',' << csv::format_double(cell.welch->p);
    else
        os << "NA,NA,NA";
    os << ',' << cell.stars;
    return os.str();
}

void write_summary_csv(const std::string& path, const std::vector<SummaryCell>& cells,
                       const std::string& config_digest, std::uint64_t master_seed)
{
    std::ostringstream os;
    write_provenance(os, config_digest, master_seed);
    os << kSummaryCsvHeader << '\n';
    for (const SummaryCell& cell : cells)
        os << summary_cell_csv(cell) << '\n';
    csv::write_file(path, os.str());
}

} // namespace remres

#include "remres/model.hpp"

#include <cmath>

#include "remres/csvio.hpp"
#include "remres/errors.hpp"

namespace remres {

namespace {

struct KindName {
    StatKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {StatKind::Intercept, "intercept"},
    {StatKind::CovSnd, "cov_snd"},
    {StatKind::CovRec, "cov_rec"},
    {StatKind::PShiftAbBa, "pshift_ab_ba"},
    {StatKind::PShiftAbBy, "pshift_ab_by"},
    {StatKind::PShiftAbXa, "pshift_ab_xa"},
    {StatKind::PShiftAbXb, "pshift_ab_xb"},
    {StatKind::PShiftAbAy, "pshift_ab_ay"},
    {StatKind::RecencySend, "recency_send"},
    {StatKind::RecencyReceive, "recency_receive"},
    {StatKind::Inertia, "inertia"},
    {StatKind::TotalDegreeRec, "total_degree_rec"},
};

} // namespace

std::string_view stat_kind_name(StatKind kind)
{
    for (const auto& kn : kKindNames)
        if (kn.kind == kind)
            return kn.name;
    return "?";
}

StatKind stat_kind_from_name(std::string_view name)
{
    for (const auto& kn : kKindNames)
        if (kn.name == name)
            return kn.kind;
    throw ValidationError("unknown statistic kind '" + std::string(name) + "'");
}

bool stat_kind_takes_covariate(StatKind kind)
{
    return kind == StatKind::CovSnd || kind == StatKind::CovRec;
}

void ModelSpec::validate(int n_nodes) const
{
    if (theta.size() != stats.size())
        throw ValidationError("model has " + std::to_string(stats.size()) + " statistics but " +
                              std::to_string(theta.size()) + " coefficients");
    if (stats.empty())
        throw ValidationError("model has no statistics");
    for (std::size_t k = 0; k < stats.size(); ++k) {
        if (!std::isfinite(theta[k]))
            throw ValidationError("non-finite coefficient at position " + std::to_string(k));
        const auto& spec = stats[k];
        if (stat_kind_takes_covariate(spec.kind)) {
            if (spec.covariate.size() != static_cast<std::size_t>(n_nodes))
                throw ValidationError("covariate length " + std::to_string(spec.covariate.size()) +
                                      " does not match node count " + std::to_string(n_nodes) +
                                      " at position " + std::to_string(k));
            for (double v : spec.covariate)
                if (!std::isfinite(v))
                    throw ValidationError("non-finite covariate value at position " +
                                          std::to_string(k));
        } else if (!spec.covariate.empty()) {
            throw ValidationError("statistic '" + std::string(stat_kind_name(spec.kind)) +
                                  "' takes no covariate");
        }
    }
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j, const Roster& roster)
{
    if (!j.is_array())
        throw ValidationError("model file must be a JSON array of statistic entries");
    ModelSpec model;
    for (const auto& entry : j) {
        StatisticSpec spec;
        try {
            spec.kind = stat_kind_from_name(entry.at("stat").get<std::string>());
            model.theta.push_back(entry.at("theta").get<double>());
            if (entry.contains("covariate")) {
                const auto& cov = entry.at("covariate");
                if (cov.is_string()) {
                    const auto name = cov.get<std::string>();
                    if (name != "icr")
                        throw ValidationError("unknown covariate name '" + name + "'");
                    spec.covariate_name = name;
                    spec.covariate.resize(static_cast<std::size_t>(roster.size()));
                    for (NodeId i = 0; i < roster.size(); ++i)
                        spec.covariate[static_cast<std::size_t>(i)] = roster.is_icr(i) ? 1.0 : 0.0;
                } else {
                    spec.covariate = cov.get<std::vector<double>>();
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("bad model entry: ") + e.what());
        }
        model.stats.push_back(std::move(spec));
    }
    model.validate(roster.size());
    return model;
}

nlohmann::json ModelSpec::to_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t k = 0; k < stats.size(); ++k) {
        nlohmann::json entry;
        entry["stat"] = std::string(stat_kind_name(stats[k].kind));
        entry["theta"] = theta[k];
        if (!stats[k].covariate_name.empty())
            entry["covariate"] = stats[k].covariate_name;
        else if (!stats[k].covariate.empty())
            entry["covariate"] = stats[k].covariate;
        arr.push_back(std::move(entry));
    }
    return arr;
}

ModelSpec load_model(const std::string& path, const Roster& roster)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(csv::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad model file " + path + ": " + e.what());
    }
    return ModelSpec::from_json(j, roster);
}

} // namespace remres

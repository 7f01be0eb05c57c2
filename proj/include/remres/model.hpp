#ifndef REMRES_MODEL_HPP
#define REMRES_MODEL_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "remres/event_history.hpp"

namespace remres {

// Dyadic sufficient statistics. All of these take values in [0,1], which
// bounds the linear predictor and keeps exp() tame.
enum class StatKind {
    Intercept,
    CovSnd,          // sender covariate x[i]
    CovRec,          // receiver covariate x[j]
    PShiftAbBa,      // previous (a,b): 1 at (b,a)
    PShiftAbBy,      // previous (a,b): 1 at (b, y) for y not in {a,b}
    PShiftAbXa,      // previous (a,b): 1 at (x, a) for x not in {a,b}
    PShiftAbXb,      // previous (a,b): 1 at (x, b) for x not in {a,b}
    PShiftAbAy,      // previous (a,b): 1 at (a, y) for y not in {a,b}
    RecencySend,     // 1/rank of j among i's distinct past receivers, newest first
    RecencyReceive,  // 1/rank of j among distinct past senders to i, newest first
    Inertia,         // (# past i->j) / (# past i->.)
    TotalDegreeRec,  // (in(j)+out(j)) / (2 * # past events)
};

std::string_view stat_kind_name(StatKind kind);
StatKind stat_kind_from_name(std::string_view name);
bool stat_kind_takes_covariate(StatKind kind);

struct StatisticSpec {
    StatKind kind;
    // One real per node for CovSnd / CovRec; empty otherwise.
    std::vector<double> covariate;
    // Set when the covariate was resolved from a reserved name ("icr").
    std::string covariate_name;
};

// A dyadic rate model: lambda(i,j) = exp(theta . u(i,j,H)).
struct ModelSpec {
    std::vector<StatisticSpec> stats;
    std::vector<double> theta;

    std::size_t size() const { return stats.size(); }

    // Checks |theta| == |stats|, finite coefficients, covariate lengths.
    void validate(int n_nodes) const;

    // Model file: a JSON array of {stat, covariate?, theta}. A covariate may
    // be a vector of n reals or the reserved name "icr", resolved from the
    // roster's ICR flags.
    static ModelSpec from_json(const nlohmann::json& j, const Roster& roster);
    nlohmann::json to_json() const;
};

ModelSpec load_model(const std::string& path, const Roster& roster);

} // namespace remres

#endif

// Python bindings for the remres core: file-driven operations mirroring the
// CLI subcommands (simulate, experiment, metrics, summarize) plus small
// numeric helpers. Heavy work runs with the GIL released; results come back
// as plain dicts and lists so callers need nothing but the module.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "remres/attacks.hpp"
#include "remres/csvio.hpp"
#include "remres/engine.hpp"
#include "remres/errors.hpp"
#include "remres/event_history.hpp"
#include "remres/experiment.hpp"
#include "remres/metrics.hpp"
#include "remres/model.hpp"
#include "remres/provenance.hpp"
#include "remres/rng.hpp"
#include "remres/stats.hpp"
#include "remres/summary.hpp"

namespace py = pybind11;

namespace {

py::dict metrics_dict(const remres::MetricVector& m)
{
    py::dict d;
    for (const std::string& name : remres::kMetricNames) {
        const std::optional<double> v = remres::metric_value(m, name);
        d[name.c_str()] = v ? py::object(py::cast(*v)) : py::object(py::none());
    }
    return d;
}

py::dict row_dict(const remres::ResultRow& r)
{
    py::dict d;
    d["network"] = r.network;
    d["specialist"] = r.specialist;
    d["attack"] = std::string(remres::attack_kind_name(r.attack));
    d["fraction"] = r.fraction;
    d["replicate"] = r.replicate;
    d["seed"] = r.seed;
    d["status"] = r.status;
    d["metrics"] = metrics_dict(r.metrics);
    return d;
}

py::dict cell_dict(const remres::SummaryCell& c)
{
    py::dict d;
    d["attack"] = c.attack ? py::object(py::cast(std::string(remres::attack_kind_name(*c.attack))))
                           : py::object(py::none());
    d["fraction"] = c.fraction ? py::object(py::cast(*c.fraction)) : py::object(py::none());
    d["specialist"] = c.specialist ? py::object(py::cast(*c.specialist)) : py::object(py::none());
    d["comparison"] = c.comparison;
    d["metric"] = c.metric;
    d["n_treatment"] = c.n_treatment;
    d["n_control"] = c.n_control;
    d["treatment_mean"] = c.treatment_mean;
    d["control_mean"] = c.control_mean;
    d["pct_diff"] = c.pct_diff ? py::object(py::cast(*c.pct_diff)) : py::object(py::none());
    if (c.welch) {
        d["t"] = c.welch->t;
        d["df"] = c.welch->df;
        d["p"] = c.welch->p;
    } else {
        d["t"] = py::none();
        d["df"] = py::none();
        d["p"] = py::none();
    }
    d["stars"] = c.stars;
    return d;
}

py::dict load_roster_py(const std::string& path)
{
    std::shared_ptr<const remres::Roster> roster;
    {
        py::gil_scoped_release release;
        roster = remres::load_roster(path);
    }
    std::vector<int> icr;
    for (int i = 0; i < roster->size(); ++i)
        icr.push_back(roster->is_icr(static_cast<remres::NodeId>(i)) ? 1 : 0);
    py::dict d;
    d["name"] = roster->network_name();
    d["specialist"] = roster->specialist();
    d["labels"] = roster->labels();
    d["icr"] = icr;
    return d;
}

py::dict simulate_py(const std::string& events, const std::string& roster_path,
                     const std::string& model_path, const std::string& attack,
                     double fraction, int post_events, double prefix_fraction,
                     std::uint64_t seed)
{
    std::vector<std::pair<std::string, std::string>> out_events;
    std::vector<std::string> removed;
    remres::MetricVector mv;
    std::size_t cut = 0;
    {
        py::gil_scoped_release release;
        const auto roster = remres::load_roster(roster_path);
        const remres::EventHistory empirical = remres::load_event_log(events, roster);
        const remres::ModelSpec model = remres::load_model(model_path, *roster);
        const remres::AttackKind kind = remres::attack_kind_from_name(attack);
        if (kind != remres::AttackKind::None && fraction == 0.0)
            throw remres::ValidationError("fraction is required for attack '" + attack + "'");
        if (post_events < 1)
            throw remres::ValidationError("post_events must be at least 1");

        cut = remres::prefix_cut(empirical.size(), prefix_fraction);
        const remres::EventHistory prefix(
            roster, std::vector<remres::Event>(empirical.events().begin(),
                                               empirical.events().begin() +
                                                   static_cast<std::ptrdiff_t>(cut)));
        remres::rng::Engine eng(seed);
        remres::RemovalPlan plan =
            remres::plan_attack(kind, fraction, empirical, cut, eng);
        plan.seed = seed;
        const remres::EventHistory full = remres::simulate_sequence(
            model, prefix, static_cast<std::size_t>(post_events), plan.removed, eng);

        for (const remres::Event& e : full.events())
            out_events.emplace_back(roster->label(e.sender), roster->label(e.receiver));
        for (const remres::NodeId i : plan.removed)
            removed.push_back(roster->label(i));
        mv = remres::compute_metrics(full, plan);
    }
    py::dict d;
    d["events"] = out_events;
    d["attack_index"] = cut;
    d["removed"] = removed;
    d["metrics"] = metrics_dict(mv);
    d["seed"] = seed;
    return d;
}

py::dict metrics_py(const std::string& events, const std::string& roster_path,
                    const std::string& plan_path)
{
    remres::MetricVector mv;
    {
        py::gil_scoped_release release;
        const auto roster = remres::load_roster(roster_path);
        const remres::EventHistory full = remres::load_event_log(events, roster);
        nlohmann::json plan_json;
        try {
            plan_json = nlohmann::json::parse(remres::csv::read_file(plan_path));
        } catch (const nlohmann::json::exception& e) {
            throw remres::ValidationError("bad plan file " + plan_path + ": " + e.what());
        }
        mv = remres::compute_metrics(full, remres::RemovalPlan::from_json(plan_json, *roster));
    }
    return metrics_dict(mv);
}

py::dict run_experiment_py(const std::string& config,
                           std::optional<std::uint64_t> master_seed,
                           std::optional<int> jobs, std::optional<std::string> out)
{
    std::vector<remres::ResultRow> rows;
    remres::RunReport report;
    {
        py::gil_scoped_release release;
        remres::ExperimentConfig cfg = remres::load_experiment_config(config);
        if (master_seed)
            cfg.master_seed = *master_seed;
        if (jobs)
            cfg.jobs = *jobs;
        cfg.validate();
        rows = remres::run_experiment(cfg, &report);
        if (out)
            remres::write_results_csv(*out, rows,
                                      remres::content_digest(cfg.to_json().dump()),
                                      cfg.master_seed);
    }
    py::list out_rows;
    for (const remres::ResultRow& r : rows)
        out_rows.append(row_dict(r));
    py::dict rep;
    rep["rows"] = report.rows;
    rep["failed_rows"] = report.failed_rows;
    rep["removed_sender_violations"] = report.removed_sender_violations;
    rep["seeds_distinct"] = report.seeds_distinct;
    rep["exponent_clamps"] = report.exponent_clamps;
    py::dict d;
    d["rows"] = out_rows;
    d["report"] = rep;
    return d;
}

py::list summarize_py(const std::string& results, const std::string& group_by,
                      const std::string& mode)
{
    std::vector<remres::SummaryCell> cells;
    {
        py::gil_scoped_release release;
        const std::vector<remres::ResultRow> rows = remres::read_results_csv(results);
        cells = remres::summarize_vs_baseline(rows, remres::GroupBy::parse(group_by),
                                              remres::baseline_mode_from_name(mode));
    }
    py::list out;
    for (const remres::SummaryCell& c : cells)
        out.append(cell_dict(c));
    return out;
}

double theil_py(const std::vector<double>& values)
{
    return remres::theil_index(values);
}

py::dict welch_py(const std::vector<double>& a, const std::vector<double>& b)
{
    const remres::WelchResult w = remres::welch_t_test(a, b);
    py::dict d;
    d["t"] = w.t;
    d["df"] = w.df;
    d["p"] = w.p;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "relational-event network simulation and resilience analysis";
    m.attr("__version__") = remres::tool_version();

    py::register_exception<remres::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<remres::SimulationError>(m, "SimulationError", PyExc_RuntimeError);

    m.def("load_roster", &load_roster_py, py::arg("path"),
          "Roster CSV plus sidecar as {name, specialist, labels, icr}.");

    m.def("simulate", &simulate_py, py::arg("events"), py::arg("roster"), py::arg("model"),
          py::arg("attack") = "none", py::arg("fraction") = 0.0,
          py::arg("post_events") = 600, py::arg("prefix_fraction") = 0.5,
          py::arg("seed") = 0,
          "One replicate: keep a prefix of the empirical log, draw the removal "
          "plan, sample the continuation, and return events, removals and the "
          "metric battery.");

    m.def("metrics", &metrics_py, py::arg("events"), py::arg("roster"), py::arg("plan"),
          "Recompute the metric battery from a stored event log and plan JSON.");

    m.def("run_experiment", &run_experiment_py, py::arg("config"),
          py::arg("master_seed") = py::none(), py::arg("jobs") = py::none(),
          py::arg("out") = py::none(),
          "Run a full treatment/control grid; returns {rows, report} and "
          "optionally writes the results CSV.");

    m.def("summarize", &summarize_py, py::arg("results"), py::arg("group_by") = "attack",
          py::arg("mode") = "pooled",
          "Treatment-vs-control summary cells from a results CSV.");

    m.def("theil", &theil_py, py::arg("values"), "Theil inequality index.");
    m.def("welch", &welch_py, py::arg("a"), py::arg("b"),
          "Welch's t-test as {t, df, p}.");
}

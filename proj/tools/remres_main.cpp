// remres: relational-event simulation and resilience analysis for
// communication networks.
//
// Subcommands:
//   validate    check input files (events, roster, model, experiment config)
//   simulate    run one replicate: prefix + attack + sampled continuation
//   metrics     recompute the outcome battery from a stored history + plan
//   experiment  run a full treatment/control grid from a JSON config
//   summarize   build treatment-vs-control tables from a results CSV
//
// Exit codes: 0 ok, 2 validation error, 3 runtime error. Errors go to stderr
// as one JSON object per failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
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
#include "remres/summary.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void print_error(const std::string& type, const std::string& message)
{
    const nlohmann::json err{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw remres::ValidationError(origin + " must be an unsigned integer, got '" + text +
                                      "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || end != text.c_str() + text.size())
        throw remres::ValidationError(origin + " out of range: '" + text + "'");
    return v;
}

// Master-seed precedence: explicit --seed, then the config file's own value,
// then the REMRES_SEED environment fallback, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& from_config)
{
    if (flag)
        return *flag;
    if (from_config)
        return *from_config;
    if (const char* env = std::getenv("REMRES_SEED"))
        return parse_seed_text(env, "REMRES_SEED");
    return 0;
}

void note(const std::string& line)
{
    std::cerr << "remres: " << line << "\n";
}

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
    std::string events, roster, model, config;
};

int run_validate(const ValidateArgs& args)
{
    if (args.events.empty() && args.roster.empty() && args.model.empty() &&
        args.config.empty())
        throw remres::ValidationError(
            "nothing to validate: pass --events, --roster, --model and/or --config");

    std::shared_ptr<const remres::Roster> roster;
    if (!args.roster.empty()) {
        roster = remres::load_roster(args.roster);
        std::cout << "roster ok: network=" << roster->network_name()
                  << " specialist=" << (roster->specialist() ? 1 : 0)
                  << " nodes=" << roster->size() << " icr=" << roster->icr_count() << "\n";
    }
    if (!args.events.empty()) {
        const remres::EventHistory h = remres::load_event_log(args.events, roster);
        std::cout << "events ok: n=" << h.roster().size() << " events=" << h.size()
                  << " attack_index=" << h.size() / 2 << "\n";
    }
    if (!args.model.empty()) {
        if (!roster)
            throw remres::ValidationError("--model validation needs --roster");
        const remres::ModelSpec model = remres::load_model(args.model, *roster);
        model.validate(roster->size());
        std::cout << "model ok: terms=" << model.size() << "\n";
    }
    if (!args.config.empty()) {
        const remres::ExperimentConfig cfg = remres::load_experiment_config(args.config);
        for (const remres::NetworkInputs& net : cfg.networks) {
            const auto r = remres::load_roster(net.roster_path);
            const remres::EventHistory h = remres::load_event_log(net.events_path, r);
            remres::load_model(net.model_path, *r).validate(r->size());
            remres::prefix_cut(h.size(), cfg.prefix_fraction);
        }
        std::cout << "config ok: networks=" << cfg.networks.size()
                  << " grid_rows=" << cfg.grid_size() << "\n";
    }
    return kExitOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string events, roster, model, out;
    std::string attack = "none";
    double fraction = 0.0;
    int post_events = 600;
    double prefix_fraction = 0.5;
    std::optional<std::uint64_t> seed;
};

remres::ResultRow metric_row(const std::string& network, bool specialist,
                             const remres::RemovalPlan& plan, std::uint64_t seed,
                             const remres::EventHistory& full)
{
    remres::ResultRow row;
    row.network = network;
    row.specialist = specialist;
    row.attack = plan.kind;
    row.fraction = plan.fraction;
    row.replicate = 0;
    row.seed = seed;
    row.metrics = remres::compute_metrics(full, plan);
    return row;
}

void write_metric_row_csv(const std::string& path, const remres::ResultRow& row,
                          const std::string& digest, std::uint64_t seed)
{
    std::ostringstream os;
    remres::write_provenance(os, digest, seed);
    os << remres::kResultsCsvHeader << "\n" << remres::result_row_csv(row) << "\n";
    remres::csv::write_file(path, os.str());
}

int run_simulate(const SimulateArgs& args)
{
    const std::uint64_t seed = resolve_seed(args.seed, std::nullopt);
    const auto roster = remres::load_roster(args.roster);
    const remres::EventHistory empirical = remres::load_event_log(args.events, roster);
    const remres::ModelSpec model = remres::load_model(args.model, *roster);
    const remres::AttackKind kind = remres::attack_kind_from_name(args.attack);
    if (kind != remres::AttackKind::None && args.fraction == 0.0)
        throw remres::ValidationError("--fraction is required for attack '" + args.attack +
                                      "'");
    if (args.post_events < 1)
        throw remres::ValidationError("--post-events must be at least 1");

    const std::size_t cut = remres::prefix_cut(empirical.size(), args.prefix_fraction);
    std::vector<remres::Event> head(empirical.events().begin(),
                                    empirical.events().begin() +
                                        static_cast<std::ptrdiff_t>(cut));
    const remres::EventHistory prefix(roster, std::move(head));

    const nlohmann::json invocation{{"events", args.events},
                                    {"roster", args.roster},
                                    {"model", args.model},
                                    {"attack", args.attack},
                                    {"fraction", args.fraction},
                                    {"post_events", args.post_events},
                                    {"prefix_fraction", args.prefix_fraction},
                                    {"seed", seed}};
    const std::string digest = remres::content_digest(invocation.dump());
    note("master_seed=" + std::to_string(seed) + " config=" + digest);

    remres::rng::Engine eng(seed);
    remres::RemovalPlan plan = remres::plan_attack(kind, args.fraction, empirical, cut, eng);
    plan.seed = seed;
    const remres::EventHistory full =
        remres::simulate_sequence(model, prefix, static_cast<std::size_t>(args.post_events),
                                  plan.removed, eng);

    std::ostringstream events_os;
    remres::write_provenance(events_os, digest, seed);
    events_os << remres::serialize_event_log(full);
    remres::csv::write_file(args.out + ".events.csv", events_os.str());

    nlohmann::json plan_json = plan.to_json(*roster);
    plan_json["provenance"] = {{"tool", "remres " + remres::tool_version()},
                               {"config", digest},
                               {"master_seed", seed}};
    remres::csv::write_file(args.out + ".plan.json", plan_json.dump(2) + "\n");

    write_metric_row_csv(args.out + ".metrics.csv",
                         metric_row(roster->network_name(), roster->specialist(), plan, seed,
                                    full),
                         digest, seed);
    note("wrote " + args.out + ".events.csv, .plan.json, .metrics.csv");
    return kExitOk;
}

// --- metrics ----------------------------------------------------------------

struct MetricsArgs {
    std::string events, roster, plan, out;
};

int run_metrics(const MetricsArgs& args)
{
    const auto roster = remres::load_roster(args.roster);
    const remres::EventHistory full = remres::load_event_log(args.events, roster);
    nlohmann::json plan_json;
    try {
        plan_json = nlohmann::json::parse(remres::csv::read_file(args.plan));
    } catch (const nlohmann::json::exception& e) {
        throw remres::ValidationError("bad plan file " + args.plan + ": " + e.what());
    }
    const remres::RemovalPlan plan = remres::RemovalPlan::from_json(plan_json, *roster);

    const std::string digest =
        remres::content_digest(remres::csv::read_file(args.events) + "\n" +
                               remres::csv::read_file(args.plan));
    note("master_seed=" + std::to_string(plan.seed) + " config=" + digest);
    write_metric_row_csv(args.out,
                         metric_row(roster->network_name(), roster->specialist(), plan,
                                    plan.seed, full),
                         digest, plan.seed);
    note("wrote " + args.out);
    return kExitOk;
}

// --- experiment -------------------------------------------------------------

struct ExperimentArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

int run_experiment_cmd(const ExperimentArgs& args)
{
    nlohmann::json raw;
    try {
        raw = nlohmann::json::parse(remres::csv::read_file(args.config));
    } catch (const nlohmann::json::exception& e) {
        throw remres::ValidationError("bad experiment config " + args.config + ": " +
                                      e.what());
    }
    remres::ExperimentConfig cfg = remres::ExperimentConfig::from_json(raw);
    remres::resolve_config_paths(cfg, args.config);
    std::optional<std::uint64_t> config_seed;
    if (raw.contains("master_seed"))
        config_seed = cfg.master_seed;
    cfg.master_seed = resolve_seed(args.seed, config_seed);
    if (args.jobs)
        cfg.jobs = *args.jobs;
    cfg.validate();

    const std::string digest = remres::content_digest(cfg.to_json().dump());
    note("master_seed=" + std::to_string(cfg.master_seed) + " config=" + digest +
         " grid_rows=" + std::to_string(cfg.grid_size()));

    remres::RunReport report;
    const std::vector<remres::ResultRow> rows = remres::run_experiment(cfg, &report);
    remres::write_results_csv(args.out, rows, digest, cfg.master_seed);

    note("rows=" + std::to_string(report.rows) + " failed=" +
         std::to_string(report.failed_rows) + " removed_sender_violations=" +
         std::to_string(report.removed_sender_violations) + " seeds_distinct=" +
         (report.seeds_distinct ? "yes" : "no") + " exponent_clamps=" +
         std::to_string(report.exponent_clamps));
    note("wrote " + args.out);
    if (report.removed_sender_violations > 0) {
        print_error("runtime", "incapacitated node appeared as sender in simulated events");
        return kExitRuntime;
    }
    return kExitOk;
}

// --- summarize --------------------------------------------------------------

struct SummarizeArgs {
    std::string results, out;
    std::string group_by = "attack";
    std::string mode = "pooled";
};

int run_summarize(const SummarizeArgs& args)
{
    const std::string content = remres::csv::read_file(args.results);
    const std::vector<remres::ResultRow> rows = remres::read_results_csv(args.results);
    const remres::GroupBy group_by = remres::GroupBy::parse(args.group_by);
    const remres::BaselineMode mode = remres::baseline_mode_from_name(args.mode);

    // Carry the producing run's master seed forward from its header.
    std::uint64_t seed = 0;
    const std::string tag = "# master_seed: ";
    for (const auto& line : remres::csv::split_lines(content)) {
        if (line.rfind(tag, 0) == 0) {
            seed = parse_seed_text(line.substr(tag.size()), "results master_seed");
            break;
        }
    }

    const std::vector<remres::SummaryCell> cells =
        remres::summarize_vs_baseline(rows, group_by, mode);
    const std::string digest = remres::content_digest(content);
    remres::write_summary_csv(args.out, cells, digest, seed);
    note("rows_in=" + std::to_string(rows.size()) + " cells=" + std::to_string(cells.size()));
    note("wrote " + args.out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"relational-event network simulation and resilience analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "remres " + remres::tool_version());

    ValidateArgs vargs;
    CLI::App* validate = app.add_subcommand("validate", "check input files");
    validate->add_option("--events", vargs.events, "event log CSV");
    validate->add_option("--roster", vargs.roster, "roster CSV (with .meta.json sidecar)");
    validate->add_option("--model", vargs.model, "model JSON (needs --roster)");
    validate->add_option("--config", vargs.config, "experiment config JSON");

    SimulateArgs sargs;
    CLI::App* simulate = app.add_subcommand("simulate", "run one replicate");
    simulate->add_option("--events", sargs.events, "empirical event log CSV")->required();
    simulate->add_option("--roster", sargs.roster, "roster CSV")->required();
    simulate->add_option("--model", sargs.model, "model JSON")->required();
    simulate->add_option("--attack", sargs.attack, "none|degree|icr|combined|random");
    simulate->add_option("--fraction", sargs.fraction, "removal fraction in (0,1)");
    simulate->add_option("--post-events", sargs.post_events, "events to simulate (600)");
    simulate->add_option("--prefix-fraction", sargs.prefix_fraction,
                         "share of history kept fixed (0.5)");
    simulate->add_option("--seed", sargs.seed, "replicate seed (REMRES_SEED fallback)");
    simulate->add_option("--out", sargs.out, "output path prefix")->required();

    MetricsArgs margs;
    CLI::App* metrics = app.add_subcommand("metrics", "recompute metrics from stored output");
    metrics->add_option("--events", margs.events, "stored event log CSV")->required();
    metrics->add_option("--roster", margs.roster, "roster CSV")->required();
    metrics->add_option("--plan", margs.plan, "removal plan JSON")->required();
    metrics->add_option("--out", margs.out, "output CSV path")->required();

    ExperimentArgs eargs;
    CLI::App* experiment = app.add_subcommand("experiment", "run a full grid");
    experiment->add_option("--config", eargs.config, "experiment config JSON")->required();
    experiment->add_option("--out", eargs.out, "results CSV path")->required();
    experiment->add_option("--seed", eargs.seed, "master seed (overrides config)");
    experiment->add_option("--jobs", eargs.jobs, "worker threads (0 = machine parallelism)");

    SummarizeArgs zargs;
    CLI::App* summarize = app.add_subcommand("summarize", "summarize a results CSV");
    summarize->add_option("--results", zargs.results, "results CSV path")->required();
    summarize->add_option("--group-by", zargs.group_by,
                          "comma list of attack,fraction,specialist");
    summarize->add_option("--mode", zargs.mode, "pooled|network_means");
    summarize->add_option("--out", zargs.out, "summary CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help / --version
        print_error("validation", e.what());
        return kExitValidation;
    }

    try {
        if (validate->parsed())
            return run_validate(vargs);
        if (simulate->parsed())
            return run_simulate(sargs);
        if (metrics->parsed())
            return run_metrics(margs);
        if (experiment->parsed())
            return run_experiment_cmd(eargs);
        if (summarize->parsed())
            return run_summarize(zargs);
        print_error("validation", "no subcommand given");
        return kExitValidation;
    } catch (const remres::ValidationError& e) {
        print_error("validation", e.what());
        return kExitValidation;
    } catch (const remres::SimulationError& e) {
        print_error("runtime", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return kExitRuntime;
    }
}

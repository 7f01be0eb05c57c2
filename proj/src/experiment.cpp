#include "remres/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "remres/csvio.hpp"
#include "remres/engine.hpp"
#include "remres/errors.hpp"
#include "remres/provenance.hpp"

namespace remres {

// --- config ----------------------------------------------------------------

void ExperimentConfig::validate() const
{
    if (networks.empty())
        throw ValidationError("experiment config lists no networks");
    for (const NetworkInputs& net : networks)
        if (net.events_path.empty() || net.roster_path.empty() || net.model_path.empty())
            throw ValidationError("every network needs events, roster and model paths");
    for (AttackKind kind : attacks)
        if (kind == AttackKind::None)
            throw ValidationError("attack list must not contain 'none'; controls are implicit");
    std::set<double> unique_fractions(fractions.begin(), fractions.end());
    if (unique_fractions.size() != fractions.size())
        throw ValidationError("duplicate removal fractions in config");
    for (double k : fractions)
        if (!(k > 0.0) || !(k < 1.0))
            throw ValidationError("removal fractions must lie in (0, 1), got " +
                                  csv::format_double(k));
    if (replicates < 1)
        throw ValidationError("replicates must be at least 1");
    if (control_replicates < 0)
        throw ValidationError("control replicates must be nonnegative");
    if (n_post_events < 1)
        throw ValidationError("n_post_events must be at least 1");
    if (!(prefix_fraction > 0.0) || !(prefix_fraction < 1.0))
        throw ValidationError("prefix fraction must lie in (0, 1)");
    if (jobs < 0)
        throw ValidationError("jobs must be nonnegative (0 = machine parallelism)");
    if (grid_size() == 0)
        throw ValidationError("experiment grid is empty");
}

std::size_t ExperimentConfig::grid_size() const
{
    const std::size_t per_network =
        attacks.size() * fractions.size() * static_cast<std::size_t>(replicates) +
        static_cast<std::size_t>(control_replicates);
    return networks.size() * per_network;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ValidationError("experiment config must be a JSON object");
    ExperimentConfig cfg;
    for (const auto& net : j.at("networks")) {
        NetworkInputs in;
        in.events_path = net.at("events").get<std::string>();
        in.roster_path = net.at("roster").get<std::string>();
        in.model_path = net.at("model").get<std::string>();
        cfg.networks.push_back(std::move(in));
    }
    for (const auto& name : j.at("attacks"))
        cfg.attacks.push_back(attack_kind_from_name(name.get<std::string>()));
    for (const auto& k : j.at("fractions"))
        cfg.fractions.push_back(k.get<double>());
    cfg.replicates = j.value("replicates", 100);
    cfg.control_replicates = j.value("control_replicates", 100);
    cfg.n_post_events = j.value("n_post_events", 600);
    cfg.prefix_fraction = j.value("prefix_fraction", 0.5);
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.jobs = j.value("jobs", 0);
    cfg.validate();
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json nets = nlohmann::json::array();
    for (const NetworkInputs& net : networks)
        nets.push_back({{"events", net.events_path},
                        {"roster", net.roster_path},
                        {"model", net.model_path}});
    nlohmann::json att = nlohmann::json::array();
    for (AttackKind kind : attacks)
        att.push_back(std::string(attack_kind_name(kind)));
    return nlohmann::json{{"networks", std::move(nets)},
                          {"attacks", std::move(att)},
                          {"fractions", fractions},
                          {"replicates", replicates},
                          {"control_replicates", control_replicates},
                          {"n_post_events", n_post_events},
                          {"prefix_fraction", prefix_fraction},
                          {"master_seed", master_seed},
                          {"jobs", jobs}};
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(csv::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad experiment config " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad experiment config " + path + ": " + e.what());
    }
    resolve_config_paths(cfg, path);
    return cfg;
}

void resolve_config_paths(ExperimentConfig& cfg, const std::string& config_path)
{
    const std::filesystem::path base = std::filesystem::path(config_path).parent_path();
    const auto resolve = [&base](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative())
            p = (base / p).string();
    };
    for (NetworkInputs& net : cfg.networks) {
        resolve(net.events_path);
        resolve(net.roster_path);
        resolve(net.model_path);
    }
}

// --- seeds -----------------------------------------------------------------

std::uint64_t derive_row_seed(std::uint64_t master_seed, const std::string& network,
                              AttackKind attack, double fraction, int replicate)
{
    return rng::StableHash()
        .mix(master_seed)
        .mix(std::string_view(network))
        .mix(attack_kind_name(attack))
        .mix(fraction)
        .mix(static_cast<std::uint64_t>(replicate))
        .value();
}

// --- runner ----------------------------------------------------------------

namespace {

struct LoadedNetwork {
    std::string name;
    bool specialist = false;
    std::shared_ptr<const Roster> roster;
    EventHistory empirical;
    EventHistory prefix;
    std::size_t attack_index = 0;
    ModelSpec model;
};

LoadedNetwork load_network(const NetworkInputs& in, double prefix_fraction)
{
    std::shared_ptr<const Roster> roster = load_roster(in.roster_path);
    EventHistory empirical = load_event_log(in.events_path, roster);
    const std::size_t cut = prefix_cut(empirical.size(), prefix_fraction);
    std::vector<Event> head(empirical.events().begin(),
                            empirical.events().begin() + static_cast<std::ptrdiff_t>(cut));
    LoadedNetwork net{roster->network_name(), roster->specialist(), roster,
                      std::move(empirical), EventHistory(roster, std::move(head)), cut,
                      load_model(in.model_path, *roster)};
    net.model.validate(roster->size());
    return net;
}

struct Job {
    const LoadedNetwork* net = nullptr;
    AttackKind attack = AttackKind::None;
    double fraction = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    int n_post_events = 0;
};

// One field of a CSV line must stay a single comma-free token.
std::string sanitize_status(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ',' || c == ';')
            out.push_back(';');
        else if (c == '\n' || c == '\r')
            out.push_back(' ');
        else
            out.push_back(c);
    }
    return out.empty() ? std::string("failed") : out;
}

ResultRow run_job(const Job& job, std::uint64_t* violations, std::uint64_t* clamps)
{
    ResultRow row;
    row.network = job.net->name;
    row.specialist = job.net->specialist;
    row.attack = job.attack;
    row.fraction = job.fraction;
    row.replicate = job.replicate;
    row.seed = job.seed;
    try {
        rng::Engine eng(job.seed);
        RemovalPlan plan = plan_attack(job.attack, job.fraction, job.net->empirical,
                                       job.net->attack_index, eng);
        plan.seed = job.seed;
        EngineDiag diag;
        const EventHistory sim =
            simulate_sequence(job.net->model, job.net->prefix,
                              static_cast<std::size_t>(job.n_post_events), plan.removed, eng,
                              &diag);
        *clamps += diag.exponent_clamps;
        for (std::size_t k = plan.attack_index; k < sim.size(); ++k)
            if (plan.is_removed(sim.events()[k].sender))
                ++*violations;
        row.metrics = compute_metrics(sim, plan);
    } catch (const std::exception& e) {
        row.status = sanitize_status(e.what());
    }
    return row;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, RunReport* report)
{
    cfg.validate();

    std::vector<LoadedNetwork> nets;
    nets.reserve(cfg.networks.size());
    for (const NetworkInputs& in : cfg.networks)
        nets.push_back(load_network(in, cfg.prefix_fraction));
    std::set<std::string> names;
    for (const LoadedNetwork& net : nets)
        if (!names.insert(net.name).second)
            throw ValidationError("duplicate network name '" + net.name +
                                  "'; row seeds would collide");

    // Deterministic row order: per network, controls first, then the attack
    // cells in config order.
    std::vector<Job> jobs;
    jobs.reserve(cfg.grid_size());
    for (const LoadedNetwork& net : nets) {
        for (int r = 0; r < cfg.control_replicates; ++r)
            jobs.push_back({&net, AttackKind::None, 0.0, r,
                            derive_row_seed(cfg.master_seed, net.name, AttackKind::None, 0.0, r),
                            cfg.n_post_events});
        for (AttackKind attack : cfg.attacks)
            for (double fraction : cfg.fractions)
                for (int r = 0; r < cfg.replicates; ++r)
                    jobs.push_back({&net, attack, fraction, r,
                                    derive_row_seed(cfg.master_seed, net.name, attack, fraction, r),
                                    cfg.n_post_events});
    }

    std::vector<ResultRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex report_mutex;
    std::uint64_t total_violations = 0;
    std::uint64_t total_clamps = 0;

    const auto worker = [&]() {
        std::uint64_t violations = 0;
        std::uint64_t clamps = 0;
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size())
                break;
            rows[k] = run_job(jobs[k], &violations, &clamps);
        }
        const std::lock_guard<std::mutex> lock(report_mutex);
        total_violations += violations;
        total_clamps += clamps;
    };

    unsigned n_workers = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                      : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(
        std::min<std::size_t>(n_workers, std::max<std::size_t>(1, jobs.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    if (report) {
        report->rows = rows.size();
        report->failed_rows = static_cast<std::size_t>(
            std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.ok(); }));
        report->removed_sender_violations = total_violations;
        std::vector<std::uint64_t> seeds;
        seeds.reserve(jobs.size());
        for (const Job& job : jobs)
            seeds.push_back(job.seed);
        std::sort(seeds.begin(), seeds.end());
        report->seeds_distinct = std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end();
        report->exponent_clamps = total_clamps;
    }
    return rows;
}

// --- persistence -----------------------------------------------------------

const std::string kResultsCsvHeader =
    "network,specialist,attack,fraction,replicate,seed,status,theil,connectedness,"
    "centralization,density,isolates,call_loss,reach_frac,reach_count,reserve_use,"
    "reserve_balance";

namespace {

std::string opt_field(const std::optional<double>& v)
{
    return v ? csv::format_double(*v) : std::string("NA");
}

std::optional<double> parse_opt(std::string_view field)
{
    if (field == "NA" || field.empty())
        return std::nullopt;
    return csv::parse_double(field);
}

// Row seeds use the full 64-bit range, past what parse_int accepts.
std::uint64_t parse_u64(const std::string& field)
{
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("expected an unsigned integer, got '" + field + "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (errno != 0 || end != field.c_str() + field.size())
        throw ValidationError("unsigned integer out of range: '" + field + "'");
    return static_cast<std::uint64_t>(v);
}

} // namespace

std::string result_row_csv(const ResultRow& row)
{
    std::ostringstream os;
    os << row.network << ',' << (row.specialist ? '1' : '0') << ','
       << attack_kind_name(row.attack) << ',' << csv::format_double(row.fraction) << ','
       << row.replicate << ',' << row.seed << ',' << row.status << ',';
    if (row.ok()) {
        const MetricVector& m = row.metrics;
        os << csv::format_double(m.theil) << ',' << csv::format_double(m.connectedness) << ','
           << opt_field(m.centralization) << ',' << csv::format_double(m.density) << ','
           << csv::format_double(m.isolate_fraction) << ',' << csv::format_double(m.call_loss)
           << ',' << csv::format_double(m.reach_fraction_mean) << ','
           << csv::format_double(m.reach_count_mean) << ',' << opt_field(m.reserve_use) << ','
           << opt_field(m.reserve_balance);
    } else {
        os << "NA,NA,NA,NA,NA,NA,NA,NA,NA,NA";
    }
    return os.str();
}

ResultRow result_row_from_csv(const std::string& line)
{
    const auto fields = csv::split_line(line);
    if (fields.size() != 17)
        throw ValidationError("results row needs 17 fields, got " +
                              std::to_string(fields.size()));
    ResultRow row;
    row.network = fields[0];
    if (fields[1] != "0" && fields[1] != "1")
        throw ValidationError("specialist flag must be 0 or 1, got '" + fields[1] + "'");
    row.specialist = fields[1] == "1";
    row.attack = attack_kind_from_name(fields[2]);
    row.fraction = csv::parse_double(fields[3]);
    row.replicate = static_cast<int>(csv::parse_int(fields[4]));
    row.seed = parse_u64(fields[5]);
    row.status = fields[6];
    if (row.ok()) {
        MetricVector& m = row.metrics;
        m.theil = csv::parse_double(fields[7]);
        m.connectedness = csv::parse_double(fields[8]);
        m.centralization = parse_opt(fields[9]);
        m.density = csv::parse_double(fields[10]);
        m.isolate_fraction = csv::parse_double(fields[11]);
        m.call_loss = csv::parse_double(fields[12]);
        m.reach_fraction_mean = csv::parse_double(fields[13]);
        m.reach_count_mean = csv::parse_double(fields[14]);
        m.reserve_use = parse_opt(fields[15]);
        m.reserve_balance = parse_opt(fields[16]);
    }
    return row;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       const std::string& config_digest, std::uint64_t master_seed)
{
    std::ostringstream os;
    write_provenance(os, config_digest, master_seed);
    os << kResultsCsvHeader << '\n';
    for (const ResultRow& row : rows)
        os << result_row_csv(row) << '\n';
    csv::write_file(path, os.str());
}

std::vector<ResultRow> read_results_csv(const std::string& path)
{
    const std::string content = csv::read_file(path);
    const std::vector<std::string> lines = data_lines(content);
    if (lines.empty())
        throw ValidationError("results file " + path + " has no data lines");
    if (lines[0] != kResultsCsvHeader)
        throw ValidationError("results file " + path + " has an unexpected header");
    std::vector<ResultRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].empty())
            continue;
        rows.push_back(result_row_from_csv(lines[k]));
    }
    return rows;
}

} // namespace remres

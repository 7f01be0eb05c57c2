#ifndef REMRES_EXPERIMENT_HPP
#define REMRES_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "remres/attacks.hpp"
#include "remres/metrics.hpp"

namespace remres {

struct NetworkInputs {
    std::string events_path;
    std::string roster_path;
    std::string model_path;
};

// The full treatment/control grid: every network crossed with every attack,
// fraction and replicate, plus per-network controls.
struct ExperimentConfig {
    std::vector<NetworkInputs> networks;
    std::vector<AttackKind> attacks;
    std::vector<double> fractions;
    int replicates = 100;
    int control_replicates = 100;
    int n_post_events = 600;
    double prefix_fraction = 0.5;
    std::uint64_t master_seed = 0;
    int jobs = 0; // 0 = hardware concurrency

    void validate() const;
    std::size_t grid_size() const; // closed-form row count

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

// Anchors the config's relative input paths at the config file's directory,
// so a config can ship next to its data and load from any working directory.
void resolve_config_paths(ExperimentConfig& cfg, const std::string& config_path);

// One simulated replicate: its experimental cell plus the metric vector.
struct ResultRow {
    std::string network;
    bool specialist = false;
    AttackKind attack = AttackKind::None;
    double fraction = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    std::string status = "ok"; // "ok" or a failure reason; failed rows keep their cell
    MetricVector metrics;      // meaningful only when status == "ok"

    bool ok() const { return status == "ok"; }
};

struct RunReport {
    std::size_t rows = 0;
    std::size_t failed_rows = 0;
    std::size_t removed_sender_violations = 0; // hard invariant, must be 0
    bool seeds_distinct = true;
    std::uint64_t exponent_clamps = 0;
};

// Deterministic per-row seed from the master seed and cell coordinates.
std::uint64_t derive_row_seed(std::uint64_t master_seed, const std::string& network,
                              AttackKind attack, double fraction, int replicate);

// Runs the whole grid. Rows come back in deterministic (network, cell,
// replicate) order regardless of worker scheduling. Dead-network failures
// are recorded as failed rows, not dropped.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, RunReport* report = nullptr);

extern const std::string kResultsCsvHeader;

std::string result_row_csv(const ResultRow& row);
ResultRow result_row_from_csv(const std::string& line);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       const std::string& config_digest, std::uint64_t master_seed);
std::vector<ResultRow> read_results_csv(const std::string& path);

} // namespace remres

#endif

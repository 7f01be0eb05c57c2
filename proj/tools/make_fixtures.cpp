// Generates the bundled synthetic corpus: 17 communication networks (roster,
// empirical event log, calibrated model) plus full-size and scaled experiment
// configs. Every byte is a deterministic function of --seed, so the committed
// corpus can be regenerated and diffed.
//
// The empirical logs are drawn from each network's own model starting from an
// empty history, which bakes the modelled mechanisms (inertia hubs,
// ICR-directed calls, quiet reserve nodes) into the prefixes the simulator
// later continues.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "remres/csvio.hpp"
#include "remres/engine.hpp"
#include "remres/event_history.hpp"
#include "remres/model.hpp"
#include "remres/rng.hpp"

namespace {

struct NetPlan {
    const char* name;
    bool specialist;
    int n_nodes;
    int n_events;
    int n_icr;
};

// 9 specialist and 8 non-specialist networks of varied size. The flagship
// network keeps 1146 events so its midpoint lands at 573.
constexpr NetPlan kPlans[] = {
    {"alpha", true, 16, 1146, 3},   {"bravo", false, 12, 820, 2},
    {"charlie", true, 20, 1040, 3}, {"delta", true, 10, 700, 2},
    {"echo", false, 14, 900, 3},    {"foxtrot", true, 24, 1260, 4},
    {"golf", false, 9, 640, 2},     {"hotel", true, 18, 980, 3},
    {"india", false, 11, 760, 2},   {"juliett", true, 15, 880, 3},
    {"kilo", false, 22, 1180, 4},   {"lima", true, 13, 840, 2},
    {"mike", false, 17, 1020, 3},   {"november", true, 26, 1340, 4},
    {"oscar", false, 8, 620, 2},    {"papa", false, 19, 1100, 3},
    {"quebec", true, 21, 1200, 4},
};

std::string node_label(int i)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%02d", i + 1);
    return buf;
}

// Small deterministic jitter so the 17 models differ without leaving the
// regime where every mechanism stays influential.
double jitter(remres::rng::Engine& eng, double base, double spread)
{
    return base + (remres::rng::uniform01(eng) * 2.0 - 1.0) * spread;
}

nlohmann::json model_json(const NetPlan& plan, const std::vector<double>& quiet,
                          remres::rng::Engine& eng)
{
    nlohmann::json terms = nlohmann::json::array();
    const auto term = [&terms](const char* stat, double theta) {
        terms.push_back({{"stat", stat}, {"theta", theta}});
    };
    term("intercept", 0.0);
    terms.push_back(
        {{"stat", "cov_snd"}, {"covariate", quiet}, {"theta", jitter(eng, -2.6, 0.3)}});
    terms.push_back({{"stat", "cov_rec"}, {"covariate", "icr"}, {"theta", jitter(eng, 0.8, 0.15)}});
    term("pshift_ab_ba", jitter(eng, 1.6, 0.2));
    term("recency_send", jitter(eng, 0.9, 0.15));
    // Replying to recent callers is what lets the network route around dead
    // nodes: the incapacitated stop calling, so their pull decays.
    term("recency_receive", jitter(eng, 1.1, 0.15));
    term("inertia", jitter(eng, 1.2, 0.2));
    term("total_degree_rec", jitter(eng, 0.7, 0.2));
    return terms;
}

void write_network(const std::filesystem::path& dir, const NetPlan& plan,
                   std::uint64_t corpus_seed)
{
    remres::rng::Engine eng(
        remres::rng::StableHash().mix(corpus_seed).mix(std::string_view(plan.name)).value());

    std::vector<std::string> labels;
    std::vector<char> icr(static_cast<std::size_t>(plan.n_nodes), 0);
    for (int i = 0; i < plan.n_nodes; ++i)
        labels.push_back(node_label(i));
    // Spread the coordinators through the roster instead of clustering them.
    const int stride = std::max(2, plan.n_nodes / plan.n_icr);
    for (int k = 0; k < plan.n_icr; ++k)
        icr[static_cast<std::size_t>((k * stride) % plan.n_nodes)] = 1;

    // Quiet nodes send rarely, so the prefix leaves them as genuine reserves.
    // Drawn from the non-ICR tail of the roster.
    std::vector<double> quiet(static_cast<std::size_t>(plan.n_nodes), 0.0);
    int marked = 0;
    for (int i = plan.n_nodes - 1; i >= 0 && marked < plan.n_nodes / 4; --i) {
        if (icr[static_cast<std::size_t>(i)])
            continue;
        quiet[static_cast<std::size_t>(i)] = 1.0;
        ++marked;
    }

    const auto roster = std::make_shared<remres::Roster>(plan.name, plan.specialist, labels,
                                                         icr);
    const nlohmann::json model_terms = model_json(plan, quiet, eng);
    const remres::ModelSpec model = remres::ModelSpec::from_json(model_terms, *roster);

    const remres::EventHistory empty(roster, {});
    const remres::EventHistory history = remres::simulate_sequence(
        model, empty, static_cast<std::size_t>(plan.n_events), {}, eng);

    std::ostringstream roster_csv;
    roster_csv << "label,icr\n";
    for (int i = 0; i < plan.n_nodes; ++i)
        roster_csv << labels[static_cast<std::size_t>(i)] << ','
                   << (icr[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';

    const nlohmann::json meta{{"name", plan.name}, {"specialist", plan.specialist}};

    const std::string base = (dir / plan.name).string();
    remres::csv::write_file(base + ".roster.csv", roster_csv.str());
    remres::csv::write_file(base + ".roster.meta.json", meta.dump(2) + "\n");
    remres::csv::write_file(base + ".model.json", model_terms.dump(2) + "\n");
    remres::csv::write_file(base + ".events.csv", remres::serialize_event_log(history));

    std::cout << plan.name << ": n=" << plan.n_nodes << " events=" << history.size()
              << " icr=" << plan.n_icr << (plan.specialist ? " specialist" : "") << "\n";
}

nlohmann::json experiment_json(int replicates, int control_replicates, std::uint64_t seed)
{
    nlohmann::json nets = nlohmann::json::array();
    for (const NetPlan& plan : kPlans) {
        const std::string base = plan.name;
        nets.push_back({{"events", base + ".events.csv"},
                        {"roster", base + ".roster.csv"},
                        {"model", base + ".model.json"}});
    }
    return nlohmann::json{{"networks", std::move(nets)},
                          {"attacks", {"degree", "icr", "combined", "random"}},
                          {"fractions", {0.05, 0.1, 0.15, 0.25, 0.5}},
                          {"replicates", replicates},
                          {"control_replicates", control_replicates},
                          {"n_post_events", 600},
                          {"prefix_fraction", 0.5},
                          {"master_seed", seed}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"generate the synthetic fixture corpus"};
    std::string out_dir = "data/synthetic";
    std::uint64_t seed = 1903;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "corpus seed");
    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        for (const NetPlan& plan : kPlans)
            write_network(dir, plan, seed);
        remres::csv::write_file((dir / "experiment_full.json").string(),
                                experiment_json(100, 100, seed).dump(2) + "\n");
        remres::csv::write_file((dir / "experiment_scaled.json").string(),
                                experiment_json(5, 5, seed).dump(2) + "\n");
        std::cout << "wrote corpus to " << dir.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "fixture generation failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

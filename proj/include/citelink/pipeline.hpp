#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <citelink/graph.hpp>
#include <citelink/mlp.hpp>
#include <citelink/similarity.hpp>

namespace citelink {

/// Where productivity is counted for author selection.
enum class SelectionWindow { Train, History };

struct RunConfig {
    std::string corpus;
    int year = 0;
    int depth = 3;
    std::vector<int> horizons{1};
    double fraction = 0.02;
    std::vector<MeasureId> measures{kAllMeasures.begin(), kAllMeasures.end()};
    std::vector<std::size_t> ks{2000, 10000, 20000, 60000};
    std::uint64_t seed = 1;
    bool mlp = false;
    double learning_rate = 0.01;
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double negative_ratio = 1.0;
    std::optional<int> inner_cut;
    StrengthConvention pa_strength = StrengthConvention::Projected;
    SelectionWindow selection_window = SelectionWindow::Train;
    /// Maximum ROC points per measure in reports (0 keeps all).
    std::size_t roc_points = 1000;
    /// build-graph: keep only selected authors.
    bool restrict_graph = false;
    /// score / train-mlp: only write candidates with a common neighbor.
    bool sparse = false;
    /// Output directory. Not part of the provenance record.
    std::string out = ".";

    MlpConfig mlp_config() const;
};

/// Every field except `out`.
nlohmann::ordered_json config_to_json(const RunConfig &config);
/// Fields present in `j` override those of `base`.
RunConfig config_from_json(const nlohmann::json &j, RunConfig base = {});
/// Accepts a plain config JSON, a JSON report (uses its "config"), or any
/// artifact carrying a `# run-config {...}` header line.
nlohmann::json load_config_source(const std::string &path);

// Subcommands. Progress and summaries go to `log`; artifacts go to config.out.
void cmd_build_graph(const RunConfig &config, std::ostream &log);
void cmd_select_authors(const RunConfig &config, std::ostream &log);
void cmd_score(const RunConfig &config, std::ostream &log);
void cmd_evaluate(const RunConfig &config, std::ostream &log);
void cmd_train_mlp(const RunConfig &config, std::ostream &log);
void cmd_report(const RunConfig &config, std::ostream &log);

/// Full CLI: parses arguments, runs a subcommand, maps errors to exit codes
/// (0 ok, 2 input error, 3 empty/degenerate data, 4 divergence).
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace citelink

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <citelink/universe.hpp>

namespace citelink {

/// Train on [Y - d, Y]; test horizon p covers (Y, Y + p].
struct TemporalSplit {
    int reference_year = 0;
    int past_depth = 1;
    std::vector<int> horizons;

    YearInterval train_interval() const { return {reference_year - past_depth, reference_year}; }
    YearInterval test_interval(int horizon) const {
        return {reference_year + 1, reference_year + horizon};
    }
};

TemporalSplit make_temporal_split(int reference_year, int past_depth, std::vector<int> horizons);

struct LabeledCandidates {
    std::vector<CandidatePair> pairs;
    std::vector<bool> labels;

    std::size_t positives() const;
};

/// Positive iff the directed edge src->dst exists in `test`. Nodes are matched
/// across graphs by author name; authors absent from `test` are negatives.
LabeledCandidates label_candidates(const AuthorCitationGraph &train,
                                   const std::vector<CandidatePair> &candidates,
                                   const AuthorCitationGraph &test);

struct PrecisionCurve {
    std::vector<std::pair<std::size_t, double>> points;
    /// Set when some k exceeded the ranked list; that point uses the whole list.
    bool truncated = false;
};

/// precision(k) = positives among the first k / k. `labels[i]` labels
/// `ranked[i]`.
PrecisionCurve precision_at_k(std::span<const CandidatePair> ranked,
                              const std::vector<bool> &labels, std::span<const std::size_t> ks);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;

    bool operator==(const RocPoint &) const = default;
};

/// Groups scores into descending levels with per-level positive counts.
std::vector<ScoreLevel> make_levels(std::span<const double> scores, const std::vector<bool> &labels);

/// Threshold sweep over descending scores; each tie block is one segment.
/// Throws DegenerateDataError("undefined ROC") without both label classes.
std::vector<RocPoint> roc_curve(std::span<const double> scores, const std::vector<bool> &labels);
std::vector<RocPoint> roc_curve(std::span<const ScoreLevel> levels);

/// P(random positive outranks random negative), ties counting one half.
double auc(std::span<const double> scores, const std::vector<bool> &labels);
double auc(std::span<const ScoreLevel> levels);

double trapezoid_area(std::span<const RocPoint> points);

/// Keeps at most `max_points` points of a ROC path, always including both
/// endpoints. Monotonicity is preserved.
std::vector<RocPoint> thin_roc(std::span<const RocPoint> points, std::size_t max_points);

double random_baseline(const std::vector<bool> &labels);
double random_baseline(std::uint64_t positives, std::uint64_t total);

struct MeasureResult {
    std::string name;
    PrecisionCurve precision;
    std::vector<RocPoint> roc;
    std::optional<double> auc;
};

struct EvaluationReport {
    TemporalSplit split;
    int horizon = 0;
    std::uint64_t candidates = 0;
    std::uint64_t positives = 0;
    double random_baseline = 0.0;
    std::vector<MeasureResult> measures;
    std::vector<std::string> warnings;
};

/// Provenance is embedded verbatim under "config".
nlohmann::ordered_json report_to_json(const EvaluationReport &report,
                                      const nlohmann::ordered_json &provenance);
/// `measure,k,precision` rows in measure order, one per k.
void write_precision_csv(std::ostream &out, const EvaluationReport &report,
                         const std::vector<std::string> &comments = {});

/// Scored universe prepared once per training graph and reused across horizons.
struct PreparedScorer {
    UniverseScorer scorer;
    std::vector<ScoreLevel> levels;
    std::vector<CandidatePair> ranked;
};

PreparedScorer prepare_scorer(const CandidateUniverse &universe, UniverseScorer scorer,
                              std::size_t max_k);

/// Positive candidates of the universe: edges of `test` between members that
/// are not training edges. Sorted by (src, dst) in universe node ids.
std::vector<CandidatePair> universe_positives(const CandidateUniverse &universe,
                                              const AuthorCitationGraph &test);

/// Evaluates one scorer against the given positives.
MeasureResult evaluate_scorer(const CandidateUniverse &universe, const PreparedScorer &prepared,
                              const std::vector<CandidatePair> &positives,
                              std::span<const std::size_t> ks, std::size_t roc_points);

} // namespace citelink

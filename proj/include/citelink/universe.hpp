#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <citelink/similarity.hpp>

namespace citelink {

/// A run of candidates sharing one score, as used by ROC/AUC.
struct ScoreLevel {
    double score = 0.0;
    std::uint64_t total = 0;
    std::uint64_t positives = 0;

    bool operator==(const ScoreLevel &) const = default;
};

/**
 * Every ordered pair of member nodes without a training edge, scored sparsely.
 *
 * Pairs with at least one common neighbor are materialized with all ten
 * measures ("explicit rows"). All other candidates are implicit: their
 * neighborhood measures are 0 and PA/WPA follow from node degree/strength.
 * With 10^4 members the universe holds ~10^8 pairs, so nothing here iterates
 * over it unless asked to.
 */
class CandidateUniverse {
public:
    CandidateUniverse(const AuthorCitationGraph &g, std::vector<Node> members,
                      StrengthConvention strength = StrengthConvention::Projected);

    const AuthorCitationGraph &graph() const noexcept { return *graph_; }
    StrengthConvention strength_convention() const noexcept { return strength_; }
    /// Sorted ascending.
    const std::vector<Node> &members() const noexcept { return members_; }
    bool is_member(Node u) const noexcept { return u < member_.size() && member_[u]; }

    /// Number of candidate pairs.
    std::uint64_t size() const noexcept { return size_; }
    bool is_candidate(Node u, Node v) const;

    /// Rows sorted by (src, dst), all ten measures.
    const FeatureTable &explicit_rows() const noexcept { return explicit_; }
    std::optional<std::size_t> explicit_row(CandidatePair p) const;

    /// All ten measures for any candidate (explicit or implicit).
    Scores scores(CandidatePair p) const;

    /// Visits every candidate in (src, dst) order with its ten scores.
    void for_each(const std::function<void(CandidatePair, const Scores &)> &visit) const;

private:
    const AuthorCitationGraph *graph_;
    StrengthConvention strength_;
    std::vector<Node> members_;
    std::vector<char> member_;
    std::uint64_t size_ = 0;
    FeatureTable explicit_;
    std::vector<std::uint64_t> explicit_keys_;
};

/**
 * One score column over a universe. Explicit rows carry their own score;
 * implicit candidates score class_scores[class(u) * class_count + class(v)].
 */
struct UniverseScorer {
    std::string name;
    std::vector<double> explicit_scores;
    std::vector<std::uint32_t> node_class;
    std::uint32_t class_count = 1;
    std::vector<double> class_scores{0.0};

    double implicit_score(Node u, Node v) const {
        return class_scores[std::size_t{node_class[u]} * class_count + node_class[v]];
    }
};

UniverseScorer make_measure_scorer(const CandidateUniverse &universe, MeasureId m);

/// Score of a single candidate under `scorer`.
double score_of(const CandidateUniverse &universe, const UniverseScorer &scorer, CandidatePair p);

/// Distinct scores over the whole universe, descending, with candidate counts
/// (positives left at 0).
std::vector<ScoreLevel> score_levels(const CandidateUniverse &universe,
                                     const UniverseScorer &scorer);

/// First min(k, size) candidates by (score desc, src asc, dst asc).
std::vector<CandidatePair> ranked_top(const CandidateUniverse &universe,
                                      const UniverseScorer &scorer, std::size_t k);

} // namespace citelink

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <citelink/graph.hpp>

namespace citelink {

/// The ten local similarity indices. Order matches the feature-table columns.
enum class MeasureId : std::uint8_t { CN, WCN, JC, WJC, AA, WAA, RA, WRA, PA, WPA };

inline constexpr std::size_t kMeasureCount = 10;
inline constexpr std::array<MeasureId, kMeasureCount> kAllMeasures{
    MeasureId::CN, MeasureId::WCN, MeasureId::JC, MeasureId::WJC, MeasureId::AA,
    MeasureId::WAA, MeasureId::RA,  MeasureId::WRA, MeasureId::PA, MeasureId::WPA};

/// "CN", "WJC", ...
std::string_view measure_name(MeasureId m);
/// Lower-case CSV column name: "cn", "wjc", ...
std::string_view measure_column(MeasureId m);
/// Case-insensitive.
std::optional<MeasureId> parse_measure(std::string_view text);

/// True for measures that are zero whenever the pair has no common neighbor.
constexpr bool is_neighborhood_measure(MeasureId m) {
    return m != MeasureId::PA && m != MeasureId::WPA;
}

using Scores = std::array<double, kMeasureCount>;

struct CandidatePair {
    Node src;
    Node dst;

    auto operator<=>(const CandidatePair &) const = default;
    std::uint64_t key() const noexcept { return (std::uint64_t{src} << 32) | dst; }
};

// Per-pair measures over the undirected projection. All throw std::out_of_range
// for unknown nodes.
double common_neighbors(const AuthorCitationGraph &g, Node u, Node v, bool weighted);
double jaccard(const AuthorCitationGraph &g, Node u, Node v, bool weighted);
double adamic_adar(const AuthorCitationGraph &g, Node u, Node v, bool weighted);
double resource_allocation(const AuthorCitationGraph &g, Node u, Node v, bool weighted);
double preferential_attachment(const AuthorCitationGraph &g, Node u, Node v, bool weighted,
                               StrengthConvention strength = StrengthConvention::Projected);

double score_pair(const AuthorCitationGraph &g, Node u, Node v, MeasureId m,
                  StrengthConvention strength = StrengthConvention::Projected);
/// All ten measures from one neighbor-list intersection.
Scores score_all(const AuthorCitationGraph &g, Node u, Node v,
                 StrengthConvention strength = StrengthConvention::Projected);

/// Node strength used by WPA under the given convention.
std::uint64_t pa_strength(const AuthorCitationGraph &g, Node u, StrengthConvention c);

/// Ordered pairs (u, v), u != v, both in `authors`, without a u->v edge,
/// sorted by (u, v). `authors` need not be sorted.
std::vector<CandidatePair> enumerate_candidates(const AuthorCitationGraph &g,
                                                std::span<const Node> authors);
/// Members of the set that are not nodes of `g` are ignored.
std::vector<CandidatePair> enumerate_candidates(const AuthorCitationGraph &g,
                                                const AuthorSet &authors);

/**
 * Candidate pairs with one score column per requested measure, plus an
 * optional DNN column appended by the MLP scorer.
 */
class FeatureTable {
public:
    FeatureTable() = default;
    FeatureTable(std::vector<MeasureId> measures, std::vector<CandidatePair> rows);

    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const std::vector<CandidatePair> &rows() const noexcept { return rows_; }
    const std::vector<MeasureId> &measures() const noexcept { return measures_; }
    bool has(MeasureId m) const noexcept { return column_index(m).has_value(); }

    double value(std::size_t row, MeasureId m) const;
    double &at(std::size_t row, std::size_t column) {
        return values_[row * measures_.size() + column];
    }
    double at(std::size_t row, std::size_t column) const {
        return values_[row * measures_.size() + column];
    }
    std::vector<double> column(MeasureId m) const;
    std::optional<std::size_t> column_index(MeasureId m) const noexcept;

    bool has_dnn() const noexcept { return dnn_set_; }
    const std::vector<double> &dnn() const noexcept { return dnn_; }
    void set_dnn(std::vector<double> scores);

    YearInterval window;

private:
    std::vector<MeasureId> measures_;
    std::vector<CandidatePair> rows_;
    std::vector<double> values_;
    std::vector<double> dnn_;
    bool dnn_set_ = false;
};

/**
 * Fills every (candidate, measure) cell. Neighborhood measures come from a
 * shared-neighbor sweep per source node; results are bit-identical to
 * score_pair on each candidate.
 */
FeatureTable score_candidates(const AuthorCitationGraph &g,
                              const std::vector<CandidatePair> &candidates,
                              std::span<const MeasureId> measures,
                              StrengthConvention strength = StrengthConvention::Projected);

/// First min(k, n) rows by (score desc, src asc, dst asc).
std::vector<CandidatePair> top_k(const FeatureTable &table, MeasureId m, std::size_t k);
std::vector<CandidatePair> top_k(std::span<const CandidatePair> rows,
                                 std::span<const double> scores, std::size_t k);

/// `src,dst,cn,...,wpa[,dnn]`, rows sorted by (src, dst), 17 significant digits.
void write_feature_csv(std::ostream &out, const AuthorCitationGraph &g, const FeatureTable &table,
                       const std::vector<std::string> &comments = {});

namespace detail {

/// Running sums over common neighbors z of (u, v), visited in ascending z.
struct PairAccumulator {
    std::uint32_t cn = 0;
    std::uint64_t wcn = 0;
    double aa = 0.0;
    double waa = 0.0;
    double ra = 0.0;
    double wra = 0.0;
};

/// 1 / ln|Γ(z)|, or 0 when |Γ(z)| < 2.
double adamic_adar_term(std::size_t degree);
/// ln(1 + s(z)).
double weighted_adamic_adar_log(std::uint64_t strength);

void accumulate(PairAccumulator &acc, std::uint64_t pair_weight_sum, double inv_log_degree,
                double log1p_strength, std::size_t degree, std::uint64_t strength);

Scores finalize(const AuthorCitationGraph &g, Node u, Node v, const PairAccumulator &acc,
                StrengthConvention strength);

} // namespace detail

} // namespace citelink

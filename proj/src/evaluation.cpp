#include <citelink/errors.hpp>
#include <citelink/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace citelink {

TemporalSplit make_temporal_split(int reference_year, int past_depth, std::vector<int> horizons) {
    if (past_depth < 1)
        throw InputError("past depth must be >= 1, got " + std::to_string(past_depth));
    if (horizons.empty())
        throw InputError("no test horizons given");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1)
            throw InputError("horizons must be >= 1, got " + std::to_string(horizons[i]));
        if (i > 0 && horizons[i] <= horizons[i - 1])
            throw InputError("horizons must be strictly increasing");
    }
    return {reference_year, past_depth, std::move(horizons)};
}

std::size_t LabeledCandidates::positives() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
}

LabeledCandidates label_candidates(const AuthorCitationGraph &train,
                                   const std::vector<CandidatePair> &candidates,
                                   const AuthorCitationGraph &test) {
    LabeledCandidates out;
    out.pairs = candidates;
    out.labels.reserve(candidates.size());
    for (const auto &c : candidates) {
        auto u = test.find(train.name(c.src));
        auto v = test.find(train.name(c.dst));
        out.labels.push_back(u && v && test.weight(*u, *v) > 0);
    }
    return out;
}

PrecisionCurve precision_at_k(std::span<const CandidatePair> ranked,
                              const std::vector<bool> &labels, std::span<const std::size_t> ks) {
    if (labels.size() != ranked.size())
        throw std::invalid_argument("labels do not match the ranked list");
    std::vector<std::size_t> hits(ranked.size() + 1, 0);
    for (std::size_t i = 0; i < ranked.size(); ++i)
        hits[i + 1] = hits[i] + (labels[i] ? 1 : 0);
    PrecisionCurve curve;
    for (auto k : ks) {
        if (k == 0)
            throw std::invalid_argument("k must be >= 1");
        auto n = k;
        if (k > ranked.size()) {
            curve.truncated = true;
            n = ranked.size();
        }
        double p = n == 0 ? 0.0 : static_cast<double>(hits[n]) / static_cast<double>(n);
        curve.points.emplace_back(k, p);
    }
    return curve;
}

std::vector<ScoreLevel> make_levels(std::span<const double> scores,
                                    const std::vector<bool> &labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores and labels differ in length");
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (double s : scores)
        if (std::isnan(s))
            throw std::invalid_argument("NaN score");
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<ScoreLevel> levels;
    for (auto i : idx) {
        if (levels.empty() || levels.back().score != scores[i])
            levels.push_back({scores[i], 0, 0});
        ++levels.back().total;
        levels.back().positives += labels[i] ? 1 : 0;
    }
    return levels;
}

namespace {

std::pair<std::uint64_t, std::uint64_t> class_totals(std::span<const ScoreLevel> levels) {
    std::uint64_t pos = 0, neg = 0;
    for (const auto &l : levels) {
        if (l.positives > l.total)
            throw std::invalid_argument("level has more positives than candidates");
        pos += l.positives;
        neg += l.total - l.positives;
    }
    if (pos == 0 || neg == 0)
        throw DegenerateDataError("undefined ROC");
    return {pos, neg};
}

} // namespace

std::vector<RocPoint> roc_curve(std::span<const ScoreLevel> levels) {
    auto [pos, neg] = class_totals(levels);
    std::vector<RocPoint> points{{0.0, 0.0}};
    std::uint64_t tp = 0, fp = 0;
    for (const auto &l : levels) {
        tp += l.positives;
        fp += l.total - l.positives;
        points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return points;
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, const std::vector<bool> &labels) {
    auto levels = make_levels(scores, labels);
    return roc_curve(levels);
}

double auc(std::span<const ScoreLevel> levels) {
    auto [pos, neg] = class_totals(levels);
    // Twice the Mann-Whitney U statistic, exact in integers.
    unsigned __int128 twice_u = 0;
    std::uint64_t neg_above = 0;
    for (const auto &l : levels) {
        const auto level_neg = l.total - l.positives;
        const auto neg_below = neg - neg_above - level_neg;
        twice_u += static_cast<unsigned __int128>(l.positives) * (2 * neg_below + level_neg);
        neg_above += level_neg;
    }
    const auto denom = static_cast<long double>(pos) * static_cast<long double>(neg) * 2.0L;
    return static_cast<double>(static_cast<long double>(twice_u) / denom);
}

double auc(std::span<const double> scores, const std::vector<bool> &labels) {
    auto levels = make_levels(scores, labels);
    return auc(levels);
}

double trapezoid_area(std::span<const RocPoint> points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    return area;
}

std::vector<RocPoint> thin_roc(std::span<const RocPoint> points, std::size_t max_points) {
    if (points.size() <= max_points || max_points < 2)
        return {points.begin(), points.end()};
    std::vector<RocPoint> out;
    out.reserve(max_points);
    const auto last = points.size() - 1;
    for (std::size_t i = 0; i + 1 < max_points; ++i)
        out.push_back(points[i * last / (max_points - 1)]);
    out.push_back(points[last]);
    return out;
}

double random_baseline(std::uint64_t positives, std::uint64_t total) {
    if (total == 0)
        throw std::invalid_argument("random baseline of an empty candidate set");
    return static_cast<double>(positives) / static_cast<double>(total);
}

double random_baseline(const std::vector<bool> &labels) {
    return random_baseline(static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), true)),
                           labels.size());
}

nlohmann::ordered_json report_to_json(const EvaluationReport &report,
                                      const nlohmann::ordered_json &provenance) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["config"] = provenance;
    const auto train = report.split.train_interval();
    const auto test = report.split.test_interval(report.horizon);
    j["split"] = {{"reference_year", report.split.reference_year},
                  {"past_depth", report.split.past_depth},
                  {"horizon", report.horizon},
                  {"train", {train.first, train.last}},
                  {"test", {test.first, test.last}}};
    j["candidates"] = report.candidates;
    j["positives"] = report.positives;
    j["random_baseline"] = report.random_baseline;
    ordered_json measures = ordered_json::object();
    for (const auto &m : report.measures) {
        ordered_json entry;
        ordered_json curve = ordered_json::array();
        for (const auto &[k, p] : m.precision.points)
            curve.push_back({k, p});
        entry["precision_curve"] = curve;
        ordered_json roc = ordered_json::array();
        for (const auto &pt : m.roc)
            roc.push_back({pt.fpr, pt.tpr});
        entry["roc"] = roc;
        if (m.auc)
            entry["auc"] = *m.auc;
        else
            entry["auc"] = nullptr;
        measures[m.name] = entry;
    }
    j["measures"] = measures;
    j["warnings"] = report.warnings;
    return j;
}

void write_precision_csv(std::ostream &out, const EvaluationReport &report,
                         const std::vector<std::string> &comments) {
    for (const auto &c : comments)
        out << '#' << c << '\n';
    out << "measure,k,precision\n";
    char buf[32];
    for (const auto &m : report.measures) {
        for (const auto &[k, p] : m.precision.points) {
            std::snprintf(buf, sizeof buf, "%.17g", p);
            out << m.name << ',' << k << ',' << buf << '\n';
        }
    }
}

PreparedScorer prepare_scorer(const CandidateUniverse &universe, UniverseScorer scorer,
                              std::size_t max_k) {
    PreparedScorer prepared;
    prepared.levels = score_levels(universe, scorer);
    prepared.ranked = ranked_top(universe, scorer, max_k);
    prepared.scorer = std::move(scorer);
    return prepared;
}

std::vector<CandidatePair> universe_positives(const CandidateUniverse &universe,
                                              const AuthorCitationGraph &test) {
    const auto &train = universe.graph();
    std::vector<Node> to_train(test.node_count(), AuthorCitationGraph::kNoNode);
    for (Node x = 0; x < test.node_count(); ++x)
        if (auto u = train.find(test.name(x)))
            to_train[x] = *u;
    std::vector<CandidatePair> out;
    for (const auto &e : test.edges()) {
        const Node u = to_train[e.src], v = to_train[e.dst];
        if (u == AuthorCitationGraph::kNoNode || v == AuthorCitationGraph::kNoNode)
            continue;
        if (universe.is_candidate(u, v))
            out.push_back({u, v});
    }
    std::sort(out.begin(), out.end());
    return out;
}

MeasureResult evaluate_scorer(const CandidateUniverse &universe, const PreparedScorer &prepared,
                              const std::vector<CandidatePair> &positives,
                              std::span<const std::size_t> ks, std::size_t roc_points) {
    MeasureResult result;
    result.name = prepared.scorer.name;

    std::vector<bool> labels(prepared.ranked.size());
    for (std::size_t i = 0; i < prepared.ranked.size(); ++i)
        labels[i] = std::binary_search(positives.begin(), positives.end(), prepared.ranked[i]);
    result.precision = precision_at_k(prepared.ranked, labels, ks);

    auto levels = prepared.levels;
    for (const auto &p : positives) {
        const double s = score_of(universe, prepared.scorer, p);
        auto it = std::lower_bound(levels.begin(), levels.end(), s,
                                   [](const ScoreLevel &l, double x) { return l.score > x; });
        if (it == levels.end() || it->score != s)
            throw std::logic_error("positive score missing from the score levels");
        ++it->positives;
    }
    const auto pos = positives.size();
    if (pos > 0 && pos < universe.size()) {
        result.roc = thin_roc(roc_curve(levels), roc_points);
        result.auc = auc(levels);
    }
    return result;
}

} // namespace citelink

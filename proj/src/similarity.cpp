#include <citelink/errors.hpp>
#include <citelink/similarity.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace citelink {

namespace {

constexpr std::array<std::string_view, kMeasureCount> kNames{"CN", "WCN", "JC", "WJC", "AA",
                                                            "WAA", "RA", "WRA", "PA", "WPA"};
constexpr std::array<std::string_view, kMeasureCount> kColumns{
    "cn", "wcn", "jc", "wjc", "aa", "waa", "ra", "wra", "pa", "wpa"};

void check_pair(const AuthorCitationGraph &g, Node u, Node v) {
    if (!g.contains(u))
        throw std::out_of_range("unknown node " + std::to_string(u));
    if (!g.contains(v))
        throw std::out_of_range("unknown node " + std::to_string(v));
}

detail::PairAccumulator intersect(const AuthorCitationGraph &g, Node u, Node v) {
    detail::PairAccumulator acc;
    auto nu = g.neighbors(u), nv = g.neighbors(v);
    auto wu = g.pair_weights(u), wv = g.pair_weights(v);
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) {
            ++i;
        } else if (nv[j] < nu[i]) {
            ++j;
        } else {
            Node z = nu[i];
            detail::accumulate(acc, std::uint64_t{wu[i]} + wv[j],
                               detail::adamic_adar_term(g.degree(z)),
                               detail::weighted_adamic_adar_log(g.strength(z)), g.degree(z),
                               g.strength(z));
            ++i;
            ++j;
        }
    }
    return acc;
}

} // namespace

std::string_view measure_name(MeasureId m) { return kNames[static_cast<std::size_t>(m)]; }
std::string_view measure_column(MeasureId m) { return kColumns[static_cast<std::size_t>(m)]; }

std::optional<MeasureId> parse_measure(std::string_view text) {
    std::string upper(text);
    for (auto &c : upper)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto m : kAllMeasures)
        if (measure_name(m) == upper)
            return m;
    return std::nullopt;
}

namespace detail {

double adamic_adar_term(std::size_t degree) {
    return degree >= 2 ? 1.0 / std::log(static_cast<double>(degree)) : 0.0;
}

double weighted_adamic_adar_log(std::uint64_t strength) {
    return std::log(1.0 + static_cast<double>(strength));
}

void accumulate(PairAccumulator &acc, std::uint64_t pair_weight_sum, double inv_log_degree,
                double log1p_strength, std::size_t degree, std::uint64_t strength) {
    const auto w = static_cast<double>(pair_weight_sum);
    acc.cn += 1;
    acc.wcn += pair_weight_sum;
    acc.aa += inv_log_degree;
    acc.waa += w / log1p_strength;
    acc.ra += 1.0 / static_cast<double>(degree);
    acc.wra += w / static_cast<double>(strength);
}

Scores finalize(const AuthorCitationGraph &g, Node u, Node v, const PairAccumulator &acc,
                StrengthConvention strength) {
    Scores s{};
    const auto du = g.degree(u), dv = g.degree(v);
    const auto cn = static_cast<double>(acc.cn);
    const auto wcn = static_cast<double>(acc.wcn);
    s[0] = cn;
    s[1] = wcn;
    const auto union_size = du + dv - acc.cn;
    s[2] = union_size == 0 ? 0.0 : cn / static_cast<double>(union_size);
    const auto total_strength = g.strength(u) + g.strength(v);
    s[3] = total_strength == 0 ? 0.0 : wcn / static_cast<double>(total_strength);
    s[4] = acc.aa;
    s[5] = acc.waa;
    s[6] = acc.ra;
    s[7] = acc.wra;
    s[8] = static_cast<double>(du) * static_cast<double>(dv);
    s[9] = static_cast<double>(pa_strength(g, u, strength)) *
           static_cast<double>(pa_strength(g, v, strength));
    return s;
}

} // namespace detail

std::uint64_t pa_strength(const AuthorCitationGraph &g, Node u, StrengthConvention c) {
    return c == StrengthConvention::In ? g.in_strength(u) : g.strength(u);
}

Scores score_all(const AuthorCitationGraph &g, Node u, Node v, StrengthConvention strength) {
    check_pair(g, u, v);
    return detail::finalize(g, u, v, intersect(g, u, v), strength);
}

double score_pair(const AuthorCitationGraph &g, Node u, Node v, MeasureId m,
                  StrengthConvention strength) {
    return score_all(g, u, v, strength)[static_cast<std::size_t>(m)];
}

double common_neighbors(const AuthorCitationGraph &g, Node u, Node v, bool weighted) {
    return score_pair(g, u, v, weighted ? MeasureId::WCN : MeasureId::CN);
}

double jaccard(const AuthorCitationGraph &g, Node u, Node v, bool weighted) {
    return score_pair(g, u, v, weighted ? MeasureId::WJC : MeasureId::JC);
}

double adamic_adar(const AuthorCitationGraph &g, Node u, Node v, bool weighted) {
    return score_pair(g, u, v, weighted ? MeasureId::WAA : MeasureId::AA);
}

double resource_allocation(const AuthorCitationGraph &g, Node u, Node v, bool weighted) {
    return score_pair(g, u, v, weighted ? MeasureId::WRA : MeasureId::RA);
}

double preferential_attachment(const AuthorCitationGraph &g, Node u, Node v, bool weighted,
                               StrengthConvention strength) {
    return score_pair(g, u, v, weighted ? MeasureId::WPA : MeasureId::PA, strength);
}

std::vector<CandidatePair> enumerate_candidates(const AuthorCitationGraph &g,
                                                std::span<const Node> authors) {
    std::vector<Node> nodes(authors.begin(), authors.end());
    for (Node u : nodes)
        if (!g.contains(u))
            throw std::out_of_range("unknown node " + std::to_string(u));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<CandidatePair> out;
    for (Node u : nodes) {
        auto targets = g.out_neighbors(u);
        auto t = targets.begin();
        for (Node v : nodes) {
            if (v == u)
                continue;
            while (t != targets.end() && *t < v)
                ++t;
            if (t != targets.end() && *t == v)
                continue;
            out.push_back({u, v});
        }
    }
    return out;
}

std::vector<CandidatePair> enumerate_candidates(const AuthorCitationGraph &g,
                                                const AuthorSet &authors) {
    std::vector<Node> nodes;
    nodes.reserve(authors.members.size());
    for (AuthorId a : authors.members) {
        Node u = g.node_of_author(a);
        if (u != AuthorCitationGraph::kNoNode)
            nodes.push_back(u);
    }
    return enumerate_candidates(g, nodes);
}

FeatureTable::FeatureTable(std::vector<MeasureId> measures, std::vector<CandidatePair> rows)
    : measures_(std::move(measures)), rows_(std::move(rows)),
      values_(rows_.size() * measures_.size(), 0.0) {}

std::optional<std::size_t> FeatureTable::column_index(MeasureId m) const noexcept {
    auto it = std::find(measures_.begin(), measures_.end(), m);
    if (it == measures_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - measures_.begin());
}

double FeatureTable::value(std::size_t row, MeasureId m) const {
    auto c = column_index(m);
    if (!c)
        throw std::invalid_argument("feature table has no column " + std::string(measure_name(m)));
    return at(row, *c);
}

std::vector<double> FeatureTable::column(MeasureId m) const {
    auto c = column_index(m);
    if (!c)
        throw std::invalid_argument("feature table has no column " + std::string(measure_name(m)));
    std::vector<double> out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        out[r] = at(r, *c);
    return out;
}

void FeatureTable::set_dnn(std::vector<double> scores) {
    if (scores.size() != rows_.size())
        throw std::invalid_argument("DNN column length does not match the table");
    dnn_ = std::move(scores);
    dnn_set_ = true;
}

FeatureTable score_candidates(const AuthorCitationGraph &g,
                              const std::vector<CandidatePair> &candidates,
                              std::span<const MeasureId> measures, StrengthConvention strength) {
    FeatureTable table(std::vector<MeasureId>(measures.begin(), measures.end()), candidates);
    table.window = g.window();
    if (candidates.empty() || measures.empty())
        return table;

    for (const auto &c : candidates)
        check_pair(g, c.src, c.dst);

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].src < candidates[b].src;
    });

    const auto n = g.node_count();
    std::vector<double> inv_log_degree(n), log1p_strength(n);
    for (Node z = 0; z < n; ++z) {
        inv_log_degree[z] = detail::adamic_adar_term(g.degree(z));
        log1p_strength[z] = detail::weighted_adamic_adar_log(g.strength(z));
    }

    std::vector<detail::PairAccumulator> acc(n);
    std::vector<Node> touched;
    std::size_t i = 0;
    while (i < order.size()) {
        const Node u = candidates[order[i]].src;
        auto nu = g.neighbors(u);
        auto wu = g.pair_weights(u);
        for (std::size_t a = 0; a < nu.size(); ++a) {
            const Node z = nu[a];
            auto nz = g.neighbors(z);
            auto wz = g.pair_weights(z);
            for (std::size_t b = 0; b < nz.size(); ++b) {
                const Node v = nz[b];
                if (v == u)
                    continue;
                if (acc[v].cn == 0)
                    touched.push_back(v);
                detail::accumulate(acc[v], std::uint64_t{wu[a]} + wz[b], inv_log_degree[z],
                                   log1p_strength[z], g.degree(z), g.strength(z));
            }
        }
        for (; i < order.size() && candidates[order[i]].src == u; ++i) {
            const auto row = order[i];
            const Scores s = detail::finalize(g, u, candidates[row].dst,
                                              acc[candidates[row].dst], strength);
            for (std::size_t c = 0; c < measures.size(); ++c)
                table.at(row, c) = s[static_cast<std::size_t>(measures[c])];
        }
        for (Node v : touched)
            acc[v] = {};
        touched.clear();
    }
    return table;
}

std::vector<CandidatePair> top_k(std::span<const CandidatePair> rows,
                                 std::span<const double> scores, std::size_t k) {
    if (rows.size() != scores.size())
        throw std::invalid_argument("score column length does not match rows");
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return rows[a] < rows[b];
    };
    k = std::min(k, rows.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
    std::vector<CandidatePair> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back(rows[idx[i]]);
    return out;
}

std::vector<CandidatePair> top_k(const FeatureTable &table, MeasureId m, std::size_t k) {
    auto col = table.column(m);
    return top_k(table.rows(), col, k);
}

void write_feature_csv(std::ostream &out, const AuthorCitationGraph &g, const FeatureTable &table,
                       const std::vector<std::string> &comments) {
    for (const auto &c : comments)
        out << '#' << c << '\n';
    out << "src,dst";
    for (auto m : table.measures())
        out << ',' << measure_column(m);
    if (table.has_dnn())
        out << ",dnn";
    out << '\n';

    std::vector<std::size_t> order(table.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return table.rows()[a] < table.rows()[b]; });
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << ',' << buf;
    };
    for (auto r : order) {
        const auto &row = table.rows()[r];
        out << g.name(row.src) << ',' << g.name(row.dst);
        for (std::size_t c = 0; c < table.measures().size(); ++c)
            put(table.at(r, c));
        if (table.has_dnn())
            put(table.dnn()[r]);
        out << '\n';
    }
}

} // namespace citelink

#include <citelink/universe.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace citelink {

CandidateUniverse::CandidateUniverse(const AuthorCitationGraph &g, std::vector<Node> members,
                                     StrengthConvention strength)
    : graph_(&g), strength_(strength), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    const auto n = g.node_count();
    member_.assign(n, 0);
    for (Node u : members_) {
        if (!g.contains(u))
            throw std::out_of_range("unknown node " + std::to_string(u));
        member_[u] = 1;
    }

    const std::uint64_t m = members_.size();
    std::uint64_t member_edges = 0;
    for (Node u : members_)
        for (Node v : g.out_neighbors(u))
            member_edges += member_[v];
    size_ = m * (m > 0 ? m - 1 : 0) - member_edges;

    std::vector<double> inv_log_degree(n), log1p_strength(n);
    for (Node z = 0; z < n; ++z) {
        inv_log_degree[z] = detail::adamic_adar_term(g.degree(z));
        log1p_strength[z] = detail::weighted_adamic_adar_log(g.strength(z));
    }

    std::vector<CandidatePair> rows;
    std::vector<double> values;
    std::vector<detail::PairAccumulator> acc(n);
    std::vector<Node> touched;
    for (Node u : members_) {
        auto nu = g.neighbors(u);
        auto wu = g.pair_weights(u);
        for (std::size_t a = 0; a < nu.size(); ++a) {
            const Node z = nu[a];
            auto nz = g.neighbors(z);
            auto wz = g.pair_weights(z);
            for (std::size_t b = 0; b < nz.size(); ++b) {
                const Node v = nz[b];
                if (v == u || !member_[v])
                    continue;
                if (acc[v].cn == 0)
                    touched.push_back(v);
                detail::accumulate(acc[v], std::uint64_t{wu[a]} + wz[b], inv_log_degree[z],
                                   log1p_strength[z], g.degree(z), g.strength(z));
            }
        }
        std::sort(touched.begin(), touched.end());
        for (Node v : touched) {
            if (g.weight(u, v) == 0) {
                rows.push_back({u, v});
                const Scores s = detail::finalize(g, u, v, acc[v], strength_);
                values.insert(values.end(), s.begin(), s.end());
            }
            acc[v] = {};
        }
        touched.clear();
    }

    explicit_keys_.reserve(rows.size());
    for (const auto &r : rows)
        explicit_keys_.push_back(r.key());
    explicit_ = FeatureTable(std::vector<MeasureId>(kAllMeasures.begin(), kAllMeasures.end()),
                             std::move(rows));
    explicit_.window = g.window();
    for (std::size_t r = 0; r < explicit_.size(); ++r)
        for (std::size_t c = 0; c < kMeasureCount; ++c)
            explicit_.at(r, c) = values[r * kMeasureCount + c];
}

bool CandidateUniverse::is_candidate(Node u, Node v) const {
    return u != v && is_member(u) && is_member(v) && graph_->weight(u, v) == 0;
}

std::optional<std::size_t> CandidateUniverse::explicit_row(CandidatePair p) const {
    auto it = std::lower_bound(explicit_keys_.begin(), explicit_keys_.end(), p.key());
    if (it == explicit_keys_.end() || *it != p.key())
        return std::nullopt;
    return static_cast<std::size_t>(it - explicit_keys_.begin());
}

Scores CandidateUniverse::scores(CandidatePair p) const {
    if (auto r = explicit_row(p)) {
        Scores s{};
        for (std::size_t c = 0; c < kMeasureCount; ++c)
            s[c] = explicit_.at(*r, c);
        return s;
    }
    return detail::finalize(*graph_, p.src, p.dst, {}, strength_);
}

void CandidateUniverse::for_each(
    const std::function<void(CandidatePair, const Scores &)> &visit) const {
    std::size_t next = 0;
    Scores s{};
    for (Node u : members_) {
        for (Node v : members_) {
            if (v == u || graph_->weight(u, v) != 0)
                continue;
            const CandidatePair p{u, v};
            if (next < explicit_keys_.size() && explicit_keys_[next] == p.key()) {
                for (std::size_t c = 0; c < kMeasureCount; ++c)
                    s[c] = explicit_.at(next, c);
                ++next;
            } else {
                s = detail::finalize(*graph_, u, v, {}, strength_);
            }
            visit(p, s);
        }
    }
}

namespace {

/// Assigns each member a class id by a per-node key; class ids follow key order.
template <typename Key>
std::uint32_t classify(const CandidateUniverse &universe, std::vector<std::uint32_t> &node_class,
                       std::vector<Key> &class_keys, const std::function<Key(Node)> &key_of) {
    std::map<Key, std::uint32_t> ids;
    for (Node u : universe.members())
        ids.emplace(key_of(u), 0);
    std::uint32_t next = 0;
    class_keys.clear();
    for (auto &[k, id] : ids) {
        id = next++;
        class_keys.push_back(k);
    }
    node_class.assign(universe.graph().node_count(), 0);
    for (Node u : universe.members())
        node_class[u] = ids.at(key_of(u));
    return next;
}

} // namespace

UniverseScorer make_measure_scorer(const CandidateUniverse &universe, MeasureId m) {
    UniverseScorer scorer;
    scorer.name = std::string(measure_name(m));
    scorer.explicit_scores = universe.explicit_rows().column(m);
    if (is_neighborhood_measure(m)) {
        scorer.node_class.assign(universe.graph().node_count(), 0);
        scorer.class_count = 1;
        scorer.class_scores = {0.0};
        return scorer;
    }
    const auto &g = universe.graph();
    const auto conv = universe.strength_convention();
    std::vector<std::uint64_t> keys;
    std::function<std::uint64_t(Node)> key_of =
        m == MeasureId::PA ? std::function<std::uint64_t(Node)>(
                                 [&g](Node u) { return std::uint64_t{g.degree(u)}; })
                           : std::function<std::uint64_t(Node)>(
                                 [&g, conv](Node u) { return pa_strength(g, u, conv); });
    scorer.class_count = classify(universe, scorer.node_class, keys, key_of);
    const auto k = scorer.class_count;
    scorer.class_scores.assign(std::size_t{k} * k, 0.0);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j)
            scorer.class_scores[std::size_t{i} * k + j] =
                static_cast<double>(keys[i]) * static_cast<double>(keys[j]);
    return scorer;
}

double score_of(const CandidateUniverse &universe, const UniverseScorer &scorer, CandidatePair p) {
    if (auto r = universe.explicit_row(p))
        return scorer.explicit_scores[*r];
    return scorer.implicit_score(p.src, p.dst);
}

namespace {

/// Implicit candidate counts per class pair: all ordered member pairs minus
/// the diagonal, training edges and explicit rows.
std::vector<std::uint64_t> implicit_class_counts(const CandidateUniverse &universe,
                                                 const UniverseScorer &scorer) {
    const auto k = scorer.class_count;
    std::vector<std::uint64_t> size(k, 0);
    for (Node u : universe.members())
        ++size[scorer.node_class[u]];
    std::vector<std::int64_t> count(std::size_t{k} * k, 0);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j)
            count[std::size_t{i} * k + j] = static_cast<std::int64_t>(size[i] * size[j]) -
                                            (i == j ? static_cast<std::int64_t>(size[i]) : 0);
    const auto &g = universe.graph();
    for (Node u : universe.members())
        for (Node v : g.out_neighbors(u))
            if (universe.is_member(v))
                --count[std::size_t{scorer.node_class[u]} * k + scorer.node_class[v]];
    for (const auto &r : universe.explicit_rows().rows())
        --count[std::size_t{scorer.node_class[r.src]} * k + scorer.node_class[r.dst]];
    std::vector<std::uint64_t> out(count.size());
    for (std::size_t i = 0; i < count.size(); ++i) {
        if (count[i] < 0)
            throw std::logic_error("negative implicit class count");
        out[i] = static_cast<std::uint64_t>(count[i]);
    }
    return out;
}

} // namespace

std::vector<ScoreLevel> score_levels(const CandidateUniverse &universe,
                                     const UniverseScorer &scorer) {
    std::vector<std::pair<double, std::uint64_t>> entries;
    entries.reserve(scorer.explicit_scores.size() + scorer.class_scores.size());
    for (double s : scorer.explicit_scores)
        entries.emplace_back(s, 1);
    auto counts = implicit_class_counts(universe, scorer);
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0)
            entries.emplace_back(scorer.class_scores[i], counts[i]);
    std::sort(entries.begin(), entries.end(),
              [](const auto &a, const auto &b) { return a.first > b.first; });

    std::vector<ScoreLevel> levels;
    for (const auto &[s, c] : entries) {
        if (!levels.empty() && levels.back().score == s)
            levels.back().total += c;
        else
            levels.push_back({s, c, 0});
    }
    return levels;
}

namespace {

/// First `k` implicit candidates by (score desc, src asc, dst asc), produced
/// one score level of class pairs at a time.
std::vector<std::pair<double, CandidatePair>>
implicit_top(const CandidateUniverse &universe, const UniverseScorer &scorer, std::size_t k) {
    std::vector<std::pair<double, CandidatePair>> out;
    if (k == 0)
        return out;
    const auto nc = scorer.class_count;
    const auto &g = universe.graph();

    std::vector<std::vector<Node>> members_of(nc);
    for (Node u : universe.members())
        members_of[scorer.node_class[u]].push_back(u);

    std::vector<std::uint32_t> pairs(std::size_t{nc} * nc);
    std::iota(pairs.begin(), pairs.end(), 0u);
    std::stable_sort(pairs.begin(), pairs.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scorer.class_scores[a] > scorer.class_scores[b];
    });

    std::size_t p = 0;
    while (p < pairs.size() && out.size() < k) {
        const double level = scorer.class_scores[pairs[p]];
        std::map<std::uint32_t, std::vector<std::uint32_t>> partners;
        for (; p < pairs.size() && scorer.class_scores[pairs[p]] == level; ++p)
            partners[pairs[p] / nc].push_back(pairs[p] % nc);

        std::vector<Node> srcs;
        std::map<std::uint32_t, std::vector<Node>> targets;
        for (auto &[ci, cjs] : partners) {
            srcs.insert(srcs.end(), members_of[ci].begin(), members_of[ci].end());
            auto &t = targets[ci];
            for (auto cj : cjs)
                t.insert(t.end(), members_of[cj].begin(), members_of[cj].end());
            std::sort(t.begin(), t.end());
        }
        std::sort(srcs.begin(), srcs.end());

        for (Node u : srcs) {
            for (Node v : targets.at(scorer.node_class[u])) {
                if (v == u || g.weight(u, v) != 0 || universe.explicit_row({u, v}))
                    continue;
                out.push_back({level, {u, v}});
                if (out.size() == k)
                    return out;
            }
        }
    }
    return out;
}

} // namespace

std::vector<CandidatePair> ranked_top(const CandidateUniverse &universe,
                                      const UniverseScorer &scorer, std::size_t k) {
    k = static_cast<std::size_t>(std::min<std::uint64_t>(k, universe.size()));
    const auto &rows = universe.explicit_rows().rows();
    auto head = top_k(rows, scorer.explicit_scores, k);
    std::vector<std::pair<double, CandidatePair>> explicit_head;
    explicit_head.reserve(head.size());
    for (const auto &p : head)
        explicit_head.push_back({scorer.explicit_scores[*universe.explicit_row(p)], p});
    auto implicit_head = implicit_top(universe, scorer, k);

    std::vector<CandidatePair> out;
    out.reserve(k);
    std::size_t a = 0, b = 0;
    while (out.size() < k) {
        bool take_a;
        if (a == explicit_head.size())
            take_a = false;
        else if (b == implicit_head.size())
            take_a = true;
        else if (explicit_head[a].first != implicit_head[b].first)
            take_a = explicit_head[a].first > implicit_head[b].first;
        else
            take_a = explicit_head[a].second < implicit_head[b].second;
        out.push_back(take_a ? explicit_head[a++].second : implicit_head[b++].second);
    }
    return out;
}

} // namespace citelink

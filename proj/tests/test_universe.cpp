#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include <citelink/universe.hpp>

#include "oracle.hpp"

using namespace citelink;

namespace {

std::vector<Node> random_members(std::mt19937_64 &rng, std::size_t n, double keep) {
    std::vector<Node> m;
    std::uniform_real_distribution<double> unit(0, 1);
    for (Node i = 0; i < n; ++i)
        if (unit(rng) < keep)
            m.push_back(i);
    return m;
}

/// Levels by direct counting over (score, candidate) pairs.
std::vector<ScoreLevel> brute_levels(const std::vector<double> &scores) {
    std::map<double, std::uint64_t, std::greater<>> count;
    for (double s : scores)
        ++count[s];
    std::vector<ScoreLevel> out;
    for (auto [s, n] : count)
        out.push_back({s, n, 0});
    return out;
}

std::vector<CandidatePair> brute_ranked(std::vector<CandidatePair> pairs,
                                        const std::vector<double> &scores, std::size_t k) {
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return pairs[a] < pairs[b];
    });
    std::vector<CandidatePair> out;
    for (std::size_t i = 0; i < std::min(k, idx.size()); ++i)
        out.push_back(pairs[idx[i]]);
    return out;
}

} // namespace

TEST_CASE("universe covers exactly the enumerated candidates") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = oracle::random_graph(rng, 4 + static_cast<int>(rng() % 30), 0.08, 3);
        auto g = oracle::to_graph(d);
        auto members = random_members(rng, g.node_count(), 0.7);
        CandidateUniverse universe(g, members);
        auto cands = enumerate_candidates(g, members);
        CHECK(universe.size() == cands.size());

        std::vector<CandidatePair> visited;
        universe.for_each([&](CandidatePair p, const Scores &s) {
            visited.push_back(p);
            CHECK(s == score_all(g, p.src, p.dst));
            CHECK(universe.scores(p) == s);
            CHECK(universe.explicit_row(p).has_value() == (s[0] > 0));
        });
        CHECK(visited == cands);
        for (Node x = 0; x < g.node_count(); ++x)
            for (Node y = 0; y < g.node_count(); ++y)
                CHECK(universe.is_candidate(x, y) ==
                      std::binary_search(cands.begin(), cands.end(), CandidatePair{x, y}));
        const auto &rows = universe.explicit_rows().rows();
        CHECK(std::is_sorted(rows.begin(), rows.end()));
    }
}

TEST_CASE("measure scorers give exact levels and rankings") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 25; ++trial) {
        auto d = oracle::random_graph(rng, 4 + static_cast<int>(rng() % 30), 0.1, 4);
        auto g = oracle::to_graph(d);
        auto members = random_members(rng, g.node_count(), 0.8);
        auto conv = trial % 2 ? StrengthConvention::In : StrengthConvention::Projected;
        CandidateUniverse universe(g, members, conv);
        auto cands = enumerate_candidates(g, members);
        auto table = score_candidates(g, cands, kAllMeasures, conv);
        for (auto m : kAllMeasures) {
            auto scorer = make_measure_scorer(universe, m);
            auto column = table.column(m);
            for (std::size_t i = 0; i < cands.size(); ++i)
                CHECK(score_of(universe, scorer, cands[i]) == column[i]);
            CHECK(score_levels(universe, scorer) == brute_levels(column));
            for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{7}, cands.size(),
                                  cands.size() + 5})
                CHECK(ranked_top(universe, scorer, k) == brute_ranked(cands, column, k));
        }
    }
}

TEST_CASE("custom class scorers rank implicit and explicit candidates together") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = oracle::random_graph(rng, 5 + static_cast<int>(rng() % 25), 0.1, 3);
        auto g = oracle::to_graph(d);
        auto members = random_members(rng, g.node_count(), 0.9);
        CandidateUniverse universe(g, members);
        auto cands = enumerate_candidates(g, members);

        UniverseScorer scorer;
        scorer.name = "X";
        scorer.class_count = 3;
        scorer.node_class.resize(g.node_count());
        for (auto &c : scorer.node_class)
            c = static_cast<std::uint32_t>(rng() % 3);
        scorer.class_scores.resize(9);
        for (auto &s : scorer.class_scores)
            s = static_cast<double>(rng() % 4) / 4.0;
        for (std::size_t r = 0; r < universe.explicit_rows().size(); ++r)
            scorer.explicit_scores.push_back(static_cast<double>(rng() % 5) / 4.0);

        std::vector<double> scores;
        for (auto p : cands) {
            auto row = universe.explicit_row(p);
            scores.push_back(row ? scorer.explicit_scores[*row] : scorer.implicit_score(p.src, p.dst));
            CHECK(score_of(universe, scorer, p) == scores.back());
        }
        CHECK(score_levels(universe, scorer) == brute_levels(scores));
        for (std::size_t k : {std::size_t{1}, std::size_t{10}, cands.size()})
            CHECK(ranked_top(universe, scorer, k) == brute_ranked(cands, scores, k));
    }
}

TEST_CASE("empty and single-member universes") {
    oracle::DirectedGraph d;
    d.n = 3;
    d.w = {{{0, 1}, 1}};
    auto g = oracle::to_graph(d);
    CandidateUniverse one(g, {0});
    CHECK(one.size() == 0);
    CHECK(ranked_top(one, make_measure_scorer(one, MeasureId::PA), 5).empty());
    CHECK(score_levels(one, make_measure_scorer(one, MeasureId::CN)).empty());

    CandidateUniverse both(g, {0, 1});
    CHECK(both.size() == 1); // only 1 -> 0
    CHECK(ranked_top(both, make_measure_scorer(both, MeasureId::PA), 5) ==
          std::vector<CandidatePair>{{1, 0}});
}

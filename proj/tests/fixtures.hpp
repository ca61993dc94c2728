#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <citelink/graph.hpp>
#include <citelink/ingest.hpp>

namespace fixtures {

/// Four-article toy corpus over authors A..H. Article 1 (A, B) cites the
/// article by C, D, E; the remaining citations chain down to H.
inline std::vector<citelink::PaperRecord> toy_corpus() {
    return {
        {"art1", 2000, {"A", "B"}, {"art2", "art4"}},
        {"art2", 1999, {"C", "D", "E"}, {"art3"}},
        {"art3", 1998, {"F", "G"}, {"art4"}},
        {"art4", 1997, {"H"}, {}},
    };
}

/// Directed edges of the toy network (all weight 1).
inline std::set<std::pair<std::string, std::string>> toy_edges() {
    return {{"A", "C"}, {"A", "D"}, {"A", "E"}, {"B", "C"}, {"B", "D"}, {"B", "E"},
            {"A", "H"}, {"B", "H"}, {"C", "F"}, {"C", "G"}, {"D", "F"}, {"D", "G"},
            {"E", "F"}, {"E", "G"}, {"F", "H"}, {"G", "H"}};
}

inline citelink::YearInterval toy_window() { return {1990, 2000}; }

/// Nodes a=0, b=1, c=2, u=3, v=4.
enum : citelink::Node { a = 0, b = 1, c = 2, u = 3, v = 4 };

/// Projection u-a, u-b, v-a, v-b, a-c with unit pair weights; edge directions
/// are mixed on purpose.
inline citelink::AuthorCitationGraph g1() {
    return citelink::AuthorCitationGraph({"a", "b", "c", "u", "v"}, {0, 1, 2, 3, 4},
                                         {{u, a, 1}, {b, u, 1}, {v, a, 1}, {v, b, 1}, {c, a, 1}},
                                         {2000, 2001});
}

/// Same topology as G1 with ŵ(u,a)=2, ŵ(u,b)=1, ŵ(v,a)=3, ŵ(v,b)=1, ŵ(a,c)=4.
inline citelink::AuthorCitationGraph g2() {
    return citelink::AuthorCitationGraph(
        {"a", "b", "c", "u", "v"}, {0, 1, 2, 3, 4},
        {{u, a, 2}, {u, b, 1}, {v, a, 1}, {a, v, 2}, {b, v, 1}, {a, c, 4}}, {2000, 2001});
}

} // namespace fixtures

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <citelink/ingest.hpp>

namespace citelink {

/// Which node strength WPA multiplies: total strength of the undirected
/// projection, or the weight of incoming citations only.
enum class StrengthConvention { Projected, In };

std::string to_string(StrengthConvention c);
StrengthConvention parse_strength_convention(std::string_view text);

struct Edge {
    std::uint32_t src;
    std::uint32_t dst;
    std::uint32_t weight;

    bool operator==(const Edge &) const = default;
};

/**
 * Directed weighted author-citation graph with its undirected projection.
 *
 * Nodes are dense indices 0..node_count()-1 assigned in ascending author-id
 * order. Adjacency is stored in CSR form with sorted neighbor lists; the
 * graph never changes after construction.
 */
class AuthorCitationGraph {
public:
    using Node = std::uint32_t;
    static constexpr Node kNoNode = static_cast<Node>(-1);

    AuthorCitationGraph() = default;

    /// `names` must be sorted and unique. Edges may repeat (weights add up);
    /// self-loops are dropped. `author_ids` maps nodes to corpus author ids
    /// and may be empty for graphs not built from a corpus.
    AuthorCitationGraph(std::vector<std::string> names, std::vector<AuthorId> author_ids,
                        std::vector<Edge> edges, YearInterval window);

    std::size_t node_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return out_.targets.size(); }
    const YearInterval &window() const noexcept { return window_; }

    const std::string &name(Node u) const { return names_.at(u); }
    const std::vector<std::string> &names() const noexcept { return names_; }
    std::optional<Node> find(std::string_view name) const;

    /// Corpus author id of a node; only meaningful for graphs built from a corpus.
    AuthorId author(Node u) const { return author_ids_.at(u); }
    /// kNoNode when the author is not a node of this graph.
    Node node_of_author(AuthorId a) const;

    bool contains(Node u) const noexcept { return u < node_count(); }

    /// True iff the directed edge u->v is stored. Throws on unknown nodes.
    bool edge_exists(Node u, Node v) const;
    /// Weight of u->v, 0 if absent. No bounds checking.
    std::uint32_t weight(Node u, Node v) const noexcept;

    std::span<const Node> out_neighbors(Node u) const noexcept { return out_.row(u); }
    std::span<const std::uint32_t> out_weights(Node u) const noexcept { return out_.row_w(u); }
    std::span<const Node> in_neighbors(Node u) const noexcept { return in_.row(u); }
    std::span<const std::uint32_t> in_weights(Node u) const noexcept { return in_.row_w(u); }

    /// Γ(u) of the undirected projection, ascending.
    std::span<const Node> neighbors(Node u) const noexcept { return proj_.row(u); }
    /// ŵ(u, z) aligned with neighbors(u).
    std::span<const std::uint32_t> pair_weights(Node u) const noexcept { return proj_.row_w(u); }

    std::size_t degree(Node u) const noexcept { return proj_.offsets[u + 1] - proj_.offsets[u]; }
    std::uint64_t strength(Node u) const noexcept { return strength_[u]; }
    std::uint64_t in_strength(Node u) const noexcept { return in_strength_[u]; }

    /// All directed edges sorted by (src, dst).
    std::vector<Edge> edges() const;

private:
    struct Csr {
        std::vector<std::size_t> offsets{0};
        std::vector<Node> targets;
        std::vector<std::uint32_t> weights;

        std::span<const Node> row(Node u) const noexcept {
            return {targets.data() + offsets[u], offsets[u + 1] - offsets[u]};
        }
        std::span<const std::uint32_t> row_w(Node u) const noexcept {
            return {weights.data() + offsets[u], offsets[u + 1] - offsets[u]};
        }
    };

    static Csr build_csr(std::size_t n, std::vector<Edge> &edges);
    void check_node(Node u) const;

    std::vector<std::string> names_;
    std::vector<AuthorId> author_ids_;
    std::vector<Node> node_of_author_;
    YearInterval window_;
    Csr out_, in_, proj_;
    std::vector<std::uint64_t> strength_;
    std::vector<std::uint64_t> in_strength_;
};

using Node = AuthorCitationGraph::Node;

struct ProjectedNeighborhood {
    std::vector<Node> neighbors;
    std::vector<std::uint32_t> pair_weights;
    std::size_t degree = 0;
    std::uint64_t strength = 0;
};

/**
 * Expands paper-level citations into author-level directed edges.
 *
 * Every citing paper with year in `window` contributes, for each reference
 * resolved in the corpus, +1 to x->y for all authors x of the citing paper and
 * y of the cited paper with x != y. The cited paper's year is irrelevant.
 *
 * Without `restrict_to`, nodes are the authors of in-window papers plus the
 * authors they cite. With it, nodes are exactly the members of the set and only
 * edges with both endpoints inside are kept.
 */
AuthorCitationGraph build_author_graph(const Corpus &corpus, YearInterval window,
                                       const AuthorSet *restrict_to = nullptr);

ProjectedNeighborhood projected_neighbors(const AuthorCitationGraph &g, Node u);

bool edge_exists(const AuthorCitationGraph &g, Node u, Node v);

/// Tab-separated edge list with a `# author-citation-graph v1 window=a-b`
/// header. `comment` lines (without the leading '#') go right after the header.
void write_edge_list(std::ostream &out, const AuthorCitationGraph &g,
                     const std::vector<std::string> &comments = {});
AuthorCitationGraph read_edge_list(std::istream &in);

} // namespace citelink

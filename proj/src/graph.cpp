#include <citelink/errors.hpp>
#include <citelink/graph.hpp>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace citelink {

std::string to_string(StrengthConvention c) {
    return c == StrengthConvention::In ? "in" : "projected";
}

StrengthConvention parse_strength_convention(std::string_view text) {
    if (text == "projected")
        return StrengthConvention::Projected;
    if (text == "in")
        return StrengthConvention::In;
    throw InputError("unknown pa-strength convention \"" + std::string(text) +
                     "\" (expected projected|in)");
}

AuthorCitationGraph::Csr AuthorCitationGraph::build_csr(std::size_t n, std::vector<Edge> &edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    Csr csr;
    csr.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto &e = edges[i];
        if (i > 0 && edges[i - 1].src == e.src && edges[i - 1].dst == e.dst) {
            csr.weights.back() += e.weight;
            continue;
        }
        csr.targets.push_back(e.dst);
        csr.weights.push_back(e.weight);
        csr.offsets[e.src + 1] = csr.targets.size();
    }
    for (std::size_t i = 1; i <= n; ++i)
        csr.offsets[i] = std::max(csr.offsets[i], csr.offsets[i - 1]);
    return csr;
}

AuthorCitationGraph::AuthorCitationGraph(std::vector<std::string> names,
                                         std::vector<AuthorId> author_ids,
                                         std::vector<Edge> edges, YearInterval window)
    : names_(std::move(names)), author_ids_(std::move(author_ids)), window_(window) {
    const auto n = names_.size();
    if (!author_ids_.empty()) {
        if (author_ids_.size() != n)
            throw std::invalid_argument("author id list does not match node names");
        AuthorId max_id = *std::max_element(author_ids_.begin(), author_ids_.end());
        node_of_author_.assign(static_cast<std::size_t>(max_id) + 1, kNoNode);
        for (Node u = 0; u < n; ++u)
            node_of_author_[author_ids_[u]] = u;
    }

    std::erase_if(edges, [](const Edge &e) { return e.src == e.dst || e.weight == 0; });
    for (const auto &e : edges)
        if (e.src >= n || e.dst >= n)
            throw std::out_of_range("edge endpoint outside node range");

    out_ = build_csr(n, edges);

    std::vector<Edge> reversed;
    reversed.reserve(out_.targets.size());
    std::vector<Edge> both;
    both.reserve(2 * out_.targets.size());
    for (Node u = 0; u < n; ++u) {
        auto t = out_.row(u);
        auto w = out_.row_w(u);
        for (std::size_t i = 0; i < t.size(); ++i) {
            reversed.push_back({t[i], u, w[i]});
            both.push_back({u, t[i], w[i]});
            both.push_back({t[i], u, w[i]});
        }
    }
    in_ = build_csr(n, reversed);
    proj_ = build_csr(n, both);

    strength_.assign(n, 0);
    in_strength_.assign(n, 0);
    for (Node u = 0; u < n; ++u) {
        for (auto w : proj_.row_w(u))
            strength_[u] += w;
        for (auto w : in_.row_w(u))
            in_strength_[u] += w;
    }
}

std::optional<Node> AuthorCitationGraph::find(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
        return std::nullopt;
    return static_cast<Node>(it - names_.begin());
}

Node AuthorCitationGraph::node_of_author(AuthorId a) const {
    return a < node_of_author_.size() ? node_of_author_[a] : kNoNode;
}

void AuthorCitationGraph::check_node(Node u) const {
    if (!contains(u))
        throw std::out_of_range("unknown node " + std::to_string(u));
}

bool AuthorCitationGraph::edge_exists(Node u, Node v) const {
    check_node(u);
    check_node(v);
    return weight(u, v) > 0;
}

std::uint32_t AuthorCitationGraph::weight(Node u, Node v) const noexcept {
    auto t = out_.row(u);
    auto it = std::lower_bound(t.begin(), t.end(), v);
    if (it == t.end() || *it != v)
        return 0;
    return out_.row_w(u)[static_cast<std::size_t>(it - t.begin())];
}

std::vector<Edge> AuthorCitationGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Node u = 0; u < node_count(); ++u) {
        auto t = out_.row(u);
        auto w = out_.row_w(u);
        for (std::size_t i = 0; i < t.size(); ++i)
            out.push_back({u, t[i], w[i]});
    }
    return out;
}

AuthorCitationGraph build_author_graph(const Corpus &corpus, YearInterval window,
                                       const AuthorSet *restrict_to) {
    if (window.empty())
        throw InputError("graph window is empty");

    std::vector<char> is_node(corpus.author_count(), 0);
    if (restrict_to) {
        for (AuthorId a : restrict_to->members)
            if (a < is_node.size())
                is_node[a] = 1;
    }

    // Edges are first collected over corpus author ids, then remapped.
    std::vector<Edge> raw;
    for (std::size_t p = 0; p < corpus.paper_count(); ++p) {
        if (!window.contains(corpus.year(p)))
            continue;
        const auto &citing = corpus.authors(p);
        if (!restrict_to) {
            for (AuthorId a : citing)
                is_node[a] = 1;
        }
        for (auto q : corpus.resolved_refs(p)) {
            const auto &cited = corpus.authors(q);
            for (AuthorId x : citing) {
                if (restrict_to && !is_node[x])
                    continue;
                for (AuthorId y : cited) {
                    if (x == y)
                        continue;
                    if (restrict_to && !is_node[y])
                        continue;
                    if (!restrict_to)
                        is_node[y] = 1;
                    raw.push_back({x, y, 1});
                }
            }
        }
    }

    std::vector<std::string> names;
    std::vector<AuthorId> ids;
    std::vector<Node> local(corpus.author_count(), AuthorCitationGraph::kNoNode);
    for (AuthorId a = 0; a < is_node.size(); ++a) {
        if (!is_node[a])
            continue;
        local[a] = static_cast<Node>(names.size());
        names.push_back(corpus.author_name(a));
        ids.push_back(a);
    }
    if (names.empty())
        throw DegenerateDataError("empty graph");
    for (auto &e : raw) {
        e.src = local[e.src];
        e.dst = local[e.dst];
    }
    return AuthorCitationGraph(std::move(names), std::move(ids), std::move(raw), window);
}

ProjectedNeighborhood projected_neighbors(const AuthorCitationGraph &g, Node u) {
    if (!g.contains(u))
        throw std::out_of_range("unknown node " + std::to_string(u));
    ProjectedNeighborhood nb;
    auto n = g.neighbors(u);
    auto w = g.pair_weights(u);
    nb.neighbors.assign(n.begin(), n.end());
    nb.pair_weights.assign(w.begin(), w.end());
    nb.degree = g.degree(u);
    nb.strength = g.strength(u);
    return nb;
}

bool edge_exists(const AuthorCitationGraph &g, Node u, Node v) { return g.edge_exists(u, v); }

void write_edge_list(std::ostream &out, const AuthorCitationGraph &g,
                     const std::vector<std::string> &comments) {
    out << "# author-citation-graph v1 window=" << g.window().first << '-' << g.window().last
        << '\n';
    for (const auto &c : comments)
        out << '#' << c << '\n';
    for (const auto &e : g.edges())
        out << g.name(e.src) << '\t' << g.name(e.dst) << '\t' << e.weight << '\n';
}

namespace {

int parse_int(std::string_view s, const char *what, std::size_t line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(line, std::string("bad ") + what + " \"" + std::string(s) + "\"");
    return v;
}

} // namespace

AuthorCitationGraph read_edge_list(std::istream &in) {
    std::string text;
    std::size_t line = 0;
    YearInterval window;
    bool header = false;
    std::vector<std::tuple<std::string, std::string, std::uint32_t>> rows;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (text.empty())
            continue;
        if (text[0] == '#') {
            constexpr std::string_view prefix = "# author-citation-graph v1 window=";
            if (line == 1) {
                if (!text.starts_with(prefix))
                    throw ParseError(line, "missing author-citation-graph v1 header");
                std::string_view range(text);
                range.remove_prefix(prefix.size());
                // years are non-negative, so the first '-' separates them
                auto dash = range.find('-');
                if (dash == std::string_view::npos)
                    throw ParseError(line, "bad window in header");
                window.first = parse_int(range.substr(0, dash), "window start", line);
                window.last = parse_int(range.substr(dash + 1), "window end", line);
                header = true;
            }
            continue;
        }
        if (!header)
            throw ParseError(line, "missing author-citation-graph v1 header");
        std::string_view row(text);
        auto t1 = row.find('\t');
        auto t2 = t1 == std::string_view::npos ? t1 : row.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || row.find('\t', t2 + 1) != std::string_view::npos)
            throw ParseError(line, "expected three tab-separated fields");
        auto w = parse_int(row.substr(t2 + 1), "weight", line);
        if (w < 1)
            throw ParseError(line, "weight must be >= 1");
        std::string src(row.substr(0, t1)), dst(row.substr(t1 + 1, t2 - t1 - 1));
        if (src.empty() || dst.empty())
            throw ParseError(line, "empty author id");
        if (src == dst)
            throw ParseError(line, "self-loop on \"" + src + "\"");
        rows.emplace_back(std::move(src), std::move(dst), static_cast<std::uint32_t>(w));
    }
    if (!header)
        throw ParseError(line, "missing author-citation-graph v1 header");

    std::vector<std::string> names;
    for (const auto &[s, d, w] : rows) {
        names.push_back(s);
        names.push_back(d);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    auto index = [&](const std::string &s) {
        return static_cast<Node>(std::lower_bound(names.begin(), names.end(), s) - names.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(rows.size());
    for (const auto &[s, d, w] : rows)
        edges.push_back({index(s), index(d), w});
    std::vector<AuthorId> ids(names.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        ids[i] = static_cast<AuthorId>(i);
    return AuthorCitationGraph(std::move(names), std::move(ids), std::move(edges), window);
}

} // namespace citelink

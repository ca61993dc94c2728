#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citelink {

inline constexpr int kMinYear = 1850;
inline constexpr int kMaxYear = 2100;

/// Closed interval of calendar years [first, last].
struct YearInterval {
    int first = 0;
    int last = -1;

    bool empty() const noexcept { return last < first; }
    bool contains(int year) const noexcept { return first <= year && year <= last; }
    bool operator==(const YearInterval &) const = default;
};

struct PaperRecord {
    std::string paper_id;
    int year = 0;
    std::vector<std::string> authors;
    std::vector<std::string> refs;

    bool operator==(const PaperRecord &) const = default;
};

struct CorpusStats {
    std::size_t n_papers = 0;
    std::size_t n_authors = 0;
    std::size_t n_dangling_refs = 0;
    std::pair<int, int> year_range{0, 0};
};

/// Index into Corpus::author_names(). Author ids are interned in lexicographic
/// order, so comparing AuthorIds compares author-id strings.
using AuthorId = std::uint32_t;

/**
 * Read-only, indexed view of a list of PaperRecords: interned author ids,
 * resolved (in-corpus) references and per-paper years.
 */
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<PaperRecord> papers);

    const std::vector<PaperRecord> &papers() const noexcept { return papers_; }
    std::size_t paper_count() const noexcept { return papers_.size(); }
    std::size_t author_count() const noexcept { return names_.size(); }

    const std::string &author_name(AuthorId a) const { return names_.at(a); }
    const std::vector<std::string> &author_names() const noexcept { return names_; }
    /// Returns author_count() when the name is unknown.
    AuthorId find_author(std::string_view name) const;

    int year(std::size_t paper) const { return papers_[paper].year; }
    const std::vector<AuthorId> &authors(std::size_t paper) const { return authors_[paper]; }
    /// References that resolve to papers of this corpus (dangling ones dropped).
    const std::vector<std::uint32_t> &resolved_refs(std::size_t paper) const {
        return refs_[paper];
    }
    std::size_t dangling_refs() const noexcept { return dangling_; }

private:
    std::vector<PaperRecord> papers_;
    std::vector<std::string> names_;
    std::vector<std::vector<AuthorId>> authors_;
    std::vector<std::vector<std::uint32_t>> refs_;
    std::size_t dangling_ = 0;
};

/// Most productive authors of a window.
struct AuthorSet {
    double selection_fraction = 1.0;
    YearInterval window;
    /// Sorted ascending.
    std::vector<AuthorId> members;
    /// Members ranked by (productivity desc, author id asc).
    std::vector<AuthorId> ranked;
    /// Paper count in the window for every author active in it, sorted by id.
    std::vector<std::pair<AuthorId, std::size_t>> productivity;

    bool contains(AuthorId a) const;
};

/// Parses the line-delimited corpus format. Blank lines are skipped.
std::vector<PaperRecord> parse_papers(std::istream &in);
std::vector<PaperRecord> parse_papers_file(const std::string &path);

/// Writes one compact JSON object per line; parse_papers reads it back.
void serialize_papers(std::ostream &out, const std::vector<PaperRecord> &papers);

CorpusStats validate_corpus(const std::vector<PaperRecord> &papers);

AuthorSet select_productive_authors(const Corpus &corpus, YearInterval window, double fraction);

} // namespace citelink

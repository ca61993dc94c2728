#include <citelink/errors.hpp>
#include <citelink/ingest.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace citelink {

namespace {

std::vector<std::string> string_array(const nlohmann::json &obj, const char *key,
                                      std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(line, std::string("missing \"") + key + "\"");
    if (!it->is_array())
        throw ParseError(line, std::string("\"") + key + "\" is not an array");
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const auto &v : *it) {
        if (!v.is_string())
            throw ParseError(line, std::string("\"") + key + "\" holds a non-string entry");
        out.push_back(v.get<std::string>());
    }
    return out;
}

PaperRecord parse_line(const std::string &text, std::size_t line) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object())
        throw ParseError(line, "record is not an object");

    PaperRecord rec;
    auto id = obj.find("id");
    if (id == obj.end())
        throw ParseError(line, "missing \"id\"");
    if (!id->is_string() || id->get_ref<const std::string &>().empty())
        throw ParseError(line, "\"id\" must be a non-empty string");
    rec.paper_id = id->get<std::string>();

    auto year = obj.find("year");
    if (year == obj.end())
        throw ParseError(line, "missing \"year\"");
    if (!year->is_number_integer())
        throw ParseError(line, "\"year\" must be an integer");
    auto y = year->get<long long>();
    if (y < kMinYear || y > kMaxYear)
        throw ParseError(line, "year " + std::to_string(y) + " outside [" +
                                   std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) +
                                   "]");
    rec.year = static_cast<int>(y);

    rec.authors = string_array(obj, "authors", line);
    if (rec.authors.empty())
        throw ParseError(line, "\"authors\" is empty");
    std::unordered_set<std::string_view> seen;
    for (const auto &a : rec.authors) {
        if (a.empty())
            throw ParseError(line, "empty author id");
        if (!seen.insert(a).second)
            throw ParseError(line, "duplicate author \"" + a + "\"");
    }
    rec.refs = string_array(obj, "refs", line);
    return rec;
}

} // namespace

std::vector<PaperRecord> parse_papers(std::istream &in) {
    std::vector<PaperRecord> papers;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos)
            continue;
        auto rec = parse_line(text, line);
        auto [it, fresh] = first_line.emplace(rec.paper_id, line);
        if (!fresh)
            throw ParseError(line, "duplicate paper id \"" + rec.paper_id +
                                       "\" (first seen on line " + std::to_string(it->second) +
                                       ")");
        papers.push_back(std::move(rec));
    }
    return papers;
}

std::vector<PaperRecord> parse_papers_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open corpus file: " + path);
    return parse_papers(in);
}

void serialize_papers(std::ostream &out, const std::vector<PaperRecord> &papers) {
    for (const auto &p : papers) {
        nlohmann::json obj;
        obj["id"] = p.paper_id;
        obj["year"] = p.year;
        obj["authors"] = p.authors;
        obj["refs"] = p.refs;
        out << obj.dump() << '\n';
    }
}

CorpusStats validate_corpus(const std::vector<PaperRecord> &papers) {
    CorpusStats stats;
    stats.n_papers = papers.size();
    std::unordered_set<std::string_view> ids, authors;
    for (const auto &p : papers) {
        ids.insert(p.paper_id);
        for (const auto &a : p.authors)
            authors.insert(a);
    }
    stats.n_authors = authors.size();
    if (!papers.empty()) {
        auto [lo, hi] = std::minmax_element(
            papers.begin(), papers.end(),
            [](const PaperRecord &a, const PaperRecord &b) { return a.year < b.year; });
        stats.year_range = {lo->year, hi->year};
    }
    for (const auto &p : papers)
        for (const auto &r : p.refs)
            if (!ids.contains(r))
                ++stats.n_dangling_refs;
    return stats;
}

Corpus::Corpus(std::vector<PaperRecord> papers) : papers_(std::move(papers)) {
    for (const auto &p : papers_)
        for (const auto &a : p.authors)
            names_.push_back(a);
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());

    std::unordered_map<std::string_view, std::uint32_t> paper_index;
    paper_index.reserve(papers_.size());
    for (std::size_t i = 0; i < papers_.size(); ++i)
        paper_index.emplace(papers_[i].paper_id, static_cast<std::uint32_t>(i));

    authors_.resize(papers_.size());
    refs_.resize(papers_.size());
    for (std::size_t i = 0; i < papers_.size(); ++i) {
        for (const auto &a : papers_[i].authors)
            authors_[i].push_back(find_author(a));
        for (const auto &r : papers_[i].refs) {
            auto it = paper_index.find(r);
            if (it == paper_index.end())
                ++dangling_;
            else
                refs_[i].push_back(it->second);
        }
    }
}

AuthorId Corpus::find_author(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
        return static_cast<AuthorId>(names_.size());
    return static_cast<AuthorId>(it - names_.begin());
}

bool AuthorSet::contains(AuthorId a) const {
    return std::binary_search(members.begin(), members.end(), a);
}

AuthorSet select_productive_authors(const Corpus &corpus, YearInterval window, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw InputError("selection fraction must lie in (0, 1], got " + std::to_string(fraction));
    if (window.empty())
        throw InputError("selection window is empty");

    std::vector<std::size_t> count(corpus.author_count(), 0);
    std::size_t papers_in_window = 0;
    for (std::size_t i = 0; i < corpus.paper_count(); ++i) {
        if (!window.contains(corpus.year(i)))
            continue;
        ++papers_in_window;
        for (AuthorId a : corpus.authors(i))
            ++count[a];
    }
    if (papers_in_window == 0)
        throw DegenerateDataError("empty training window");

    AuthorSet set;
    set.selection_fraction = fraction;
    set.window = window;
    for (AuthorId a = 0; a < count.size(); ++a)
        if (count[a] > 0)
            set.productivity.emplace_back(a, count[a]);

    set.ranked.reserve(set.productivity.size());
    for (const auto &[a, c] : set.productivity)
        set.ranked.push_back(a);
    std::stable_sort(set.ranked.begin(), set.ranked.end(),
                     [&](AuthorId x, AuthorId y) { return count[x] > count[y]; });

    // ceil with a small guard so that e.g. 0.02 * 50 does not round up to 2.
    double exact = fraction * static_cast<double>(set.ranked.size());
    auto size = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    size = std::clamp<std::size_t>(size, 1, set.ranked.size());
    set.ranked.resize(size);
    set.members = set.ranked;
    std::sort(set.members.begin(), set.members.end());
    return set;
}

} // namespace citelink

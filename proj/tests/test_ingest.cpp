#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <citelink/errors.hpp>
#include <citelink/ingest.hpp>

#include "fixtures.hpp"

using namespace citelink;

namespace {

std::vector<PaperRecord> parse(const std::string &text) {
    std::istringstream in(text);
    return parse_papers(in);
}

std::size_t error_line(const std::string &text) {
    try {
        parse(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return 0;
}

/// Papers with the requested per-author counts in year 2000, single-author each.
std::vector<PaperRecord> productivity_corpus(const std::vector<std::pair<std::string, int>> &counts) {
    std::vector<PaperRecord> papers;
    for (const auto &[author, n] : counts)
        for (int i = 0; i < n; ++i)
            papers.push_back({author + std::to_string(i), 2000, {author}, {}});
    return papers;
}

} // namespace

TEST_CASE("parse_papers maps fields directly") {
    auto papers = parse(R"({"id":"p1","year":2000,"authors":["A","B"],"refs":["p2"]})");
    REQUIRE(papers.size() == 1);
    CHECK(papers[0] == PaperRecord{"p1", 2000, {"A", "B"}, {"p2"}});
}

TEST_CASE("parse_papers on an empty stream") { CHECK(parse("").empty()); }

TEST_CASE("parse_papers ignores unknown keys and blank lines") {
    auto papers = parse("\n{\"id\":\"x\",\"year\":1999,\"authors\":[\"A\"],\"refs\":[],"
                        "\"title\":\"t\"}\n\n");
    REQUIRE(papers.size() == 1);
    CHECK(papers[0].paper_id == "x");
}

TEST_CASE("parse_papers reports the failing line") {
    const std::string good = R"({"id":"p1","year":2000,"authors":["A"],"refs":[]})";
    CHECK(error_line(good + "\n" + R"({"id":"p2","year":2000,"refs":[]})") == 2);
    CHECK(error_line("{not json") == 1);
    CHECK(error_line(R"({"id":"p1","year":1700,"authors":["A"],"refs":[]})") == 1);
    CHECK(error_line(R"({"id":"p1","year":2000,"authors":[],"refs":[]})") == 1);
    CHECK(error_line(R"({"id":"p1","year":2000,"authors":["A","A"],"refs":[]})") == 1);
    CHECK(error_line(R"({"id":"","year":2000,"authors":["A"],"refs":[]})") == 1);
    CHECK(error_line(R"({"id":"p1","year":"2000","authors":["A"],"refs":[]})") == 1);
    CHECK_THROWS_WITH_AS(parse(R"({"id":"p1","year":2000,"refs":[]})"),
                         doctest::Contains("authors"), ParseError);
}

TEST_CASE("parse_papers rejects duplicate ids by name") {
    const std::string line = R"({"id":"dup","year":2000,"authors":["A"],"refs":[]})";
    CHECK_THROWS_WITH_AS(parse(line + "\n" + line), doctest::Contains("dup"), ParseError);
    CHECK(error_line(line + "\n" + line) == 2);
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PaperRecord> papers;
        const int n = static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            PaperRecord p;
            p.paper_id = "id-" + std::to_string(i) + (i % 3 ? "\"q\"" : "\\");
            p.year = 1850 + static_cast<int>(rng() % 251);
            const int na = 1 + static_cast<int>(rng() % 4);
            for (int a = 0; a < na; ++a)
                p.authors.push_back("authé" + std::to_string(i * 10 + a));
            for (int r = 0; r < static_cast<int>(rng() % 5); ++r)
                p.refs.push_back("id-" + std::to_string(rng() % 40));
            papers.push_back(p);
        }
        std::stringstream buf;
        serialize_papers(buf, papers);
        CHECK(parse_papers(buf) == papers);
    }
}

TEST_CASE("validate_corpus counts dangling references") {
    std::vector<PaperRecord> ok{{"p1", 2000, {"A"}, {"p2"}}, {"p2", 1999, {"B"}, {}}};
    CHECK(validate_corpus(ok).n_dangling_refs == 0);
    std::vector<PaperRecord> dangling{{"p1", 2000, {"A"}, {"pX"}}};
    CHECK(validate_corpus(dangling).n_dangling_refs == 1);
    CHECK(Corpus(dangling).dangling_refs() == 1);
}

TEST_CASE("validate_corpus on the toy corpus") {
    auto stats = validate_corpus(fixtures::toy_corpus());
    CHECK(stats.n_papers == 4);
    CHECK(stats.n_authors == 8);
    CHECK(stats.year_range == std::pair{1997, 2000});
    CHECK(validate_corpus({}).n_papers == 0);
}

TEST_CASE("Corpus interns author ids in lexicographic order") {
    Corpus corpus({{"p1", 2000, {"zed", "amy"}, {}}, {"p2", 2000, {"bob"}, {"p1"}}});
    CHECK(corpus.author_names() == std::vector<std::string>{"amy", "bob", "zed"});
    CHECK(corpus.find_author("bob") == 1);
    CHECK(corpus.find_author("nobody") == corpus.author_count());
    CHECK(corpus.resolved_refs(1) == std::vector<std::uint32_t>{0});
}

TEST_CASE("select_productive_authors ranks by productivity then id") {
    Corpus corpus(productivity_corpus({{"A", 5}, {"B", 3}, {"C", 3}, {"D", 1}}));
    auto set = select_productive_authors(corpus, {2000, 2000}, 0.5);
    REQUIRE(set.members.size() == 2);
    CHECK(corpus.author_name(set.members[0]) == "A");
    CHECK(corpus.author_name(set.members[1]) == "B");
    CHECK(set.ranked == set.members);

    auto all = select_productive_authors(corpus, {2000, 2000}, 1.0);
    CHECK(all.members.size() == 4);
}

TEST_CASE("select_productive_authors keeps ceil(fraction * n)") {
    std::vector<std::pair<std::string, int>> counts;
    for (int i = 0; i < 237; ++i)
        counts.emplace_back("a" + std::to_string(1000 + i), 1 + i % 7);
    Corpus corpus(productivity_corpus(counts));
    auto set = select_productive_authors(corpus, {2000, 2000}, 0.02);
    CHECK(set.members.size() == static_cast<std::size_t>(std::ceil(0.02 * 237)));
    // 0.07 * 100 evaluates to 7.000000000000001 in binary floating point
    counts.resize(100);
    Corpus small(productivity_corpus(counts));
    CHECK(select_productive_authors(small, {2000, 2000}, 0.07).members.size() == 7);
}

TEST_CASE("select_productive_authors is monotone and deterministic") {
    std::mt19937_64 rng(5);
    std::vector<std::pair<std::string, int>> counts;
    for (int i = 0; i < 120; ++i)
        counts.emplace_back("x" + std::to_string(i), 1 + static_cast<int>(rng() % 6));
    Corpus corpus(productivity_corpus(counts));
    const std::vector<double> fractions{0.01, 0.05, 0.1, 0.25, 0.5, 0.9, 1.0};
    std::vector<AuthorId> previous;
    for (double f : fractions) {
        auto set = select_productive_authors(corpus, {2000, 2000}, f);
        CHECK(std::includes(set.members.begin(), set.members.end(), previous.begin(),
                            previous.end()));
        CHECK(select_productive_authors(corpus, {2000, 2000}, f).members == set.members);
        previous = set.members;
    }
}

TEST_CASE("select_productive_authors errors") {
    Corpus corpus(productivity_corpus({{"A", 1}}));
    CHECK_THROWS_WITH_AS(select_productive_authors(corpus, {1990, 1995}, 0.5),
                         "empty training window", DegenerateDataError);
    CHECK_THROWS_AS(select_productive_authors(corpus, {2000, 2000}, 0.0), InputError);
    CHECK_THROWS_AS(select_productive_authors(corpus, {2000, 2000}, 1.5), InputError);
}

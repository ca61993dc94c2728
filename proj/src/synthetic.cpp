#include <citelink/synthetic.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace citelink {

namespace {

std::string padded(char prefix, std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
    return buf;
}

int digits(std::size_t n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

} // namespace

std::vector<PaperRecord> generate_corpus(const SyntheticConfig &config) {
    if (config.authors < 2 || config.communities < 1 || config.max_team < 1 ||
        config.last_year < config.first_year)
        throw std::invalid_argument("invalid synthetic corpus configuration");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = config.authors;
    const int author_width = digits(n);
    const auto total_papers =
        config.papers_per_year * static_cast<std::size_t>(config.last_year - config.first_year + 1);
    const int paper_width = digits(total_papers);

    std::vector<std::size_t> community(n);
    std::vector<std::vector<std::size_t>> members(config.communities);
    std::vector<double> activity(n);
    for (std::size_t a = 0; a < n; ++a) {
        community[a] = a % config.communities;
        members[community[a]].push_back(a);
        // Pareto(x_m = 1, shape) by inversion.
        activity[a] = std::pow(1.0 - unit(rng), -1.0 / config.activity_shape);
    }
    std::discrete_distribution<std::size_t> pick_lead(activity.begin(), activity.end());

    std::vector<std::vector<std::size_t>> papers_of(n);
    // Projected citation contacts with multiplicity, oldest first.
    struct Contact {
        int year;
        std::size_t author;
    };
    std::vector<std::vector<Contact>> contacts(n);
    std::vector<std::size_t> all_papers;
    std::vector<PaperRecord> papers;
    papers.reserve(total_papers);

    auto random_of = [&](const auto &v) { return v[static_cast<std::size_t>(unit(rng) * v.size())]; };

    for (int year = config.first_year; year <= config.last_year; ++year) {
        const std::size_t first_of_year = papers.size();
        if (config.memory > 0) {
            const int oldest = year - config.memory;
            for (auto &c : contacts) {
                auto keep = std::find_if(c.begin(), c.end(),
                                         [&](const Contact &e) { return e.year >= oldest; });
                c.erase(c.begin(), keep);
            }
        }
        for (std::size_t k = 0; k < config.papers_per_year; ++k) {
            PaperRecord rec;
            rec.paper_id = padded('p', papers.size(), paper_width);
            rec.year = year;

            std::vector<std::size_t> team{pick_lead(rng)};
            const auto &pool = members[community[team[0]]];
            const auto team_size = 1 + static_cast<std::size_t>(unit(rng) * config.max_team);
            for (std::size_t t = 1; t < team_size && t < pool.size(); ++t) {
                auto c = random_of(pool);
                if (std::find(team.begin(), team.end(), c) == team.end())
                    team.push_back(c);
            }
            std::sort(team.begin(), team.end());

            std::vector<std::size_t> cited;
            // only papers from earlier years can be cited
            if (first_of_year > 0) {
                for (std::size_t r = 0; r < config.refs_per_paper; ++r) {
                    const double roll = unit(rng);
                    std::size_t target_author = n;
                    if (roll < config.closure) {
                        auto x = random_of(team);
                        if (!contacts[x].empty()) {
                            auto z = random_of(contacts[x]).author;
                            if (!contacts[z].empty())
                                target_author = random_of(contacts[z]).author;
                        }
                    } else if (roll < config.closure + config.community) {
                        target_author = random_of(members[community[team[0]]]);
                    }
                    std::size_t paper;
                    if (target_author < n && !papers_of[target_author].empty()) {
                        paper = random_of(papers_of[target_author]);
                    } else {
                        paper = all_papers[static_cast<std::size_t>(unit(rng) * first_of_year)];
                    }
                    if (std::find(cited.begin(), cited.end(), paper) == cited.end())
                        cited.push_back(paper);
                }
            }

            for (auto a : team)
                rec.authors.push_back(padded('a', a, author_width));
            for (auto q : cited)
                rec.refs.push_back(papers[q].paper_id);

            for (auto q : cited) {
                for (const auto &name : papers[q].authors) {
                    const auto y = static_cast<std::size_t>(std::stoul(name.substr(1)));
                    for (auto x : team) {
                        if (x == y)
                            continue;
                        contacts[x].push_back({year, y});
                        contacts[y].push_back({year, x});
                    }
                }
            }
            papers.push_back(std::move(rec));
        }
        for (std::size_t p = first_of_year; p < papers.size(); ++p) {
            all_papers.push_back(p);
            for (const auto &name : papers[p].authors)
                papers_of[static_cast<std::size_t>(std::stoul(name.substr(1)))].push_back(p);
        }
    }
    return papers;
}

} // namespace citelink

// Writes a seeded synthetic corpus in the line-delimited corpus format.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <citelink/ingest.hpp>
#include <citelink/synthetic.hpp>

int main(int argc, char **argv) {
    CLI::App app{"Synthetic citation corpus generator"};
    citelink::SyntheticConfig cfg;
    std::string out = "-";
    app.add_option("--authors", cfg.authors, "Number of authors");
    app.add_option("--first-year", cfg.first_year, "First publication year");
    app.add_option("--last-year", cfg.last_year, "Last publication year");
    app.add_option("--papers-per-year", cfg.papers_per_year, "Papers published each year");
    app.add_option("--refs", cfg.refs_per_paper, "References per paper");
    app.add_option("--closure", cfg.closure, "Probability of a triadic-closure reference");
    app.add_option("--community", cfg.community, "Probability of an in-community reference");
    app.add_option("--communities", cfg.communities, "Number of author communities");
    app.add_option("--max-team", cfg.max_team, "Largest number of authors per paper");
    app.add_option("--activity-shape", cfg.activity_shape,
                   "Pareto shape of author activity; smaller is more skewed");
    app.add_option("--memory", cfg.memory, "Years a citation contact stays usable for closure");
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--out", out, "Output file, - for stdout");
    CLI11_PARSE(app, argc, argv);

    auto papers = citelink::generate_corpus(cfg);
    if (out == "-") {
        citelink::serialize_papers(std::cout, papers);
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << '\n';
            return 2;
        }
        citelink::serialize_papers(f, papers);
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <vector>

#include <citelink/ingest.hpp>

namespace citelink {

/**
 * Parameters of the synthetic citation process.
 *
 * Authors belong to communities and have heavy-tailed activity. Each paper
 * has a lead author drawn by activity plus co-authors from the same
 * community. Each reference follows one of three rules: with probability
 * `closure` it closes a triangle (cites an author two hops away in the
 * citation projection of the team), with probability `community` it cites
 * inside the team's community, otherwise it cites a uniformly random earlier
 * paper.
 */
struct SyntheticConfig {
    std::size_t authors = 2000;
    int first_year = 1990;
    int last_year = 2005;
    std::size_t papers_per_year = 600;
    std::size_t max_team = 3;
    std::size_t refs_per_paper = 6;
    double closure = 0.6;
    double community = 0.35;
    std::size_t communities = 100;
    /// Pareto shape of author activity; smaller means more skew.
    double activity_shape = 6.0;
    /// Closure only follows contacts made in the last `memory` years (0: forever).
    int memory = 3;
    std::uint64_t seed = 1;
};

std::vector<PaperRecord> generate_corpus(const SyntheticConfig &config);

} // namespace citelink

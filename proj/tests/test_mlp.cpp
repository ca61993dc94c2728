#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <citelink/errors.hpp>
#include <citelink/mlp.hpp>
#include <citelink/synthetic.hpp>

#include "oracle.hpp"

using namespace citelink;

namespace {

/// Labels come from a fixed separating plane through the origin.
TrainingSet separable_set(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const double direction[kMeasureCount] = {1.0, -0.5, 0.3, 0.8, -1.2, 0.1, 0.6, -0.4, 0.9, -0.7};
    TrainingSet set;
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0;
        for (std::size_t j = 0; j < kMeasureCount; ++j) {
            const double x = g(rng);
            set.features.push_back(x);
            dot += x * direction[j];
        }
        const bool positive = dot > 0;
        set.labels.push_back(positive ? 1 : 0);
        ++(positive ? set.positives : set.negatives);
    }
    set.stats.mean.assign(kMeasureCount, 0.0);
    set.stats.scale.assign(kMeasureCount, 1.0);
    return set;
}

std::vector<double> parameters(const Mlp &m) {
    std::vector<double> p;
    for (std::size_t i = 0; i < m.parameter_count(); ++i)
        p.push_back(m.parameter(i));
    return p;
}

MlpConfig small_config() {
    MlpConfig c;
    c.epochs = 5;
    c.seed = 3;
    return c;
}

} // namespace

TEST_CASE("init_mlp shapes and determinism") {
    auto a = init_mlp({});
    REQUIRE(a.layers.size() == 3);
    CHECK(a.layers[0].in == 10);
    CHECK(a.layers[0].out == 256);
    CHECK(a.layers[1].in == 256);
    CHECK(a.layers[1].out == 128);
    CHECK(a.layers[2].in == 128);
    CHECK(a.layers[2].out == 1);
    CHECK(a.parameter_count() == 10 * 256 + 256 + 256 * 128 + 128 + 128 + 1);
    for (const auto &l : a.layers) {
        CHECK(l.weights.size() == l.in * l.out);
        const double limit = std::sqrt(6.0 / static_cast<double>(l.in));
        for (double w : l.weights)
            CHECK(std::abs(w) <= limit);
    }

    MlpConfig other;
    other.seed = 2;
    CHECK(parameters(init_mlp({})) == parameters(a));
    CHECK(parameters(init_mlp(other)) != parameters(a));
}

TEST_CASE("config validation") {
    MlpConfig c;
    CHECK_NOTHROW(c.validate());
    c.input_dim = 9;
    CHECK_THROWS_AS(c.validate(), InputError);
    c = {};
    c.hidden = {256, 0};
    CHECK_THROWS_AS(c.validate(), InputError);
    c = {};
    c.learning_rate = -1;
    CHECK_THROWS_AS(c.validate(), InputError);
    c = {};
    c.negative_ratio = 0;
    CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("forward pass") {
    auto m = init_mlp({});
    for (std::size_t i = 0; i < m.parameter_count(); ++i)
        m.parameter(i) = 0.0;
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(forward(m, x) == 0.5);

    auto r = init_mlp({});
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0, 3);
    std::vector<double> rows;
    for (int i = 0; i < 40 * 10; ++i)
        rows.push_back(g(rng));
    auto batch = forward_batch(r, rows);
    REQUIRE(batch.size() == 40);
    for (std::size_t i = 0; i < 40; ++i) {
        const double y = forward(r, std::span<const double>(rows.data() + i * 10, 10));
        CHECK(std::abs(batch[i] - y) <= 1e-12);
        CHECK(y > 0.0);
        CHECK(y < 1.0);
    }
    std::vector<double> bad(10, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(forward(r, bad), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0, 1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        MlpConfig c;
        c.seed = seed;
        auto m = init_mlp(c);
        std::vector<double> x(10);
        for (auto &v : x)
            v = g(rng);
        for (double label : {0.0, 1.0}) {
            auto check = gradient_check(m, x, label, 512, seed);
            CHECK(check.checked > 400);
            CHECK(check.max_relative_error <= 1e-4);
        }
    }

    auto zero = init_mlp({});
    for (std::size_t i = 0; i < zero.parameter_count(); ++i)
        zero.parameter(i) = 0.0;
    auto check = gradient_check(zero, std::vector<double>(10, 0.5), 1.0);
    CHECK(std::isfinite(check.max_relative_error));
    CHECK(check.max_relative_error <= 1e-4);
}

TEST_CASE("gradient of the full loss equals the sum of sample gradients") {
    auto m = init_mlp(small_config());
    auto data = separable_set(8, 1);
    // directional derivative of the mean loss vs. the averaged analytic gradient
    std::vector<double> mean_grad(m.parameter_count(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto gsample = loss_gradient(m, data.row(i), data.labels[i]);
        for (std::size_t p = 0; p < gsample.size(); ++p)
            mean_grad[p] += gsample[p] / static_cast<double>(data.size());
    }
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0, 1);
    std::vector<double> dir(m.parameter_count());
    double dot = 0;
    for (std::size_t p = 0; p < dir.size(); ++p) {
        dir[p] = g(rng) * 1e-3;
        dot += dir[p] * mean_grad[p];
    }
    const double h = 1e-4;
    auto shifted = [&](double t) {
        Mlp probe = m;
        for (std::size_t p = 0; p < dir.size(); ++p)
            probe.parameter(p) += t * dir[p];
        return mean_loss(probe, data);
    };
    const double numeric = (shifted(h) - shifted(-h)) / (2 * h);
    CHECK(numeric == doctest::Approx(dot).epsilon(1e-4));
}

TEST_CASE("training separates linearly separable data") {
    auto data = separable_set(1000, 21);
    MlpConfig c;
    c.epochs = 30;
    c.seed = 4;
    auto m = init_mlp(c);
    auto result = train(m, data);
    CHECK(result.loss_history.size() == 30);
    CHECK(accuracy(m, data) >= 0.95);
    CHECK(m.trained);

    auto again = init_mlp(c);
    train(again, data);
    CHECK(parameters(again) == parameters(m));
}

TEST_CASE("loss decreases strictly over the first five epochs at the default rate") {
    auto data = separable_set(600, 31);
    auto m = init_mlp(small_config());
    auto h = train(m, data).loss_history;
    REQUIRE(h.size() == 5);
    const double initial = mean_loss(init_mlp(small_config()), data);
    CHECK(h[0] < initial);
    for (std::size_t e = 1; e < h.size(); ++e)
        CHECK(h[e] < h[e - 1]);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
    auto data = separable_set(100, 41);
    auto c = small_config();
    c.learning_rate = 0.0;
    auto m = init_mlp(c);
    const auto before = parameters(m);
    auto h = train(m, data).loss_history;
    CHECK(parameters(m) == before);
    for (double l : h)
        CHECK(l == h.front());
}

TEST_CASE("training rejects single-class data") {
    auto data = separable_set(50, 43);
    data.positives += data.negatives;
    data.negatives = 0;
    std::fill(data.labels.begin(), data.labels.end(), 1);
    auto m = init_mlp(small_config());
    CHECK_THROWS_AS(train(m, data), DegenerateDataError);
}

TEST_CASE("diverging training reports the epoch") {
    auto data = separable_set(200, 47);
    for (auto &x : data.features)
        x *= 1e150;
    auto c = small_config();
    c.learning_rate = 1e10;
    auto m = init_mlp(c);
    try {
        train(m, data);
        FAIL("expected divergence");
    } catch (const DivergenceError &e) {
        CHECK(e.epoch() == 1);
    }
}

TEST_CASE("standardizer") {
    std::vector<double> rows{1, 5, 2, 5, 3, 5, 10, 5};
    auto s = Standardizer::fit(rows, 2);
    CHECK(s.mean[0] == 4.0);
    CHECK(s.mean[1] == 5.0);
    CHECK(s.scale[1] == 1e-12);
    std::vector<double> row{2.5, 5};
    s.apply(row);
    CHECK(row[1] == 0.0);
    s.revert(row);
    CHECK(std::abs(row[0] - 2.5) <= 1e-12);

    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-100, 100);
    std::vector<double> many;
    for (int i = 0; i < 300; ++i)
        many.push_back(u(rng));
    auto t = Standardizer::fit(many, 3);
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        std::vector<double> r(many.begin() + static_cast<long>(i * 3),
                              many.begin() + static_cast<long>(i * 3 + 3));
        const auto original = r;
        t.apply(r);
        mean += r[0] / 100;
        var += r[0] * r[0] / 100;
        t.revert(r);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(r[j] - original[j]) <= 1e-12);
    }
    CHECK(std::abs(mean) <= 1e-6);
    CHECK(std::abs(var - 1.0) <= 1e-6);
}

TEST_CASE("save and load reproduce the model bit for bit") {
    auto data = separable_set(200, 59);
    auto m = init_mlp(small_config());
    train(m, data);
    m.standardizer.mean[2] = 0.1;
    m.standardizer.scale[2] = 3.0;
    std::stringstream buf;
    save_mlp(buf, m, {" note"});
    auto back = load_mlp(buf);
    CHECK(parameters(back) == parameters(m));
    CHECK(back.trained);
    CHECK(back.standardizer.mean == m.standardizer.mean);
    CHECK(back.standardizer.scale == m.standardizer.scale);
    CHECK(back.config.hidden == m.config.hidden);
    CHECK(back.config.seed == m.config.seed);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(forward(back, data.row(i)) == forward(m, data.row(i)));

    std::stringstream junk("not a model");
    CHECK_THROWS_AS(load_mlp(junk), InputError);
}

TEST_CASE("training set from a synthetic corpus") {
    SyntheticConfig sc;
    sc.authors = 300;
    sc.papers_per_year = 120;
    sc.first_year = 1995;
    sc.last_year = 2000;
    Corpus corpus(generate_corpus(sc));
    const YearInterval train{1996, 2000};
    auto authors = select_productive_authors(corpus, train, 0.3);
    auto a = build_training_set(corpus, authors, train, 1998, 1.0, 7);
    REQUIRE(a.positives > 0);
    CHECK(a.negatives == a.positives);
    CHECK(a.size() == 2 * a.positives);
    CHECK(a.feature_window == YearInterval{1996, 1998});
    CHECK(a.label_window == YearInterval{1999, 2000});

    auto b = build_training_set(corpus, authors, train, 1998, 1.0, 7);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    auto c = build_training_set(corpus, authors, train, 1998, 2.5, 7);
    CHECK(c.negatives == static_cast<std::size_t>(std::llround(2.5 * static_cast<double>(c.positives))));

    // standardized columns: mean 0 and variance 1 unless constant
    for (std::size_t j = 0; j < kMeasureCount; ++j) {
        double mean = 0, var = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            mean += a.row(i)[j];
        mean /= static_cast<double>(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            var += (a.row(i)[j] - mean) * (a.row(i)[j] - mean);
        var /= static_cast<double>(a.size());
        CHECK(std::abs(mean) <= 1e-6);
        CHECK((std::abs(var - 1.0) <= 1e-6 || var == 0.0));
    }

    CHECK_THROWS_AS(build_training_set(corpus, authors, train, 1996, 1.0, 7), InputError);
    CHECK_THROWS_AS(build_training_set(corpus, authors, train, 2000, 1.0, 7), InputError);
    CHECK_THROWS_AS(build_training_set(corpus, authors, train, 1998, 0.0, 7), InputError);
    CHECK(default_inner_cut(train) == 1998);
    CHECK(default_inner_cut({2012, 2015}) == 2013);
}

TEST_CASE("MLP scoring requires a trained model and all measures") {
    auto m = init_mlp(small_config());
    FeatureTable empty(std::vector<MeasureId>(kAllMeasures.begin(), kAllMeasures.end()), {});
    CHECK_THROWS_AS(score_candidates_mlp(m, empty), std::invalid_argument);
    m.trained = true;
    CHECK(score_candidates_mlp(m, empty).empty());
    FeatureTable partial({MeasureId::CN}, {{0, 1}});
    CHECK_THROWS_AS(score_candidates_mlp(m, partial), std::invalid_argument);
}

TEST_CASE("MLP universe scorer agrees with table scoring") {
    std::mt19937_64 rng(61);
    auto d = oracle::random_graph(rng, 25, 0.1, 3);
    auto g = oracle::to_graph(d);
    std::vector<Node> members(g.node_count());
    for (Node i = 0; i < members.size(); ++i)
        members[i] = i;
    CandidateUniverse universe(g, members);
    auto table = score_candidates(g, enumerate_candidates(g, members), kAllMeasures);

    auto m = init_mlp(small_config());
    m.trained = true;
    m.standardizer.mean.assign(10, 0.0);
    m.standardizer.scale.assign(10, 1.0);
    m.standardizer.mean[8] = 3.0;
    m.standardizer.scale[8] = 7.0;
    auto scored = score_candidates_mlp(m, table);
    REQUIRE(scored.has_dnn());
    auto scorer = make_mlp_scorer(universe, m);
    CHECK(scorer.name == "DNN");
    for (std::size_t r = 0; r < scored.size(); ++r) {
        const double s = scored.dnn()[r];
        CHECK(s > 0.0);
        CHECK(s < 1.0);
        CHECK(score_of(universe, scorer, scored.rows()[r]) == s);
    }
}

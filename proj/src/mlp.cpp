#include <citelink/errors.hpp>
#include <citelink/evaluation.hpp>
#include <citelink/mlp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace citelink {

void MlpConfig::validate() const {
    if (input_dim != kMeasureCount)
        throw InputError("MLP input dimension must be " + std::to_string(kMeasureCount));
    if (hidden.empty())
        throw InputError("MLP needs at least one hidden layer");
    for (auto h : hidden)
        if (h < 1)
            throw InputError("hidden layer sizes must be >= 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw InputError("learning rate must be finite and >= 0");
    if (batch_size < 1)
        throw InputError("batch size must be >= 1");
    if (!(negative_ratio > 0.0) || !std::isfinite(negative_ratio))
        throw InputError("negative ratio must be > 0");
}

Standardizer Standardizer::fit(std::span<const double> rows, std::size_t dim) {
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    const std::size_t n = dim == 0 ? 0 : rows.size() / dim;
    if (n == 0)
        return s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            s.mean[j] += rows[i * dim + j];
    for (auto &m : s.mean)
        m /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = rows[i * dim + j] - s.mean[j];
            var[j] += d * d;
        }
    for (std::size_t j = 0; j < dim; ++j)
        s.scale[j] = std::max(std::sqrt(var[j] / static_cast<double>(n)), 1e-12);
    return s;
}

void Standardizer::apply(std::span<double> row) const {
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = (row[j] - mean[j]) / scale[j];
}

void Standardizer::revert(std::span<double> row) const {
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = row[j] * scale[j] + mean[j];
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto &l : layers)
        n += l.weights.size() + l.bias.size();
    return n;
}

double &Mlp::parameter(std::size_t i) {
    for (auto &l : layers) {
        if (i < l.weights.size())
            return l.weights[i];
        i -= l.weights.size();
        if (i < l.bias.size())
            return l.bias[i];
        i -= l.bias.size();
    }
    throw std::out_of_range("parameter index out of range");
}

double Mlp::parameter(std::size_t i) const { return const_cast<Mlp &>(*this).parameter(i); }

Mlp init_mlp(const MlpConfig &config) {
    config.validate();
    Mlp mlp;
    mlp.config = config;
    std::mt19937_64 rng(config.seed);
    std::size_t in = config.input_dim;
    std::vector<std::size_t> sizes = config.hidden;
    sizes.push_back(1);
    for (auto out : sizes) {
        DenseLayer layer;
        layer.in = in;
        layer.out = out;
        const double limit = std::sqrt(6.0 / static_cast<double>(in));
        std::uniform_real_distribution<double> dist(-limit, limit);
        layer.weights.resize(in * out);
        for (auto &w : layer.weights)
            w = dist(rng);
        layer.bias.assign(out, 0.0);
        mlp.layers.push_back(std::move(layer));
        in = out;
    }
    mlp.standardizer.mean.assign(config.input_dim, 0.0);
    mlp.standardizer.scale.assign(config.input_dim, 1.0);
    return mlp;
}

namespace {

/// Kept strictly inside (0, 1) even where the exact value rounds to an endpoint.
double logistic(double z) {
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = std::nextafter(1.0, 0.0);
    if (z >= 0)
        return std::min(1.0 / (1.0 + std::exp(-z)), hi);
    const double e = std::exp(z);
    return std::max(e / (1.0 + e), lo);
}

/// BCE from the logit: softplus(z) - y z.
double bce_from_logit(double z, double y) {
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - y * z;
}

/// Pre-activations of every layer for one input.
struct Trace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act; // act[0] is the input
};

void run(const Mlp &mlp, std::span<const double> x, Trace &t) {
    const auto nl = mlp.layers.size();
    t.pre.resize(nl);
    t.act.resize(nl + 1);
    t.act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < nl; ++l) {
        const auto &layer = mlp.layers[l];
        auto &pre = t.pre[l];
        auto &act = t.act[l + 1];
        pre.resize(layer.out);
        act.resize(layer.out);
        const auto &in = t.act[l];
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double *w = layer.weights.data() + o * layer.in;
            double z = layer.bias[o];
            for (std::size_t i = 0; i < layer.in; ++i)
                z += w[i] * in[i];
            pre[o] = z;
            act[o] = l + 1 == nl ? z : std::max(z, 0.0);
        }
    }
}

double logit(const Mlp &mlp, std::span<const double> x, Trace &t) {
    if (x.size() != mlp.config.input_dim)
        throw std::invalid_argument("feature row has the wrong dimension");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite feature value");
    run(mlp, x, t);
    return t.pre.back()[0];
}

/// Adds d(loss)/d(param) for one sample into `grad` (flat parameter order).
void backprop(const Mlp &mlp, const Trace &t, double label, std::vector<double> &grad,
              std::vector<double> &delta, std::vector<double> &next) {
    const auto nl = mlp.layers.size();
    std::vector<std::size_t> offset(nl);
    std::size_t off = 0;
    for (std::size_t l = 0; l < nl; ++l) {
        offset[l] = off;
        off += mlp.layers[l].weights.size() + mlp.layers[l].bias.size();
    }
    delta.assign(1, logistic(t.pre.back()[0]) - label);
    for (std::size_t l = nl; l-- > 0;) {
        const auto &layer = mlp.layers[l];
        const auto &in = t.act[l];
        double *gw = grad.data() + offset[l];
        double *gb = gw + layer.weights.size();
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            if (d == 0.0)
                continue;
            double *row = gw + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                row[i] += d * in[i];
        }
        if (l == 0)
            break;
        next.assign(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double d = delta[o];
            if (d == 0.0)
                continue;
            const double *w = layer.weights.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                next[i] += w[i] * d;
        }
        const auto &pre = t.pre[l - 1];
        for (std::size_t i = 0; i < layer.in; ++i)
            if (pre[i] <= 0.0)
                next[i] = 0.0;
        delta.swap(next);
    }
}

} // namespace

double forward(const Mlp &mlp, std::span<const double> features) {
    Trace t;
    return logistic(logit(mlp, features, t));
}

std::vector<double> forward_batch(const Mlp &mlp, std::span<const double> rows) {
    const auto dim = mlp.config.input_dim;
    if (rows.size() % dim != 0)
        throw std::invalid_argument("batch is not a whole number of rows");
    std::vector<double> out(rows.size() / dim);
    Trace t;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = logistic(logit(mlp, rows.subspan(i * dim, dim), t));
    return out;
}

double sample_loss(const Mlp &mlp, std::span<const double> features, double label) {
    Trace t;
    return bce_from_logit(logit(mlp, features, t), label);
}

std::vector<double> loss_gradient(const Mlp &mlp, std::span<const double> features, double label) {
    Trace t;
    logit(mlp, features, t);
    std::vector<double> grad(mlp.parameter_count(), 0.0), delta, next;
    backprop(mlp, t, label, grad, delta, next);
    return grad;
}

double mean_loss(const Mlp &mlp, const TrainingSet &data) {
    if (data.size() == 0)
        return 0.0;
    Trace t;
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        total += bce_from_logit(logit(mlp, data.row(i), t), data.labels[i]);
    return total / static_cast<double>(data.size());
}

double accuracy(const Mlp &mlp, const TrainingSet &data) {
    if (data.size() == 0)
        return 0.0;
    Trace t;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const bool predicted = logit(mlp, data.row(i), t) > 0.0;
        correct += predicted == (data.labels[i] != 0) ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train(Mlp &mlp, const TrainingSet &data) {
    mlp.config.validate();
    if (data.size() == 0 || data.positives == 0 || data.negatives == 0)
        throw DegenerateDataError("degenerate training set");

    const auto &cfg = mlp.config;
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    const auto np = mlp.parameter_count();
    std::vector<double> grad(np), delta, next;
    Trace t;
    TrainResult result;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const auto end = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const auto i = order[b];
                logit(mlp, data.row(i), t);
                backprop(mlp, t, data.labels[i], grad, delta, next);
            }
            const double step = cfg.learning_rate / static_cast<double>(end - start);
            if (step == 0.0)
                continue;
            std::size_t p = 0;
            for (auto &layer : mlp.layers) {
                for (auto &w : layer.weights)
                    w -= step * grad[p++];
                for (auto &b : layer.bias)
                    b -= step * grad[p++];
            }
        }
        const double loss = mean_loss(mlp, data);
        if (!std::isfinite(loss))
            throw DivergenceError(epoch + 1, "non-finite training loss");
        result.loss_history.push_back(loss);
    }
    mlp.standardizer = data.stats;
    mlp.trained = true;
    return result;
}

GradientCheck gradient_check(const Mlp &mlp, std::span<const double> features, double label,
                             std::size_t sample_size, std::uint64_t seed) {
    constexpr double h = 1e-5;
    GradientCheck result;
    const auto analytic = loss_gradient(mlp, features, label);
    const auto np = analytic.size();

    std::vector<std::size_t> idx(np);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(sample_size, np));

    Mlp probe = mlp;
    Trace base, plus_t, minus_t;
    logit(mlp, features, base);
    auto same_mask = [&](const Trace &t) {
        for (std::size_t l = 0; l + 1 < t.pre.size(); ++l)
            for (std::size_t o = 0; o < t.pre[l].size(); ++o)
                if ((t.pre[l][o] > 0.0) != (base.pre[l][o] > 0.0))
                    return false;
        return true;
    };

    for (auto i : idx) {
        const double original = probe.parameter(i);
        probe.parameter(i) = original + h;
        const double lp = bce_from_logit(logit(probe, features, plus_t), label);
        probe.parameter(i) = original - h;
        const double lm = bce_from_logit(logit(probe, features, minus_t), label);
        probe.parameter(i) = original;
        if (!same_mask(plus_t) || !same_mask(minus_t)) {
            ++result.skipped_near_kink;
            continue;
        }
        const double numeric = (lp - lm) / (2 * h);
        const double a = analytic[i];
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
        ++result.checked;
    }
    return result;
}

int default_inner_cut(YearInterval train) {
    const int sum = train.first + train.last;
    return sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
}

TrainingSet build_training_set(const Corpus &corpus, const AuthorSet &authors,
                               YearInterval train, int inner_cut, double negative_ratio,
                               std::uint64_t seed, StrengthConvention strength) {
    if (!(train.first < inner_cut && inner_cut < train.last))
        throw InputError("inner cut " + std::to_string(inner_cut) + " must lie strictly inside (" +
                         std::to_string(train.first) + ", " + std::to_string(train.last) + ")");
    if (!(negative_ratio > 0.0) || !std::isfinite(negative_ratio))
        throw InputError("negative ratio must be > 0");

    TrainingSet set;
    set.feature_window = {train.first, inner_cut};
    set.label_window = {inner_cut + 1, train.last};
    auto feature_graph = build_author_graph(corpus, set.feature_window, &authors);
    auto label_graph = build_author_graph(corpus, set.label_window, &authors);
    std::vector<Node> nodes(feature_graph.node_count());
    std::iota(nodes.begin(), nodes.end(), Node{0});
    CandidateUniverse universe(feature_graph, nodes, strength);

    auto positives = universe_positives(universe, label_graph);
    if (positives.empty())
        throw DegenerateDataError("degenerate training set: no links form in the inner window");

    const std::uint64_t available = universe.size() - positives.size();
    const auto wanted = static_cast<std::uint64_t>(
        std::llround(negative_ratio * static_cast<double>(positives.size())));
    const auto needed = std::min(wanted, available);

    std::vector<CandidatePair> negatives;
    std::mt19937_64 rng(seed);
    auto is_positive = [&](CandidatePair p) {
        return std::binary_search(positives.begin(), positives.end(), p);
    };
    if (needed * 2 > available) {
        universe.for_each([&](CandidatePair p, const Scores &) {
            if (!is_positive(p))
                negatives.push_back(p);
        });
        std::shuffle(negatives.begin(), negatives.end(), rng);
        negatives.resize(needed);
    } else {
        const auto &m = universe.members();
        std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
        std::unordered_set<std::uint64_t> chosen;
        while (negatives.size() < needed) {
            const CandidatePair p{m[pick(rng)], m[pick(rng)]};
            if (!universe.is_candidate(p.src, p.dst) || is_positive(p) ||
                !chosen.insert(p.key()).second)
                continue;
            negatives.push_back(p);
        }
    }

    set.positives = positives.size();
    set.negatives = negatives.size();
    std::vector<double> raw;
    raw.reserve((positives.size() + negatives.size()) * kMeasureCount);
    auto add = [&](CandidatePair p, std::uint8_t label) {
        const auto s = universe.scores(p);
        raw.insert(raw.end(), s.begin(), s.end());
        set.labels.push_back(label);
    };
    for (const auto &p : positives)
        add(p, 1);
    for (const auto &p : negatives)
        add(p, 0);

    set.stats = Standardizer::fit(raw, kMeasureCount);
    for (std::size_t i = 0; i < set.labels.size(); ++i)
        set.stats.apply(std::span<double>(raw.data() + i * kMeasureCount, kMeasureCount));
    set.features = std::move(raw);
    return set;
}

namespace {

void require_trained(const Mlp &mlp) {
    if (!mlp.trained)
        throw std::invalid_argument("MLP has not been trained");
}

double score_raw(const Mlp &mlp, Scores raw) {
    mlp.standardizer.apply(raw);
    return forward(mlp, raw);
}

} // namespace

FeatureTable score_candidates_mlp(const Mlp &mlp, const FeatureTable &table) {
    require_trained(mlp);
    std::vector<std::size_t> cols;
    for (auto m : kAllMeasures) {
        auto c = table.column_index(m);
        if (!c)
            throw std::invalid_argument("MLP scoring needs all ten measures; missing " +
                                        std::string(measure_name(m)));
        cols.push_back(*c);
    }
    FeatureTable out = table;
    std::vector<double> dnn(table.size());
    for (std::size_t r = 0; r < table.size(); ++r) {
        Scores raw{};
        for (std::size_t j = 0; j < kMeasureCount; ++j)
            raw[j] = table.at(r, cols[j]);
        dnn[r] = score_raw(mlp, raw);
    }
    out.set_dnn(std::move(dnn));
    return out;
}

UniverseScorer make_mlp_scorer(const CandidateUniverse &universe, const Mlp &mlp) {
    require_trained(mlp);
    UniverseScorer scorer;
    scorer.name = "DNN";
    scorer.explicit_scores = score_candidates_mlp(mlp, universe.explicit_rows()).dnn();

    // Implicit candidates only differ through degree and WPA strength.
    const auto &g = universe.graph();
    const auto conv = universe.strength_convention();
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> ids;
    for (Node u : universe.members())
        ids.emplace(std::pair<std::uint64_t, std::uint64_t>{g.degree(u), pa_strength(g, u, conv)}, 0);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
    for (auto &[k, id] : ids) {
        id = static_cast<std::uint32_t>(keys.size());
        keys.push_back(k);
    }
    scorer.class_count = static_cast<std::uint32_t>(keys.size());
    scorer.node_class.assign(g.node_count(), 0);
    for (Node u : universe.members())
        scorer.node_class[u] = ids.at({g.degree(u), pa_strength(g, u, conv)});
    const auto k = scorer.class_count;
    scorer.class_scores.assign(std::size_t{k} * k, 0.0);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j) {
            Scores raw{};
            raw[static_cast<std::size_t>(MeasureId::PA)] =
                static_cast<double>(keys[i].first) * static_cast<double>(keys[j].first);
            raw[static_cast<std::size_t>(MeasureId::WPA)] =
                static_cast<double>(keys[i].second) * static_cast<double>(keys[j].second);
            scorer.class_scores[std::size_t{i} * k + j] = score_raw(mlp, raw);
        }
    return scorer;
}

namespace {

void put_doubles(std::ostream &out, const char *tag, const std::vector<double> &v) {
    out << tag;
    char buf[40];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, " %a", x);
        out << buf;
    }
    out << '\n';
}

std::vector<double> get_doubles(std::istream &in, const std::string &tag, std::size_t n) {
    std::string line;
    if (!std::getline(in, line))
        throw InputError("model file truncated before \"" + tag + "\"");
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != tag)
        throw InputError("model file: expected \"" + tag + "\", found \"" + word + "\"");
    std::vector<double> v;
    v.reserve(n);
    while (ss >> word) {
        char *end = nullptr;
        v.push_back(std::strtod(word.c_str(), &end));
        if (end != word.c_str() + word.size())
            throw InputError("model file: bad number \"" + word + "\"");
    }
    if (v.size() != n)
        throw InputError("model file: \"" + tag + "\" holds " + std::to_string(v.size()) +
                         " values, expected " + std::to_string(n));
    return v;
}

nlohmann::ordered_json config_json(const MlpConfig &c) {
    return {{"input_dim", c.input_dim},       {"hidden", c.hidden},
            {"learning_rate", c.learning_rate}, {"epochs", c.epochs},
            {"batch_size", c.batch_size},     {"seed", c.seed},
            {"negative_ratio", c.negative_ratio}};
}

} // namespace

void save_mlp(std::ostream &out, const Mlp &mlp, const std::vector<std::string> &comments) {
    out << "citelink-mlp v1\n";
    for (const auto &c : comments)
        out << '#' << c << '\n';
    out << "config " << config_json(mlp.config).dump() << '\n';
    out << "trained " << (mlp.trained ? 1 : 0) << '\n';
    put_doubles(out, "mean", mlp.standardizer.mean);
    put_doubles(out, "scale", mlp.standardizer.scale);
    for (const auto &l : mlp.layers) {
        out << "layer " << l.in << ' ' << l.out << '\n';
        put_doubles(out, "weights", l.weights);
        put_doubles(out, "bias", l.bias);
    }
}

Mlp load_mlp(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != "citelink-mlp v1")
        throw InputError("not a citelink-mlp v1 model file");
    while (in.peek() == '#')
        std::getline(in, line);

    Mlp mlp;
    if (!std::getline(in, line) || !line.starts_with("config "))
        throw InputError("model file: missing config");
    try {
        auto j = nlohmann::json::parse(line.substr(7));
        auto &c = mlp.config;
        c.input_dim = j.at("input_dim").get<std::size_t>();
        c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
        c.learning_rate = j.at("learning_rate").get<double>();
        c.epochs = j.at("epochs").get<std::size_t>();
        c.batch_size = j.at("batch_size").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.negative_ratio = j.at("negative_ratio").get<double>();
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("model file: bad config: ") + e.what());
    }
    mlp.config.validate();
    if (!std::getline(in, line) || (line != "trained 0" && line != "trained 1"))
        throw InputError("model file: missing trained flag");
    mlp.trained = line == "trained 1";
    mlp.standardizer.mean = get_doubles(in, "mean", mlp.config.input_dim);
    mlp.standardizer.scale = get_doubles(in, "scale", mlp.config.input_dim);

    std::vector<std::size_t> sizes = mlp.config.hidden;
    sizes.push_back(1);
    std::size_t prev = mlp.config.input_dim;
    for (auto out : sizes) {
        if (!std::getline(in, line))
            throw InputError("model file truncated before a layer");
        std::istringstream ss(line);
        std::string tag;
        DenseLayer l;
        ss >> tag >> l.in >> l.out;
        if (tag != "layer" || l.in != prev || l.out != out)
            throw InputError("model file: layer shape does not match config");
        l.weights = get_doubles(in, "weights", l.in * l.out);
        l.bias = get_doubles(in, "bias", l.out);
        mlp.layers.push_back(std::move(l));
        prev = out;
    }
    return mlp;
}

} // namespace citelink

#include <citelink/errors.hpp>
#include <citelink/evaluation.hpp>
#include <citelink/pipeline.hpp>
#include <citelink/universe.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

namespace citelink {

namespace fs = std::filesystem;

MlpConfig RunConfig::mlp_config() const {
    MlpConfig c;
    c.learning_rate = learning_rate;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.seed = seed;
    c.negative_ratio = negative_ratio;
    return c;
}

nlohmann::ordered_json config_to_json(const RunConfig &c) {
    nlohmann::ordered_json j;
    j["corpus"] = c.corpus;
    j["year"] = c.year;
    j["depth"] = c.depth;
    j["horizons"] = c.horizons;
    j["fraction"] = c.fraction;
    std::vector<std::string> measures;
    for (auto m : c.measures)
        measures.emplace_back(measure_name(m));
    j["measures"] = measures;
    j["ks"] = c.ks;
    j["seed"] = c.seed;
    j["mlp"] = c.mlp;
    j["learning_rate"] = c.learning_rate;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["negative_ratio"] = c.negative_ratio;
    if (c.inner_cut)
        j["inner_cut"] = *c.inner_cut;
    else
        j["inner_cut"] = nullptr;
    j["pa_strength"] = to_string(c.pa_strength);
    j["selection_window"] = c.selection_window == SelectionWindow::History ? "history" : "train";
    j["roc_points"] = c.roc_points;
    j["restrict"] = c.restrict_graph;
    j["sparse"] = c.sparse;
    return j;
}

namespace {

std::vector<MeasureId> parse_measures(const std::vector<std::string> &names) {
    std::vector<MeasureId> out;
    for (const auto &n : names) {
        auto m = parse_measure(n);
        if (!m)
            throw InputError("unknown measure \"" + n + "\"");
        if (std::find(out.begin(), out.end(), *m) == out.end())
            out.push_back(*m);
    }
    if (out.empty())
        throw InputError("no measures selected");
    return out;
}

SelectionWindow parse_selection_window(const std::string &s) {
    if (s == "train")
        return SelectionWindow::Train;
    if (s == "history")
        return SelectionWindow::History;
    throw InputError("unknown selection window \"" + s + "\" (expected train|history)");
}

} // namespace

RunConfig config_from_json(const nlohmann::json &j, RunConfig c) {
    try {
        if (j.contains("corpus"))
            c.corpus = j.at("corpus").get<std::string>();
        if (j.contains("year"))
            c.year = j.at("year").get<int>();
        if (j.contains("depth"))
            c.depth = j.at("depth").get<int>();
        if (j.contains("horizons"))
            c.horizons = j.at("horizons").get<std::vector<int>>();
        if (j.contains("fraction"))
            c.fraction = j.at("fraction").get<double>();
        if (j.contains("measures"))
            c.measures = parse_measures(j.at("measures").get<std::vector<std::string>>());
        if (j.contains("ks"))
            c.ks = j.at("ks").get<std::vector<std::size_t>>();
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("mlp"))
            c.mlp = j.at("mlp").get<bool>();
        if (j.contains("learning_rate"))
            c.learning_rate = j.at("learning_rate").get<double>();
        if (j.contains("epochs"))
            c.epochs = j.at("epochs").get<std::size_t>();
        if (j.contains("batch_size"))
            c.batch_size = j.at("batch_size").get<std::size_t>();
        if (j.contains("negative_ratio"))
            c.negative_ratio = j.at("negative_ratio").get<double>();
        if (j.contains("inner_cut")) {
            if (j.at("inner_cut").is_null())
                c.inner_cut.reset();
            else
                c.inner_cut = j.at("inner_cut").get<int>();
        }
        if (j.contains("pa_strength"))
            c.pa_strength = parse_strength_convention(j.at("pa_strength").get<std::string>());
        if (j.contains("selection_window"))
            c.selection_window = parse_selection_window(j.at("selection_window").get<std::string>());
        if (j.contains("roc_points"))
            c.roc_points = j.at("roc_points").get<std::size_t>();
        if (j.contains("restrict"))
            c.restrict_graph = j.at("restrict").get<bool>();
        if (j.contains("sparse"))
            c.sparse = j.at("sparse").get<bool>();
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("bad configuration: ") + e.what());
    }
    return c;
}

nlohmann::json load_config_source(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    constexpr std::string_view marker = "# run-config ";
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.starts_with(marker)) {
            try {
                return nlohmann::json::parse(line.substr(marker.size()));
            } catch (const nlohmann::json::parse_error &e) {
                throw InputError("bad run-config header in " + path + ": " + e.what());
            }
        }
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw InputError("config file " + path + " is neither JSON nor an artifact with a "
                         "run-config header: " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.at("config").is_object())
        return j.at("config");
    return j;
}

namespace {

nlohmann::ordered_json provenance(const std::string &command, const RunConfig &c) {
    nlohmann::ordered_json j;
    j["command"] = command;
    const auto config = config_to_json(c);
    for (const auto &[k, v] : config.items())
        j[k] = v;
    return j;
}

std::string header_line(const std::string &command, const RunConfig &c) {
    return " run-config " + provenance(command, c).dump();
}

struct Prepared {
    Corpus corpus;
    TemporalSplit split;
    AuthorSet authors;
    AuthorCitationGraph graph;
};

Corpus load_corpus(const RunConfig &c) {
    if (c.corpus.empty())
        throw InputError("--corpus is required");
    if (!fs::exists(c.corpus))
        throw InputError("corpus file not found: " + c.corpus);
    return Corpus(parse_papers_file(c.corpus));
}

std::size_t papers_in(const Corpus &corpus, YearInterval w) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < corpus.paper_count(); ++i)
        n += w.contains(corpus.year(i)) ? 1 : 0;
    return n;
}

AuthorSet select_authors(const Corpus &corpus, const TemporalSplit &split, const RunConfig &c) {
    auto window = split.train_interval();
    if (papers_in(corpus, window) == 0)
        throw DegenerateDataError("empty training window");
    if (c.selection_window == SelectionWindow::History)
        window.first = kMinYear;
    return select_productive_authors(corpus, window, c.fraction);
}

Prepared prepare(const RunConfig &c) {
    Prepared p;
    p.corpus = load_corpus(c);
    p.split = make_temporal_split(c.year, c.depth, c.horizons);
    p.authors = select_authors(p.corpus, p.split, c);
    p.graph = build_author_graph(p.corpus, p.split.train_interval(), &p.authors);
    return p;
}

void ensure_out(const RunConfig &c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec)
        throw InputError("cannot create output directory " + c.out + ": " + ec.message());
}

std::ofstream open_out(const RunConfig &c, const std::string &name) {
    ensure_out(c);
    auto path = (fs::path(c.out) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path);
    return out;
}

std::vector<Node> all_nodes(const AuthorCitationGraph &g) {
    std::vector<Node> nodes(g.node_count());
    std::iota(nodes.begin(), nodes.end(), Node{0});
    return nodes;
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_universe_csv(std::ostream &out, const CandidateUniverse &universe,
                        const UniverseScorer *dnn, bool sparse, const std::string &comment) {
    const auto &g = universe.graph();
    out << '#' << comment << '\n';
    out << "src,dst";
    for (auto m : kAllMeasures)
        out << ',' << measure_column(m);
    if (dnn)
        out << ",dnn";
    out << '\n';
    auto row = [&](CandidatePair p, const Scores &s) {
        out << g.name(p.src) << ',' << g.name(p.dst);
        for (double x : s)
            out << ',' << fmt17(x);
        if (dnn)
            out << ',' << fmt17(score_of(universe, *dnn, p));
        out << '\n';
    };
    if (sparse) {
        const auto &t = universe.explicit_rows();
        for (std::size_t r = 0; r < t.size(); ++r) {
            Scores s{};
            for (std::size_t c = 0; c < kMeasureCount; ++c)
                s[c] = t.at(r, c);
            row(t.rows()[r], s);
        }
    } else {
        universe.for_each(row);
    }
}

struct TrainedModel {
    Mlp mlp;
    TrainResult history;
    TrainingSet data;
};

TrainedModel train_model(const Prepared &p, const RunConfig &c, std::ostream &log) {
    auto cfg = c.mlp_config();
    cfg.validate();
    const auto train = p.split.train_interval();
    const int cut = c.inner_cut.value_or(default_inner_cut(train));
    TrainedModel m;
    m.data = build_training_set(p.corpus, p.authors, train, cut, cfg.negative_ratio, cfg.seed,
                                c.pa_strength);
    log << "training set: " << m.data.positives << " positives, " << m.data.negatives
        << " negatives (features " << m.data.feature_window.first << '-'
        << m.data.feature_window.last << ", labels " << m.data.label_window.first << '-'
        << m.data.label_window.last << ")\n";
    m.mlp = init_mlp(cfg);
    m.history = citelink::train(m.mlp, m.data);
    log << "final training loss " << fmt17(m.history.loss_history.back()) << ", accuracy "
        << accuracy(m.mlp, m.data) << '\n';
    return m;
}

void write_model_files(const RunConfig &c, const std::string &command, const TrainedModel &m) {
    auto model = open_out(c, "model.txt");
    save_mlp(model, m.mlp, {header_line(command, c)});
    auto loss = open_out(c, "loss.csv");
    loss << '#' << header_line(command, c) << '\n' << "epoch,loss\n";
    for (std::size_t e = 0; e < m.history.loss_history.size(); ++e)
        loss << e + 1 << ',' << fmt17(m.history.loss_history[e]) << '\n';
}

} // namespace

void cmd_build_graph(const RunConfig &c, std::ostream &log) {
    const auto corpus = load_corpus(c);
    const auto stats = validate_corpus(corpus.papers());
    const auto split = make_temporal_split(c.year, c.depth, c.horizons);
    const auto window = split.train_interval();
    if (papers_in(corpus, window) == 0)
        throw DegenerateDataError("empty training window");
    AuthorCitationGraph g;
    if (c.restrict_graph) {
        auto authors = select_authors(corpus, split, c);
        g = build_author_graph(corpus, window, &authors);
    } else {
        g = build_author_graph(corpus, window);
    }
    auto out = open_out(c, "graph.tsv");
    write_edge_list(out, g, {header_line("build-graph", c)});

    log << "papers " << stats.n_papers << "\nauthors " << stats.n_authors << "\ndangling_refs "
        << stats.n_dangling_refs << "\nyears " << stats.year_range.first << '-'
        << stats.year_range.second << "\nwindow " << window.first << '-' << window.last
        << "\nnodes " << g.node_count() << "\nedges " << g.edge_count() << '\n';
}

void cmd_select_authors(const RunConfig &c, std::ostream &log) {
    const auto corpus = load_corpus(c);
    const auto split = make_temporal_split(c.year, c.depth, c.horizons);
    const auto authors = select_authors(corpus, split, c);
    auto out = open_out(c, "authors.tsv");
    out << '#' << header_line("select-authors", c) << '\n' << "rank\tauthor\tpapers\n";
    auto productivity = [&](AuthorId a) {
        auto it = std::lower_bound(
            authors.productivity.begin(), authors.productivity.end(), a,
            [](const std::pair<AuthorId, std::size_t> &p, AuthorId x) { return p.first < x; });
        return it->second;
    };
    for (std::size_t i = 0; i < authors.ranked.size(); ++i)
        out << i + 1 << '\t' << corpus.author_name(authors.ranked[i]) << '\t'
            << productivity(authors.ranked[i]) << '\n';
    log << "selected " << authors.members.size() << " of " << authors.productivity.size()
        << " active authors\n";
}

void cmd_score(const RunConfig &c, std::ostream &log) {
    const auto p = prepare(c);
    CandidateUniverse universe(p.graph, all_nodes(p.graph), c.pa_strength);
    auto out = open_out(c, "features.csv");
    write_universe_csv(out, universe, nullptr, c.sparse, header_line("score", c));
    log << "candidates " << universe.size() << "\nwith_common_neighbors "
        << universe.explicit_rows().size() << '\n';
}

void cmd_train_mlp(const RunConfig &c, std::ostream &log) {
    const auto p = prepare(c);
    auto model = train_model(p, c, log);
    write_model_files(c, "train-mlp", model);
    CandidateUniverse universe(p.graph, all_nodes(p.graph), c.pa_strength);
    auto dnn = make_mlp_scorer(universe, model.mlp);
    auto out = open_out(c, "features_dnn.csv");
    write_universe_csv(out, universe, &dnn, c.sparse, header_line("train-mlp", c));
}

void cmd_evaluate(const RunConfig &c, std::ostream &log) {
    if (c.ks.empty())
        throw InputError("no k values given");
    for (auto k : c.ks)
        if (k == 0)
            throw InputError("k values must be >= 1");
    const auto p = prepare(c);
    CandidateUniverse universe(p.graph, all_nodes(p.graph), c.pa_strength);
    log << "selected authors " << p.authors.members.size() << ", candidates " << universe.size()
        << ", with common neighbors " << universe.explicit_rows().size() << '\n';

    const auto max_k = *std::max_element(c.ks.begin(), c.ks.end());
    std::vector<PreparedScorer> scorers;
    for (auto m : c.measures)
        scorers.push_back(prepare_scorer(universe, make_measure_scorer(universe, m), max_k));
    if (c.mlp) {
        auto model = train_model(p, c, log);
        write_model_files(c, "evaluate", model);
        scorers.push_back(prepare_scorer(universe, make_mlp_scorer(universe, model.mlp), max_k));
    }

    const auto prov = provenance("evaluate", c);
    for (int horizon : p.split.horizons) {
        const auto test_window = p.split.test_interval(horizon);
        const auto test = build_author_graph(p.corpus, test_window, &p.authors);
        const auto positives = universe_positives(universe, test);

        EvaluationReport report;
        report.split = p.split;
        report.horizon = horizon;
        report.candidates = universe.size();
        report.positives = positives.size();
        report.random_baseline = random_baseline(positives.size(), universe.size());
        if (positives.empty())
            report.warnings.push_back("no positive candidates in test window " +
                                      std::to_string(test_window.first) + "-" +
                                      std::to_string(test_window.last) +
                                      "; ROC and AUC omitted");
        else if (positives.size() == universe.size())
            report.warnings.push_back("every candidate is positive; ROC and AUC omitted");
        for (const auto &s : scorers) {
            report.measures.push_back(evaluate_scorer(universe, s, positives, c.ks, c.roc_points));
            if (report.measures.back().precision.truncated)
                report.warnings.push_back(s.scorer.name + ": k exceeds the " +
                                          std::to_string(universe.size()) +
                                          " candidates; precision uses the whole list");
        }

        const auto stem = "p" + std::to_string(horizon);
        auto json_out = open_out(c, "report_" + stem + ".json");
        json_out << report_to_json(report, prov).dump(1) << '\n';
        auto csv_out = open_out(c, "precision_" + stem + ".csv");
        write_precision_csv(csv_out, report, {header_line("evaluate", c)});

        log << "horizon " << horizon << " (" << test_window.first << '-' << test_window.last
            << "): positives " << positives.size() << ", baseline "
            << fmt17(report.random_baseline);
        for (const auto &m : report.measures)
            if (m.auc)
                log << ", " << m.name << " auc " << std::setprecision(4) << *m.auc;
        log << '\n';
    }
}

void cmd_report(const RunConfig &c, std::ostream &log) {
    std::map<int, nlohmann::ordered_json> reports;
    if (!fs::is_directory(c.out))
        throw InputError("report directory not found: " + c.out);
    const std::regex name(R"(report_p(\d+)\.json)");
    for (const auto &entry : fs::directory_iterator(c.out)) {
        std::smatch m;
        const auto file = entry.path().filename().string();
        if (!std::regex_match(file, m, name))
            continue;
        std::ifstream in(entry.path());
        try {
            reports[std::stoi(m[1])] = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception &e) {
            throw InputError("cannot read " + entry.path().string() + ": " + e.what());
        }
    }
    if (reports.empty())
        throw InputError("no report_p*.json files in " + c.out);

    auto out = open_out(c, "table.csv");
    out << "# run-config " << reports.begin()->second.at("config").dump() << '\n';
    out << "horizon,measure,k,precision,auc\n";
    for (const auto &[horizon, j] : reports) {
        const auto &split = j.at("split");
        log << "test " << split.at("test")[0] << '-' << split.at("test")[1]
            << " (random baseline " << std::setprecision(4)
            << j.at("random_baseline").get<double>() << ")\n";
        std::vector<std::size_t> ks;
        for (const auto &pt : j.at("measures").begin()->at("precision_curve"))
            ks.push_back(pt[0].get<std::size_t>());
        log << std::left << std::setw(8) << "Method";
        for (auto k : ks)
            log << std::right << std::setw(10) << k;
        log << std::setw(10) << "AUC" << '\n';
        for (const auto &[measure, m] : j.at("measures").items()) {
            log << std::left << std::setw(8) << measure << std::right << std::fixed
                << std::setprecision(4);
            const std::string auc = m.at("auc").is_null() ? "" : fmt17(m.at("auc").get<double>());
            for (const auto &pt : m.at("precision_curve")) {
                log << std::setw(10) << pt[1].get<double>();
                out << horizon << ',' << measure << ',' << pt[0].get<std::size_t>() << ','
                    << fmt17(pt[1].get<double>()) << ',' << auc << '\n';
            }
            if (m.at("auc").is_null())
                log << std::setw(10) << "-";
            else
                log << std::setw(10) << m.at("auc").get<double>();
            log << std::defaultfloat << '\n';
        }
    }
}

namespace {

std::vector<int> expand_horizons(const std::vector<std::string> &items) {
    std::vector<int> out;
    const std::regex range(R"((\d+)-(\d+))"), single(R"(\d+)");
    for (const auto &item : items) {
        std::smatch m;
        if (std::regex_match(item, m, range)) {
            const int a = std::stoi(m[1]), b = std::stoi(m[2]);
            if (b < a)
                throw InputError("bad horizon range \"" + item + "\"");
            for (int h = a; h <= b; ++h)
                out.push_back(h);
        } else if (std::regex_match(item, single)) {
            out.push_back(std::stoi(item));
        } else {
            throw InputError("bad horizon \"" + item + "\"");
        }
    }
    return out;
}

struct Flags {
    std::string config, corpus, out, pa_strength, selection_window;
    int year = 0, depth = 0, inner_cut = 0;
    std::vector<std::string> horizons, measures;
    std::vector<std::size_t> ks;
    double fraction = 0, learning_rate = 0, negative_ratio = 0;
    std::uint64_t seed = 0;
    std::size_t epochs = 0, batch_size = 0, roc_points = 0;
    bool mlp = false, restrict_graph = false, sparse = false;
};

void add_flags(CLI::App *app, Flags &f) {
    app->add_option("--config", f.config,
                    "Configuration file: JSON, a report, or any artifact with a run-config header");
    app->add_option("--corpus", f.corpus, "Line-delimited paper corpus");
    app->add_option("--year", f.year, "Reference year Y");
    app->add_option("--depth", f.depth, "Past window depth d (train = [Y-d, Y])");
    app->add_option("--horizons", f.horizons, "Test horizons p, e.g. 1,2,3 or 1-17")
        ->delimiter(',');
    app->add_option("--fraction", f.fraction, "Fraction of most productive authors kept");
    app->add_option("--measures", f.measures, "Measures, e.g. CN,JC,WPA")->delimiter(',');
    app->add_option("--ks", f.ks, "Precision cut-offs")->delimiter(',');
    app->add_option("--seed", f.seed, "Seed for sampling and weight init");
    app->add_option("--out", f.out, "Output directory");
    app->add_flag("--mlp", f.mlp, "Add the neural-network (DNN) score");
    app->add_option("--pa-strength", f.pa_strength, "WPA strength: projected | in");
    app->add_option("--selection-window", f.selection_window,
                    "Productivity window: train | history");
    app->add_option("--learning-rate", f.learning_rate, "MLP learning rate");
    app->add_option("--epochs", f.epochs, "MLP epochs");
    app->add_option("--batch-size", f.batch_size, "MLP mini-batch size");
    app->add_option("--negative-ratio", f.negative_ratio, "MLP negatives per positive");
    app->add_option("--inner-cut", f.inner_cut, "Last feature year of the MLP training split");
    app->add_option("--roc-points", f.roc_points, "Max ROC points per measure (0 = all)");
    app->add_flag("--restrict", f.restrict_graph, "build-graph: keep selected authors only");
    app->add_flag("--sparse", f.sparse, "Only write candidates with a common neighbor");
}

RunConfig resolve(const CLI::App *app, const Flags &f) {
    RunConfig c;
    if (app->count("--config"))
        c = config_from_json(load_config_source(f.config), c);
    auto given = [&](const char *name) { return app->count(name) > 0; };
    if (given("--corpus"))
        c.corpus = f.corpus;
    if (given("--year"))
        c.year = f.year;
    if (given("--depth"))
        c.depth = f.depth;
    if (given("--horizons"))
        c.horizons = expand_horizons(f.horizons);
    if (given("--fraction"))
        c.fraction = f.fraction;
    if (given("--measures"))
        c.measures = parse_measures(f.measures);
    if (given("--ks"))
        c.ks = f.ks;
    if (given("--seed"))
        c.seed = f.seed;
    if (given("--out"))
        c.out = f.out;
    if (given("--mlp"))
        c.mlp = f.mlp;
    if (given("--pa-strength"))
        c.pa_strength = parse_strength_convention(f.pa_strength);
    if (given("--selection-window"))
        c.selection_window = parse_selection_window(f.selection_window);
    if (given("--learning-rate"))
        c.learning_rate = f.learning_rate;
    if (given("--epochs"))
        c.epochs = f.epochs;
    if (given("--batch-size"))
        c.batch_size = f.batch_size;
    if (given("--negative-ratio"))
        c.negative_ratio = f.negative_ratio;
    if (given("--inner-cut"))
        c.inner_cut = f.inner_cut;
    if (given("--roc-points"))
        c.roc_points = f.roc_points;
    if (given("--restrict"))
        c.restrict_graph = f.restrict_graph;
    if (given("--sparse"))
        c.sparse = f.sparse;
    return c;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Author-citation link prediction with local similarity indices"};
    app.require_subcommand(1);
    Flags flags;
    using Command = void (*)(const RunConfig &, std::ostream &);
    const std::vector<std::tuple<const char *, const char *, Command>> commands{
        {"build-graph", "Build the training-window author-citation graph", cmd_build_graph},
        {"select-authors", "Rank authors by productivity and keep the top fraction",
         cmd_select_authors},
        {"score", "Write the ten similarity measures for every candidate pair", cmd_score},
        {"evaluate", "Precision@k, ROC and AUC per test horizon", cmd_evaluate},
        {"train-mlp", "Train the neural-network score combiner", cmd_train_mlp},
        {"report", "Summarize evaluation reports as Table-style CSV", cmd_report},
    };
    std::vector<CLI::App *> subs;
    for (const auto &[name, help, fn] : commands) {
        auto *sub = app.add_subcommand(name, help);
        add_flags(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed())
                continue;
            auto config = resolve(subs[i], flags);
            std::get<2>(commands[i])(config, out);
        }
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateDataError &e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const DivergenceError &e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace citelink

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <citelink/ingest.hpp>
#include <citelink/similarity.hpp>
#include <citelink/universe.hpp>

namespace citelink {

struct MlpConfig {
    std::size_t input_dim = kMeasureCount;
    std::vector<std::size_t> hidden{256, 128};
    double learning_rate = 0.01;
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    std::uint64_t seed = 1;
    double negative_ratio = 1.0;

    /// Throws InputError on an invalid configuration.
    void validate() const;
};

/// Per-feature z-scoring fitted on training rows.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    /// Population statistics; the divisor is max(std, 1e-12).
    static Standardizer fit(std::span<const double> rows, std::size_t dim);
    void apply(std::span<double> row) const;
    void revert(std::span<double> row) const;
};

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    /// Row-major out x in.
    std::vector<double> weights;
    std::vector<double> bias;
};

/// 10 -> 256 (relu) -> 128 (relu) -> 1 (logistic) with the default config.
class Mlp {
public:
    MlpConfig config;
    std::vector<DenseLayer> layers;
    Standardizer standardizer;
    bool trained = false;

    std::size_t parameter_count() const;
    /// Flat parameter view: layer by layer, weights then bias.
    double &parameter(std::size_t i);
    double parameter(std::size_t i) const;
};

struct TrainingSet {
    /// Standardized rows, row-major n x 10.
    std::vector<double> features;
    std::vector<std::uint8_t> labels;
    Standardizer stats;
    YearInterval feature_window;
    YearInterval label_window;
    std::size_t positives = 0;
    std::size_t negatives = 0;

    std::size_t size() const noexcept { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * kMeasureCount, kMeasureCount};
    }
};

/**
 * Supervised rows from inside the training window: features on the graph over
 * [train.first, inner_cut], positives are candidate pairs that gain an edge in
 * (inner_cut, train.last], negatives are sampled uniformly without replacement
 * from the remaining candidates (round(negative_ratio * positives) of them,
 * or all remaining ones if fewer exist).
 */
TrainingSet build_training_set(const Corpus &corpus, const AuthorSet &authors,
                               YearInterval train, int inner_cut, double negative_ratio,
                               std::uint64_t seed,
                               StrengthConvention strength = StrengthConvention::Projected);

/// Default inner cut: midpoint of the training window, rounded down.
int default_inner_cut(YearInterval train);

/// He-uniform weights (limit sqrt(6 / fan_in)), zero biases.
Mlp init_mlp(const MlpConfig &config);

/// Output for one standardized feature row, in (0, 1).
double forward(const Mlp &mlp, std::span<const double> features);
/// Row-major n x input_dim.
std::vector<double> forward_batch(const Mlp &mlp, std::span<const double> rows);

/// Mean binary cross-entropy of the model over a training set.
double mean_loss(const Mlp &mlp, const TrainingSet &data);

struct TrainResult {
    /// Mean training loss after each epoch.
    std::vector<double> loss_history;
};

/// Mini-batch gradient descent on binary cross-entropy using mlp.config.
/// Throws DivergenceError on a non-finite loss.
TrainResult train(Mlp &mlp, const TrainingSet &data);

double accuracy(const Mlp &mlp, const TrainingSet &data);

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
    /// Parameters skipped because a +-step flips some relu.
    std::size_t skipped_near_kink = 0;
};

/// Central differences (step 1e-5) on `sample_size` random parameters.
GradientCheck gradient_check(const Mlp &mlp, std::span<const double> features, double label,
                             std::size_t sample_size = 256, std::uint64_t seed = 7);

/// Gradient of the single-sample loss with respect to every parameter.
std::vector<double> loss_gradient(const Mlp &mlp, std::span<const double> features, double label);
double sample_loss(const Mlp &mlp, std::span<const double> features, double label);

/// Appends the DNN column. The table must carry all ten measures.
FeatureTable score_candidates_mlp(const Mlp &mlp, const FeatureTable &table);

/// DNN column over a whole candidate universe.
UniverseScorer make_mlp_scorer(const CandidateUniverse &universe, const Mlp &mlp);

/// Text dump with hex floats; load_mlp reproduces forward outputs bit-exactly.
void save_mlp(std::ostream &out, const Mlp &mlp, const std::vector<std::string> &comments = {});
Mlp load_mlp(std::istream &in);

} // namespace citelink

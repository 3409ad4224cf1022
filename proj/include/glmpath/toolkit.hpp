#pragma once

#include "glmpath/path.hpp"
#include "glmpath/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace glmpath {

// Debugging tools for a dense decision layer (W, b). Stored class-major:
// row c holds class c's weights over the d features.
struct DecisionLayer {
  Matrix W;  // classes x d
  Vector b;  // classes

  Index classes() const { return W.rows(); }
  Index dim() const { return W.cols(); }
};

// binomial models expand to a two-class layer [(0, 0), (beta, beta0)];
// gaussian models have no decision layer.
DecisionLayer decision_layer_from(const GlmModel& model);

// argmax_c W x + b with ties to the lower class index
Index layer_predict(const DecisionLayer& layer, const Vector& features);
double layer_accuracy(const DecisionLayer& layer, const Matrix& x, const TargetVector& y);

struct AblationReport {
  Index k = 0;  // effective k (clamped to d)
  double acc_all = 0.0;
  double acc_topk = 0.0;
  double acc_rest = 0.0;
};

// per-class index sets of the k largest |W[c, j]|, ties to lower index
std::vector<std::vector<Index>> topk_sets(const DecisionLayer& layer, Index k);

// Accuracy with each class's logit restricted to its own top-k features
// (acc_topk) or their complement (acc_rest); intercepts always active.
AblationReport topk_ablation(const DecisionLayer& layer, const Matrix& x_eval,
                             const TargetVector& y_eval, Index k);

struct AttributionScores {
  Vector gamma;            // gamma_i = (W[p,i] - W[l,i]) * f_i
  Index top_feature = 0;   // argmax gamma, ties to lower index
  bool flip = false;       // zeroing top_feature in all logits flips argmax to l
  Index truth = 0;
  Index predicted = 0;
};

// Requires that the layer actually predicts `predicted` on `features` and
// that predicted != truth.
AttributionScores attribute_misclassification(const DecisionLayer& layer, const Vector& features,
                                              Index truth, Index predicted);

struct PairOverlap {
  Index a = 0;
  Index b = 0;
  Index shared_count = 0;
  double confusion_score = 0.0;  // max(C[a,b], C[b,a])
};

struct ConfusionOverlapReport {
  std::vector<PairOverlap> pairs;        // unordered pairs, a < b
  std::optional<double> spearman;        // absent on zero variance
  std::optional<double> pearson;
  std::vector<Index> skipped_classes;    // all-zero weight rows
};

// A feature is "used" by class c iff |W[c,j]| > threshold_frac * max|W[c,.]|.
ConfusionOverlapReport confusion_overlap(const DecisionLayer& layer, double threshold_frac,
                                         const Matrix& confusion);

// counts[truth][predicted] over the evaluation set
Matrix confusion_matrix(const Matrix& x, const TargetVector& y, const GlmModel& model);

std::optional<double> pearson_correlation(const std::vector<double>& a,
                                          const std::vector<double>& b);
std::optional<double> spearman_correlation(const std::vector<double>& a,
                                           const std::vector<double>& b);

struct Sentence {
  std::vector<std::string> tokens;
};

struct WordWeight {
  std::string word;
  double weight = 0.0;
};

struct WordCloud {
  static constexpr Index kCap = 30;

  Index feature_id = 0;
  std::vector<WordWeight> positive;  // weight > 0, sorted by weight descending
  std::vector<WordWeight> negative;  // weight < 0, sorted by |weight| descending

  bool in_positive(const std::string& word) const;
  bool in_negative(const std::string& word) const;
};

// one sentence plus an explanation weight per token position
struct WeightedSentence {
  Sentence sentence;
  Vector weights;
};

// Mean weight per word over all of its occurrences, split by sign and capped
// at kCap entries per sign. Tokens missing from vocab raise an error naming
// the word.
WordCloud aggregate_wordcloud(Index feature_id, const std::vector<WeightedSentence>& corpus,
                              const std::vector<std::string>& vocab);

using Encoder = std::function<Vector(const Sentence&)>;

struct CounterfactualResult {
  Sentence output;
  Index position = 0;    // substituted token position
  Index feature_id = 0;  // cloud the substitution came from
  std::string removed;
  std::string replacement;
  std::optional<bool> flipped_prediction;  // only with an encoder
};

// Single-token substitution drawn from the signed word clouds: candidates are
// (position, feature) pairs where the token sits in the cloud whose sign
// matches the predicted class's weight on that feature, and the replacement
// comes from the opposite-sign cloud. Returns nullopt when no candidate has
// a usable replacement.
std::optional<CounterfactualResult> generate_counterfactual(
    const Sentence& x, const std::vector<WordCloud>& clouds, const DecisionLayer& layer,
    std::uint64_t seed, std::optional<Index> predicted_class = std::nullopt,
    const Encoder& encoder = nullptr);

// (nnz_total, val_metric) per path entry, ordered by nnz
std::vector<std::pair<Index, double>> path_sparsity_frontier(const RegularizationPath& path);

}  // namespace glmpath

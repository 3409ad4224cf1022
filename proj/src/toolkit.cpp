#include "glmpath/toolkit.hpp"

#include "glmpath/glm.hpp"
#include "glmpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace glmpath {

namespace {

Index argmax_logits(const Vector& z) {
  Index best = 0;
  for (Index c = 1; c < z.size(); ++c) {
    if (z[c] > z[best]) best = c;
  }
  return best;
}

void check_layer_features(const DecisionLayer& layer, Index d) {
  if (layer.dim() != d) {
    throw precondition_error("decision layer has " + std::to_string(layer.dim()) +
                             " features, input has " + std::to_string(d));
  }
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // average 1-based rank
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

DecisionLayer decision_layer_from(const GlmModel& model) {
  if (model.family == Family::gaussian) {
    throw precondition_error("gaussian models have no decision layer");
  }
  DecisionLayer layer;
  if (model.family == Family::binomial) {
    layer.W = Matrix::Zero(2, model.dim());
    layer.W.row(1) = model.beta.col(0).transpose();
    layer.b = Vector::Zero(2);
    layer.b[1] = model.beta0[0];
  } else {
    layer.W = model.beta.transpose();
    layer.b = model.beta0;
  }
  return layer;
}

Index layer_predict(const DecisionLayer& layer, const Vector& features) {
  check_layer_features(layer, features.size());
  const Vector z = layer.W * features + layer.b;
  return argmax_logits(z);
}

double layer_accuracy(const DecisionLayer& layer, const Matrix& x, const TargetVector& y) {
  check_layer_features(layer, x.cols());
  if (y.kind != TargetVector::Kind::classification || y.size() != x.rows()) {
    throw precondition_error("layer accuracy needs matching classification targets");
  }
  const Index n = x.rows();
  Index hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (Index i = 0; i < n; ++i) {
    const Vector z = layer.W * x.row(i).transpose() + layer.b;
    if (argmax_logits(z) == y.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

std::vector<std::vector<Index>> topk_sets(const DecisionLayer& layer, Index k) {
  if (k < 0) throw precondition_error("k must be >= 0");
  const Index d = layer.dim();
  const Index kk = std::min(k, d);
  std::vector<std::vector<Index>> sets;
  for (Index c = 0; c < layer.classes(); ++c) {
    std::vector<Index> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::sort(idx.begin(), idx.end(), [&layer, c](Index a, Index b) {
      const double wa = std::abs(layer.W(c, a));
      const double wb = std::abs(layer.W(c, b));
      if (wa != wb) return wa > wb;
      return a < b;
    });
    idx.resize(static_cast<std::size_t>(kk));
    std::sort(idx.begin(), idx.end());
    sets.push_back(std::move(idx));
  }
  return sets;
}

AblationReport topk_ablation(const DecisionLayer& layer, const Matrix& x_eval,
                             const TargetVector& y_eval, Index k) {
  check_layer_features(layer, x_eval.cols());
  const std::vector<std::vector<Index>> sets = topk_sets(layer, k);

  DecisionLayer topk = layer;
  DecisionLayer rest = layer;
  topk.W.setZero();
  for (Index c = 0; c < layer.classes(); ++c) {
    for (Index j : sets[static_cast<std::size_t>(c)]) {
      topk.W(c, j) = layer.W(c, j);
      rest.W(c, j) = 0.0;
    }
  }

  AblationReport report;
  report.k = std::min(k, layer.dim());
  report.acc_all = layer_accuracy(layer, x_eval, y_eval);
  report.acc_topk = layer_accuracy(topk, x_eval, y_eval);
  report.acc_rest = layer_accuracy(rest, x_eval, y_eval);
  return report;
}

AttributionScores attribute_misclassification(const DecisionLayer& layer, const Vector& features,
                                              Index truth, Index predicted) {
  check_layer_features(layer, features.size());
  if (truth == predicted || truth < 0 || predicted < 0 || truth >= layer.classes() ||
      predicted >= layer.classes()) {
    throw precondition_error("attribution needs distinct valid truth/predicted classes");
  }
  if (layer_predict(layer, features) != predicted) {
    throw precondition_error("example is not misclassified as claimed (layer does not "
                             "predict class " + std::to_string(predicted) + ")");
  }

  AttributionScores scores;
  scores.truth = truth;
  scores.predicted = predicted;
  scores.gamma =
      ((layer.W.row(predicted) - layer.W.row(truth)).transpose().array() * features.array())
          .matrix();
  scores.top_feature = 0;
  for (Index j = 1; j < scores.gamma.size(); ++j) {
    if (scores.gamma[j] > scores.gamma[scores.top_feature]) scores.top_feature = j;
  }

  Vector zeroed = features;
  zeroed[scores.top_feature] = 0.0;
  scores.flip = layer_predict(layer, zeroed) == truth;
  return scores;
}

std::optional<double> pearson_correlation(const std::vector<double>& a,
                                          const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

std::optional<double> spearman_correlation(const std::vector<double>& a,
                                           const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  return pearson_correlation(average_ranks(a), average_ranks(b));
}

ConfusionOverlapReport confusion_overlap(const DecisionLayer& layer, double threshold_frac,
                                         const Matrix& confusion) {
  if (!(threshold_frac > 0.0) || threshold_frac > 1.0) {
    throw precondition_error("threshold_frac must be in (0, 1]");
  }
  const Index k = layer.classes();
  if (confusion.rows() != k || confusion.cols() != k) {
    throw precondition_error("confusion matrix shape does not match class count");
  }

  std::vector<std::unordered_set<Index>> used(static_cast<std::size_t>(k));
  ConfusionOverlapReport report;
  for (Index c = 0; c < k; ++c) {
    const double wmax = layer.W.row(c).cwiseAbs().maxCoeff();
    if (wmax == 0.0) {
      report.skipped_classes.push_back(c);
      continue;
    }
    for (Index j = 0; j < layer.dim(); ++j) {
      if (std::abs(layer.W(c, j)) > threshold_frac * wmax) {
        used[static_cast<std::size_t>(c)].insert(j);
      }
    }
  }

  std::vector<double> shared, score;
  for (Index a = 0; a < k; ++a) {
    if (used[static_cast<std::size_t>(a)].empty()) continue;
    for (Index b = a + 1; b < k; ++b) {
      if (used[static_cast<std::size_t>(b)].empty()) continue;
      PairOverlap pair;
      pair.a = a;
      pair.b = b;
      for (Index j : used[static_cast<std::size_t>(a)]) {
        if (used[static_cast<std::size_t>(b)].count(j)) ++pair.shared_count;
      }
      pair.confusion_score = std::max(confusion(a, b), confusion(b, a));
      shared.push_back(static_cast<double>(pair.shared_count));
      score.push_back(pair.confusion_score);
      report.pairs.push_back(pair);
    }
  }
  report.spearman = spearman_correlation(shared, score);
  report.pearson = pearson_correlation(shared, score);
  return report;
}

Matrix confusion_matrix(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  if (y.kind != TargetVector::Kind::classification) {
    throw precondition_error("confusion matrix needs classification targets");
  }
  const std::vector<Index> pred = predict_classes(x, model);
  const Index k = y.num_classes;
  Matrix counts = Matrix::Zero(k, k);
  for (Index i = 0; i < x.rows(); ++i) {
    counts(y.label(i), pred[static_cast<std::size_t>(i)]) += 1.0;
  }
  return counts;
}

bool WordCloud::in_positive(const std::string& word) const {
  for (const WordWeight& w : positive) {
    if (w.word == word) return true;
  }
  return false;
}

bool WordCloud::in_negative(const std::string& word) const {
  for (const WordWeight& w : negative) {
    if (w.word == word) return true;
  }
  return false;
}

WordCloud aggregate_wordcloud(Index feature_id, const std::vector<WeightedSentence>& corpus,
                              const std::vector<std::string>& vocab) {
  const std::unordered_set<std::string> known(vocab.begin(), vocab.end());
  // mean weight over every occurrence of the word, duplicates included
  std::unordered_map<std::string, std::pair<double, Index>> sums;
  for (const WeightedSentence& ws : corpus) {
    if (ws.sentence.tokens.empty()) throw precondition_error("sentences must be nonempty");
    if (ws.weights.size() != static_cast<Index>(ws.sentence.tokens.size())) {
      throw precondition_error("sentence needs one weight per token");
    }
    for (std::size_t t = 0; t < ws.sentence.tokens.size(); ++t) {
      const std::string& word = ws.sentence.tokens[t];
      if (!known.count(word)) {
        throw validation_error("word \"" + word + "\" is not in the vocabulary");
      }
      auto& acc = sums[word];
      acc.first += ws.weights[static_cast<Index>(t)];
      acc.second += 1;
    }
  }

  WordCloud cloud;
  cloud.feature_id = feature_id;
  for (const auto& [word, acc] : sums) {
    const double mean = acc.first / static_cast<double>(acc.second);
    if (mean > 0.0) {
      cloud.positive.push_back({word, mean});
    } else if (mean < 0.0) {
      cloud.negative.push_back({word, mean});
    }
  }
  const auto by_magnitude = [](const WordWeight& a, const WordWeight& b) {
    const double ma = std::abs(a.weight);
    const double mb = std::abs(b.weight);
    if (ma != mb) return ma > mb;
    return a.word < b.word;
  };
  std::sort(cloud.positive.begin(), cloud.positive.end(), by_magnitude);
  std::sort(cloud.negative.begin(), cloud.negative.end(), by_magnitude);
  if (static_cast<Index>(cloud.positive.size()) > WordCloud::kCap) {
    cloud.positive.resize(WordCloud::kCap);
  }
  if (static_cast<Index>(cloud.negative.size()) > WordCloud::kCap) {
    cloud.negative.resize(WordCloud::kCap);
  }
  return cloud;
}

std::optional<CounterfactualResult> generate_counterfactual(
    const Sentence& x, const std::vector<WordCloud>& clouds, const DecisionLayer& layer,
    std::uint64_t seed, std::optional<Index> predicted_class, const Encoder& encoder) {
  if (x.tokens.empty()) throw precondition_error("sentence must be nonempty");
  if (static_cast<Index>(clouds.size()) != layer.dim()) {
    throw precondition_error("need one word cloud per decision-layer feature");
  }
  Index y;
  if (predicted_class) {
    y = *predicted_class;
    if (y < 0 || y >= layer.classes()) throw precondition_error("predicted class out of range");
  } else if (encoder) {
    y = layer_predict(layer, encoder(x));
  } else {
    throw precondition_error("need either the predicted class or an encoder");
  }

  // Z+ : token in a positive cloud of a positively weighted feature;
  // Z- : token in a negative cloud of a negatively weighted feature.
  // Candidates whose opposite-sign cloud is empty cannot produce a
  // replacement and are dropped up front.
  struct Candidate {
    Index position;
    Index feature;
    bool from_positive;
  };
  std::vector<Candidate> candidates;
  for (Index j = 0; j < static_cast<Index>(x.tokens.size()); ++j) {
    const std::string& token = x.tokens[static_cast<std::size_t>(j)];
    for (Index i = 0; i < layer.dim(); ++i) {
      const WordCloud& cloud = clouds[static_cast<std::size_t>(i)];
      if (layer.W(y, i) > 0.0 && cloud.in_positive(token)) {
        if (!cloud.negative.empty()) candidates.push_back({j, i, true});
      } else if (layer.W(y, i) < 0.0 && cloud.in_negative(token)) {
        if (!cloud.positive.empty()) candidates.push_back({j, i, false});
      }
    }
  }
  if (candidates.empty()) return std::nullopt;

  Rng rng(seed);
  const Candidate pick = candidates[static_cast<std::size_t>(
      rng.uniform_index(static_cast<Index>(candidates.size())))];
  const WordCloud& cloud = clouds[static_cast<std::size_t>(pick.feature)];
  const std::vector<WordWeight>& pool = pick.from_positive ? cloud.negative : cloud.positive;
  const WordWeight& repl =
      pool[static_cast<std::size_t>(rng.uniform_index(static_cast<Index>(pool.size())))];

  CounterfactualResult result;
  result.output = x;
  result.position = pick.position;
  result.feature_id = pick.feature;
  result.removed = x.tokens[static_cast<std::size_t>(pick.position)];
  result.replacement = repl.word;
  result.output.tokens[static_cast<std::size_t>(pick.position)] = repl.word;
  if (encoder) {
    result.flipped_prediction = layer_predict(layer, encoder(result.output)) != y;
  }
  return result;
}

std::vector<std::pair<Index, double>> path_sparsity_frontier(const RegularizationPath& path) {
  if (path.entries.empty()) throw precondition_error("empty path has no frontier");
  std::vector<std::pair<Index, double>> points;
  points.reserve(path.entries.size());
  for (const PathEntry& e : path.entries) points.emplace_back(e.nnz_total, e.val_metric);
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return points;
}

}  // namespace glmpath

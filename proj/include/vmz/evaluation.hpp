#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmz/discord.hpp"
#include "vmz/equilibrium.hpp"
#include "vmz/network.hpp"
#include "vmz/types.hpp"

namespace vmz {

/// Ground-truth opinion per user row; -1 where absent.
struct GroundTruth {
  std::vector<int> y;
  int num_classes = 0;

  static GroundTruth from_network(const Network& net);

  long long labeled_count() const;
  std::vector<long long> class_counts() const;
};

struct AccuracyBreakdown {
  Scalar overall = 0;
  std::vector<Scalar> per_class;          // NaN where a class has no members
  std::vector<long long> class_counts;
  long long evaluated = 0;
};

/// A row counts as correct when the true label attains the row maximum;
/// exact ties all count.
AccuracyBreakdown argmax_accuracy(const Matrix& vectors, const GroundTruth& truth);

struct PooledDistributions {
  struct Party {
    int party = 0;
    bool empty = false;  // zero supporters; stats absent
    std::vector<Scalar> own;    // coordinate of the own party, per supporter
    std::vector<Scalar> other;  // all other coordinates of the supporters
    Scalar own_mean = 0, own_std = 0;
    Scalar other_mean = 0, other_std = 0;
  };
  std::vector<Party> parties;
  Scalar pooled_own_mean = 0, pooled_own_std = 0;
  Scalar pooled_other_mean = 0, pooled_other_std = 0;
};

PooledDistributions pooled_distributions(const Matrix& x, const GroundTruth& truth);

struct DistanceMatrix {
  Matrix mean;  // K x K; NaN where no valid pair exists
  std::vector<std::vector<long long>> counts;
  Scalar within_mean = 0, cross_mean = 0;
  long long within_count = 0, cross_count = 0;
};

/// Mean Euclidean distance in opinion space between supporters of each party
/// pair, over all pairs of distinct labeled users.
DistanceMatrix separation_distances(const Matrix& x, const GroundTruth& truth);

/// Same statistic restricted to a given pair list.
DistanceMatrix distances_over_pairs(const Matrix& x, const GroundTruth& truth,
                                    const std::vector<Pair>& pairs);

/// Within/cross discord means and party-pair matrix over the store's pairs.
DistanceMatrix discord_over_pairs(const DiscordStore& rho, const GroundTruth& truth);

enum class LossKind { hinge, logistic };
enum class ClassWeighting { none, balanced };

/// One-vs-rest linear classifier; decision is the argmax of affine scores.
struct LinearClassifier {
  Matrix weights;  // C x features
  Vector bias;
  LossKind loss = LossKind::hinge;
  ClassWeighting weighting = ClassWeighting::none;
  long long epochs = 0;
  Scalar grad_norm = 0;

  std::vector<int> predict(const Matrix& features) const;
};

struct TrainResult {
  LinearClassifier model;
  AccuracyBreakdown accuracy;  // in-sample
};

/// Full-batch gradient descent on the chosen convex loss with L2 penalty;
/// balanced weighting scales each sample by total/(C * class count).
TrainResult train_classifier(const Matrix& features, const GroundTruth& truth,
                             LossKind loss, ClassWeighting weighting,
                             std::uint64_t seed);

struct DiscordDiscrimination {
  Scalar accuracy = 0;
  Scalar within_recall = 0;
  Scalar cross_recall = 0;
  Scalar cutoff = 0;  // rho value where the predicted probability is 1/2
  Scalar weight = 0, bias = 0;
  long long within_count = 0, cross_count = 0;
};

/// Balanced one-dimensional logistic regression of [y_i != y_j] on rho_ij.
DiscordDiscrimination discord_discrimination(const DiscordStore& rho,
                                             const GroundTruth& truth,
                                             std::uint64_t seed);

struct BaselineComparison {
  struct Side {
    AccuracyBreakdown argmax;
    Scalar classifier_accuracy = 0;
    Scalar own_mean = 0, other_mean = 0;
    Scalar within_distance = 0, cross_distance = 0;
  };
  Side model;     // u = x
  Side baseline;  // u = z
  Scalar excluded_share = 0;  // labeled users with z = 0
  long long included = 0;
};

/// Side-by-side metrics for the equilibrium opinions and the raw zealot
/// exposures, restricted to users with positive exposure.
BaselineComparison zealot_baseline_compare(const OpinionMatrix& x,
                                           const Matrix& z,
                                           const GroundTruth& truth);

/// Uniform sample of distinct labeled user pairs (all pairs when the
/// population is within ~cap).
std::vector<Pair> sample_labeled_pairs(const GroundTruth& truth, long long cap,
                                       std::uint64_t seed);

struct NetworkComparisonRow {
  std::string name;
  Scalar argmax_accuracy = 0;
  Scalar classifier_accuracy = 0;
  Scalar own_mean = 0;
  Scalar other_mean = 0;
  Scalar within_distance = 0;
  Scalar cross_distance = 0;
  Scalar within_discord = 0;
  Scalar cross_discord = 0;
  Scalar discord_accuracy = 0;
};

struct CompareOptions {
  SolverConfig solver;
  DiscordStore::Mode discord_mode = DiscordStore::Mode::approx;
  long long pair_cap = 1000000;
  std::uint64_t seed = 0;
};

/// Full pipeline (solve, discord on sampled pairs, metrics) per named
/// variant; one row of summary statistics each.
std::vector<NetworkComparisonRow> compare_networks(
    const std::vector<std::pair<std::string, Network>>& variants,
    const CompareOptions& opts = {});

struct MetricsReport {
  std::vector<std::string> opinion_labels;
  AccuracyBreakdown argmax;
  std::optional<AccuracyBreakdown> classifier;
  PooledDistributions pooled;
  DistanceMatrix distances;
  std::optional<DistanceMatrix> discord;
  std::optional<DiscordDiscrimination> discrimination;
  std::optional<BaselineComparison> baseline;
  int histogram_bins = 50;
  std::vector<Histogram> own_histograms;    // per party
  std::vector<Histogram> other_histograms;  // per party
  std::optional<Histogram> discord_within_histogram;
  std::optional<Histogram> discord_cross_histogram;
};

struct ReportOptions {
  int histogram_bins = 50;
  bool with_classifier = true;
  bool with_baseline = false;
  std::uint64_t seed = 0;
};

/// Assemble the full report from solved artifacts. rho may be null when no
/// discord values are available.
MetricsReport build_metrics_report(const Network& net, const OpinionMatrix& x,
                                   const DiscordStore* rho,
                                   const ReportOptions& opts = {});

}  // namespace vmz

#include "vmz/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include "vmz/rng.hpp"

namespace vmz {

namespace {

constexpr Scalar kNaN = std::numeric_limits<Scalar>::quiet_NaN();

std::pair<Scalar, Scalar> mean_std(const std::vector<Scalar>& v) {
  if (v.empty()) return {0, 0};
  const Scalar mean =
      std::accumulate(v.begin(), v.end(), Scalar(0)) / static_cast<Scalar>(v.size());
  Scalar var = 0;
  for (Scalar x : v) var += (x - mean) * (x - mean);
  var /= static_cast<Scalar>(v.size());
  return {mean, std::sqrt(std::max(var, Scalar(0)))};
}

void check_cover(const Matrix& vectors, const GroundTruth& truth) {
  if (vectors.rows() != static_cast<long>(truth.y.size()))
    throw DomainError("vectors and ground truth cover different node sets");
}

}  // namespace

GroundTruth GroundTruth::from_network(const Network& net) {
  GroundTruth truth;
  truth.num_classes = net.space.size();
  for (const NodeRecord& node : net.nodes)
    if (!node.is_zealot) truth.y.push_back(node.ground_truth);
  return truth;
}

long long GroundTruth::labeled_count() const {
  return std::count_if(y.begin(), y.end(), [](int v) { return v >= 0; });
}

std::vector<long long> GroundTruth::class_counts() const {
  std::vector<long long> counts(num_classes, 0);
  for (int v : y)
    if (v >= 0 && v < num_classes) ++counts[v];
  return counts;
}

AccuracyBreakdown argmax_accuracy(const Matrix& vectors, const GroundTruth& truth) {
  check_cover(vectors, truth);
  AccuracyBreakdown acc;
  acc.class_counts = truth.class_counts();
  std::vector<long long> correct(truth.num_classes, 0);
  for (long i = 0; i < vectors.rows(); ++i) {
    const int y = truth.y[static_cast<std::size_t>(i)];
    if (y < 0) continue;
    ++acc.evaluated;
    const Scalar top = vectors.row(i).maxCoeff();
    if (vectors(i, y) == top) ++correct[y];
  }
  if (acc.evaluated == 0) throw DomainError("no labeled nodes to evaluate");
  long long total_correct = 0;
  acc.per_class.resize(truth.num_classes);
  for (int c = 0; c < truth.num_classes; ++c) {
    total_correct += correct[c];
    acc.per_class[c] = acc.class_counts[c] > 0
                           ? static_cast<Scalar>(correct[c]) / acc.class_counts[c]
                           : kNaN;
  }
  acc.overall = static_cast<Scalar>(total_correct) / acc.evaluated;
  return acc;
}

PooledDistributions pooled_distributions(const Matrix& x, const GroundTruth& truth) {
  check_cover(x, truth);
  PooledDistributions pooled;
  pooled.parties.resize(truth.num_classes);
  std::vector<Scalar> all_own, all_other;
  for (int s = 0; s < truth.num_classes; ++s) pooled.parties[s].party = s;
  for (long i = 0; i < x.rows(); ++i) {
    const int y = truth.y[static_cast<std::size_t>(i)];
    if (y < 0) continue;
    auto& party = pooled.parties[y];
    party.own.push_back(x(i, y));
    all_own.push_back(x(i, y));
    for (int t = 0; t < truth.num_classes; ++t) {
      if (t == y) continue;
      party.other.push_back(x(i, t));
      all_other.push_back(x(i, t));
    }
  }
  for (auto& party : pooled.parties) {
    party.empty = party.own.empty();
    std::tie(party.own_mean, party.own_std) = mean_std(party.own);
    std::tie(party.other_mean, party.other_std) = mean_std(party.other);
  }
  std::tie(pooled.pooled_own_mean, pooled.pooled_own_std) = mean_std(all_own);
  std::tie(pooled.pooled_other_mean, pooled.pooled_other_std) = mean_std(all_other);
  return pooled;
}

namespace {

struct PairAccumulator {
  int k;
  Matrix sum;
  std::vector<std::vector<long long>> count;
  Scalar within_sum = 0, cross_sum = 0;
  long long within_n = 0, cross_n = 0;

  explicit PairAccumulator(int classes)
      : k(classes), sum(Matrix::Zero(classes, classes)),
        count(classes, std::vector<long long>(classes, 0)) {}

  void add(int a, int b, Scalar value) {
    sum(a, b) += value;
    ++count[a][b];
    if (a != b) {
      sum(b, a) += value;
      ++count[b][a];
      cross_sum += value;
      ++cross_n;
    } else {
      within_sum += value;
      ++within_n;
    }
  }

  DistanceMatrix finish() const {
    DistanceMatrix dm;
    dm.mean = Matrix::Constant(k, k, kNaN);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (count[a][b] > 0) dm.mean(a, b) = sum(a, b) / count[a][b];
    dm.counts = count;
    dm.within_count = within_n;
    dm.cross_count = cross_n;
    dm.within_mean = within_n > 0 ? within_sum / within_n : kNaN;
    dm.cross_mean = cross_n > 0 ? cross_sum / cross_n : kNaN;
    return dm;
  }
};

}  // namespace

DistanceMatrix separation_distances(const Matrix& x, const GroundTruth& truth) {
  check_cover(x, truth);
  PairAccumulator acc(truth.num_classes);
  std::vector<long> labeled;
  for (long i = 0; i < x.rows(); ++i)
    if (truth.y[static_cast<std::size_t>(i)] >= 0) labeled.push_back(i);
  for (std::size_t a = 0; a < labeled.size(); ++a)
    for (std::size_t b = a + 1; b < labeled.size(); ++b) {
      const long i = labeled[a], j = labeled[b];
      acc.add(truth.y[static_cast<std::size_t>(i)],
              truth.y[static_cast<std::size_t>(j)],
              (x.row(i) - x.row(j)).norm());
    }
  return acc.finish();
}

DistanceMatrix distances_over_pairs(const Matrix& x, const GroundTruth& truth,
                                    const std::vector<Pair>& pairs) {
  check_cover(x, truth);
  PairAccumulator acc(truth.num_classes);
  for (const Pair& p : pairs) {
    const int yi = truth.y[static_cast<std::size_t>(p.first)];
    const int yj = truth.y[static_cast<std::size_t>(p.second)];
    if (yi < 0 || yj < 0) continue;
    acc.add(yi, yj, (x.row(p.first) - x.row(p.second)).norm());
  }
  return acc.finish();
}

DistanceMatrix discord_over_pairs(const DiscordStore& rho, const GroundTruth& truth) {
  if (rho.ids.size() != truth.y.size())
    throw DomainError("discord store and ground truth cover different node sets");
  PairAccumulator acc(truth.num_classes);
  for (std::size_t p = 0; p < rho.pairs.size(); ++p) {
    const int yi = truth.y[static_cast<std::size_t>(rho.pairs[p].first)];
    const int yj = truth.y[static_cast<std::size_t>(rho.pairs[p].second)];
    if (yi < 0 || yj < 0) continue;
    acc.add(yi, yj, rho.values[static_cast<long>(p)]);
  }
  return acc.finish();
}

std::vector<int> LinearClassifier::predict(const Matrix& features) const {
  std::vector<int> out(features.rows());
  const Matrix scores =
      (features * weights.transpose()).rowwise() + bias.transpose();
  for (long i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (long c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = static_cast<int>(c);
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

namespace {

// Full-batch descent on mean_i omega_i * loss(t_i f_i) + reg/(2n) |w|^2.
struct BinaryFit {
  Vector w;
  Scalar b = 0;
  long long epochs = 0;
  Scalar grad_norm = 0;
};

BinaryFit fit_binary(const Matrix& features, const std::vector<Scalar>& targets,
                     const std::vector<Scalar>& sample_weight, LossKind loss) {
  const long n = features.rows();
  const long f = features.cols();
  const Scalar reg = 1.0;
  BinaryFit fit;
  fit.w = Vector::Zero(f);
  Vector grad_w(f);
  for (long long epoch = 0; epoch < 10000; ++epoch) {
    grad_w = reg / static_cast<Scalar>(n) * fit.w;
    Scalar grad_b = 0;
    for (long i = 0; i < n; ++i) {
      const Scalar t = targets[static_cast<std::size_t>(i)];
      const Scalar margin = t * (features.row(i).dot(fit.w) + fit.b);
      Scalar dloss;  // derivative of loss wrt the score f
      if (loss == LossKind::logistic) {
        dloss = -t / (1 + std::exp(margin));
      } else {
        dloss = margin < 1 ? -t : 0;
      }
      const Scalar scale =
          sample_weight[static_cast<std::size_t>(i)] * dloss / static_cast<Scalar>(n);
      grad_w += scale * features.row(i).transpose();
      grad_b += scale;
    }
    fit.grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    fit.epochs = epoch + 1;
    if (fit.grad_norm < 1e-6) break;
    const Scalar lr = Scalar(1) / (1 + static_cast<Scalar>(epoch) / 1000);
    fit.w -= lr * grad_w;
    fit.b -= lr * grad_b;
  }
  return fit;
}

AccuracyBreakdown prediction_accuracy(const std::vector<int>& pred,
                                      const GroundTruth& truth) {
  AccuracyBreakdown acc;
  acc.class_counts = truth.class_counts();
  std::vector<long long> correct(truth.num_classes, 0);
  for (std::size_t i = 0; i < truth.y.size(); ++i) {
    if (truth.y[i] < 0) continue;
    ++acc.evaluated;
    if (pred[i] == truth.y[i]) ++correct[truth.y[i]];
  }
  long long total = 0;
  acc.per_class.resize(truth.num_classes);
  for (int c = 0; c < truth.num_classes; ++c) {
    total += correct[c];
    acc.per_class[c] = acc.class_counts[c] > 0
                           ? static_cast<Scalar>(correct[c]) / acc.class_counts[c]
                           : kNaN;
  }
  acc.overall = acc.evaluated > 0 ? static_cast<Scalar>(total) / acc.evaluated : 0;
  return acc;
}

}  // namespace

TrainResult train_classifier(const Matrix& features, const GroundTruth& truth,
                             LossKind loss, ClassWeighting weighting,
                             std::uint64_t /*seed*/) {
  check_cover(features, truth);
  const auto counts = truth.class_counts();
  const int present =
      static_cast<int>(std::count_if(counts.begin(), counts.end(),
                                     [](long long c) { return c > 0; }));
  if (present < 2) throw DomainError("training needs at least two classes present");

  std::vector<long> rows;
  for (std::size_t i = 0; i < truth.y.size(); ++i)
    if (truth.y[i] >= 0) rows.push_back(static_cast<long>(i));
  const long n = static_cast<long>(rows.size());
  Matrix sub(n, features.cols());
  for (long i = 0; i < n; ++i) sub.row(i) = features.row(rows[i]);

  std::vector<Scalar> weight(rows.size(), 1);
  if (weighting == ClassWeighting::balanced)
    for (long i = 0; i < n; ++i) {
      const int y = truth.y[static_cast<std::size_t>(rows[i])];
      weight[static_cast<std::size_t>(i)] =
          static_cast<Scalar>(n) / (static_cast<Scalar>(present) * counts[y]);
    }

  TrainResult result;
  result.model.loss = loss;
  result.model.weighting = weighting;
  result.model.weights = Matrix::Zero(truth.num_classes, features.cols());
  result.model.bias = Vector::Zero(truth.num_classes);
  for (int c = 0; c < truth.num_classes; ++c) {
    std::vector<Scalar> targets(rows.size());
    for (long i = 0; i < n; ++i)
      targets[static_cast<std::size_t>(i)] =
          truth.y[static_cast<std::size_t>(rows[i])] == c ? 1 : -1;
    const BinaryFit fit = fit_binary(sub, targets, weight, loss);
    result.model.weights.row(c) = fit.w.transpose();
    result.model.bias[c] = fit.b;
    result.model.epochs = std::max(result.model.epochs, fit.epochs);
    result.model.grad_norm = std::max(result.model.grad_norm, fit.grad_norm);
  }
  result.accuracy = prediction_accuracy(result.model.predict(features), truth);
  return result;
}

DiscordDiscrimination discord_discrimination(const DiscordStore& rho,
                                             const GroundTruth& truth,
                                             std::uint64_t /*seed*/) {
  if (rho.ids.size() != truth.y.size())
    throw DomainError("discord store and ground truth cover different node sets");
  std::vector<Scalar> value;
  std::vector<Scalar> target;  // +1 cross-party, -1 within-party
  long long within = 0, cross = 0;
  for (std::size_t p = 0; p < rho.pairs.size(); ++p) {
    const int yi = truth.y[static_cast<std::size_t>(rho.pairs[p].first)];
    const int yj = truth.y[static_cast<std::size_t>(rho.pairs[p].second)];
    if (yi < 0 || yj < 0) continue;
    value.push_back(rho.values[static_cast<long>(p)]);
    if (yi == yj) {
      target.push_back(-1);
      ++within;
    } else {
      target.push_back(1);
      ++cross;
    }
  }
  if (within == 0 || cross == 0)
    throw DomainError("discrimination needs both within- and cross-party pairs");

  const long m = static_cast<long>(value.size());
  Matrix features(m, 1);
  for (long i = 0; i < m; ++i) features(i, 0) = value[static_cast<std::size_t>(i)];
  std::vector<Scalar> weight(value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    weight[i] = target[i] > 0 ? static_cast<Scalar>(m) / (2 * cross)
                              : static_cast<Scalar>(m) / (2 * within);
  const BinaryFit fit = fit_binary(features, target, weight, LossKind::logistic);

  DiscordDiscrimination out;
  out.weight = fit.w[0];
  out.bias = fit.b;
  out.cutoff = fit.w[0] != 0 ? -fit.b / fit.w[0] : kNaN;
  out.within_count = within;
  out.cross_count = cross;
  const bool majority_cross = cross > within;
  long long hit_within = 0, hit_cross = 0;
  for (long i = 0; i < m; ++i) {
    const Scalar f = fit.w[0] * features(i, 0) + fit.b;
    const bool predicted_cross = f > 0 || (f == 0 && majority_cross);
    if (target[static_cast<std::size_t>(i)] > 0)
      hit_cross += predicted_cross ? 1 : 0;
    else
      hit_within += predicted_cross ? 0 : 1;
  }
  out.within_recall = static_cast<Scalar>(hit_within) / within;
  out.cross_recall = static_cast<Scalar>(hit_cross) / cross;
  out.accuracy = static_cast<Scalar>(hit_within + hit_cross) / m;
  return out;
}

namespace {

BaselineComparison::Side side_metrics(const Matrix& u, const GroundTruth& truth) {
  BaselineComparison::Side side;
  side.argmax = argmax_accuracy(u, truth);
  side.classifier_accuracy =
      train_classifier(u, truth, LossKind::hinge, ClassWeighting::none, 0)
          .accuracy.overall;
  const auto pooled = pooled_distributions(u, truth);
  side.own_mean = pooled.pooled_own_mean;
  side.other_mean = pooled.pooled_other_mean;
  const auto distances = separation_distances(u, truth);
  side.within_distance = distances.within_mean;
  side.cross_distance = distances.cross_mean;
  return side;
}

}  // namespace

BaselineComparison zealot_baseline_compare(const OpinionMatrix& x, const Matrix& z,
                                           const GroundTruth& truth) {
  check_cover(x.values, truth);
  if (z.rows() != x.values.rows() || z.cols() != x.values.cols())
    throw DomainError("zealot exposure matrix has wrong shape");

  std::vector<long> included;
  long long labeled = 0;
  for (long i = 0; i < z.rows(); ++i) {
    if (truth.y[static_cast<std::size_t>(i)] < 0) continue;
    ++labeled;
    if (z.row(i).sum() > 0) included.push_back(i);
  }
  if (included.empty())
    throw DomainError("no labeled user has positive zealot exposure");

  GroundTruth sub_truth;
  sub_truth.num_classes = truth.num_classes;
  Matrix sub_x(static_cast<long>(included.size()), x.values.cols());
  Matrix sub_z(static_cast<long>(included.size()), z.cols());
  for (std::size_t r = 0; r < included.size(); ++r) {
    sub_truth.y.push_back(truth.y[static_cast<std::size_t>(included[r])]);
    sub_x.row(static_cast<long>(r)) = x.values.row(included[r]);
    sub_z.row(static_cast<long>(r)) = z.row(included[r]);
  }

  BaselineComparison cmp;
  cmp.model = side_metrics(sub_x, sub_truth);
  cmp.baseline = side_metrics(sub_z, sub_truth);
  cmp.included = static_cast<long long>(included.size());
  cmp.excluded_share =
      labeled > 0 ? static_cast<Scalar>(labeled - cmp.included) / labeled : 0;
  return cmp;
}

std::vector<Pair> sample_labeled_pairs(const GroundTruth& truth, long long cap,
                                       std::uint64_t seed) {
  if (cap < 1) throw DomainError("pair cap must be positive");
  std::vector<int> labeled;
  for (std::size_t i = 0; i < truth.y.size(); ++i)
    if (truth.y[i] >= 0) labeled.push_back(static_cast<int>(i));
  const long long m = static_cast<long long>(labeled.size());
  const long long total = m * (m - 1) / 2;
  std::vector<Pair> pairs;
  if (total <= cap + cap / 4) {
    pairs.reserve(static_cast<std::size_t>(total));
    for (std::size_t a = 0; a < labeled.size(); ++a)
      for (std::size_t b = a + 1; b < labeled.size(); ++b)
        pairs.emplace_back(labeled[a], labeled[b]);
    return pairs;
  }
  std::mt19937_64 rng(mix64(seed));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(cap) * 2);
  pairs.reserve(static_cast<std::size_t>(cap));
  while (static_cast<long long>(pairs.size()) < cap) {
    const int a = labeled[uniform_below(rng, static_cast<std::uint64_t>(m))];
    const int b = labeled[uniform_below(rng, static_cast<std::uint64_t>(m))];
    if (a == b) continue;
    if (seen.insert(pair_key(a, b)).second)
      pairs.push_back(canonical_pair(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<NetworkComparisonRow> compare_networks(
    const std::vector<std::pair<std::string, Network>>& variants,
    const CompareOptions& opts) {
  std::vector<NetworkComparisonRow> rows;
  for (const auto& [name, net] : variants) {
    try {
      const OpinionMatrix x = solve_equilibrium(net, opts.solver);
      const GroundTruth truth = GroundTruth::from_network(net);
      NetworkComparisonRow row;
      row.name = name;
      row.argmax_accuracy = argmax_accuracy(x.values, truth).overall;
      row.classifier_accuracy =
          train_classifier(x.values, truth, LossKind::hinge, ClassWeighting::none,
                           opts.seed)
              .accuracy.overall;
      const auto pooled = pooled_distributions(x.values, truth);
      row.own_mean = pooled.pooled_own_mean;
      row.other_mean = pooled.pooled_other_mean;
      const auto pairs = sample_labeled_pairs(truth, opts.pair_cap, opts.seed);
      const auto distances = distances_over_pairs(x.values, truth, pairs);
      row.within_distance = distances.within_mean;
      row.cross_distance = distances.cross_mean;
      const DiscordStore rho =
          opts.discord_mode == DiscordStore::Mode::exact
              ? discord_exact(net, x, PairSet::listed(pairs), opts.solver)
              : discord_approx(x, PairSet::listed(pairs));
      const auto discord_stats = discord_over_pairs(rho, truth);
      row.within_discord = discord_stats.within_mean;
      row.cross_discord = discord_stats.cross_mean;
      row.discord_accuracy = discord_discrimination(rho, truth, opts.seed).accuracy;
      rows.push_back(std::move(row));
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("variant '" + name + "': " + e.what());
    } catch (const SizeError& e) {
      throw SizeError("variant '" + name + "': " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("variant '" + name + "': " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("variant '" + name + "': " + e.what());
    }
  }
  return rows;
}

MetricsReport build_metrics_report(const Network& net, const OpinionMatrix& x,
                                   const DiscordStore* rho,
                                   const ReportOptions& opts) {
  const GroundTruth truth = GroundTruth::from_network(net);
  MetricsReport report;
  for (int s = 0; s < net.space.size(); ++s)
    report.opinion_labels.push_back(net.space.label(s));
  report.histogram_bins = opts.histogram_bins;
  report.argmax = argmax_accuracy(x.values, truth);

  const auto counts = truth.class_counts();
  const int present =
      static_cast<int>(std::count_if(counts.begin(), counts.end(),
                                     [](long long c) { return c > 0; }));
  if (opts.with_classifier && present >= 2)
    report.classifier =
        train_classifier(x.values, truth, LossKind::hinge, ClassWeighting::none,
                         opts.seed)
            .accuracy;

  report.pooled = pooled_distributions(x.values, truth);
  report.distances = separation_distances(x.values, truth);

  for (const auto& party : report.pooled.parties) {
    report.own_histograms.push_back(
        make_histogram(party.own, opts.histogram_bins, 0, 1));
    report.other_histograms.push_back(
        make_histogram(party.other, opts.histogram_bins, 0, 1));
  }

  if (rho != nullptr) {
    report.discord = discord_over_pairs(*rho, truth);
    std::vector<Scalar> within_values, cross_values;
    for (std::size_t p = 0; p < rho->pairs.size(); ++p) {
      const int yi = truth.y[static_cast<std::size_t>(rho->pairs[p].first)];
      const int yj = truth.y[static_cast<std::size_t>(rho->pairs[p].second)];
      if (yi < 0 || yj < 0) continue;
      (yi == yj ? within_values : cross_values)
          .push_back(rho->values[static_cast<long>(p)]);
    }
    report.discord_within_histogram =
        make_histogram(within_values, opts.histogram_bins, 0, 1);
    report.discord_cross_histogram =
        make_histogram(cross_values, opts.histogram_bins, 0, 1);
    if (!within_values.empty() && !cross_values.empty())
      report.discrimination = discord_discrimination(*rho, truth, opts.seed);
  }

  if (opts.with_baseline)
    report.baseline = zealot_baseline_compare(x, zealot_exposure(net), truth);
  return report;
}

}  // namespace vmz

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vmz {

using Scalar = double;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

/// Unordered pair of user rows, kept with first < second.
using Pair = std::pair<int, int>;

inline Pair canonical_pair(int i, int j) { return i < j ? Pair{i, j} : Pair{j, i}; }

inline std::uint64_t pair_key(int i, int j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

// Error taxonomy. The CLI maps these onto its exit codes:
// input/domain problems -> 2, convergence failures -> 3, size bounds -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// Selects which unordered user pairs an operation works on.
struct PairSet {
  enum class Kind { all, listed };
  Kind kind = Kind::all;
  std::vector<Pair> pairs;  // only meaningful for Kind::listed

  static PairSet all() { return PairSet{}; }
  static PairSet listed(std::vector<Pair> p) {
    return PairSet{Kind::listed, std::move(p)};
  }
  static PairSet none() { return listed({}); }
};

/// Binned counts; edges has size counts.size() + 1. Values equal to the upper
/// edge land in the last bin.
struct Histogram {
  std::vector<Scalar> edges;
  std::vector<long long> counts;
};

inline Histogram make_histogram(const std::vector<Scalar>& values, int bins,
                                Scalar lo, Scalar hi) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (!(hi > lo)) hi = lo + Scalar(1e-12);
  Histogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b)
    h.edges[b] = lo + (hi - lo) * static_cast<Scalar>(b) / bins;
  h.counts.assign(bins, 0);
  for (Scalar v : values) {
    if (v < lo || v > hi) continue;
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

}  // namespace vmz

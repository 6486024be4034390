#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vmz/types.hpp"

namespace vmz {

/// Ordered set of opinion labels. The position of a label is its opinion
/// index everywhere else in the library.
class OpinionSpace {
 public:
  OpinionSpace() = default;

  explicit OpinionSpace(std::vector<std::string> labels)
      : labels_(std::move(labels)) {
    if (labels_.size() < 2)
      throw DomainError("opinion space needs at least two labels");
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
      if (labels_[i].empty()) throw DomainError("empty opinion label");
      auto [it, inserted] = index_.emplace(labels_[i], i);
      if (!inserted)
        throw DomainError("duplicate opinion label: " + labels_[i]);
    }
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int s) const { return labels_.at(s); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of a label, or -1 when absent.
  int index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    return it == index_.end() ? -1 : it->second;
  }

  friend bool operator==(const OpinionSpace& a, const OpinionSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace vmz

#include "vmz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vmz {

using ordered_json = nlohmann::ordered_json;

std::string format_scalar(Scalar v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  if (std::strtod(buf, nullptr) != v)
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

Scalar parse_weight(const std::string& text, const std::string& file, long long line) {
  std::size_t used = 0;
  Scalar value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(file + ":" + std::to_string(line) + ": bad weight '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value))
    throw ParseError(file + ":" + std::to_string(line) + ": bad weight '" + text + "'");
  if (value < 0)
    throw ParseError(file + ":" + std::to_string(line) + ": negative weight '" +
                     text + "'");
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#' ||
         (line.size() == 1 && line[0] == '\r');
}

struct LabelRow {
  std::string label;
  bool zealot = false;
  bool conflicting = false;
};

}  // namespace

Network load_network(const std::string& edges_path, const std::string& labels_path,
                     const OpinionSpace& space, LoadStats* stats) {
  LoadStats local;
  LoadStats& st = stats != nullptr ? *stats : local;
  st = LoadStats{};

  std::map<std::string, LabelRow> rows;
  {
    std::ifstream in = open_input(labels_path);
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (skippable(line)) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 3)
        throw ParseError(labels_path + ":" + std::to_string(line_no) +
                         ": expected id<TAB>label<TAB>flag");
      const std::string& id = fields[0];
      const std::string& label = fields[1];
      const std::string& flag = fields[2];
      if (id.empty())
        throw ParseError(labels_path + ":" + std::to_string(line_no) + ": empty id");
      if (flag != "0" && flag != "1")
        throw ParseError(labels_path + ":" + std::to_string(line_no) +
                         ": zealot flag must be 0 or 1, got '" + flag + "'");
      if (!label.empty() && space.index_of(label) < 0)
        throw ParseError(labels_path + ":" + std::to_string(line_no) +
                         ": unknown label '" + label + "'");
      ++st.label_rows;
      const bool zealot = flag == "1";
      auto [it, inserted] = rows.emplace(id, LabelRow{label, zealot, false});
      if (!inserted && (it->second.label != label || it->second.zealot != zealot))
        it->second.conflicting = true;
    }
  }

  Network net;
  net.space = space;
  std::unordered_map<std::string, int> index;
  for (const auto& [id, row] : rows) {
    if (row.conflicting) {
      ++st.excluded_multi_label;
      continue;
    }
    if (row.label.empty()) {
      ++st.excluded_unlabeled;
      continue;
    }
    index.emplace(id, net.num_nodes());
    net.nodes.push_back({id, row.zealot, space.index_of(row.label)});
  }
  net.in_edges.resize(net.nodes.size());

  // Duplicate edges sum; edges into zealots go to the weak-link side
  // structure; edges touching an excluded endpoint are dropped.
  std::map<std::pair<int, int>, Scalar> accumulated;  // (target, source)
  {
    std::ifstream in = open_input(edges_path);
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (skippable(line)) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 2 && fields.size() != 3)
        throw ParseError(edges_path + ":" + std::to_string(line_no) +
                         ": expected source<TAB>target[<TAB>weight]");
      const std::string& source = fields[0];
      const std::string& target = fields[1];
      if (source.empty() || target.empty())
        throw ParseError(edges_path + ":" + std::to_string(line_no) + ": empty id");
      const Scalar weight =
          fields.size() == 3 ? parse_weight(fields[2], edges_path, line_no) : 1;
      if (rows.find(source) == rows.end())
        throw ParseError(edges_path + ":" + std::to_string(line_no) + ": id '" +
                         source + "' missing from labels file");
      if (rows.find(target) == rows.end())
        throw ParseError(edges_path + ":" + std::to_string(line_no) + ": id '" +
                         target + "' missing from labels file");
      ++st.edge_rows;
      const auto src_it = index.find(source);
      const auto tgt_it = index.find(target);
      if (src_it == index.end() || tgt_it == index.end()) {
        ++st.dropped_edges;
        continue;
      }
      accumulated[{tgt_it->second, src_it->second}] += weight;
    }
  }
  for (const auto& [key, weight] : accumulated) {
    const auto [target, source] = key;
    if (weight <= 0) {
      ++st.zero_weight_edges;
      continue;
    }
    if (net.nodes[target].is_zealot) {
      ++st.into_zealot_edges;
      net.weak_links.push_back({source, target, weight});
    } else {
      net.in_edges[target].push_back({source, weight});
    }
  }
  return net;
}

OpinionSpace space_from_labels_file(const std::string& labels_path) {
  std::ifstream in = open_input(labels_path);
  std::set<std::string> labels;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw ParseError(labels_path + ":" + std::to_string(line_no) +
                       ": expected id<TAB>label<TAB>flag");
    if (!fields[1].empty()) labels.insert(fields[1]);
  }
  return OpinionSpace(std::vector<std::string>(labels.begin(), labels.end()));
}

void write_network_json(const Network& net, const std::string& path) {
  ordered_json j;
  j["format"] = "vmz-network";
  j["version"] = 1;
  j["opinion_space"] = net.space.labels();
  j["normalized"] = net.normalized;
  ordered_json nodes = ordered_json::array();
  for (const NodeRecord& node : net.nodes) {
    ordered_json n;
    n["id"] = node.id;
    n["zealot"] = node.is_zealot;
    if (node.ground_truth >= 0)
      n["label"] = net.space.label(node.ground_truth);
    else
      n["label"] = nullptr;
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const auto& list : net.in_edges) {
    ordered_json row = ordered_json::array();
    for (const InEdge& e : list)
      row.push_back(ordered_json::array({e.source, e.weight}));
    edges.push_back(std::move(row));
  }
  j["in_edges"] = std::move(edges);
  ordered_json weak = ordered_json::array();
  for (const WeakLink& l : net.weak_links)
    weak.push_back(ordered_json::array({l.source, l.target, l.weight}));
  j["weak_links"] = std::move(weak);

  std::ofstream out = open_output(path);
  out << j.dump(1) << "\n";
}

Network read_network_json(const std::string& path) {
  std::ifstream in = open_input(path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "vmz-network")
      throw ParseError(path + ": not a network file");
    if (j.at("version").get<int>() != 1)
      throw ParseError(path + ": unsupported version");
    Network net;
    net.space = OpinionSpace(j.at("opinion_space").get<std::vector<std::string>>());
    net.normalized = j.at("normalized").get<bool>();
    for (const auto& n : j.at("nodes")) {
      NodeRecord node;
      node.id = n.at("id").get<std::string>();
      node.is_zealot = n.at("zealot").get<bool>();
      if (!n.at("label").is_null()) {
        node.ground_truth = net.space.index_of(n.at("label").get<std::string>());
        if (node.ground_truth < 0)
          throw ParseError(path + ": node label outside the opinion space");
      }
      if (node.is_zealot && node.ground_truth < 0)
        throw ParseError(path + ": zealot '" + node.id + "' without a label");
      net.nodes.push_back(std::move(node));
    }
    for (const auto& row : j.at("in_edges")) {
      net.in_edges.emplace_back();
      for (const auto& e : row) {
        const int source = e.at(0).get<int>();
        if (source < 0 || source >= net.num_nodes())
          throw ParseError(path + ": edge source out of range");
        net.in_edges.back().push_back({source, e.at(1).get<Scalar>()});
      }
    }
    if (net.in_edges.size() != net.nodes.size())
      throw ParseError(path + ": in_edges does not match nodes");
    for (int i = 0; i < net.num_nodes(); ++i)
      if (net.nodes[i].is_zealot && !net.in_edges[i].empty())
        throw ParseError(path + ": zealot with stored in-edges");
    for (const auto& l : j.at("weak_links")) {
      const int source = l.at(0).get<int>();
      const int target = l.at(1).get<int>();
      if (source < 0 || source >= net.num_nodes() || target < 0 ||
          target >= net.num_nodes())
        throw ParseError(path + ": weak link out of range");
      net.weak_links.push_back({source, target, l.at(2).get<Scalar>()});
    }
    return net;
  } catch (const ordered_json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_opinion_csv(const OpinionMatrix& x, const OpinionSpace& space,
                       const std::string& path) {
  std::ofstream out = open_output(path);
  out << "id";
  const long k = x.values.cols();
  for (long s = 0; s < k; ++s) out << "," << space.label(static_cast<int>(s));
  out << "\n";
  for (std::size_t i = 0; i < x.ids.size(); ++i) {
    out << x.ids[i];
    for (long s = 0; s < k; ++s)
      out << "," << format_scalar(x.values(static_cast<long>(i), s));
    out << "\n";
  }
}

void write_opinion_meta(const OpinionMatrix& x, const OpinionSpace& space,
                        const std::string& path) {
  ordered_json j;
  j["users"] = x.ids.size();
  j["opinions"] = space.labels();
  j["iterations"] = x.iterations;
  j["residual"] = x.residual;
  j["tolerance"] = x.tolerance;
  std::ofstream out = open_output(path);
  out << j.dump(1) << "\n";
}

OpinionMatrix read_opinion_csv(const Network& net, const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto ids = user_ids(net);
  const int k = net.space.size();
  std::unordered_map<std::string, long> row_of;
  for (std::size_t i = 0; i < ids.size(); ++i)
    row_of.emplace(ids[i], static_cast<long>(i));

  OpinionMatrix x;
  x.ids = ids;
  x.values.resize(static_cast<long>(ids.size()), k);
  std::vector<char> seen(ids.size(), 0);
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
      fields.back().pop_back();
    if (static_cast<int>(fields.size()) != k + 1)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected id plus " + std::to_string(k) + " values");
    const auto it = row_of.find(fields[0]);
    if (it == row_of.end())
      throw ParseError(path + ":" + std::to_string(line_no) + ": id '" + fields[0] +
                       "' is not a user of the network");
    if (seen[static_cast<std::size_t>(it->second)])
      throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate id '" +
                       fields[0] + "'");
    seen[static_cast<std::size_t>(it->second)] = 1;
    for (int s = 0; s < k; ++s)
      x.values(it->second, s) = parse_weight(fields[static_cast<std::size_t>(s) + 1],
                                             path, line_no);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw ParseError(path + ": no row for user '" + ids[i] + "'");
  return x;
}

void write_discord_csv(const DiscordStore& rho, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "id_i,id_j,rho\n";
  for (std::size_t p = 0; p < rho.pairs.size(); ++p)
    out << rho.ids[static_cast<std::size_t>(rho.pairs[p].first)] << ","
        << rho.ids[static_cast<std::size_t>(rho.pairs[p].second)] << ","
        << format_scalar(rho.values[static_cast<long>(p)]) << "\n";
}

void write_discord_meta(const DiscordStore& rho, const std::string& path) {
  ordered_json j;
  j["mode"] = rho.mode == DiscordStore::Mode::exact ? "exact" : "approx";
  j["pairs"] = rho.pairs.size();
  j["iterations"] = rho.iterations;
  j["residual"] = rho.residual;
  j["tolerance"] = rho.tolerance;
  std::ofstream out = open_output(path);
  out << j.dump(1) << "\n";
}

DiscordStore read_discord_csv(const Network& net, const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  DiscordStore store;
  store.ids = user_ids(net);
  std::unordered_map<std::string, int> row_of;
  for (std::size_t i = 0; i < store.ids.size(); ++i)
    row_of.emplace(store.ids[i], static_cast<int>(i));

  std::vector<Scalar> values;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::stringstream ss(line);
    std::string a, b, v;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, v))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected id_i,id_j,rho");
    if (!v.empty() && v.back() == '\r') v.pop_back();
    const auto ia = row_of.find(a);
    const auto ib = row_of.find(b);
    if (ia == row_of.end() || ib == row_of.end())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": pair endpoint is not a user of the network");
    if (ia->second == ib->second)
      throw ParseError(path + ":" + std::to_string(line_no) + ": self pair");
    const Pair pair = canonical_pair(ia->second, ib->second);
    if (store.index.count(pair_key(pair.first, pair.second)) > 0)
      throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate pair");
    store.index.emplace(pair_key(pair.first, pair.second),
                        static_cast<int>(store.pairs.size()));
    store.pairs.push_back(pair);
    values.push_back(parse_weight(v, path, line_no));
  }
  store.values.resize(static_cast<long>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    store.values[static_cast<long>(i)] = values[i];
  return store;
}

std::vector<Pair> read_pairs_file(const Network& net, const std::string& path) {
  std::ifstream in = open_input(path);
  const auto rows = node_user_rows(net);
  const auto index = id_index(net);
  std::vector<Pair> pairs;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected id_i<TAB>id_j");
    int user[2];
    for (int t = 0; t < 2; ++t) {
      const auto it = index.find(fields[t]);
      if (it == index.end())
        throw DomainError(path + ":" + std::to_string(line_no) + ": unknown id '" +
                          fields[t] + "'");
      if (rows[it->second] < 0)
        throw DomainError(path + ":" + std::to_string(line_no) + ": '" + fields[t] +
                          "' is a zealot; its opinion is fixed");
      user[t] = rows[it->second];
    }
    if (user[0] == user[1])
      throw DomainError(path + ":" + std::to_string(line_no) + ": self pair");
    pairs.push_back(canonical_pair(user[0], user[1]));
  }
  return pairs;
}

void write_simstats(const SimStats& stats, const OpinionSpace& space,
                    const std::string& nodes_path, const std::string& pairs_path) {
  {
    std::ofstream out = open_output(nodes_path);
    out << "id";
    for (const std::string& label : space.labels()) out << "," << label;
    out << "\n";
    for (std::size_t i = 0; i < stats.ids.size(); ++i) {
      out << stats.ids[i];
      for (long s = 0; s < stats.frequencies.cols(); ++s)
        out << "," << format_scalar(stats.frequencies(static_cast<long>(i), s));
      out << "\n";
    }
  }
  std::ofstream out = open_output(pairs_path);
  out << "id_i,id_j,disagreement\n";
  for (std::size_t p = 0; p < stats.pairs.size(); ++p)
    out << stats.ids[static_cast<std::size_t>(stats.pairs[p].first)] << ","
        << stats.ids[static_cast<std::size_t>(stats.pairs[p].second)] << ","
        << format_scalar(stats.disagreement[static_cast<long>(p)]) << "\n";
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << format_scalar(h.edges[b]) << "," << format_scalar(h.edges[b + 1]) << ","
        << h.counts[b] << "\n";
}

namespace {

ordered_json breakdown_json(const AccuracyBreakdown& acc) {
  ordered_json j;
  j["overall"] = acc.overall;
  j["per_class"] = acc.per_class;
  j["class_counts"] = acc.class_counts;
  j["evaluated"] = acc.evaluated;
  return j;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (long i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (long jx = 0; jx < m.cols(); ++jx) row.push_back(m(i, jx));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json distance_json(const DistanceMatrix& dm) {
  ordered_json j;
  j["mean"] = matrix_json(dm.mean);
  j["counts"] = dm.counts;
  j["within_mean"] = dm.within_mean;
  j["cross_mean"] = dm.cross_mean;
  j["within_count"] = dm.within_count;
  j["cross_count"] = dm.cross_count;
  return j;
}

ordered_json histogram_json(const Histogram& h) {
  ordered_json j;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  return j;
}

ordered_json side_json(const BaselineComparison::Side& side) {
  ordered_json j;
  j["argmax"] = breakdown_json(side.argmax);
  j["classifier_accuracy"] = side.classifier_accuracy;
  j["own_mean"] = side.own_mean;
  j["other_mean"] = side.other_mean;
  j["within_distance"] = side.within_distance;
  j["cross_distance"] = side.cross_distance;
  return j;
}

}  // namespace

void write_metrics_json(const MetricsReport& report, const std::string& path) {
  ordered_json j;
  j["opinion_labels"] = report.opinion_labels;
  j["argmax"] = breakdown_json(report.argmax);
  if (report.classifier)
    j["classifier"] = breakdown_json(*report.classifier);
  else
    j["classifier"] = nullptr;

  ordered_json pooled;
  ordered_json parties = ordered_json::array();
  for (const auto& party : report.pooled.parties) {
    ordered_json p;
    p["party"] = report.opinion_labels[static_cast<std::size_t>(party.party)];
    p["empty"] = party.empty;
    p["supporters"] = party.own.size();
    p["own_mean"] = party.own_mean;
    p["own_std"] = party.own_std;
    p["other_mean"] = party.other_mean;
    p["other_std"] = party.other_std;
    parties.push_back(std::move(p));
  }
  pooled["parties"] = std::move(parties);
  pooled["own_mean"] = report.pooled.pooled_own_mean;
  pooled["own_std"] = report.pooled.pooled_own_std;
  pooled["other_mean"] = report.pooled.pooled_other_mean;
  pooled["other_std"] = report.pooled.pooled_other_std;
  j["pooled"] = std::move(pooled);

  j["distances"] = distance_json(report.distances);
  j["discord"] = report.discord ? distance_json(*report.discord) : ordered_json();
  if (report.discrimination) {
    ordered_json d;
    d["accuracy"] = report.discrimination->accuracy;
    d["within_recall"] = report.discrimination->within_recall;
    d["cross_recall"] = report.discrimination->cross_recall;
    d["cutoff"] = report.discrimination->cutoff;
    d["weight"] = report.discrimination->weight;
    d["bias"] = report.discrimination->bias;
    d["within_count"] = report.discrimination->within_count;
    d["cross_count"] = report.discrimination->cross_count;
    j["discrimination"] = std::move(d);
  } else {
    j["discrimination"] = nullptr;
  }
  if (report.baseline) {
    ordered_json b;
    b["model"] = side_json(report.baseline->model);
    b["baseline"] = side_json(report.baseline->baseline);
    b["excluded_share"] = report.baseline->excluded_share;
    b["included"] = report.baseline->included;
    j["baseline"] = std::move(b);
  } else {
    j["baseline"] = nullptr;
  }

  ordered_json hist;
  hist["bins"] = report.histogram_bins;
  ordered_json own = ordered_json::array();
  for (const Histogram& h : report.own_histograms) own.push_back(histogram_json(h));
  hist["own"] = std::move(own);
  ordered_json other = ordered_json::array();
  for (const Histogram& h : report.other_histograms)
    other.push_back(histogram_json(h));
  hist["other"] = std::move(other);
  hist["discord_within"] = report.discord_within_histogram
                               ? histogram_json(*report.discord_within_histogram)
                               : ordered_json();
  hist["discord_cross"] = report.discord_cross_histogram
                              ? histogram_json(*report.discord_cross_histogram)
                              : ordered_json();
  j["histograms"] = std::move(hist);

  std::ofstream out = open_output(path);
  out << j.dump(1) << "\n";
}

namespace {

std::string pct(Scalar v) {
  if (std::isnan(v)) return "   n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%6.2f", 100 * v);
  return buf;
}

std::string num(Scalar v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

void write_metrics_text(const MetricsReport& report, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "argmax accuracy   " << pct(report.argmax.overall) << " %  ("
      << report.argmax.evaluated << " users)\n";
  for (std::size_t c = 0; c < report.opinion_labels.size(); ++c)
    out << "  " << report.opinion_labels[c] << "  " << pct(report.argmax.per_class[c])
        << " %  (" << report.argmax.class_counts[c] << ")\n";
  if (report.classifier)
    out << "classifier        " << pct(report.classifier->overall) << " %\n";
  out << "pooled own mean   " << num(report.pooled.pooled_own_mean) << " +- "
      << num(report.pooled.pooled_own_std) << "\n";
  out << "pooled other mean " << num(report.pooled.pooled_other_mean) << " +- "
      << num(report.pooled.pooled_other_std) << "\n";
  out << "distance within   " << num(report.distances.within_mean) << "  ("
      << report.distances.within_count << " pairs)\n";
  out << "distance cross    " << num(report.distances.cross_mean) << "  ("
      << report.distances.cross_count << " pairs)\n";
  if (report.discord) {
    out << "discord within    " << num(report.discord->within_mean) << "  ("
        << report.discord->within_count << " pairs)\n";
    out << "discord cross     " << num(report.discord->cross_mean) << "  ("
        << report.discord->cross_count << " pairs)\n";
  }
  if (report.discrimination) {
    out << "discord accuracy  " << pct(report.discrimination->accuracy)
        << " %  (within recall " << pct(report.discrimination->within_recall)
        << " %, cross recall " << pct(report.discrimination->cross_recall)
        << " %)\n";
    out << "discord cutoff    " << num(report.discrimination->cutoff) << "\n";
  }
  if (report.baseline) {
    out << "baseline (included " << report.baseline->included << ", excluded share "
        << num(report.baseline->excluded_share) << ")\n";
    out << "  equilibrium argmax " << pct(report.baseline->model.argmax.overall)
        << " %, classifier " << pct(report.baseline->model.classifier_accuracy)
        << " %\n";
    out << "  exposure    argmax " << pct(report.baseline->baseline.argmax.overall)
        << " %, classifier " << pct(report.baseline->baseline.classifier_accuracy)
        << " %\n";
  }
}

void write_comparison_csv(const std::vector<NetworkComparisonRow>& rows,
                          const std::string& path) {
  std::ofstream out = open_output(path);
  out << "name,argmax_accuracy,classifier_accuracy,own_mean,other_mean,"
         "within_distance,cross_distance,within_discord,cross_discord,"
         "discord_accuracy\n";
  for (const auto& row : rows)
    out << row.name << "," << format_scalar(row.argmax_accuracy) << ","
        << format_scalar(row.classifier_accuracy) << ","
        << format_scalar(row.own_mean) << "," << format_scalar(row.other_mean) << ","
        << format_scalar(row.within_distance) << ","
        << format_scalar(row.cross_distance) << ","
        << format_scalar(row.within_discord) << ","
        << format_scalar(row.cross_discord) << ","
        << format_scalar(row.discord_accuracy) << "\n";
}

}  // namespace vmz

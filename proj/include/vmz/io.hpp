#pragma once

#include <string>
#include <vector>

#include "vmz/discord.hpp"
#include "vmz/dynamics.hpp"
#include "vmz/equilibrium.hpp"
#include "vmz/evaluation.hpp"
#include "vmz/network.hpp"
#include "vmz/types.hpp"

namespace vmz {

struct LoadStats {
  long long label_rows = 0;
  long long edge_rows = 0;
  long long excluded_unlabeled = 0;   // empty label
  long long excluded_multi_label = 0; // conflicting duplicate rows
  long long dropped_edges = 0;        // incident to excluded nodes
  long long zero_weight_edges = 0;    // summed weight zero, discarded
  long long into_zealot_edges = 0;    // kept aside as weak links
};

/// Load a raw network from TSV files. Edges: source<TAB>target<TAB>weight
/// (weight optional, default 1). Labels: id<TAB>label<TAB>{0,1} with 1
/// marking a zealot. '#' lines and blank lines are ignored. Duplicate edges
/// are summed; nodes with an empty label or conflicting duplicate rows are
/// excluded along with their incident edges.
Network load_network(const std::string& edges_path, const std::string& labels_path,
                     const OpinionSpace& space, LoadStats* stats = nullptr);

/// Distinct non-empty labels of a labels file, sorted. Used when no opinion
/// space is given explicitly.
OpinionSpace space_from_labels_file(const std::string& labels_path);

// Canonical network file: versioned JSON, round-trips exactly.
void write_network_json(const Network& net, const std::string& path);
Network read_network_json(const std::string& path);

// Opinion matrix: CSV id,<label...> plus a JSON sidecar with solver metadata.
void write_opinion_csv(const OpinionMatrix& x, const OpinionSpace& space,
                       const std::string& path);
void write_opinion_meta(const OpinionMatrix& x, const OpinionSpace& space,
                        const std::string& path);
/// Read back an opinion CSV; the id set must match the network's users.
OpinionMatrix read_opinion_csv(const Network& net, const std::string& path);

// Discord store: CSV id_i,id_j,rho plus a JSON sidecar with mode/metadata.
void write_discord_csv(const DiscordStore& rho, const std::string& path);
void write_discord_meta(const DiscordStore& rho, const std::string& path);
DiscordStore read_discord_csv(const Network& net, const std::string& path);

/// Pair list file: id_i<TAB>id_j per line; both must be non-zealot users.
std::vector<Pair> read_pairs_file(const Network& net, const std::string& path);

// Simulation statistics: per-node CSV id,<label...> and per-pair CSV
// id_i,id_j,disagreement.
void write_simstats(const SimStats& stats, const OpinionSpace& space,
                    const std::string& nodes_path, const std::string& pairs_path);

void write_histogram_csv(const Histogram& h, const std::string& path);

void write_metrics_json(const MetricsReport& report, const std::string& path);
void write_metrics_text(const MetricsReport& report, const std::string& path);

void write_comparison_csv(const std::vector<NetworkComparisonRow>& rows,
                          const std::string& path);

/// Shortest text that round-trips the value exactly.
std::string format_scalar(Scalar v);

}  // namespace vmz

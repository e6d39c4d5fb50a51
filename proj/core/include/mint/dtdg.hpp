#pragma once

// Discrete-time dynamic graph data model: an edge stream bucketed into daily
// snapshots, plus growth labels and chronological splits over them.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mint/common.hpp"

namespace mint {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// One raw stream record as parsed from an edge CSV.
struct EdgeEvent {
  std::string src;
  std::string dst;
  std::int64_t timestamp = 0;  // unix seconds, UTC
  double weight = 0.0;
};

// An edge inside a snapshot, endpoints remapped to dense node ids.
struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 0.0;
  std::int64_t timestamp = 0;
};

struct Snapshot {
  int day = 0;                // index from dataset start; empty days exist
  std::vector<Edge> edges;    // timestamp-sorted, input order kept on ties
  int num_nodes_seen = 0;     // distinct nodes observed up to this day inclusive
};

// Dense node ids are assigned in first-appearance order over the
// timestamp-sorted stream, so the mapping is reproducible.
class TemporalGraph {
 public:
  TemporalGraph() = default;
  TemporalGraph(std::string name, std::vector<std::string> node_ids,
                std::vector<Snapshot> snapshots, std::int64_t day0_epoch);

  const std::string& name() const { return name_; }
  std::size_t num_days() const { return snapshots_.size(); }
  int num_nodes() const { return static_cast<int>(node_ids_.size()); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  std::int64_t day0_epoch() const { return day0_epoch_; }
  std::int64_t num_events() const { return num_events_; }

  // Per-day transaction counts. Derived metadata: labels, splits and the
  // persistence baseline work off these without touching snapshot content.
  const std::vector<std::int64_t>& daily_edge_counts() const { return counts_; }

  // Snapshot content access. The observer hook (when set) fires on every
  // call; leakage tests use it to prove which days a consumer looked at.
  const Snapshot& snapshot(std::size_t day) const;

  std::function<void(std::size_t)> on_snapshot_access;

 private:
  std::string name_;
  std::vector<std::string> node_ids_;
  std::vector<Snapshot> snapshots_;
  std::vector<std::int64_t> counts_;
  std::int64_t day0_epoch_ = 0;
  std::int64_t num_events_ = 0;
};

// Growth-label windows, in days. Label at day t compares the transaction
// count of (t + horizon_start .. t + horizon_end) against
// (t - window + 1 .. t); growth means the future window is strictly larger.
struct LabelParams {
  int window = 7;
  int horizon_start = 1;
  int horizon_end = 7;
};

// label[t] in {-1, 0, 1}; -1 where either window does not fit in the data.
std::vector<int> compute_labels(const TemporalGraph& g, const LabelParams& lp);

// Chronological split fractions over labeled days; the rest is test.
struct SplitSpec {
  double train_frac = 0.70;
  double val_frac = 0.15;
};

// All bounds are day indices. Labeled train days are
// [first_labeled, train_end), val [train_end, val_end),
// test [val_end, last_labeled].
struct SplitBounds {
  int first_labeled = 0;
  int last_labeled = 0;
  int train_end = 0;
  int val_end = 0;
};

SplitBounds chronological_split(const TemporalGraph& g, const LabelParams& lp,
                                const SplitSpec& sp);

// Parses an edge CSV with exact header "source,target,timestamp,weight",
// validates rows, and returns events stable-sorted by timestamp.
std::vector<EdgeEvent> ingest_edge_stream(std::istream& in,
                                          const std::string& origin);
std::vector<EdgeEvent> ingest_edge_file(const std::string& path);

// Buckets a sorted event stream into daily UTC snapshots (empty days
// included), assigning dense node ids in first-appearance order.
TemporalGraph discretize(const std::vector<EdgeEvent>& events,
                         const std::string& name);

// Network-level statistics (the stats CSV columns).
struct NetworkStats {
  std::string token;
  int num_nodes = 0;
  std::int64_t num_transactions = 0;
  int num_snapshots = 0;
  double growth_rate = 0.0;
  double novelty = 0.0;
  double surprise = 0.0;
};

// Mean over non-empty snapshots of the fraction of that day's distinct
// directed edges never seen in any earlier snapshot.
double novelty(const TemporalGraph& g);

// Fraction of distinct directed edges in the labeled test days
// [val_end, last_labeled] never seen in the days before train_end.
double surprise(const TemporalGraph& g, const SplitBounds& b);

// Fraction of labeled days whose growth label is 1.
double growth_rate(const TemporalGraph& g, const LabelParams& lp);

// Fraction of a's node ids that also appear in b.
double node_overlap(const TemporalGraph& a, const TemporalGraph& b);

NetworkStats network_stats(const TemporalGraph& g, const LabelParams& lp,
                           const SplitSpec& sp);

void write_stats_csv(std::ostream& out, const std::vector<NetworkStats>& rows);

}  // namespace mint

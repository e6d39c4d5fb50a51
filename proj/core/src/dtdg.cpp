#include "mint/dtdg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mint {

namespace {

std::string trim_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// directed pair key; dense ids stay well under 2^31
std::int64_t pair_key(int src, int dst) {
  return (static_cast<std::int64_t>(src) << 32) |
         static_cast<std::uint32_t>(dst);
}

}  // namespace

TemporalGraph::TemporalGraph(std::string name,
                             std::vector<std::string> node_ids,
                             std::vector<Snapshot> snapshots,
                             std::int64_t day0_epoch)
    : name_(std::move(name)),
      node_ids_(std::move(node_ids)),
      snapshots_(std::move(snapshots)),
      day0_epoch_(day0_epoch) {
  counts_.reserve(snapshots_.size());
  for (const Snapshot& s : snapshots_) {
    counts_.push_back(static_cast<std::int64_t>(s.edges.size()));
    num_events_ += static_cast<std::int64_t>(s.edges.size());
  }
}

const Snapshot& TemporalGraph::snapshot(std::size_t day) const {
  check(day < snapshots_.size(), "snapshot: day out of range");
  if (on_snapshot_access) on_snapshot_access(day);
  return snapshots_[day];
}

std::vector<EdgeEvent> ingest_edge_stream(std::istream& in,
                                          const std::string& origin) {
  std::string line;
  check(static_cast<bool>(std::getline(in, line)),
        origin + ": empty edge stream");
  check(trim_cr(line) == "source,target,timestamp,weight",
        origin + ": bad header, expected source,target,timestamp,weight");

  std::vector<EdgeEvent> events;
  std::size_t lineno = 0;  // data rows, header excluded
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim_cr(line);
    if (t.empty()) continue;
    std::vector<std::string> f = split_fields(t);
    const std::string where = origin + ": line " + std::to_string(lineno);
    check(f.size() == 4, where + ": expected 4 fields, got " +
                             std::to_string(f.size()));
    check(!f[0].empty() && !f[1].empty(), where + ": empty endpoint id");
    EdgeEvent e;
    e.src = f[0];
    e.dst = f[1];
    try {
      std::size_t used = 0;
      e.timestamp = std::stoll(f[2], &used);
      check(used == f[2].size(), where + ": bad timestamp '" + f[2] + "'");
      e.weight = std::stod(f[3], &used);
      check(used == f[3].size(), where + ": bad weight '" + f[3] + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(where + ": unparseable numeric field");
    }
    check(e.timestamp >= 0, where + ": negative timestamp");
    check(std::isfinite(e.weight) && e.weight >= 0.0,
          where + ": weight must be finite and non-negative");
    events.push_back(std::move(e));
  }
  check(!events.empty(), origin + ": no edge records");
  std::stable_sort(events.begin(), events.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return events;
}

std::vector<EdgeEvent> ingest_edge_file(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot open edge file: " + path);
  return ingest_edge_stream(in, path);
}

TemporalGraph discretize(const std::vector<EdgeEvent>& events,
                         const std::string& name) {
  check(!events.empty(), "discretize: no events");
  std::vector<EdgeEvent> sorted = events;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) {
                     return a.timestamp < b.timestamp;
                   });

  const std::int64_t day0 = sorted.front().timestamp / kSecondsPerDay;
  const std::int64_t dlast = sorted.back().timestamp / kSecondsPerDay;
  const int num_days = static_cast<int>(dlast - day0 + 1);

  std::unordered_map<std::string, int> id_of;
  std::vector<std::string> node_ids;
  auto dense_id = [&](const std::string& s) {
    auto it = id_of.find(s);
    if (it != id_of.end()) return it->second;
    int id = static_cast<int>(node_ids.size());
    id_of.emplace(s, id);
    node_ids.push_back(s);
    return id;
  };

  std::vector<Snapshot> snaps(num_days);
  for (int d = 0; d < num_days; ++d) snaps[d].day = d;
  for (const EdgeEvent& e : sorted) {
    int day = static_cast<int>(e.timestamp / kSecondsPerDay - day0);
    Edge edge;
    edge.src = dense_id(e.src);
    edge.dst = dense_id(e.dst);
    edge.weight = e.weight;
    edge.timestamp = e.timestamp;
    snaps[day].edges.push_back(edge);
    snaps[day].num_nodes_seen = static_cast<int>(node_ids.size());
  }
  // carry the cumulative node count through empty days
  int seen = 0;
  for (Snapshot& s : snaps) {
    if (s.edges.empty()) {
      s.num_nodes_seen = seen;
    } else {
      seen = s.num_nodes_seen;
    }
  }

  return TemporalGraph(name, std::move(node_ids), std::move(snaps),
                       day0 * kSecondsPerDay);
}

std::vector<int> compute_labels(const TemporalGraph& g, const LabelParams& lp) {
  check(lp.window >= 1, "labels: window must be >= 1");
  check(lp.horizon_start >= 1 && lp.horizon_end >= lp.horizon_start,
        "labels: need 1 <= horizon_start <= horizon_end");
  const std::vector<std::int64_t>& counts = g.daily_edge_counts();
  const int days = static_cast<int>(counts.size());
  check(days >= lp.window + lp.horizon_end,
        g.name() + ": insufficient snapshots for labeling (" +
            std::to_string(days) + " days, need >= " +
            std::to_string(lp.window + lp.horizon_end) + ")");
  // prefix[i] = events in days [0, i)
  std::vector<std::int64_t> prefix(days + 1, 0);
  for (int d = 0; d < days; ++d) prefix[d + 1] = prefix[d] + counts[d];
  auto range_count = [&](int lo, int hi) {  // inclusive day range
    return prefix[hi + 1] - prefix[lo];
  };

  std::vector<int> labels(days, -1);
  for (int t = 0; t < days; ++t) {
    if (t - lp.window + 1 < 0) continue;
    if (t + lp.horizon_end > days - 1) continue;
    std::int64_t cur = range_count(t - lp.window + 1, t);
    std::int64_t fut = range_count(t + lp.horizon_start, t + lp.horizon_end);
    labels[t] = fut > cur ? 1 : 0;
  }
  return labels;
}

SplitBounds chronological_split(const TemporalGraph& g, const LabelParams& lp,
                                const SplitSpec& sp) {
  check(sp.train_frac > 0.0 && sp.val_frac >= 0.0 &&
            sp.train_frac + sp.val_frac < 1.0,
        "split: need train_frac > 0, val_frac >= 0, train+val < 1");
  SplitBounds b;
  b.first_labeled = lp.window - 1;
  b.last_labeled = static_cast<int>(g.num_days()) - 1 - lp.horizon_end;
  const int labeled = b.last_labeled - b.first_labeled + 1;
  check(labeled >= 3, g.name() + ": too short, only " +
                          std::to_string(std::max(labeled, 0)) +
                          " labeled days (need >= 3)");

  // floor of the exact fractions; the epsilon undoes cases like
  // 0.7 * 10 = 6.999...96 that would floor one short
  int n_train = static_cast<int>(std::floor(sp.train_frac * labeled + 1e-9));
  int n_val = static_cast<int>(std::floor(sp.val_frac * labeled + 1e-9));
  int n_test = labeled - n_train - n_val;
  // every split must hold at least one labeled day
  auto steal_into = [&](int& part) {
    if (part >= 1) return;
    int* donor = (n_train >= n_val && n_train >= n_test) ? &n_train
                 : (n_val >= n_test)                     ? &n_val
                                                         : &n_test;
    --*donor;
    ++part;
  };
  steal_into(n_train);
  steal_into(n_val);
  steal_into(n_test);
  check(n_train >= 1 && n_val >= 1 && n_test >= 1, "split: degenerate split");

  b.train_end = b.first_labeled + n_train;
  b.val_end = b.train_end + n_val;
  return b;
}

double novelty(const TemporalGraph& g) {
  std::unordered_set<std::int64_t> seen;
  double acc = 0.0;
  int nonempty = 0;
  for (std::size_t d = 0; d < g.num_days(); ++d) {
    const Snapshot& s = g.snapshot(d);
    if (s.edges.empty()) continue;
    std::unordered_set<std::int64_t> today;
    for (const Edge& e : s.edges) today.insert(pair_key(e.src, e.dst));
    int fresh = 0;
    for (std::int64_t k : today)
      if (!seen.count(k)) ++fresh;
    acc += static_cast<double>(fresh) / static_cast<double>(today.size());
    ++nonempty;
    seen.insert(today.begin(), today.end());
  }
  check(nonempty > 0, "novelty: graph has no edges");
  return acc / nonempty;
}

double surprise(const TemporalGraph& g, const SplitBounds& b) {
  check(b.train_end >= 0 && b.val_end >= b.train_end &&
            b.last_labeled >= b.val_end &&
            b.last_labeled < static_cast<int>(g.num_days()),
        "surprise: malformed split bounds");
  std::unordered_set<std::int64_t> train_pairs;
  for (int d = 0; d < b.train_end; ++d)
    for (const Edge& e : g.snapshot(d).edges)
      train_pairs.insert(pair_key(e.src, e.dst));
  std::unordered_set<std::int64_t> test_pairs;
  for (int d = b.val_end; d <= b.last_labeled; ++d)
    for (const Edge& e : g.snapshot(d).edges)
      test_pairs.insert(pair_key(e.src, e.dst));
  check(!test_pairs.empty(), "surprise: test days contain no edges");
  int fresh = 0;
  for (std::int64_t k : test_pairs)
    if (!train_pairs.count(k)) ++fresh;
  return static_cast<double>(fresh) / static_cast<double>(test_pairs.size());
}

double growth_rate(const TemporalGraph& g, const LabelParams& lp) {
  std::vector<int> labels = compute_labels(g, lp);
  int ones = 0, total = 0;
  for (int v : labels) {
    if (v < 0) continue;
    ++total;
    ones += v;
  }
  return total == 0 ? 0.0 : static_cast<double>(ones) / total;
}

double node_overlap(const TemporalGraph& a, const TemporalGraph& b) {
  check(!a.node_ids().empty() && !b.node_ids().empty(),
        "node_overlap: empty node set");
  std::unordered_set<std::string> sb(b.node_ids().begin(), b.node_ids().end());
  std::size_t inter = 0;
  for (const std::string& id : a.node_ids())
    if (sb.count(id)) ++inter;
  return static_cast<double>(inter) /
         static_cast<double>(a.node_ids().size());
}

NetworkStats network_stats(const TemporalGraph& g, const LabelParams& lp,
                           const SplitSpec& sp) {
  NetworkStats st;
  st.token = g.name();
  st.num_nodes = g.num_nodes();
  st.num_transactions = g.num_events();
  st.num_snapshots = static_cast<int>(g.num_days());
  st.growth_rate = growth_rate(g, lp);
  st.novelty = novelty(g);
  st.surprise = surprise(g, chronological_split(g, lp, sp));
  return st;
}

void write_stats_csv(std::ostream& out, const std::vector<NetworkStats>& rows) {
  out << "Token,#Node,#Transaction,#Snapshots,Growth rate,Novelty,Surprise\n";
  char buf[64];
  for (const NetworkStats& s : rows) {
    out << s.token << ',' << s.num_nodes << ',' << s.num_transactions << ','
        << s.num_snapshots;
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f", s.growth_rate,
                  s.novelty, s.surprise);
    out << buf << '\n';
  }
}

}  // namespace mint

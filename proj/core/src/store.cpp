#include "mint/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

namespace fs = std::filesystem;

namespace mint {

namespace {

std::string day_file_name(int day) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "day_%05d.csv", day);
  return buf;
}

// shortest representation that parses back to the same double
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot open " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(path + ": bad JSON: " + e.what());
  }
  return j;
}

}  // namespace

void save_network_store(const TemporalGraph& g, const std::string& dir,
                        const LabelParams& lp, const SplitSpec& sp) {
  const SplitBounds split = chronological_split(g, lp, sp);
  fs::create_directories(fs::path(dir) / "days");

  std::vector<int> nonempty;
  for (std::size_t d = 0; d < g.num_days(); ++d)
    if (!g.snapshot(d).edges.empty()) nonempty.push_back(static_cast<int>(d));

  nlohmann::ordered_json m;
  m["format_version"] = kStoreFormatVersion;
  m["name"] = g.name();
  m["num_days"] = g.num_days();
  m["day0_epoch"] = g.day0_epoch();
  m["num_nodes"] = g.num_nodes();
  m["num_events"] = g.num_events();
  m["label_params"] = {{"window", lp.window},
                       {"horizon_start", lp.horizon_start},
                       {"horizon_end", lp.horizon_end}};
  m["split_spec"] = {{"train_frac", sp.train_frac},
                     {"val_frac", sp.val_frac}};
  m["split"] = {{"first_labeled", split.first_labeled},
                {"last_labeled", split.last_labeled},
                {"train_end", split.train_end},
                {"val_end", split.val_end}};
  m["nonempty_days"] = nonempty;
  {
    std::ofstream out(fs::path(dir) / "manifest.json");
    check(out.good(), "cannot write manifest in " + dir);
    out << m.dump(2) << '\n';
  }

  {
    std::ofstream out(fs::path(dir) / "nodes.csv");
    check(out.good(), "cannot write nodes.csv in " + dir);
    out << "node_id\n";
    for (const std::string& id : g.node_ids()) out << id << '\n';
  }

  for (int d : nonempty) {
    std::ofstream out(fs::path(dir) / "days" / day_file_name(d));
    check(out.good(), "cannot write day file in " + dir);
    out << "source,target,timestamp,weight\n";
    for (const Edge& e : g.snapshot(d).edges) {
      out << g.node_ids()[e.src] << ',' << g.node_ids()[e.dst] << ','
          << e.timestamp << ',' << format_double(e.weight) << '\n';
    }
  }
}

TemporalGraph load_network_store(const std::string& dir) {
  nlohmann::ordered_json m =
      load_json_file((fs::path(dir) / "manifest.json").string());
  check(m.value("format_version", -1) == kStoreFormatVersion,
        dir + ": unsupported store format version");
  const std::string name = m.at("name").get<std::string>();
  const int num_days = m.at("num_days").get<int>();
  const std::int64_t day0 = m.at("day0_epoch").get<std::int64_t>();
  check(num_days >= 1, dir + ": manifest num_days must be >= 1");

  std::vector<std::string> node_ids;
  std::unordered_map<std::string, int> id_of;
  {
    std::ifstream in(fs::path(dir) / "nodes.csv");
    check(in.good(), dir + ": missing nodes.csv");
    std::string line;
    check(static_cast<bool>(std::getline(in, line)) &&
              (line == "node_id" || line == "node_id\r"),
          dir + ": nodes.csv must start with header node_id");
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      id_of.emplace(line, static_cast<int>(node_ids.size()));
      node_ids.push_back(line);
    }
  }
  check(static_cast<int>(node_ids.size()) == m.at("num_nodes").get<int>(),
        dir + ": node count mismatch with manifest");

  std::vector<Snapshot> snaps(num_days);
  for (int d = 0; d < num_days; ++d) snaps[d].day = d;

  for (int d : m.at("nonempty_days").get<std::vector<int>>()) {
    check(d >= 0 && d < num_days, dir + ": nonempty day out of range");
    const std::string path = (fs::path(dir) / "days" / day_file_name(d)).string();
    std::ifstream in(path);
    check(in.good(), dir + ": missing day file " + day_file_name(d));
    std::vector<EdgeEvent> events = ingest_edge_stream(in, path);
    for (const EdgeEvent& ev : events) {
      auto is = id_of.find(ev.src);
      auto id = id_of.find(ev.dst);
      check(is != id_of.end() && id != id_of.end(),
            path + ": endpoint not in nodes.csv");
      Edge e;
      e.src = is->second;
      e.dst = id->second;
      e.weight = ev.weight;
      e.timestamp = ev.timestamp;
      check(ev.timestamp / kSecondsPerDay - day0 / kSecondsPerDay == d,
            path + ": timestamp outside its day bucket");
      snaps[d].edges.push_back(e);
    }
  }

  // rebuild cumulative node counts from first appearances
  {
    std::vector<int> first_day(node_ids.size(), num_days);
    for (int d = 0; d < num_days; ++d)
      for (const Edge& e : snaps[d].edges) {
        first_day[e.src] = std::min(first_day[e.src], d);
        first_day[e.dst] = std::min(first_day[e.dst], d);
      }
    std::vector<int> born(num_days, 0);
    for (std::size_t i = 0; i < first_day.size(); ++i) {
      check(first_day[i] < num_days,
            dir + ": node " + node_ids[i] + " never appears in any day file");
      ++born[first_day[i]];
    }
    int seen = 0;
    for (int d = 0; d < num_days; ++d) {
      seen += born[d];
      snaps[d].num_nodes_seen = seen;
    }
  }

  TemporalGraph g(name, std::move(node_ids), std::move(snaps), day0);
  check(g.num_events() == m.at("num_events").get<std::int64_t>(),
        dir + ": event count mismatch with manifest");
  return g;
}

std::vector<std::string> list_network_stores(const std::string& root) {
  std::vector<std::string> names;
  if (!fs::is_directory(root)) return names;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
      names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace mint

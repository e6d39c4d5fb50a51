// mint: preprocess transaction streams into snapshot stores, train growth
// models on one or many networks, and score zero-shot transfer.
//
// Verbs: preprocess, stats, sample-packs, synth, train, ablate, infer, eval.
// Every verb takes --out (a directory it owns) and writes a manifest.json
// there recording the invocation, so a finished run can be re-produced by
// re-running the recorded command. Exit codes: 0 success, 1 runtime or
// config-file error, 2 command-line usage error, 3 partial failure (some
// inputs failed).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mint/config.hpp"
#include "mint/dtdg.hpp"
#include "mint/eval.hpp"
#include "mint/metrics.hpp"
#include "mint/store.hpp"
#include "mint/synthetic.hpp"
#include "mint/training.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string data_root_or_env(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("MINT_DATA_ROOT");
  if (env && *env) return env;
  mint::fail("no data root: pass --data-root or set MINT_DATA_ROOT");
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  mint::check(out.good(), "cannot write " + path.string());
  out << content;
  mint::check(out.good(), "write failed: " + path.string());
}

ordered_json argv_json(int argc, char** argv) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < argc; ++i) a.push_back(argv[i]);
  return a;
}

// Loads <root>/<name> as a network store.
mint::TemporalGraph load_network(const std::string& root,
                                 const std::string& name) {
  fs::path dir = fs::path(root) / name;
  mint::check(fs::exists(dir / "manifest.json"),
              "no network store at " + dir.string());
  return mint::load_network_store(dir.string());
}

struct ManifestWriter {
  ordered_json j;
  fs::path dir;
  ManifestWriter(const std::string& command, int argc, char** argv,
                 const fs::path& out_dir)
      : dir(out_dir) {
    j["format_version"] = 1;
    j["command"] = command;
    j["argv"] = argv_json(argc, argv);
    j["out_dir"] = out_dir.string();
    j["started_utc"] = now_utc();
  }
  void finish() {
    j["finished_utc"] = now_utc();
    write_text(dir / "manifest.json", j.dump(2) + "\n");
  }
};

// ---------------------------------------------------------------- preprocess

int cmd_preprocess(int argc, char** argv, const std::string& input_dir,
                   const std::string& out_dir, const mint::LabelParams& lp,
                   const mint::SplitSpec& sp) {
  std::vector<fs::path> csvs;
  mint::check(fs::is_directory(input_dir),
              "preprocess: input is not a directory: " + input_dir);
  for (const auto& e : fs::directory_iterator(input_dir))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      csvs.push_back(e.path());
  std::sort(csvs.begin(), csvs.end());
  mint::check(!csvs.empty(), "preprocess: no .csv files in " + input_dir);

  ManifestWriter manifest("preprocess", argc, argv, out_dir);
  manifest.j["input_dir"] = input_dir;
  manifest.j["label_params"] = {{"window", lp.window},
                                {"horizon_start", lp.horizon_start},
                                {"horizon_end", lp.horizon_end}};

  ordered_json stores = ordered_json::array();
  ordered_json failures = ordered_json::array();
  for (const fs::path& p : csvs) {
    const std::string name = p.stem().string();
    try {
      auto events = mint::ingest_edge_file(p.string());
      mint::TemporalGraph g = mint::discretize(events, name);
      mint::save_network_store(g, (fs::path(out_dir) / name).string(), lp, sp);
      stores.push_back(name);
    } catch (const std::exception& ex) {
      failures.push_back({{"file", p.string()}, {"error", ex.what()}});
    }
  }
  manifest.j["stores"] = stores;
  manifest.j["failures"] = failures;
  manifest.finish();

  ordered_json summary = {{"command", "preprocess"},
                          {"stores", stores.size()},
                          {"failures", failures}};
  std::cout << summary.dump(2) << "\n";
  if (!failures.empty()) return stores.empty() ? kExitError : kExitPartial;
  return kExitOk;
}

// --------------------------------------------------------------------- stats

int cmd_stats(int argc, char** argv, const std::string& root,
              const std::string& out_dir) {
  std::vector<std::string> names = mint::list_network_stores(root);
  mint::check(!names.empty(), "stats: no network stores under " + root);

  std::vector<mint::NetworkStats> rows;
  for (const std::string& name : names) {
    fs::path dir = fs::path(root) / name;
    std::ifstream mf(dir / "manifest.json");
    ordered_json m = ordered_json::parse(mf);
    mint::LabelParams lp;
    lp.window = m["label_params"]["window"].get<int>();
    lp.horizon_start = m["label_params"]["horizon_start"].get<int>();
    lp.horizon_end = m["label_params"]["horizon_end"].get<int>();
    mint::SplitSpec sp;
    sp.train_frac = m["split_spec"]["train_frac"].get<double>();
    sp.val_frac = m["split_spec"]["val_frac"].get<double>();
    mint::TemporalGraph g = mint::load_network_store(dir.string());
    rows.push_back(mint::network_stats(g, lp, sp));
  }

  ManifestWriter manifest("stats", argc, argv, out_dir);
  std::ostringstream csv;
  mint::write_stats_csv(csv, rows);
  write_text(fs::path(out_dir) / "stats.csv", csv.str());
  manifest.j["networks"] = names;
  manifest.finish();

  std::cout << csv.str();
  return kExitOk;
}

// -------------------------------------------------------------- sample-packs

int cmd_sample_packs(int argc, char** argv, const std::string& root,
                     const std::vector<int>& sizes, int packs,
                     std::uint64_t seed, const std::string& out_dir) {
  std::vector<std::string> pool = mint::list_network_stores(root);
  mint::check(!pool.empty(), "sample-packs: no network stores under " + root);
  mint::check(packs >= 1, "sample-packs: --packs must be >= 1");
  mint::check(!sizes.empty(), "sample-packs: --sizes must be non-empty");
  const int n = static_cast<int>(pool.size());
  for (int s : sizes) {
    mint::check(s >= 1, "sample-packs: sizes must be >= 1");
    if (s * packs > n) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "sample-packs: %d disjoint packs of size %d need %d "
                    "networks but the pool has %d",
                    packs, s, s * packs, n);
      mint::fail(buf);
    }
  }

  ManifestWriter manifest("sample-packs", argc, argv, out_dir);
  manifest.j["pool_size"] = n;
  manifest.j["seed"] = seed;
  ordered_json files = ordered_json::array();
  for (int s : sizes) {
    // one deal per size; consecutive chunks are disjoint by construction
    std::vector<int> order =
        mint::train::shuffle_order(n, s, seed);
    for (int k = 0; k < packs; ++k) {
      char fname[64];
      std::snprintf(fname, sizeof(fname), "m%d_pack%c.txt", s,
                    static_cast<char>('A' + k));
      std::string body;
      for (int i = 0; i < s; ++i) body += pool[order[k * s + i]] + "\n";
      write_text(fs::path(out_dir) / fname, body);
      files.push_back(fname);
    }
  }
  manifest.j["files"] = files;
  manifest.finish();
  std::cout << ordered_json({{"command", "sample-packs"}, {"files", files}})
                   .dump(2)
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- synth

int cmd_synth(int argc, char** argv, int count, std::uint64_t seed,
              const std::string& out_dir) {
  std::vector<mint::SynthRegime> regimes = mint::synthetic_pack(count, seed);
  ManifestWriter manifest("synth", argc, argv, out_dir);
  manifest.j["count"] = count;
  manifest.j["seed"] = seed;
  ordered_json names = ordered_json::array();
  for (const mint::SynthRegime& r : regimes) {
    mint::TemporalGraph g = mint::generate_synthetic(r);
    mint::save_network_store(g, (fs::path(out_dir) / r.name).string());
    names.push_back(r.name);
  }
  manifest.j["networks"] = names;
  manifest.finish();
  std::cout << ordered_json({{"command", "synth"}, {"networks", names}})
                   .dump(2)
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- train/ablate

struct TrainArgs {
  std::string config_path;
  std::string data_root;
  std::string out_root = "runs";
  std::int64_t seed_override = -1;
  bool force = false;
  // ablate verb only
  bool keep_order = false;
  bool carry_context = false;
};

void run_one_training(const fs::path& run_dir,
                      const mint::train::TrainConfig& tc,
                      const std::vector<std::string>& roster,
                      const std::vector<std::string>& test_roster,
                      const std::string& data_root, const std::string& verb,
                      int argc, char** argv, ordered_json config_snapshot) {
  mint::check(tc.mode == "single" ? roster.size() == 1 : roster.size() >= 1,
              "train: mode single takes exactly one train network");
  if (fs::exists(run_dir / "manifest.json"))
    mint::fail("train: " + run_dir.string() +
               " already holds a run (use --force to overwrite)");

  std::vector<mint::TemporalGraph> graphs;
  graphs.reserve(roster.size());
  for (const std::string& name : roster)
    graphs.push_back(load_network(data_root, name));

  ManifestWriter manifest(verb, argc, argv, run_dir);
  manifest.j["config"] = std::move(config_snapshot);
  manifest.j["seeds"] = {tc.seed};
  manifest.j["train_roster"] = roster;
  manifest.j["test_roster"] = test_roster;
  manifest.j["data_root"] = data_root;

  mint::train::TrainResult res;
  if (tc.mode == "single") {
    res = mint::train::train_single(graphs[0], tc);
  } else {
    std::vector<const mint::TemporalGraph*> ptrs;
    for (const mint::TemporalGraph& g : graphs) ptrs.push_back(&g);
    res = mint::train::mint_train(ptrs, tc);
  }

  mint::train::save_checkpoint(
      res.checkpoint, (run_dir / "checkpoints" / "checkpoint.json").string());
  std::ostringstream log;
  mint::train::write_epoch_log_csv(log, res.log);
  write_text(run_dir / "logs" / "epochs.csv", log.str());

  manifest.j["best_epoch"] = res.checkpoint.best_epoch;
  manifest.j["best_mean_val_auc"] = res.checkpoint.best_mean_val_auc;
  manifest.j["epochs_run"] = res.checkpoint.epochs_run;
  manifest.finish();

  ordered_json summary = {
      {"command", verb},
      {"run_dir", run_dir.string()},
      {"best_epoch", res.checkpoint.best_epoch},
      {"best_mean_val_auc", res.checkpoint.best_mean_val_auc},
      {"epochs_run", res.checkpoint.epochs_run}};
  std::cout << summary.dump(2) << "\n";
}

int cmd_train(int argc, char** argv, const TrainArgs& a,
              const std::string& verb) {
  mint::cfg::Config config = mint::cfg::parse_config_file(a.config_path);
  std::vector<std::string> known = mint::cfg::train_config_keys();
  for (const char* k : {"run_name", "train_roster", "test_roster",
                        "data_root", "sweep_sizes"})
    known.push_back(k);
  config.require_known(known);

  mint::train::TrainConfig tc = mint::cfg::train_config_from_config(config);
  if (a.seed_override >= 0)
    tc.seed = static_cast<std::uint64_t>(a.seed_override);
  if (a.keep_order) tc.ablate_shuffle = true;
  if (a.carry_context) tc.ablate_context_switch = true;

  std::vector<std::string> roster = config.get_list("train_roster");
  std::vector<std::string> test_roster;
  if (config.has("test_roster")) test_roster = config.get_list("test_roster");
  for (const std::string& t : test_roster)
    mint::check(std::find(roster.begin(), roster.end(), t) == roster.end(),
                "train: network '" + t + "' is in both rosters; train and "
                "test must be disjoint");

  std::string data_root = data_root_or_env(
      !a.data_root.empty() ? a.data_root
                           : config.get_string("data_root", ""));
  std::string run_name =
      config.get_string("run_name", tc.mode + "-" + tc.model);
  if (verb == "ablate") run_name += "-ablate";

  ordered_json snapshot = ordered_json::object();
  for (const mint::cfg::Entry& e : config.entries()) snapshot[e.key] = e.value;

  fs::path base = fs::path(a.out_root) / run_name;
  if (a.force && fs::exists(base)) fs::remove_all(base);

  if (config.has("sweep_sizes")) {
    mint::check(tc.mode == "mint", "train: sweep_sizes needs mode = mint");
    for (const std::string& item : config.get_list("sweep_sizes")) {
      int m = std::stoi(item);
      mint::check(m >= 1 && m <= static_cast<int>(roster.size()),
                  "train: sweep size " + item +
                      " exceeds the train roster (" +
                      std::to_string(roster.size()) + " networks)");
      std::vector<std::string> sub(roster.begin(), roster.begin() + m);
      run_one_training(base / ("m" + std::to_string(m)), tc, sub, test_roster,
                       data_root, verb, argc, argv, snapshot);
    }
    return kExitOk;
  }
  run_one_training(base, tc, roster, test_roster, data_root, verb, argc,
                   argv, snapshot);
  return kExitOk;
}

// --------------------------------------------------------------- infer/eval

std::string checkpoint_method_name(const std::string& path) {
  return fs::path(path).stem().string();
}

int cmd_infer(int argc, char** argv, const std::vector<std::string>& ck_paths,
              std::vector<std::string> networks, const std::string& data_root,
              const std::string& out_dir, const std::string& reference,
              bool with_eval) {
  mint::check(!ck_paths.empty(), "infer: at least one --checkpoint required");
  if (networks.empty()) networks = mint::list_network_stores(data_root);
  mint::check(!networks.empty(), "infer: no networks to score");

  std::vector<mint::train::ModelCheckpoint> cks;
  for (const std::string& p : ck_paths)
    cks.push_back(mint::train::load_checkpoint(p));
  for (std::size_t i = 1; i < cks.size(); ++i) {
    const mint::LabelParams &a = cks[0].config.labels,
                            &b = cks[i].config.labels;
    mint::check(a.window == b.window && a.horizon_start == b.horizon_start &&
                    a.horizon_end == b.horizon_end,
                "eval: checkpoints disagree on label windows");
  }

  ManifestWriter manifest(with_eval ? "eval" : "infer", argc, argv, out_dir);
  manifest.j["checkpoints"] = ck_paths;
  manifest.j["networks"] = networks;

  std::vector<mint::eval::PredictionSeries> series;
  ordered_json roster_warnings = ordered_json::array();
  for (const std::string& name : networks) {
    mint::TemporalGraph g = load_network(data_root, name);
    for (std::size_t i = 0; i < cks.size(); ++i) {
      mint::eval::PredictionSeries s = mint::eval::zero_shot_infer(cks[i], g);
      s.method = checkpoint_method_name(ck_paths[i]);
      if (s.network_in_roster) {
        std::cerr << "warning: " << name << " is in the training roster of "
                  << ck_paths[i] << "; its scores are not zero-shot\n";
        roster_warnings.push_back(
            {{"network", name}, {"checkpoint", ck_paths[i]}});
      }
      series.push_back(std::move(s));
    }
    if (with_eval)
      series.push_back(mint::eval::persistence_forecast(
          g, cks[0].config.labels, cks[0].config.split));
  }

  for (const mint::eval::PredictionSeries& s : series) {
    std::ostringstream csv;
    mint::eval::write_predictions_csv(csv, s);
    write_text(fs::path(out_dir) / "predictions" /
                   (s.method + "." + s.network + ".csv"),
               csv.str());
  }

  ordered_json summary = {{"command", with_eval ? "eval" : "infer"},
                          {"out_dir", out_dir},
                          {"roster_warnings", roster_warnings}};

  if (with_eval) {
    mint::eval::EvalReport rep = mint::eval::build_eval_report(series,
                                                               reference);
    std::ostringstream metrics, aggregate;
    mint::eval::write_metrics_csv(metrics, rep);
    mint::eval::write_aggregate_csv(aggregate, rep);
    write_text(fs::path(out_dir) / "reports" / "metrics.csv", metrics.str());
    write_text(fs::path(out_dir) / "reports" / "aggregate.csv",
               aggregate.str());
    summary["reference_method"] = reference;
    summary["reports"] = {"reports/metrics.csv", "reports/aggregate.csv"};
  }

  manifest.j["roster_warnings"] = roster_warnings;
  manifest.finish();
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-network temporal graph training and zero-shot scoring"};
  app.require_subcommand(1);

  // preprocess
  auto* pre = app.add_subcommand(
      "preprocess", "turn edge CSVs into per-network snapshot stores");
  std::string pre_in, pre_out;
  mint::LabelParams pre_lp;
  mint::SplitSpec pre_sp;
  pre->add_option("input", pre_in, "directory of edge CSVs")->required();
  pre->add_option("--out", pre_out, "store output directory")->required();
  pre->add_option("--label-window", pre_lp.window, "history window (days)");
  pre->add_option("--horizon-start", pre_lp.horizon_start,
                  "future window start offset");
  pre->add_option("--horizon-end", pre_lp.horizon_end,
                  "future window end offset");
  pre->add_option("--train-frac", pre_sp.train_frac, "train fraction");
  pre->add_option("--val-frac", pre_sp.val_frac, "validation fraction");

  // stats
  auto* st = app.add_subcommand("stats", "per-network statistics CSV");
  std::string st_root, st_out;
  st->add_option("--data-root", st_root, "store root (or MINT_DATA_ROOT)");
  st->add_option("--out", st_out, "report directory")->required();

  // sample-packs
  auto* sample = app.add_subcommand(
      "sample-packs", "deal disjoint training rosters from a store pool");
  std::string sm_root, sm_out;
  std::vector<int> sm_sizes;
  int sm_packs = 3;
  std::uint64_t sm_seed = 7;
  sample->add_option("--data-root", sm_root,
                     "store root (or MINT_DATA_ROOT)");
  sample->add_option("--sizes", sm_sizes, "pack sizes, e.g. --sizes 16 32")
      ->required();
  sample->add_option("--packs", sm_packs, "packs per size");
  sample->add_option("--seed", sm_seed, "deal seed");
  sample->add_option("--out", sm_out, "roster output directory")->required();

  // synth
  auto* sy = app.add_subcommand(
      "synth", "generate a synthetic network family as stores");
  int sy_count = 10;
  std::uint64_t sy_seed = 7;
  std::string sy_out;
  sy->add_option("--count", sy_count, "number of networks");
  sy->add_option("--seed", sy_seed, "generator seed");
  sy->add_option("--out", sy_out, "store output directory")->required();

  // train / ablate
  TrainArgs ta;
  auto add_train_opts = [&](CLI::App* cmd) {
    cmd->add_option("--config", ta.config_path, "key = value config file")
        ->required();
    cmd->add_option("--seed", ta.seed_override, "override the config seed");
    cmd->add_option("--out", ta.out_root, "runs root directory");
    cmd->add_option("--data-root", ta.data_root,
                    "store root (or MINT_DATA_ROOT)");
    cmd->add_flag("--force", ta.force, "replace an existing run directory");
  };
  auto* tr = app.add_subcommand("train", "train per the config file");
  add_train_opts(tr);
  auto* ab = app.add_subcommand(
      "ablate", "train with a training-loop behavior switched off");
  add_train_opts(ab);
  ab->add_flag("--keep-order", ta.keep_order,
               "do not reshuffle the network order between epochs");
  ab->add_flag("--carry-context", ta.carry_context,
               "do not reset state when switching networks");

  // infer / eval
  std::vector<std::string> iv_cks, iv_networks;
  std::string iv_root, iv_out, iv_reference = "persistence";
  auto add_infer_opts = [&](CLI::App* cmd) {
    cmd->add_option("--checkpoint", iv_cks, "checkpoint JSON path(s)")
        ->required();
    cmd->add_option("--networks", iv_networks,
                    "networks to score (default: every store)");
    cmd->add_option("--data-root", iv_root,
                    "store root (or MINT_DATA_ROOT)");
    cmd->add_option("--out", iv_out, "output directory")->required();
  };
  auto* inf = app.add_subcommand(
      "infer", "zero-shot predictions from frozen checkpoints");
  add_infer_opts(inf);
  auto* ev = app.add_subcommand(
      "eval", "predictions plus metric and aggregate reports");
  add_infer_opts(ev);
  ev->add_option("--reference", iv_reference,
                 "method the win ratio compares against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code == 0) return kExitOk;  // --help
    std::cerr << ordered_json({{"error", e.what()}}).dump() << "\n";
    return kExitUsage;
  }

  try {
    if (*pre) return cmd_preprocess(argc, argv, pre_in, pre_out, pre_lp,
                                    pre_sp);
    if (*st) return cmd_stats(argc, argv, data_root_or_env(st_root), st_out);
    if (*sample)
      return cmd_sample_packs(argc, argv, data_root_or_env(sm_root), sm_sizes,
                              sm_packs, sm_seed, sm_out);
    if (*sy) return cmd_synth(argc, argv, sy_count, sy_seed, sy_out);
    if (*tr) return cmd_train(argc, argv, ta, "train");
    if (*ab) {
      mint::check(ta.keep_order || ta.carry_context,
                  "ablate: pass --keep-order and/or --carry-context");
      return cmd_train(argc, argv, ta, "ablate");
    }
    if (*inf)
      return cmd_infer(argc, argv, iv_cks, iv_networks,
                       data_root_or_env(iv_root), iv_out, iv_reference,
                       false);
    if (*ev)
      return cmd_infer(argc, argv, iv_cks, iv_networks,
                       data_root_or_env(iv_root), iv_out, iv_reference, true);
  } catch (const mint::Error& e) {
    std::cerr << ordered_json({{"error", e.what()}}).dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << ordered_json({{"error", e.what()}}).dump() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

#pragma once

// Trainers for single-network and multi-network runs. The multi-network
// loop visits one network at a time per epoch: network order is reshuffled
// each epoch and the recurrent state is reset to the origin before each
// network, so no hidden state bleeds across networks. Both behaviors can be
// switched off for ablations. Single-network training is the m=1 special
// case of the same loop.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mint/dtdg.hpp"
#include "mint/tgnn.hpp"

namespace mint::train {

struct TrainConfig {
  std::string mode = "single";  // single | mint
  std::string model = "htgn";   // htgn | gclstm
  tgnn::HyperParams arch;
  LabelParams labels;
  SplitSpec split;

  double lr = 1.5e-3;
  int max_epochs = 100;
  int min_epochs = 1;
  int patience = 20;       // epochs without improvement before stopping
  double min_delta = 0.05; // improvement = mean val AUC gain above this
  double grad_clip = 0.0;  // global L2 cap per update; 0 disables
  std::uint64_t seed = 7;

  bool ablate_shuffle = false;         // keep the roster order every epoch
  bool ablate_context_switch = false;  // carry state across networks

  static TrainConfig single_defaults();
  static TrainConfig mint_defaults();
};

// One row per (epoch, network); mean_val_auc and seconds repeat the epoch
// totals on every row of that epoch.
struct EpochEntry {
  int epoch = 0;
  std::string network;
  double train_loss = 0.0;
  double val_auc = 0.0;
  double mean_val_auc = 0.0;
  double seconds = 0.0;
};

void write_epoch_log_csv(std::ostream& out,
                         const std::vector<EpochEntry>& log);

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamParams hp;
  std::vector<tgnn::Mat> m;  // aligned with the model's tensors
  std::vector<tgnn::Mat> v;
  std::int64_t t = 0;
};

// Validation-time probabilities of the best model on its own roster
// (forward pass over train+val with final weights); stored so inference
// can cross-check a reloaded checkpoint.
struct ValRecord {
  std::string network;
  std::vector<int> days;
  std::vector<double> probs;
  std::vector<int> labels;
};

struct ModelCheckpoint {
  int format_version = 1;
  std::string architecture;
  tgnn::HyperParams arch;
  TrainConfig config;
  std::vector<std::string> roster;

  int best_epoch = -1;
  double best_mean_val_auc = 0.0;
  tgnn::ParamStore params;  // best-epoch weights

  // resume section: training position after the last finished epoch
  tgnn::ParamStore last_params;
  AdamState adam;
  int epochs_run = 0;
  int stale_epochs = 0;    // epochs since the early-stop reference moved
  double es_reference = 0.0;

  std::vector<ValRecord> val_records;
};

void save_checkpoint(const ModelCheckpoint& ck, const std::string& path);
ModelCheckpoint load_checkpoint(const std::string& path);

struct TrainResult {
  ModelCheckpoint checkpoint;
  std::vector<EpochEntry> log;
};

// Deterministic per-epoch visiting order of m networks.
std::vector<int> shuffle_order(int m, int epoch, std::uint64_t seed);

// Fresh origin state for a network (the context switch between networks).
tgnn::ModelState reset_context(const tgnn::TemporalModel& model,
                               int num_nodes);

TrainResult train_single(const TemporalGraph& g, const TrainConfig& cfg,
                         const ModelCheckpoint* resume = nullptr);
TrainResult mint_train(const std::vector<const TemporalGraph*>& graphs,
                       const TrainConfig& cfg,
                       const ModelCheckpoint* resume = nullptr);

// Caches per-day model inputs (features, attention lists, adjacency, label)
// for one network. Snapshot content is read through
// TemporalGraph::snapshot() on first touch of a day, so access
// instrumentation sees exactly which days a consumer used; labels and the
// split come from daily counts only.
class NetworkBundle {
 public:
  NetworkBundle(const TemporalGraph& g, const LabelParams& lp,
                const SplitSpec& sp);
  const tgnn::SnapData& day(int t) const;
  const SplitBounds& split() const { return split_; }
  const TemporalGraph& graph() const { return g_; }
  int num_days() const { return static_cast<int>(g_.num_days()); }
  int num_nodes() const { return g_.num_nodes(); }
  const std::vector<int>& labels() const { return labels_; }

 private:
  const TemporalGraph& g_;
  std::vector<int> labels_;
  SplitBounds split_;
  mutable std::vector<std::optional<tgnn::SnapData>> cache_;
};

// Rebuilds the checkpoint's architecture with its stored weights.
std::unique_ptr<tgnn::TemporalModel> model_from_checkpoint(
    const ModelCheckpoint& ck);

}  // namespace mint::train

#pragma once

// Temporal GNN models over daily snapshots. Two architectures share one
// interface: a recurrent per-node state plus a step function that consumes
// one snapshot and emits the growth probability for that day.
//
//  - "htgn": hyperbolic GNN. Features are projected to the Poincare ball,
//    aggregated with tangent-space attention over snapshot neighbors, mixed
//    with an attention-weighted window of past states, and updated by a GRU
//    acting in the tangent space.
//  - "gclstm": Euclidean baseline. A symmetric-normalized graph convolution
//    feeds per-node LSTM gates.
//
// Steps are expressed on an ad::Tape so the trainer gets exact gradients.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mint/autodiff.hpp"
#include "mint/dtdg.hpp"

namespace mint::tgnn {

using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

inline constexpr int kNodeFeatureDim = 4;
inline constexpr double kProbEps = 1e-7;  // BCE clamp

// Per-node snapshot features: log1p of in-degree, out-degree, in-weight sum,
// out-weight sum. Row count is the full node universe of the graph; nodes
// not yet seen have all-zero rows.
Mat node_features(const Snapshot& s, int num_nodes);

// Graph-level features: raw means of the same four quantities over the
// snapshot's active nodes (nodes incident to at least one edge that day).
// All zeros when the day is empty.
Eigen::RowVectorXd graph_features(const Snapshot& s);

std::vector<int> active_nodes(const Snapshot& s, int num_nodes);

// Attention edge list: for each node i, incoming entries from its distinct
// undirected neighbors in the snapshot; isolated nodes get one self entry so
// every segment is non-empty. Entries are grouped by destination:
// edges [offsets[i], offsets[i+1]) all have dst == i.
struct AttnGraph {
  std::vector<int> src;
  std::vector<int> dst;
  std::vector<int> offsets;  // num_nodes + 1
};
AttnGraph attention_graph(const Snapshot& s, int num_nodes);

// D^-1/2 (A + I) D^-1/2 with symmetrized edge weights, self-loop weight 1.
SpMat norm_adjacency(const Snapshot& s, int num_nodes);

// Everything a model consumes about one day, precomputable and cacheable.
struct SnapData {
  Mat feats;                 // num_nodes x 4
  Eigen::RowVectorXd gfeat;  // 1 x 4
  std::vector<int> active;
  AttnGraph attn;
  SpMat adj;
  int label = -1;  // -1 when the label windows do not fit
  int day = 0;
};
SnapData build_snap_data(const TemporalGraph& g, int day);

struct HyperParams {
  int in_dim = kNodeFeatureDim;
  int dim = 32;
  int hgnn_layers = 1;
  int window = 5;            // past states the temporal attention sees
  double curvature = 1.0;
  double slope = 0.2;        // LeakyReLU slope (attention, activations, MLP)
  int dec_hidden = 32;
};

struct Tensor {
  std::string name;
  Mat value;
};

struct ParamStore {
  std::vector<Tensor> tensors;
  int index(const std::string& name) const;
  const Mat& at(const std::string& name) const;
  Mat& at(const std::string& name);
  std::size_t scalar_count() const;
};

// Recurrent state. parts[] meaning is architecture-private; use the model
// methods to create, carry and advance it.
struct ModelState {
  std::vector<Mat> parts;
};

struct StateVars {
  std::vector<ad::Var> parts;
};

class TemporalModel {
 public:
  static std::unique_ptr<TemporalModel> create(const std::string& arch,
                                               const HyperParams& hp,
                                               std::uint64_t seed);
  virtual ~TemporalModel() = default;

  const std::string& arch() const { return arch_; }
  const HyperParams& hparams() const { return hp_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Fresh state: every node at the origin, no history.
  virtual ModelState initial_state(int num_nodes) const = 0;

  // Carries state across networks (context-switch ablation): rows for the
  // first min(old, new) nodes are copied, extra rows start at the origin.
  virtual ModelState carry_state(const ModelState& prev,
                                 int num_nodes) const = 0;

  struct Step {
    ad::Var prob;  // 1x1 growth probability for this day
    StateVars state;
  };
  virtual Step step(ad::Tape& t, const SnapData& d, const StateVars& state,
                    const std::vector<ad::Var>& pvars) const = 0;

  // Params/state as tape leaves. Training lifts params with gradients and
  // re-lifts state each snapshot (gradients are truncated at day boundaries).
  std::vector<ad::Var> lift_params(ad::Tape& t, bool requires_grad) const;
  StateVars lift_state(ad::Tape& t, const ModelState& s) const;
  ModelState materialize(const StateVars& s) const;

  // Convenience: value-only step (no gradients), advancing the state.
  double step_values(const SnapData& d, ModelState& state) const;

 protected:
  TemporalModel(std::string arch, HyperParams hp)
      : arch_(std::move(arch)), hp_(hp) {}
  std::string arch_;
  HyperParams hp_;
  ParamStore params_;
};

// Shared decoder: pooled embedding (log-mapped first when hyperbolic)
// concatenated with graph features, one hidden layer, sigmoid output.
ad::Var decode(ad::Tape& t, ad::Var emb, bool hyperbolic,
               const SnapData& d, const std::vector<ad::Var>& pvars,
               const ParamStore& ps, const HyperParams& hp);

ad::Var bce_loss(ad::Tape& t, ad::Var prob, int label);

}  // namespace mint::tgnn

#include "mint/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "mint/metrics.hpp"

namespace mint::train {

TrainConfig TrainConfig::single_defaults() {
  TrainConfig c;
  c.mode = "single";
  c.lr = 1.5e-3;
  c.max_epochs = 250;
  c.min_epochs = 100;
  c.patience = 20;
  c.min_delta = 0.05;
  return c;
}

TrainConfig TrainConfig::mint_defaults() {
  TrainConfig c;
  c.mode = "mint";
  c.lr = 1e-4;
  c.max_epochs = 300;
  c.min_epochs = 1;
  c.patience = 30;
  c.min_delta = 0.05;
  return c;
}

void write_epoch_log_csv(std::ostream& out,
                         const std::vector<EpochEntry>& log) {
  out << "epoch,network,train_loss,val_auc,mean_val_auc,seconds\n";
  char buf[160];
  for (const EpochEntry& e : log) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.9g,%.9g,%.9g,%.3f\n", e.epoch,
                  e.network.c_str(), e.train_loss, e.val_auc, e.mean_val_auc,
                  e.seconds);
    out << buf;
  }
}

std::vector<int> shuffle_order(int m, int epoch, std::uint64_t seed) {
  check(m >= 1, "shuffle_order: m must be >= 1");
  // splitmix64 over (seed, epoch) -> per-epoch stream, then Fisher-Yates
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL *
                               (static_cast<std::uint64_t>(epoch) + 1);
  auto next = [&z]() {
    z += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (int i = m - 1; i >= 1; --i) {
    int j = static_cast<int>(next() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

tgnn::ModelState reset_context(const tgnn::TemporalModel& model,
                               int num_nodes) {
  check(num_nodes >= 1, "reset_context: num_nodes must be >= 1");
  return model.initial_state(num_nodes);
}

NetworkBundle::NetworkBundle(const TemporalGraph& g, const LabelParams& lp,
                             const SplitSpec& sp)
    : g_(g),
      labels_(compute_labels(g, lp)),
      split_(chronological_split(g, lp, sp)),
      cache_(g.num_days()) {}

const tgnn::SnapData& NetworkBundle::day(int t) const {
  check(t >= 0 && t < num_days(), "NetworkBundle::day out of range");
  auto& slot = cache_[t];
  if (!slot) {
    slot = tgnn::build_snap_data(g_, t);
    slot->label = labels_[t];
  }
  return *slot;
}

namespace {

void init_adam(AdamState& st, const tgnn::ParamStore& ps) {
  st.m.clear();
  st.v.clear();
  for (const tgnn::Tensor& t : ps.tensors) {
    st.m.push_back(tgnn::Mat::Zero(t.value.rows(), t.value.cols()));
    st.v.push_back(tgnn::Mat::Zero(t.value.rows(), t.value.cols()));
  }
  st.t = 0;
}

void adam_step(AdamState& st, tgnn::ParamStore& ps,
               const std::vector<ad::Var>& pvars, double lr,
               double grad_clip) {
  ++st.t;
  double scale = 1.0;
  if (grad_clip > 0.0) {
    double norm2 = 0.0;
    for (const ad::Var& v : pvars) norm2 += v.grad().squaredNorm();
    double norm = std::sqrt(norm2);
    if (norm > grad_clip) scale = grad_clip / norm;
  }
  const double b1 = st.hp.beta1, b2 = st.hp.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(st.t));
  for (std::size_t i = 0; i < ps.tensors.size(); ++i) {
    tgnn::Mat g = scale * pvars[i].grad();
    st.m[i] = b1 * st.m[i] + (1.0 - b1) * g;
    st.v[i] = b2 * st.v[i] + (1.0 - b2) * g.cwiseProduct(g);
    tgnn::Mat mhat = st.m[i] / bc1;
    tgnn::Mat vhat = st.v[i] / bc2;
    ps.tensors[i].value.array() -=
        lr * mhat.array() / (vhat.array().sqrt() + st.hp.eps);
  }
}

double safe_auc(const std::vector<int>& labels,
                const std::vector<double>& probs) {
  try {
    return eval::roc_auc(labels, probs);
  } catch (const Error&) {
    return 0.5;  // single-class validation window
  }
}

void validate_config(const TrainConfig& cfg) {
  check(cfg.mode == "single" || cfg.mode == "mint",
        "config: mode must be single or mint");
  check(cfg.model == "htgn" || cfg.model == "gclstm",
        "config: model must be htgn or gclstm");
  check(cfg.lr > 0.0, "config: learning_rate must be > 0");
  check(cfg.min_epochs <= cfg.max_epochs,
        "config: min_epochs must be <= max_epochs");
  check(cfg.patience >= 1, "config: patience must be >= 1");
  check(cfg.max_epochs >= 0, "config: max_epochs must be >= 0");
  check(cfg.arch.in_dim == tgnn::kNodeFeatureDim,
        "config: feature dimension must be " +
            std::to_string(tgnn::kNodeFeatureDim));
}

std::vector<ValRecord> validation_records(
    const tgnn::TemporalModel& model,
    const std::vector<const TemporalGraph*>& graphs,
    const std::vector<NetworkBundle>& bundles) {
  std::vector<ValRecord> out;
  for (std::size_t ni = 0; ni < graphs.size(); ++ni) {
    const NetworkBundle& b = bundles[ni];
    ValRecord rec;
    rec.network = graphs[ni]->name();
    tgnn::ModelState state = model.initial_state(b.num_nodes());
    for (int day = 0; day < b.split().val_end; ++day) {
      const tgnn::SnapData& sd = b.day(day);
      double p = model.step_values(sd, state);
      if (day >= b.split().train_end && sd.label >= 0) {
        rec.days.push_back(day);
        rec.probs.push_back(p);
        rec.labels.push_back(sd.label);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

TrainResult run_training(const std::vector<const TemporalGraph*>& graphs,
                         const TrainConfig& cfg,
                         const ModelCheckpoint* resume) {
  validate_config(cfg);
  check(!graphs.empty(), "training: no networks given");
  const int m = static_cast<int>(graphs.size());
  std::vector<std::string> roster;
  {
    std::unordered_set<std::string> seen;
    for (const TemporalGraph* g : graphs) {
      check(g != nullptr, "training: null graph");
      check(seen.insert(g->name()).second,
            "training: duplicate network " + g->name());
      roster.push_back(g->name());
    }
  }

  std::vector<NetworkBundle> bundles;
  bundles.reserve(graphs.size());
  for (const TemporalGraph* g : graphs)
    bundles.emplace_back(*g, cfg.labels, cfg.split);

  auto model = tgnn::TemporalModel::create(cfg.model, cfg.arch, cfg.seed);

  AdamState adam;
  init_adam(adam, model->params());
  int epochs_done = 0;
  int stale = 0;
  double es_reference = -1.0;  // < 0 means unset
  int best_epoch = -1;
  double best_mean = -1.0;
  tgnn::ParamStore best_params = model->params();

  if (resume) {
    check(resume->architecture == cfg.model,
          "resume: checkpoint architecture '" + resume->architecture +
              "' does not match configured model '" + cfg.model + "'");
    check(resume->roster == roster, "resume: network roster differs");
    check(resume->params.tensors.size() == model->params().tensors.size(),
          "resume: parameter layout differs");
    model->params() = resume->last_params;
    best_params = resume->params;
    adam = resume->adam;
    epochs_done = resume->epochs_run;
    stale = resume->stale_epochs;
    es_reference = resume->es_reference;
    best_epoch = resume->best_epoch;
    best_mean = resume->best_epoch >= 0 ? resume->best_mean_val_auc : -1.0;
  }

  std::vector<EpochEntry> log;
  for (int epoch = epochs_done + 1; epoch <= cfg.max_epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (!cfg.ablate_shuffle) order = shuffle_order(m, epoch, cfg.seed);

    std::vector<double> net_loss(m, 0.0), net_auc(m, 0.5);
    tgnn::ModelState carry;
    bool have_carry = false;  // context carries within an epoch only

    for (int pos = 0; pos < m; ++pos) {
      const int ni = order[pos];
      const NetworkBundle& b = bundles[ni];
      tgnn::ModelState state =
          (cfg.ablate_context_switch && have_carry)
              ? model->carry_state(carry, b.num_nodes())
              : reset_context(*model, b.num_nodes());

      double loss_sum = 0.0;
      int loss_n = 0;
      for (int day = 0; day < b.split().train_end; ++day) {
        const tgnn::SnapData& sd = b.day(day);
        if (sd.label >= 0) {
          ad::Tape tape;
          std::vector<ad::Var> pvars = model->lift_params(tape, true);
          tgnn::StateVars sv = model->lift_state(tape, state);
          tgnn::TemporalModel::Step st = model->step(tape, sd, sv, pvars);
          ad::Var loss = tgnn::bce_loss(tape, st.prob, sd.label);
          tape.backward(loss);
          adam_step(adam, model->params(), pvars, cfg.lr, cfg.grad_clip);
          state = model->materialize(st.state);
          loss_sum += loss.val()(0, 0);
          ++loss_n;
        } else {
          model->step_values(sd, state);  // state evolves, no update
        }
      }

      std::vector<double> vprobs;
      std::vector<int> vlabels;
      for (int day = b.split().train_end; day < b.split().val_end; ++day) {
        const tgnn::SnapData& sd = b.day(day);
        double p = model->step_values(sd, state);
        if (sd.label >= 0) {
          vprobs.push_back(p);
          vlabels.push_back(sd.label);
        }
      }
      net_loss[ni] = loss_n > 0 ? loss_sum / loss_n : 0.0;
      net_auc[ni] = safe_auc(vlabels, vprobs);
      carry = std::move(state);
      have_carry = true;
    }

    double mean_val =
        std::accumulate(net_auc.begin(), net_auc.end(), 0.0) / m;
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    // rows in visit order, so the log also records the epoch's shuffle
    for (int pos = 0; pos < m; ++pos) {
      const int ni = order[pos];
      log.push_back({epoch, roster[ni], net_loss[ni], net_auc[ni], mean_val,
                     seconds});
    }

    if (mean_val > best_mean) {
      best_mean = mean_val;
      best_epoch = epoch;
      best_params = model->params();
    }
    if (es_reference < 0.0 || mean_val > es_reference + cfg.min_delta) {
      es_reference = mean_val;
      stale = 0;
    } else {
      ++stale;
    }
    epochs_done = epoch;
    if (stale >= cfg.patience && epoch >= cfg.min_epochs) break;
  }

  TrainResult res;
  ModelCheckpoint& ck = res.checkpoint;
  ck.architecture = cfg.model;
  ck.arch = cfg.arch;
  ck.config = cfg;
  ck.roster = roster;
  ck.best_epoch = best_epoch;
  ck.best_mean_val_auc = best_mean >= 0.0 ? best_mean : 0.0;
  ck.last_params = model->params();
  ck.adam = adam;
  ck.epochs_run = epochs_done;
  ck.stale_epochs = stale;
  ck.es_reference = es_reference;

  model->params() = best_params;
  ck.params = std::move(best_params);
  ck.val_records = validation_records(*model, graphs, bundles);
  res.log = std::move(log);
  return res;
}

}  // namespace

TrainResult train_single(const TemporalGraph& g, const TrainConfig& cfg,
                         const ModelCheckpoint* resume) {
  check(cfg.mode == "single", "train_single: config mode must be 'single'");
  return run_training({&g}, cfg, resume);
}

TrainResult mint_train(const std::vector<const TemporalGraph*>& graphs,
                       const TrainConfig& cfg, const ModelCheckpoint* resume) {
  check(cfg.mode == "mint", "mint_train: config mode must be 'mint'");
  return run_training(graphs, cfg, resume);
}

std::unique_ptr<tgnn::TemporalModel> model_from_checkpoint(
    const ModelCheckpoint& ck) {
  auto model = tgnn::TemporalModel::create(ck.architecture, ck.arch, 0);
  tgnn::ParamStore& ps = model->params();
  check(ps.tensors.size() == ck.params.tensors.size(),
        "checkpoint: parameter layout does not match architecture");
  for (std::size_t i = 0; i < ps.tensors.size(); ++i) {
    const tgnn::Tensor& src = ck.params.tensors[i];
    check(ps.tensors[i].name == src.name &&
              ps.tensors[i].value.rows() == src.value.rows() &&
              ps.tensors[i].value.cols() == src.value.cols(),
          "checkpoint: tensor mismatch at " + ps.tensors[i].name);
    ps.tensors[i].value = src.value;
  }
  return model;
}

}  // namespace mint::train

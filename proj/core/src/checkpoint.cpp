#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mint/training.hpp"

// Checkpoint container: versioned JSON. Doubles are emitted with
// shortest-roundtrip formatting, so save/load is lossless and two identical
// training runs produce byte-identical files (no wall times in here).

namespace mint::train {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ordered_json mat_to_json(const tgnn::Mat& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = std::move(data);
  return j;
}

tgnn::Mat mat_from_json(const ordered_json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  check(rows >= 0 && cols >= 0 &&
            static_cast<Eigen::Index>(data.size()) == rows * cols,
        "checkpoint: matrix payload size mismatch");
  tgnn::Mat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++];
  return m;
}

ordered_json params_to_json(const tgnn::ParamStore& ps) {
  ordered_json j = ordered_json::array();
  for (const tgnn::Tensor& t : ps.tensors) {
    ordered_json e = mat_to_json(t.value);
    e["name"] = t.name;
    j.push_back(std::move(e));
  }
  return j;
}

tgnn::ParamStore params_from_json(const ordered_json& j) {
  tgnn::ParamStore ps;
  for (const ordered_json& e : j)
    ps.tensors.push_back({e.at("name").get<std::string>(), mat_from_json(e)});
  return ps;
}

ordered_json config_to_json(const TrainConfig& c) {
  ordered_json j;
  j["mode"] = c.mode;
  j["model"] = c.model;
  j["arch"] = {{"in_dim", c.arch.in_dim},
               {"dim", c.arch.dim},
               {"hgnn_layers", c.arch.hgnn_layers},
               {"window", c.arch.window},
               {"curvature", c.arch.curvature},
               {"slope", c.arch.slope},
               {"dec_hidden", c.arch.dec_hidden}};
  j["labels"] = {{"window", c.labels.window},
                 {"horizon_start", c.labels.horizon_start},
                 {"horizon_end", c.labels.horizon_end}};
  j["split"] = {{"train_frac", c.split.train_frac},
                {"val_frac", c.split.val_frac}};
  j["lr"] = c.lr;
  j["max_epochs"] = c.max_epochs;
  j["min_epochs"] = c.min_epochs;
  j["patience"] = c.patience;
  j["min_delta"] = c.min_delta;
  j["grad_clip"] = c.grad_clip;
  j["seed"] = c.seed;
  j["ablate_shuffle"] = c.ablate_shuffle;
  j["ablate_context_switch"] = c.ablate_context_switch;
  return j;
}

TrainConfig config_from_json(const ordered_json& j) {
  TrainConfig c;
  c.mode = j.at("mode").get<std::string>();
  c.model = j.at("model").get<std::string>();
  const ordered_json& a = j.at("arch");
  c.arch.in_dim = a.at("in_dim").get<int>();
  c.arch.dim = a.at("dim").get<int>();
  c.arch.hgnn_layers = a.at("hgnn_layers").get<int>();
  c.arch.window = a.at("window").get<int>();
  c.arch.curvature = a.at("curvature").get<double>();
  c.arch.slope = a.at("slope").get<double>();
  c.arch.dec_hidden = a.at("dec_hidden").get<int>();
  const ordered_json& l = j.at("labels");
  c.labels.window = l.at("window").get<int>();
  c.labels.horizon_start = l.at("horizon_start").get<int>();
  c.labels.horizon_end = l.at("horizon_end").get<int>();
  const ordered_json& s = j.at("split");
  c.split.train_frac = s.at("train_frac").get<double>();
  c.split.val_frac = s.at("val_frac").get<double>();
  c.lr = j.at("lr").get<double>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.min_epochs = j.at("min_epochs").get<int>();
  c.patience = j.at("patience").get<int>();
  c.min_delta = j.at("min_delta").get<double>();
  c.grad_clip = j.at("grad_clip").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.ablate_shuffle = j.at("ablate_shuffle").get<bool>();
  c.ablate_context_switch = j.at("ablate_context_switch").get<bool>();
  return c;
}

}  // namespace

void save_checkpoint(const ModelCheckpoint& ck, const std::string& path) {
  ordered_json j;
  j["kind"] = "model-checkpoint";
  j["format_version"] = ck.format_version;
  j["architecture"] = ck.architecture;
  j["config"] = config_to_json(ck.config);
  j["roster"] = ck.roster;
  j["best_epoch"] = ck.best_epoch;
  j["best_mean_val_auc"] = ck.best_mean_val_auc;
  j["params"] = params_to_json(ck.params);

  ordered_json resume;
  resume["last_params"] = params_to_json(ck.last_params);
  ordered_json adam;
  adam["beta1"] = ck.adam.hp.beta1;
  adam["beta2"] = ck.adam.hp.beta2;
  adam["eps"] = ck.adam.hp.eps;
  adam["t"] = ck.adam.t;
  ordered_json ms = ordered_json::array(), vs = ordered_json::array();
  for (const tgnn::Mat& m : ck.adam.m) ms.push_back(mat_to_json(m));
  for (const tgnn::Mat& v : ck.adam.v) vs.push_back(mat_to_json(v));
  adam["m"] = std::move(ms);
  adam["v"] = std::move(vs);
  resume["adam"] = std::move(adam);
  resume["epochs_run"] = ck.epochs_run;
  resume["stale_epochs"] = ck.stale_epochs;
  resume["es_reference"] = ck.es_reference;
  j["resume"] = std::move(resume);

  ordered_json recs = ordered_json::array();
  for (const ValRecord& r : ck.val_records) {
    recs.push_back({{"network", r.network},
                    {"days", r.days},
                    {"probs", r.probs},
                    {"labels", r.labels}});
  }
  j["val_records"] = std::move(recs);

  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  check(out.good(), "cannot write checkpoint: " + path);
  out << j.dump(2) << '\n';
  check(out.good(), "error while writing checkpoint: " + path);
}

ModelCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot open checkpoint: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(path + ": corrupt checkpoint: " + e.what());
  }
  check(j.value("kind", "") == "model-checkpoint",
        path + ": not a model checkpoint");
  ModelCheckpoint ck;
  ck.format_version = j.at("format_version").get<int>();
  check(ck.format_version == 1,
        path + ": unsupported checkpoint format version " +
            std::to_string(ck.format_version));
  ck.architecture = j.at("architecture").get<std::string>();
  ck.config = config_from_json(j.at("config"));
  ck.arch = ck.config.arch;
  ck.roster = j.at("roster").get<std::vector<std::string>>();
  ck.best_epoch = j.at("best_epoch").get<int>();
  ck.best_mean_val_auc = j.at("best_mean_val_auc").get<double>();
  ck.params = params_from_json(j.at("params"));

  const ordered_json& resume = j.at("resume");
  ck.last_params = params_from_json(resume.at("last_params"));
  const ordered_json& adam = resume.at("adam");
  ck.adam.hp.beta1 = adam.at("beta1").get<double>();
  ck.adam.hp.beta2 = adam.at("beta2").get<double>();
  ck.adam.hp.eps = adam.at("eps").get<double>();
  ck.adam.t = adam.at("t").get<std::int64_t>();
  for (const ordered_json& e : adam.at("m"))
    ck.adam.m.push_back(mat_from_json(e));
  for (const ordered_json& e : adam.at("v"))
    ck.adam.v.push_back(mat_from_json(e));
  ck.epochs_run = resume.at("epochs_run").get<int>();
  ck.stale_epochs = resume.at("stale_epochs").get<int>();
  ck.es_reference = resume.at("es_reference").get<double>();

  for (const ordered_json& e : j.at("val_records")) {
    ValRecord r;
    r.network = e.at("network").get<std::string>();
    r.days = e.at("days").get<std::vector<int>>();
    r.probs = e.at("probs").get<std::vector<double>>();
    r.labels = e.at("labels").get<std::vector<int>>();
    ck.val_records.push_back(std::move(r));
  }
  return ck;
}

}  // namespace mint::train

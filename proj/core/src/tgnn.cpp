#include "mint/tgnn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <unordered_map>

#include "mint/hyperbolic.hpp"

namespace mint::tgnn {

Mat node_features(const Snapshot& s, int num_nodes) {
  Mat raw = Mat::Zero(num_nodes, kNodeFeatureDim);
  for (const Edge& e : s.edges) {
    check(e.src >= 0 && e.src < num_nodes && e.dst >= 0 && e.dst < num_nodes,
          "node_features: edge endpoint out of range");
    raw(e.dst, 0) += 1.0;       // in-degree
    raw(e.src, 1) += 1.0;       // out-degree
    raw(e.dst, 2) += e.weight;  // in-weight
    raw(e.src, 3) += e.weight;  // out-weight
  }
  return raw.unaryExpr([](double v) { return std::log1p(v); });
}

Eigen::RowVectorXd graph_features(const Snapshot& s) {
  Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(kNodeFeatureDim);
  std::unordered_map<int, std::array<double, 4>> acc;
  for (const Edge& e : s.edges) {
    auto& ad = acc[e.dst];
    auto& as = acc[e.src];
    ad[0] += 1.0;
    as[1] += 1.0;
    ad[2] += e.weight;
    as[3] += e.weight;
  }
  if (acc.empty()) return g;
  for (const auto& [node, v] : acc)
    for (int j = 0; j < 4; ++j) g(j) += v[j];
  g /= static_cast<double>(acc.size());
  return g;
}

std::vector<int> active_nodes(const Snapshot& s, int num_nodes) {
  std::vector<char> hit(num_nodes, 0);
  for (const Edge& e : s.edges) {
    check(e.src >= 0 && e.src < num_nodes && e.dst >= 0 && e.dst < num_nodes,
          "active_nodes: edge endpoint out of range");
    hit[e.src] = 1;
    hit[e.dst] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < num_nodes; ++i)
    if (hit[i]) out.push_back(i);
  return out;
}

AttnGraph attention_graph(const Snapshot& s, int num_nodes) {
  std::vector<std::vector<int>> nbr(num_nodes);
  for (const Edge& e : s.edges) {
    if (e.src == e.dst) continue;  // data self-loops do not add neighbors
    nbr[e.src].push_back(e.dst);
    nbr[e.dst].push_back(e.src);
  }
  AttnGraph a;
  a.offsets.reserve(num_nodes + 1);
  a.offsets.push_back(0);
  for (int i = 0; i < num_nodes; ++i) {
    auto& n = nbr[i];
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    if (n.empty()) {
      a.src.push_back(i);  // keep the softmax segment non-empty
      a.dst.push_back(i);
    } else {
      for (int j : n) {
        a.src.push_back(j);
        a.dst.push_back(i);
      }
    }
    a.offsets.push_back(static_cast<int>(a.src.size()));
  }
  return a;
}

SpMat norm_adjacency(const Snapshot& s, int num_nodes) {
  // symmetrized weights: total weight between u and v in either direction
  std::unordered_map<std::int64_t, double> w;
  auto key = [](int u, int v) {
    return (static_cast<std::int64_t>(std::min(u, v)) << 32) |
           static_cast<std::uint32_t>(std::max(u, v));
  };
  for (const Edge& e : s.edges) w[key(e.src, e.dst)] += e.weight;

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd deg = Eigen::VectorXd::Ones(num_nodes);  // self-loop weight
  for (const auto& [k, val] : w) {
    int u = static_cast<int>(k >> 32);
    int v = static_cast<int>(k & 0xffffffff);
    if (u == v) {
      deg(u) += val;
    } else {
      deg(u) += val;
      deg(v) += val;
    }
  }
  Eigen::VectorXd dinv = deg.array().rsqrt();
  for (const auto& [k, val] : w) {
    int u = static_cast<int>(k >> 32);
    int v = static_cast<int>(k & 0xffffffff);
    if (u == v) {
      trip.emplace_back(u, u, val * dinv(u) * dinv(u));
    } else {
      trip.emplace_back(u, v, val * dinv(u) * dinv(v));
      trip.emplace_back(v, u, val * dinv(u) * dinv(v));
    }
  }
  for (int i = 0; i < num_nodes; ++i)
    trip.emplace_back(i, i, dinv(i) * dinv(i));
  SpMat m(num_nodes, num_nodes);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SnapData build_snap_data(const TemporalGraph& g, int day) {
  const Snapshot& s = g.snapshot(day);
  SnapData d;
  d.feats = node_features(s, g.num_nodes());
  d.gfeat = graph_features(s);
  d.active = active_nodes(s, g.num_nodes());
  d.attn = attention_graph(s, g.num_nodes());
  d.adj = norm_adjacency(s, g.num_nodes());
  d.day = day;
  return d;
}

int ParamStore::index(const std::string& name) const {
  for (std::size_t i = 0; i < tensors.size(); ++i)
    if (tensors[i].name == name) return static_cast<int>(i);
  return -1;
}

const Mat& ParamStore::at(const std::string& name) const {
  int i = index(name);
  check(i >= 0, "ParamStore: no tensor named " + name);
  return tensors[i].value;
}

Mat& ParamStore::at(const std::string& name) {
  int i = index(name);
  check(i >= 0, "ParamStore: no tensor named " + name);
  return tensors[i].value;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const Tensor& t : tensors) n += t.value.size();
  return n;
}

namespace {

// Glorot-uniform init, deterministic in (seed, registration order).
class ParamBuilder {
 public:
  ParamBuilder(ParamStore& ps, std::uint64_t seed) : ps_(ps), rng_(seed) {}

  void weight(const std::string& name, int rows, int cols) {
    double lim = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> u(-lim, lim);
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng_);
    ps_.tensors.push_back({name, std::move(m)});
  }

  void zeros(const std::string& name, int rows, int cols) {
    ps_.tensors.push_back({name, Mat::Zero(rows, cols)});
  }

 private:
  ParamStore& ps_;
  std::mt19937_64 rng_;
};

// pvars accessor bound to a store's layout
struct PV {
  const ParamStore& ps;
  const std::vector<ad::Var>& pvars;
  ad::Var operator()(const std::string& name) const {
    int i = ps.index(name);
    check(i >= 0 && i < static_cast<int>(pvars.size()),
          "missing param var " + name);
    return pvars[i];
  }
};

Mat resize_rows(const Mat& m, int rows) {
  Mat out = Mat::Zero(rows, m.cols());
  int copy = std::min<int>(rows, static_cast<int>(m.rows()));
  out.topRows(copy) = m.topRows(copy);
  return out;
}

class Htgn final : public TemporalModel {
 public:
  Htgn(const HyperParams& hp, std::uint64_t seed) : TemporalModel("htgn", hp) {
    check(hp.dim >= 1 && hp.window >= 1 && hp.hgnn_layers >= 1,
          "htgn: dim, window, hgnn_layers must be >= 1");
    ParamBuilder b(params_, seed);
    b.weight("in.w", hp.dim, hp.in_dim);
    b.zeros("in.b", 1, hp.dim);
    for (int l = 0; l < hp.hgnn_layers; ++l) {
      std::string p = "hgnn" + std::to_string(l);
      b.weight(p + ".w", hp.dim, hp.dim);
      b.zeros(p + ".b", 1, hp.dim);  // tangent-space bias
      b.weight(p + ".a1", hp.dim, 1);
      b.weight(p + ".a2", hp.dim, 1);
    }
    b.weight("hta.wa", hp.dim, hp.dim);
    b.weight("hta.q", hp.dim, 1);
    for (const char* g : {"z", "r", "h"}) {
      b.weight(std::string("gru.w") + g, hp.dim, hp.dim);
      b.weight(std::string("gru.u") + g, hp.dim, hp.dim);
    }
    b.weight("dec.w1", hp.dec_hidden, hp.dim + kNodeFeatureDim);
    b.zeros("dec.b1", 1, hp.dec_hidden);
    b.weight("dec.w2", 1, hp.dec_hidden);
    b.zeros("dec.b2", 1, 1);
  }

  // parts[0]: current embeddings; parts[1..]: attention window, oldest first
  ModelState initial_state(int num_nodes) const override {
    ModelState s;
    s.parts.push_back(Mat::Zero(num_nodes, hp_.dim));
    return s;
  }

  ModelState carry_state(const ModelState& prev, int num_nodes) const override {
    ModelState s;
    for (const Mat& p : prev.parts) s.parts.push_back(resize_rows(p, num_nodes));
    return s;
  }

  Step step(ad::Tape& t, const SnapData& d, const StateVars& state,
            const std::vector<ad::Var>& pvars) const override {
    const double c = hp_.curvature;
    const double slope = hp_.slope;
    PV p{params_, pvars};

    ad::Var x = t.leaf(d.feats);
    ad::Var h = t.exp_map0(ad::affine(t, x, p("in.w"), p("in.b")), c);

    for (int l = 0; l < hp_.hgnn_layers; ++l) {
      std::string pre = "hgnn" + std::to_string(l);
      ad::Var u_in = t.log_map0(h, c);
      ad::Var core = t.exp_map0(t.matmul_t(u_in, p(pre + ".w")), c);
      ad::Var bias = t.exp_map0(p(pre + ".b"), c);
      ad::Var m = t.mobius_add_bcast(core, bias, c);
      ad::Var u = t.log_map0(m, c);
      ad::Var s1 = t.gather_rows(t.matmul(u, p(pre + ".a1")), d.attn.dst);
      ad::Var s2 = t.gather_rows(t.matmul(u, p(pre + ".a2")), d.attn.src);
      ad::Var score = t.leaky_relu(t.add(s1, s2), slope);
      ad::Var alpha = t.segment_softmax(score, d.attn.offsets);
      ad::Var msg = t.gather_rows(u, d.attn.src);
      ad::Var agg =
          t.segment_sum_rows(t.cwise_mul_col(alpha, msg), d.attn.offsets);
      h = t.exp_map0(t.leaky_relu(agg, slope), c);
    }

    // temporal attention over the stored window (padded with the newest
    // state so short histories weight what exists)
    std::vector<ad::Var> window(state.parts.begin() + 1, state.parts.end());
    if (window.empty()) window.push_back(state.parts[0]);
    while (static_cast<int>(window.size()) < hp_.window)
      window.push_back(window.back());
    std::vector<ad::Var> tangents, scores;
    for (ad::Var wk : window) {
      ad::Var uk = t.log_map0(wk, c);
      tangents.push_back(uk);
      scores.push_back(t.matmul(t.tanh_(t.matmul_t(uk, p("hta.wa"))),
                                p("hta.q")));
    }
    ad::Var beta = t.softmax_rows(t.concat_cols(scores));
    ad::Var hist_tan = t.cwise_mul_col(t.col(beta, 0), tangents[0]);
    for (int k = 1; k < hp_.window; ++k)
      hist_tan =
          t.add(hist_tan, t.cwise_mul_col(t.col(beta, k), tangents[k]));

    // gated update in the tangent space
    ad::Var xg = t.log_map0(h, c);
    ad::Var hh = hist_tan;
    ad::Var pz = t.sigmoid(
        t.add(t.matmul_t(xg, p("gru.wz")), t.matmul_t(hh, p("gru.uz"))));
    ad::Var pr = t.sigmoid(
        t.add(t.matmul_t(xg, p("gru.wr")), t.matmul_t(hh, p("gru.ur"))));
    ad::Var htil = t.tanh_(t.add(t.matmul_t(xg, p("gru.wh")),
                                 t.matmul_t(t.mul(pr, hh), p("gru.uh"))));
    ad::Var hnew_tan =
        t.add(t.mul(t.rsub_scalar(1.0, pz), htil), t.mul(pz, hh));
    ad::Var hout = t.exp_map0(hnew_tan, c);

    Step out;
    out.prob = decode(t, hout, /*hyperbolic=*/true, d, pvars, params_, hp_);
    out.state.parts.push_back(hout);
    std::vector<ad::Var> new_window(state.parts.begin() + 1,
                                    state.parts.end());
    new_window.push_back(hout);
    while (static_cast<int>(new_window.size()) > hp_.window)
      new_window.erase(new_window.begin());
    for (ad::Var wv : new_window) out.state.parts.push_back(wv);
    return out;
  }
};

class Gclstm final : public TemporalModel {
 public:
  Gclstm(const HyperParams& hp, std::uint64_t seed)
      : TemporalModel("gclstm", hp) {
    check(hp.dim >= 1, "gclstm: dim must be >= 1");
    ParamBuilder b(params_, seed);
    b.weight("conv.w", hp.dim, hp.in_dim);
    for (const char* g : {"i", "f", "o", "g"}) {
      b.weight(std::string("lstm.w") + g, hp.dim, hp.dim);
      b.weight(std::string("lstm.u") + g, hp.dim, hp.dim);
      b.zeros(std::string("lstm.b") + g, 1, hp.dim);
    }
    b.weight("dec.w1", hp.dec_hidden, hp.dim + kNodeFeatureDim);
    b.zeros("dec.b1", 1, hp.dec_hidden);
    b.weight("dec.w2", 1, hp.dec_hidden);
    b.zeros("dec.b2", 1, 1);
  }

  // parts[0]: hidden state; parts[1]: cell state
  ModelState initial_state(int num_nodes) const override {
    ModelState s;
    s.parts.push_back(Mat::Zero(num_nodes, hp_.dim));
    s.parts.push_back(Mat::Zero(num_nodes, hp_.dim));
    return s;
  }

  ModelState carry_state(const ModelState& prev, int num_nodes) const override {
    ModelState s;
    for (const Mat& p : prev.parts) s.parts.push_back(resize_rows(p, num_nodes));
    return s;
  }

  Step step(ad::Tape& t, const SnapData& d, const StateVars& state,
            const std::vector<ad::Var>& pvars) const override {
    PV p{params_, pvars};
    ad::Var x = t.leaf(d.feats);
    ad::Var z = t.matmul_t(t.spmm(&d.adj, x), p("conv.w"));
    ad::Var hprev = state.parts[0];
    ad::Var cprev = state.parts[1];

    auto gate = [&](const char* g) {
      return t.broadcast_add_row(
          t.add(t.matmul_t(z, p(std::string("lstm.w") + g)),
                t.matmul_t(hprev, p(std::string("lstm.u") + g))),
          p(std::string("lstm.b") + g));
    };
    ad::Var gi = t.sigmoid(gate("i"));
    ad::Var gf = t.sigmoid(gate("f"));
    ad::Var go = t.sigmoid(gate("o"));
    ad::Var gg = t.tanh_(gate("g"));
    ad::Var cnew = t.add(t.mul(gf, cprev), t.mul(gi, gg));
    ad::Var hnew = t.mul(go, t.tanh_(cnew));

    Step out;
    out.prob = decode(t, hnew, /*hyperbolic=*/false, d, pvars, params_, hp_);
    out.state.parts = {hnew, cnew};
    return out;
  }
};

}  // namespace

std::unique_ptr<TemporalModel> TemporalModel::create(const std::string& arch,
                                                     const HyperParams& hp,
                                                     std::uint64_t seed) {
  check(hp.in_dim == kNodeFeatureDim,
        "in_dim must be " + std::to_string(kNodeFeatureDim) +
            " (the snapshot feature width)");
  check(hp.dim > 0 && hp.dec_hidden > 0 && hp.hgnn_layers > 0 &&
            hp.window > 0 && hp.curvature > 0.0,
        "model dimensions and curvature must be positive");
  if (arch == "htgn") return std::make_unique<Htgn>(hp, seed);
  if (arch == "gclstm") return std::make_unique<Gclstm>(hp, seed);
  fail("unknown architecture '" + arch + "' (expected htgn or gclstm)");
}

std::vector<ad::Var> TemporalModel::lift_params(ad::Tape& t,
                                                bool requires_grad) const {
  std::vector<ad::Var> out;
  out.reserve(params_.tensors.size());
  for (const Tensor& tensor : params_.tensors)
    out.push_back(t.leaf(tensor.value, requires_grad));
  return out;
}

StateVars TemporalModel::lift_state(ad::Tape& t, const ModelState& s) const {
  StateVars v;
  for (const Mat& p : s.parts) v.parts.push_back(t.leaf(p, false));
  return v;
}

ModelState TemporalModel::materialize(const StateVars& s) const {
  ModelState out;
  for (ad::Var v : s.parts) out.parts.push_back(v.val());
  return out;
}

double TemporalModel::step_values(const SnapData& d, ModelState& state) const {
  ad::Tape t;
  std::vector<ad::Var> pvars = lift_params(t, false);
  Step st = step(t, d, lift_state(t, state), pvars);
  state = materialize(st.state);
  return st.prob.val()(0, 0);
}

ad::Var decode(ad::Tape& t, ad::Var emb, bool hyperbolic, const SnapData& d,
               const std::vector<ad::Var>& pvars, const ParamStore& ps,
               const HyperParams& hp) {
  PV p{ps, pvars};
  ad::Var tan = hyperbolic ? t.log_map0(emb, hp.curvature) : emb;
  ad::Var pooled = t.mean_rows(tan, d.active);
  ad::Var gf = t.leaf(d.gfeat);
  ad::Var zin = t.concat_cols({pooled, gf});
  ad::Var hid =
      t.leaky_relu(ad::affine(t, zin, p("dec.w1"), p("dec.b1")), hp.slope);
  return t.sigmoid(ad::affine(t, hid, p("dec.w2"), p("dec.b2")));
}

ad::Var bce_loss(ad::Tape& t, ad::Var prob, int label) {
  check(label == 0 || label == 1, "bce_loss: label must be 0 or 1");
  return t.bce(prob, static_cast<double>(label), kProbEps);
}

}  // namespace mint::tgnn

#include "mint/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

namespace mint::eval {

PredictionSeries zero_shot_infer(const train::ModelCheckpoint& ck,
                                 const TemporalGraph& g) {
  auto model = train::model_from_checkpoint(ck);
  train::NetworkBundle bundle(g, ck.config.labels, ck.config.split);
  const SplitBounds& sp = bundle.split();

  PredictionSeries out;
  out.network = g.name();
  out.method = "zero-shot-" + ck.architecture;
  out.network_in_roster =
      std::find(ck.roster.begin(), ck.roster.end(), g.name()) !=
      ck.roster.end();

  // warm-up: train+val days only, state adapts, weights frozen
  tgnn::ModelState state = model->initial_state(bundle.num_nodes());
  for (int day = 0; day < sp.val_end; ++day)
    model->step_values(bundle.day(day), state);

  for (int day = sp.val_end; day <= sp.last_labeled; ++day) {
    const tgnn::SnapData& sd = bundle.day(day);
    double p = model->step_values(sd, state);
    if (sd.label >= 0) {
      out.days.push_back(day);
      out.probs.push_back(p);
      out.labels.push_back(sd.label);
    }
  }
  return out;
}

PredictionSeries persistence_forecast(const TemporalGraph& g,
                                      const LabelParams& lp,
                                      const SplitSpec& sp) {
  const std::vector<int> labels = compute_labels(g, lp);
  const SplitBounds bounds = chronological_split(g, lp, sp);
  const std::vector<std::int64_t>& counts = g.daily_edge_counts();
  const int n = lp.window;

  PredictionSeries out;
  out.network = g.name();
  out.method = "persistence";
  auto window_count = [&](int lo, int hi) {  // inclusive
    std::int64_t s = 0;
    for (int d = lo; d <= hi; ++d) s += counts[d];
    return s;
  };
  for (int day = bounds.val_end; day <= bounds.last_labeled; ++day) {
    if (labels[day] < 0) continue;
    if (day - 2 * n + 1 < 0) continue;  // not enough history: skip the day
    std::int64_t cur = window_count(day - n + 1, day);
    std::int64_t prev = window_count(day - 2 * n + 1, day - n);
    out.days.push_back(day);
    out.probs.push_back(cur > prev ? 1.0 : 0.0);
    out.labels.push_back(labels[day]);
  }
  return out;
}

EvalReport build_eval_report(const std::vector<PredictionSeries>& series,
                             const std::string& reference_method) {
  check(!series.empty(), "eval report: no prediction series");
  // keyed maps keep method/network order deterministic (first appearance)
  std::vector<std::string> methods, networks;
  auto remember = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  std::map<std::pair<std::string, std::string>, const PredictionSeries*> by;
  for (const PredictionSeries& s : series) {
    remember(methods, s.method);
    remember(networks, s.network);
    auto key = std::make_pair(s.method, s.network);
    check(!by.count(key), "eval report: duplicate series for " + s.method +
                              " on " + s.network);
    by[key] = &s;
  }

  EvalReport rep;
  rep.table.methods = methods;
  rep.table.networks = networks;
  rep.table.values.resize(static_cast<Eigen::Index>(networks.size()),
                          static_cast<Eigen::Index>(methods.size()));
  for (std::size_t ni = 0; ni < networks.size(); ++ni) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      auto it = by.find({methods[mi], networks[ni]});
      check(it != by.end(), "eval report: missing series for " + methods[mi] +
                                " on " + networks[ni]);
      const PredictionSeries& s = *it->second;
      EvalReportRow row;
      row.method = methods[mi];
      row.network = networks[ni];
      row.auc = roc_auc(s.labels, s.probs);
      row.ap = average_precision(s.labels, s.probs);
      rep.table.values(static_cast<Eigen::Index>(ni),
                       static_cast<Eigen::Index>(mi)) = row.auc;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.summary = rank_aggregate(rep.table);
  rep.reference_method = reference_method;
  for (const std::string& m : methods)
    rep.win_ratios.push_back(win_ratio(rep.table, m, reference_method));
  return rep;
}

void write_metrics_csv(std::ostream& out, const EvalReport& rep) {
  out << "method,network,auc,ap\n";
  char buf[64];
  for (const EvalReportRow& r : rep.rows) {
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", r.auc, r.ap);
    out << r.method << ',' << r.network << buf;
  }
}

void write_aggregate_csv(std::ostream& out, const EvalReport& rep) {
  out << "method,avg_rank,top_rank,win_ratio\n";
  char buf[64];
  for (std::size_t m = 0; m < rep.table.methods.size(); ++m) {
    std::snprintf(buf, sizeof(buf), ",%.4f,%d,%.4f\n", rep.summary.avg_rank[m],
                  rep.summary.top_rank[m], rep.win_ratios[m]);
    out << rep.table.methods[m] << buf;
  }
}

void write_predictions_csv(std::ostream& out, const PredictionSeries& s) {
  out << "day,probability,label\n";
  char buf[64];
  for (std::size_t i = 0; i < s.days.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.9f,%d\n", s.days[i], s.probs[i],
                  s.labels[i]);
    out << buf;
  }
}

}  // namespace mint::eval

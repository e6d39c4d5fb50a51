#pragma once

// Zero-shot inference and the persistence baseline, plus report emission.

#include <iosfwd>
#include <string>
#include <vector>

#include "mint/dtdg.hpp"
#include "mint/metrics.hpp"
#include "mint/training.hpp"

namespace mint::eval {

// Per labeled test day: the day index, a probability and the true label.
struct PredictionSeries {
  std::string network;
  std::string method;
  std::vector<int> days;
  std::vector<double> probs;
  std::vector<int> labels;
  bool network_in_roster = false;  // set when the graph was a training network
};

// Frozen-weight inference: rebuilds the checkpointed model, warms the
// recurrent state with a no-gradient forward pass over exactly the train+val
// days, then emits probabilities for the labeled test days. Never mutates
// the checkpoint.
PredictionSeries zero_shot_infer(const train::ModelCheckpoint& ck,
                                 const TemporalGraph& g);

// Baseline: predict growth at day t iff the count over [t-n+1, t] strictly
// exceeds the count over [t-2n+1, t-n] (n = lp.window). Test days without
// 2n days of history are skipped. Uses daily counts only.
PredictionSeries persistence_forecast(const TemporalGraph& g,
                                      const LabelParams& lp,
                                      const SplitSpec& sp);

struct EvalReportRow {
  std::string method;
  std::string network;
  double auc = 0.0;
  double ap = 0.0;
};

struct EvalReport {
  std::vector<EvalReportRow> rows;
  RankTable table;  // the same AUCs arranged networks x methods
  RankSummary summary;
  std::vector<double> win_ratios;  // per method, vs reference_method
  std::string reference_method;
};

// Builds rows + rank table from prediction series grouped by (method,
// network); every method must cover the same network set.
EvalReport build_eval_report(const std::vector<PredictionSeries>& series,
                             const std::string& reference_method);

void write_metrics_csv(std::ostream& out, const EvalReport& rep);
void write_aggregate_csv(std::ostream& out, const EvalReport& rep);
void write_predictions_csv(std::ostream& out, const PredictionSeries& s);

}  // namespace mint::eval

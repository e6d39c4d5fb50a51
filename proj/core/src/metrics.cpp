#include "mint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mint::eval {

double roc_auc(const std::vector<int>& labels,
               const std::vector<double>& scores) {
  check(labels.size() == scores.size() && !labels.empty(),
        "roc_auc: labels/scores size mismatch or empty");
  const std::size_t n = labels.size();
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    check(labels[i] == 0 || labels[i] == 1, "roc_auc: labels must be 0/1");
    check(std::isfinite(scores[i]), "roc_auc: non-finite score");
    pos += static_cast<std::size_t>(labels[i]);
  }
  check(pos > 0 && pos < n, "roc_auc: needs both classes");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // midrank sum over positives
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    double midrank = 0.5 * (static_cast<double>(i + 1) +
                            static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      if (labels[idx[k]] == 1) pos_rank_sum += midrank;
    i = j + 1;
  }
  double p = static_cast<double>(pos);
  double q = static_cast<double>(n - pos);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double average_precision(const std::vector<int>& labels,
                         const std::vector<double>& scores) {
  check(labels.size() == scores.size() && !labels.empty(),
        "average_precision: labels/scores size mismatch or empty");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    check(labels[i] == 0 || labels[i] == 1,
          "average_precision: labels must be 0/1");
    pos += static_cast<std::size_t>(labels[i]);
  }
  check(pos > 0, "average_precision: no positive labels");

  std::vector<std::size_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  double hits = 0.0, ap = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (labels[idx[k]] == 1) {
      hits += 1.0;
      ap += hits / static_cast<double>(k + 1);
    }
  }
  return ap / static_cast<double>(pos);
}

RankSummary rank_aggregate(const RankTable& table) {
  const Eigen::Index rows = table.values.rows();
  const Eigen::Index cols = table.values.cols();
  check(rows == static_cast<Eigen::Index>(table.networks.size()) &&
            cols == static_cast<Eigen::Index>(table.methods.size()),
        "rank_aggregate: table shape mismatch");
  check(rows > 0 && cols > 0, "rank_aggregate: empty table");

  RankSummary out;
  out.avg_rank.assign(cols, 0.0);
  out.top_rank.assign(cols, 0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double row_max = table.values.row(r).maxCoeff();
    for (Eigen::Index m = 0; m < cols; ++m) {
      double v = table.values(r, m);
      // rank with midranks: 1 + #better + (#equal - 1)/2
      int better = 0, equal = 0;
      for (Eigen::Index k = 0; k < cols; ++k) {
        if (table.values(r, k) > v) ++better;
        if (table.values(r, k) == v) ++equal;
      }
      out.avg_rank[m] += 1.0 + better + 0.5 * (equal - 1);
      if (v == row_max) ++out.top_rank[m];
    }
  }
  for (double& v : out.avg_rank) v /= static_cast<double>(rows);
  return out;
}

double win_ratio(const RankTable& table, const std::string& method,
                 const std::string& reference) {
  auto find = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.methods.size(); ++i)
      if (table.methods[i] == name) return static_cast<Eigen::Index>(i);
    fail("win_ratio: no method named " + name);
  };
  Eigen::Index a = find(method), b = find(reference);
  check(table.values.rows() > 0, "win_ratio: empty table");
  int wins = 0;
  for (Eigen::Index r = 0; r < table.values.rows(); ++r)
    if (table.values(r, a) > table.values(r, b)) ++wins;
  return static_cast<double>(wins) / static_cast<double>(table.values.rows());
}

double win_ratio(const std::vector<double>& candidate,
                 const std::vector<double>& reference) {
  check(candidate.size() == reference.size() && !candidate.empty(),
        "win_ratio: score vectors must be non-empty and the same length");
  int wins = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i)
    if (candidate[i] > reference[i]) ++wins;
  return static_cast<double>(wins) / static_cast<double>(candidate.size());
}

}  // namespace mint::eval

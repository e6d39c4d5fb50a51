#pragma once

// Ranking metrics and cross-network score aggregation.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mint/common.hpp"

namespace mint::eval {

// Tie-aware ROC-AUC (Mann-Whitney with midranks). Throws unless both
// classes are present.
double roc_auc(const std::vector<int>& labels,
               const std::vector<double>& scores);

// Average precision: scores sorted descending, ties kept in input order.
// Throws if there are no positives.
double average_precision(const std::vector<int>& labels,
                         const std::vector<double>& scores);

// One score (here: test AUC) per network x method.
struct RankTable {
  std::vector<std::string> methods;   // columns
  std::vector<std::string> networks;  // rows
  Eigen::MatrixXd values;             // networks x methods
};

struct RankSummary {
  std::vector<double> avg_rank;  // rank 1 = best, ties get the mean rank
  std::vector<int> top_rank;     // rows where the method equals the row max
};

RankSummary rank_aggregate(const RankTable& table);

// Fraction of rows where `method` strictly beats `reference`.
double win_ratio(const RankTable& table, const std::string& method,
                 const std::string& reference);

// Same over two aligned score vectors.
double win_ratio(const std::vector<double>& candidate,
                 const std::vector<double>& reference);

}  // namespace mint::eval

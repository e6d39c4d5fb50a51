#pragma once

// Minimal reverse-mode tape over Eigen::MatrixXd. One Tape per forward pass;
// Vars are indices into it. Ops record a pull closure that accumulates
// gradients into their parents. Built for small dense models, not generality:
// shapes are validated eagerly, everything is double precision, and the set
// of ops is exactly what the temporal models need.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

#include "mint/common.hpp"

namespace mint::ad {

using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

class Tape;

// Cheap handle into a tape; valid only while the tape lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
  bool defined() const { return tape != nullptr && id >= 0; }
  const Mat& val() const;
  const Mat& grad() const;
  Eigen::Index rows() const { return val().rows(); }
  Eigen::Index cols() const { return val().cols(); }
};

class Tape {
 public:
  Var leaf(Mat value, bool requires_grad = false);

  // elementwise and linear algebra
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);             // Hadamard product
  Var scale(Var a, double s);
  Var rsub_scalar(double s, Var a);  // s - a, elementwise
  Var matmul(Var a, Var b);
  Var matmul_t(Var a, Var b);        // a * b^T (affine layers store W row-major)
  Var tanh_(Var a);
  Var sigmoid(Var a);
  Var leaky_relu(Var a, double slope);

  // structure / indexing
  Var gather_rows(Var a, std::vector<int> idx);
  Var concat_cols(const std::vector<Var>& parts);
  Var col(Var a, int j);
  Var broadcast_add_row(Var a, Var row);        // row is 1 x d
  Var cwise_mul_col(Var colv, Var a);           // scale row i of a by colv(i)
  Var mean_rows(Var a, std::vector<int> rows);  // 1 x d; empty set -> zeros
  Var sum(Var a);                               // 1 x 1
  Var softmax_rows(Var a);

  // segmented ops over edge lists; offsets has S+1 entries, segment s covers
  // rows [offsets[s], offsets[s+1]) and must be non-empty
  Var segment_softmax(Var scores, std::vector<int> offsets);  // scores E x 1
  Var segment_sum_rows(Var rows_in, std::vector<int> offsets);

  // lhs is held by pointer: it must outlive the tape (snapshot caches do)
  Var spmm(const SpMat* lhs, Var x);

  // hyperbolic ops; forward results are projected into the ball
  Var exp_map0(Var v, double c);
  Var log_map0(Var y, double c);
  Var mobius_add(Var x, Var y, double c);
  Var mobius_add_bcast(Var x, Var row, double c);  // row 1 x d added to each row

  // binary cross-entropy of a 1x1 probability against a 0/1 target; the
  // probability is clamped to [eps, 1-eps] before the log
  Var bce(Var p, double target, double eps);

  // Seeds root (must be 1x1, requires_grad) with 1 and sweeps the tape.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }

 private:
  // pull(tape, out_id) accumulates out's grad into the parents' grads
  using PullFn = std::function<void(Tape&, int)>;

  struct Node {
    Mat value;
    Mat grad;  // allocated (zero) iff requires_grad
    bool requires_grad = false;
    PullFn pull;
  };
  std::vector<Node> nodes_;
  friend struct Var;

  Var push(Mat value, bool requires_grad, PullFn pull);
  bool rg(Var a) const { return nodes_[a.id].requires_grad; }
  Mat& gref(int id) { return nodes_[id].grad; }
  const Mat& v(int id) const { return nodes_[id].value; }
  void mine(Var a) const;
};

inline const Mat& Var::val() const {
  check(defined(), "Var::val on undefined Var");
  return tape->nodes_[id].value;
}

inline const Mat& Var::grad() const {
  check(defined(), "Var::grad on undefined Var");
  check(tape->nodes_[id].requires_grad, "Var::grad on non-differentiable Var");
  return tape->nodes_[id].grad;
}

// x * W^T + b with W (out x in), b (1 x out)
inline Var affine(Tape& t, Var x, Var w, Var b) {
  return t.broadcast_add_row(t.matmul_t(x, w), b);
}

}  // namespace mint::ad

#include "mint/autodiff.hpp"

#include <cmath>
#include <utility>

#include "mint/hyperbolic.hpp"

namespace mint::ad {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::push(Mat value, bool requires_grad, PullFn pull) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  n.pull = std::move(pull);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::mine(Var a) const {
  check(a.defined() && a.tape == this && a.id < static_cast<int>(nodes_.size()),
        "Var does not belong to this tape");
}

Var Tape::leaf(Mat value, bool requires_grad) {
  check(value.allFinite(), "leaf: non-finite value");
  return push(std::move(value), requires_grad, nullptr);
}

Var Tape::add(Var a, Var b) {
  mine(a);
  mine(b);
  check(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  int ia = a.id, ib = b.id;
  bool r = rg(a) || rg(b);
  return push(v(ia) + v(ib), r, !r ? PullFn{} : [ia, ib](Tape& t, int out) {
    const Mat& g = t.gref(out);
    if (t.nodes_[ia].requires_grad) t.gref(ia) += g;
    if (t.nodes_[ib].requires_grad) t.gref(ib) += g;
  });
}

Var Tape::sub(Var a, Var b) {
  mine(a);
  mine(b);
  check(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
  int ia = a.id, ib = b.id;
  bool r = rg(a) || rg(b);
  return push(v(ia) - v(ib), r, !r ? PullFn{} : [ia, ib](Tape& t, int out) {
    const Mat& g = t.gref(out);
    if (t.nodes_[ia].requires_grad) t.gref(ia) += g;
    if (t.nodes_[ib].requires_grad) t.gref(ib) -= g;
  });
}

Var Tape::mul(Var a, Var b) {
  mine(a);
  mine(b);
  check(a.rows() == b.rows() && a.cols() == b.cols(), "mul: shape mismatch");
  int ia = a.id, ib = b.id;
  bool r = rg(a) || rg(b);
  return push(v(ia).cwiseProduct(v(ib)), r,
              !r ? PullFn{} : [ia, ib](Tape& t, int out) {
                const Mat& g = t.gref(out);
                if (t.nodes_[ia].requires_grad)
                  t.gref(ia) += g.cwiseProduct(t.v(ib));
                if (t.nodes_[ib].requires_grad)
                  t.gref(ib) += g.cwiseProduct(t.v(ia));
              });
}

Var Tape::scale(Var a, double s) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  return push(s * v(ia), r, !r ? PullFn{} : [ia, s](Tape& t, int out) {
    t.gref(ia) += s * t.gref(out);
  });
}

Var Tape::rsub_scalar(double s, Var a) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  return push(Mat::Constant(a.rows(), a.cols(), s) - v(ia), r,
              !r ? PullFn{} : [ia](Tape& t, int out) {
                t.gref(ia) -= t.gref(out);
              });
}

Var Tape::matmul(Var a, Var b) {
  mine(a);
  mine(b);
  check(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  int ia = a.id, ib = b.id;
  bool r = rg(a) || rg(b);
  return push(v(ia) * v(ib), r, !r ? PullFn{} : [ia, ib](Tape& t, int out) {
    const Mat& g = t.gref(out);
    if (t.nodes_[ia].requires_grad) t.gref(ia) += g * t.v(ib).transpose();
    if (t.nodes_[ib].requires_grad) t.gref(ib) += t.v(ia).transpose() * g;
  });
}

Var Tape::matmul_t(Var a, Var b) {
  mine(a);
  mine(b);
  check(a.cols() == b.cols(), "matmul_t: inner dimension mismatch");
  int ia = a.id, ib = b.id;
  bool r = rg(a) || rg(b);
  return push(v(ia) * v(ib).transpose(), r,
              !r ? PullFn{} : [ia, ib](Tape& t, int out) {
                const Mat& g = t.gref(out);
                if (t.nodes_[ia].requires_grad) t.gref(ia) += g * t.v(ib);
                if (t.nodes_[ib].requires_grad)
                  t.gref(ib) += g.transpose() * t.v(ia);
              });
}

Var Tape::tanh_(Var a) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  return push(v(ia).array().tanh().matrix(), r,
              !r ? PullFn{} : [ia](Tape& t, int out) {
                const Mat& y = t.v(out);
                t.gref(ia) += t.gref(out)
                                  .cwiseProduct((1.0 - y.array().square()).matrix());
              });
}

Var Tape::sigmoid(Var a) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  Mat out = v(ia).unaryExpr([](double x) { return stable_sigmoid(x); });
  return push(std::move(out), r, !r ? PullFn{} : [ia](Tape& t, int out_id) {
    const Mat& y = t.v(out_id);
    t.gref(ia) +=
        t.gref(out_id).cwiseProduct((y.array() * (1.0 - y.array())).matrix());
  });
}

Var Tape::leaky_relu(Var a, double slope) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  Mat out = v(ia).unaryExpr(
      [slope](double x) { return x > 0.0 ? x : slope * x; });
  return push(std::move(out), r, !r ? PullFn{} : [ia, slope](Tape& t, int out_id) {
    Mat mask = t.v(ia).unaryExpr(
        [slope](double x) { return x > 0.0 ? 1.0 : slope; });
    t.gref(ia) += t.gref(out_id).cwiseProduct(mask);
  });
}

Var Tape::gather_rows(Var a, std::vector<int> idx) {
  mine(a);
  int ia = a.id;
  for (int i : idx)
    check(i >= 0 && i < a.rows(), "gather_rows: index out of range");
  Mat out(static_cast<Eigen::Index>(idx.size()), a.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(k) = v(ia).row(idx[k]);
  bool r = rg(a);
  return push(std::move(out), r,
              !r ? PullFn{} : [ia, idx = std::move(idx)](Tape& t, int out_id) {
                const Mat& g = t.gref(out_id);
                Mat& ga = t.gref(ia);
                for (std::size_t k = 0; k < idx.size(); ++k)
                  ga.row(idx[k]) += g.row(k);
              });
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  check(!parts.empty(), "concat_cols: no parts");
  Eigen::Index rows = parts[0].rows(), cols = 0;
  bool r = false;
  std::vector<int> ids;
  std::vector<Eigen::Index> widths;
  for (Var p : parts) {
    mine(p);
    check(p.rows() == rows, "concat_cols: row count mismatch");
    ids.push_back(p.id);
    widths.push_back(p.cols());
    cols += p.cols();
    r = r || rg(p);
  }
  Mat out(rows, cols);
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out.middleCols(off, widths[k]) = v(ids[k]);
    off += widths[k];
  }
  return push(std::move(out), r,
              !r ? PullFn{}
                 : [ids, widths](Tape& t, int out_id) {
                     const Mat& g = t.gref(out_id);
                     Eigen::Index o = 0;
                     for (std::size_t k = 0; k < ids.size(); ++k) {
                       if (t.nodes_[ids[k]].requires_grad)
                         t.gref(ids[k]) += g.middleCols(o, widths[k]);
                       o += widths[k];
                     }
                   });
}

Var Tape::col(Var a, int j) {
  mine(a);
  check(j >= 0 && j < a.cols(), "col: index out of range");
  int ia = a.id;
  bool r = rg(a);
  return push(v(ia).col(j), r, !r ? PullFn{} : [ia, j](Tape& t, int out_id) {
    t.gref(ia).col(j) += t.gref(out_id).col(0);
  });
}

Var Tape::broadcast_add_row(Var a, Var row) {
  mine(a);
  mine(row);
  check(row.rows() == 1 && row.cols() == a.cols(),
        "broadcast_add_row: row must be 1 x cols(a)");
  int ia = a.id, ir = row.id;
  bool r = rg(a) || rg(row);
  Mat out = v(ia);
  out.rowwise() += v(ir).row(0);
  return push(std::move(out), r, !r ? PullFn{} : [ia, ir](Tape& t, int out_id) {
    const Mat& g = t.gref(out_id);
    if (t.nodes_[ia].requires_grad) t.gref(ia) += g;
    if (t.nodes_[ir].requires_grad) t.gref(ir) += g.colwise().sum();
  });
}

Var Tape::cwise_mul_col(Var colv, Var a) {
  mine(colv);
  mine(a);
  check(colv.cols() == 1 && colv.rows() == a.rows(),
        "cwise_mul_col: colv must be rows(a) x 1");
  int ic = colv.id, ia = a.id;
  bool r = rg(colv) || rg(a);
  Mat out = v(ia).array().colwise() * v(ic).col(0).array();
  return push(std::move(out), r, !r ? PullFn{} : [ic, ia](Tape& t, int out_id) {
    const Mat& g = t.gref(out_id);
    if (t.nodes_[ic].requires_grad)
      t.gref(ic).col(0) += g.cwiseProduct(t.v(ia)).rowwise().sum();
    if (t.nodes_[ia].requires_grad)
      t.gref(ia) += (g.array().colwise() * t.v(ic).col(0).array()).matrix();
  });
}

Var Tape::mean_rows(Var a, std::vector<int> rows_sel) {
  mine(a);
  int ia = a.id;
  for (int i : rows_sel)
    check(i >= 0 && i < a.rows(), "mean_rows: index out of range");
  Mat out = Mat::Zero(1, a.cols());
  for (int i : rows_sel) out.row(0) += v(ia).row(i);
  if (!rows_sel.empty()) out /= static_cast<double>(rows_sel.size());
  bool r = rg(a) && !rows_sel.empty();
  return push(std::move(out), r,
              !r ? PullFn{}
                 : [ia, rows_sel = std::move(rows_sel)](Tape& t, int out_id) {
                     const Mat& g = t.gref(out_id);
                     double k = static_cast<double>(rows_sel.size());
                     Mat& ga = t.gref(ia);
                     for (int i : rows_sel) ga.row(i) += g.row(0) / k;
                   });
}

Var Tape::sum(Var a) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  Mat out(1, 1);
  out(0, 0) = v(ia).sum();
  return push(std::move(out), r, !r ? PullFn{} : [ia](Tape& t, int out_id) {
    t.gref(ia).array() += t.gref(out_id)(0, 0);
  });
}

Var Tape::softmax_rows(Var a) {
  mine(a);
  int ia = a.id;
  bool r = rg(a);
  Mat out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Eigen::RowVectorXd e = (v(ia).row(i).array() - v(ia).row(i).maxCoeff()).exp();
    out.row(i) = e / e.sum();
  }
  return push(std::move(out), r, !r ? PullFn{} : [ia](Tape& t, int out_id) {
    const Mat& y = t.v(out_id);
    const Mat& g = t.gref(out_id);
    Mat& ga = t.gref(ia);
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      double dot = y.row(i).dot(g.row(i));
      ga.row(i) += (y.row(i).array() * (g.row(i).array() - dot)).matrix();
    }
  });
}

namespace {

void check_offsets(const std::vector<int>& offsets, Eigen::Index n_rows,
                   const char* who) {
  check(offsets.size() >= 2 && offsets.front() == 0 &&
            offsets.back() == static_cast<int>(n_rows),
        std::string(who) + ": bad offsets");
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s)
    check(offsets[s] < offsets[s + 1],
          std::string(who) + ": empty segment");
}

}  // namespace

Var Tape::segment_softmax(Var scores, std::vector<int> offsets) {
  mine(scores);
  check(scores.cols() == 1, "segment_softmax: scores must be E x 1");
  check_offsets(offsets, scores.rows(), "segment_softmax");
  int is = scores.id;
  bool r = rg(scores);
  Mat out(scores.rows(), 1);
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    int lo = offsets[s], hi = offsets[s + 1];
    double m = v(is).col(0).segment(lo, hi - lo).maxCoeff();
    Eigen::VectorXd e = (v(is).col(0).segment(lo, hi - lo).array() - m).exp();
    out.col(0).segment(lo, hi - lo) = e / e.sum();
  }
  return push(std::move(out), r,
              !r ? PullFn{}
                 : [is, offsets = std::move(offsets)](Tape& t, int out_id) {
                     const Mat& y = t.v(out_id);
                     const Mat& g = t.gref(out_id);
                     Mat& gs = t.gref(is);
                     for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
                       int lo = offsets[s], n = offsets[s + 1] - offsets[s];
                       auto ys = y.col(0).segment(lo, n);
                       auto gseg = g.col(0).segment(lo, n);
                       double dot = ys.dot(gseg);
                       gs.col(0).segment(lo, n) +=
                           (ys.array() * (gseg.array() - dot)).matrix();
                     }
                   });
}

Var Tape::segment_sum_rows(Var rows_in, std::vector<int> offsets) {
  mine(rows_in);
  check_offsets(offsets, rows_in.rows(), "segment_sum_rows");
  int ia = rows_in.id;
  bool r = rg(rows_in);
  Mat out(static_cast<Eigen::Index>(offsets.size()) - 1, rows_in.cols());
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    int lo = offsets[s], n = offsets[s + 1] - offsets[s];
    out.row(s) = v(ia).middleRows(lo, n).colwise().sum();
  }
  return push(std::move(out), r,
              !r ? PullFn{}
                 : [ia, offsets = std::move(offsets)](Tape& t, int out_id) {
                     const Mat& g = t.gref(out_id);
                     Mat& ga = t.gref(ia);
                     for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
                       for (int e = offsets[s]; e < offsets[s + 1]; ++e)
                         ga.row(e) += g.row(s);
                     }
                   });
}

Var Tape::spmm(const SpMat* lhs, Var x) {
  check(lhs != nullptr, "spmm: null matrix");
  mine(x);
  check(lhs->cols() == x.rows(), "spmm: inner dimension mismatch");
  int ix = x.id;
  bool r = rg(x);
  return push(Mat(*lhs * v(ix)), r, !r ? PullFn{} : [lhs, ix](Tape& t, int out_id) {
    t.gref(ix) += Mat(lhs->transpose() * t.gref(out_id));
  });
}

Var Tape::exp_map0(Var vin, double c) {
  mine(vin);
  int iv = vin.id;
  bool r = rg(vin);
  return push(hyp::exp0_rows(v(iv), c), r,
              !r ? PullFn{} : [iv, c](Tape& t, int out_id) {
                t.gref(iv) += hyp::exp0_rows_vjp(t.v(iv), t.gref(out_id), c);
              });
}

Var Tape::log_map0(Var y, double c) {
  mine(y);
  int iy = y.id;
  bool r = rg(y);
  return push(hyp::log0_rows(v(iy), c), r,
              !r ? PullFn{} : [iy, c](Tape& t, int out_id) {
                t.gref(iy) += hyp::log0_rows_vjp(t.v(iy), t.gref(out_id), c);
              });
}

Var Tape::mobius_add(Var x, Var y, double c) {
  mine(x);
  mine(y);
  int ix = x.id, iy = y.id;
  bool r = rg(x) || rg(y);
  return push(hyp::mobius_add_rows(v(ix), v(iy), c), r,
              !r ? PullFn{} : [ix, iy, c](Tape& t, int out_id) {
                Mat gx, gy;
                hyp::mobius_add_rows_vjp(t.v(ix), t.v(iy), t.gref(out_id), c,
                                         gx, gy);
                if (t.nodes_[ix].requires_grad) t.gref(ix) += gx;
                if (t.nodes_[iy].requires_grad) t.gref(iy) += gy;
              });
}

Var Tape::mobius_add_bcast(Var x, Var row, double c) {
  mine(x);
  mine(row);
  check(row.rows() == 1 && row.cols() == x.cols(),
        "mobius_add_bcast: row must be 1 x cols(x)");
  int ix = x.id, ir = row.id;
  bool r = rg(x) || rg(row);
  Mat rep = v(ir).replicate(x.rows(), 1);
  return push(hyp::mobius_add_rows(v(ix), rep, c), r,
              !r ? PullFn{} : [ix, ir, c](Tape& t, int out_id) {
                Mat rep2 = t.v(ir).replicate(t.v(ix).rows(), 1);
                Mat gx, gy;
                hyp::mobius_add_rows_vjp(t.v(ix), rep2, t.gref(out_id), c, gx,
                                         gy);
                if (t.nodes_[ix].requires_grad) t.gref(ix) += gx;
                if (t.nodes_[ir].requires_grad)
                  t.gref(ir) += gy.colwise().sum();
              });
}

Var Tape::bce(Var p, double target, double eps) {
  mine(p);
  check(p.rows() == 1 && p.cols() == 1, "bce: probability must be 1x1");
  check(target == 0.0 || target == 1.0, "bce: target must be 0 or 1");
  int ip = p.id;
  bool r = rg(p);
  double praw = v(ip)(0, 0);
  double pc = std::min(1.0 - eps, std::max(eps, praw));
  Mat out(1, 1);
  out(0, 0) = -(target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc));
  return push(std::move(out), r,
              !r ? PullFn{} : [ip, target, eps](Tape& t, int out_id) {
                double pr = t.v(ip)(0, 0);
                if (pr <= eps || pr >= 1.0 - eps) return;  // clamp plateau
                double d = -target / pr + (1.0 - target) / (1.0 - pr);
                t.gref(ip)(0, 0) += d * t.gref(out_id)(0, 0);
              });
}

void Tape::backward(Var root) {
  mine(root);
  check(root.rows() == 1 && root.cols() == 1, "backward: root must be 1x1");
  check(rg(root), "backward: root does not require grad");
  gref(root.id)(0, 0) += 1.0;
  for (int i = root.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.pull) n.pull(*this, i);
  }
}

}  // namespace mint::ad

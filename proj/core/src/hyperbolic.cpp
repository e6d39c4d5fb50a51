#include "mint/hyperbolic.hpp"

#include <cmath>

namespace mint::hyp {

namespace {

// tanh(t)/t and artanh(t)/t with series fallbacks near 0, plus the
// derivative-over-t forms the VJPs need. Series cutoffs keep the ratios
// smooth to ~1e-16 around the origin.

double tanh_ratio(double t) {
  if (std::abs(t) < kSmallArg) {
    double t2 = t * t;
    return 1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 15.0;
  }
  return std::tanh(t) / t;
}

// d/dt[tanh(t)/t] / t
double dtanh_ratio_over_t(double t) {
  if (std::abs(t) < kSmallArg) {
    double t2 = t * t;
    return -2.0 / 3.0 + 8.0 * t2 / 15.0;
  }
  double th = std::tanh(t);
  double sech2 = 1.0 - th * th;
  return (t * sech2 - th) / (t * t * t);
}

double artanh_ratio(double t) {
  if (std::abs(t) < kSmallArg) {
    double t2 = t * t;
    return 1.0 + t2 / 3.0 + t2 * t2 / 5.0;
  }
  return std::atanh(t) / t;
}

// d/dt[artanh(t)/t] / t
double dartanh_ratio_over_t(double t) {
  if (std::abs(t) < kSmallArg) {
    double t2 = t * t;
    return 2.0 / 3.0 + 4.0 * t2 / 5.0;
  }
  return (t / (1.0 - t * t) - std::atanh(t)) / (t * t * t);
}

void check_finite(const Mat& m, const char* who) {
  check(m.allFinite(), std::string(who) + ": non-finite input");
}

}  // namespace

double max_norm(double c) { return (1.0 - kBoundaryEps) / std::sqrt(c); }

bool in_ball(const Vec& x, double c) { return c * x.squaredNorm() < 1.0; }

Mat project_rows(const Mat& x, double c) {
  check_finite(x, "project_rows");
  const double r_max = max_norm(c);
  Mat out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double r = out.row(i).norm();
    if (r > r_max) out.row(i) *= r_max / r;
  }
  return out;
}

Mat project_rows_vjp(const Mat& x, const Mat& g, double c) {
  const double r_max = max_norm(c);
  Mat gx = g;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double r = x.row(i).norm();
    if (r > r_max) {
      // y = R x / r ; dy/dx = (R/r)(I - x x^T / r^2)
      double xg = x.row(i).dot(g.row(i));
      gx.row(i) = (r_max / r) * (g.row(i) - (xg / (r * r)) * x.row(i));
    }
  }
  return gx;
}

Mat exp0_rows(const Mat& v, double c) {
  check_finite(v, "exp0_rows");
  const double s = std::sqrt(c);
  Mat out(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double r = v.row(i).norm();
    if (r <= kZeroNormEps) {
      out.row(i).setZero();
    } else {
      out.row(i) = tanh_ratio(s * r) * v.row(i);
    }
  }
  return project_rows(out, c);
}

Mat exp0_rows_vjp(const Mat& v, const Mat& g, double c) {
  const double s = std::sqrt(c);
  Mat gv(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double r = v.row(i).norm();
    if (r <= kZeroNormEps) {
      gv.row(i) = g.row(i);  // d exp0/dv -> identity at the origin
      continue;
    }
    double t = s * r;
    double phi = tanh_ratio(t);
    // redo the projection decision for this row and chain through it
    Eigen::RowVectorXd pre = phi * v.row(i);
    Eigen::RowVectorXd gi = g.row(i);
    double pr = pre.norm();
    const double r_max = max_norm(c);
    if (pr > r_max) {
      double pg = pre.dot(gi);
      gi = (r_max / pr) * (gi - (pg / (pr * pr)) * pre);
    }
    double kappa = c * dtanh_ratio_over_t(t);
    gv.row(i) = phi * gi + kappa * v.row(i).dot(gi) * v.row(i);
  }
  return gv;
}

Mat log0_rows(const Mat& y, double c) {
  check_finite(y, "log0_rows");
  const double s = std::sqrt(c);
  Mat out(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double r = y.row(i).norm();
    if (r <= kZeroNormEps) {
      out.row(i).setZero();
      continue;
    }
    check(c * r * r < 1.0, "log0_rows: point on or outside the ball boundary");
    out.row(i) = artanh_ratio(s * r) * y.row(i);
  }
  return out;
}

Mat log0_rows_vjp(const Mat& y, const Mat& g, double c) {
  const double s = std::sqrt(c);
  Mat gy(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double r = y.row(i).norm();
    if (r <= kZeroNormEps) {
      gy.row(i) = g.row(i);
      continue;
    }
    double t = s * r;
    double psi = artanh_ratio(t);
    double kappa = c * dartanh_ratio_over_t(t);
    gy.row(i) = psi * g.row(i) + kappa * y.row(i).dot(g.row(i)) * y.row(i);
  }
  return gy;
}

Mat mobius_add_rows(const Mat& x, const Mat& y, double c) {
  check_finite(x, "mobius_add_rows");
  check_finite(y, "mobius_add_rows");
  check(x.rows() == y.rows() && x.cols() == y.cols(),
        "mobius_add_rows: shape mismatch");
  Mat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double u = x.row(i).dot(y.row(i));
    double p = x.row(i).squaredNorm();
    double q = y.row(i).squaredNorm();
    double a = 1.0 + 2.0 * c * u + c * q;
    double b = 1.0 - c * p;
    double d = 1.0 + 2.0 * c * u + c * c * p * q;
    check(std::abs(d) >= kDenomEps,
          "mobius_add_rows: denominator collapse (near-antipodal arguments)");
    out.row(i) = (a * x.row(i) + b * y.row(i)) / d;
  }
  return project_rows(out, c);
}

void mobius_add_rows_vjp(const Mat& x, const Mat& y, const Mat& g, double c,
                         Mat& gx, Mat& gy) {
  gx.resize(x.rows(), x.cols());
  gy.resize(y.rows(), y.cols());
  const double r_max = max_norm(c);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double u = x.row(i).dot(y.row(i));
    double p = x.row(i).squaredNorm();
    double q = y.row(i).squaredNorm();
    double a = 1.0 + 2.0 * c * u + c * q;
    double b = 1.0 - c * p;
    double d = 1.0 + 2.0 * c * u + c * c * p * q;
    Eigen::RowVectorXd o = (a * x.row(i) + b * y.row(i)) / d;
    Eigen::RowVectorXd gi = g.row(i);
    double onorm = o.norm();
    if (onorm > r_max) {
      double og = o.dot(gi);
      gi = (r_max / onorm) * (gi - (og / (onorm * onorm)) * o);
    }
    double xg = x.row(i).dot(gi);
    double yg = y.row(i).dot(gi);
    double og = o.dot(gi);
    // quotient rule on (a x + b y)/d; a,b,d as above
    gx.row(i) = (a * gi + 2.0 * c * xg * y.row(i) - 2.0 * c * yg * x.row(i) -
                 og * (2.0 * c * y.row(i) + 2.0 * c * c * q * x.row(i))) /
                d;
    gy.row(i) = (b * gi + 2.0 * c * xg * (x.row(i) + y.row(i)) -
                 og * (2.0 * c * x.row(i) + 2.0 * c * c * p * y.row(i))) /
                d;
  }
}

BallPoint exp_map(const TangentVector& v, Curvature k) {
  return {exp0_rows(v.v.transpose(), k.c).row(0).transpose()};
}

TangentVector log_map(const BallPoint& y, Curvature k) {
  return {log0_rows(y.x.transpose(), k.c).row(0).transpose()};
}

BallPoint mobius_add(const BallPoint& a, const BallPoint& b, Curvature k) {
  check(in_ball(a.x, k.c) && in_ball(b.x, k.c),
        "mobius_add: arguments must lie inside the ball");
  return {
      mobius_add_rows(a.x.transpose(), b.x.transpose(), k.c).row(0).transpose()};
}

BallPoint mobius_matvec(const Mat& w, const BallPoint& x, Curvature k) {
  check(w.cols() == x.x.size(), "mobius_matvec: dimension mismatch");
  Vec u = log0_rows(x.x.transpose(), k.c).row(0).transpose();
  Vec wu = w * u;
  return {exp0_rows(wu.transpose(), k.c).row(0).transpose()};
}

BallPoint hyp_activation(const BallPoint& x, Curvature k,
                         const std::function<double(double)>& f) {
  Vec u = log0_rows(x.x.transpose(), k.c).row(0).transpose();
  Vec fu = u.unaryExpr(f);
  return {exp0_rows(fu.transpose(), k.c).row(0).transpose()};
}

BallPoint project_to_ball(BallPoint p, Curvature k) {
  return {project_rows(p.x.transpose(), k.c).row(0).transpose()};
}

}  // namespace mint::hyp

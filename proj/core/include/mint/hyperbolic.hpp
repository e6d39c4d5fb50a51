#pragma once

// Poincare ball operations (curvature -c, c > 0) plus the closed-form
// vector-Jacobian products the training tape uses. Everything is done on
// doubles; rows of a matrix are treated as independent points.

#include <Eigen/Dense>

#include <functional>

#include "mint/common.hpp"

namespace mint::hyp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Numeric guards. Pinned here, asserted on in tests; do not tune per call site.
inline constexpr double kZeroNormEps = 1e-12;  // below this norm a vector is the origin
inline constexpr double kBoundaryEps = 1e-5;   // ball interior margin: c*|x|^2 <= 1 - eps
inline constexpr double kDenomEps = 1e-10;     // mobius_add denominator blowup guard
inline constexpr double kSmallArg = 1e-4;      // series cutoff for tanh/artanh ratios

struct Curvature {
  double c = 1.0;
  Curvature() = default;
  explicit Curvature(double value) : c(value) {
    check(std::isfinite(c) && c > 0.0, "curvature must be finite and > 0");
  }
};

struct BallPoint {
  Vec x;
};

struct TangentVector {
  Vec v;
};

// Largest norm a stored ball point may have: (1 - kBoundaryEps)/sqrt(c).
double max_norm(double c);

bool in_ball(const Vec& x, double c);

// Rowwise primitives. exp0_rows projects its result so downstream log maps
// are always in-domain; log0_rows throws if a row is on or past the boundary.
Mat project_rows(const Mat& x, double c);
Mat exp0_rows(const Mat& v, double c);
Mat log0_rows(const Mat& y, double c);
// Rowwise x_i (+) y_i. Throws if the denominator collapses (near-antipodal
// arguments); result is projected back into the ball.
Mat mobius_add_rows(const Mat& x, const Mat& y, double c);

// VJPs: g is the upstream gradient in the shape of the op output; the return
// (or out-params) hold the gradient with respect to the inputs. These chain
// through the same projection/branch logic as the forward ops.
Mat project_rows_vjp(const Mat& x, const Mat& g, double c);
Mat exp0_rows_vjp(const Mat& v, const Mat& g, double c);
Mat log0_rows_vjp(const Mat& y, const Mat& g, double c);
void mobius_add_rows_vjp(const Mat& x, const Mat& y, const Mat& g, double c,
                         Mat& gx, Mat& gy);

// Typed single-point API used by callers that think in points, not batches.
BallPoint exp_map(const TangentVector& v, Curvature k);
TangentVector log_map(const BallPoint& y, Curvature k);
BallPoint mobius_add(const BallPoint& a, const BallPoint& b, Curvature k);
// w applied in the tangent space at the origin: exp0(w * log0(x)).
// w may be rectangular; the zero matrix maps everything to the origin.
BallPoint mobius_matvec(const Mat& w, const BallPoint& x, Curvature k);
// Pointwise activation lifted to the ball: exp0(f(log0(x))).
BallPoint hyp_activation(const BallPoint& x, Curvature k,
                         const std::function<double(double)>& f);
BallPoint project_to_ball(BallPoint p, Curvature k);

}  // namespace mint::hyp

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace shb::fit {

/// One free parameter. `positive` parameters are optimized as log(p), which
/// keeps rates, widths and temperatures out of unphysical territory.
struct Param {
  std::string name;
  double init = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool positive = false;
};

/// A scalar model y = f(x; p) with named free parameters and a bag of fixed
/// ones (kept for reporting). `func` receives the free values in declaration
/// order.
struct ModelSpec {
  std::string id;
  std::vector<Param> params;
  std::map<std::string, double> fixed;
  std::function<double(double, std::span<const double>)> func;
};

struct FitResult {
  std::map<std::string, double> params;
  std::map<std::string, double> sigma;  // 1-sigma from the covariance at the optimum
  double r_squared = 0.0;
  std::vector<double> residuals;  // y - f(x) at the optimum
  bool converged = false;
  int iterations = 0;
  double initial_cost = 0.0;  // weighted SSE at the initial guess
  double final_cost = 0.0;
  Eigen::MatrixXd covariance;          // free-parameter order of the ModelSpec
  double covariance_condition = 0.0;   // ratio of extreme covariance eigenvalues
  bool degenerate = false;             // condition number above 1e8
  std::string message;

  double value(const std::string& name) const { return params.at(name); }
  double error(const std::string& name) const { return sigma.at(name); }
};

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling)
/// on the weighted squared residuals. Weights multiply residuals (w = 1/sigma);
/// omitted weights mean 1. Converges when the relative cost change drops
/// below 1e-10 or after 200 iterations; a rank-deficient Jacobian at the
/// optimum flags the result non-converged. The covariance is the inverse
/// approximated Hessian scaled by the residual variance.
FitResult nlls_fit(const ModelSpec& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights = {});

}  // namespace shb::fit

#include "shb/nlls.hpp"

#include <algorithm>
#include <cmath>

#include "shb/errors.hpp"

namespace shb::fit {

namespace {

constexpr double rel_cost_tol = 1e-10;
constexpr int max_iterations = 200;
constexpr double degenerate_condition = 1e8;

/// Internal optimizer coordinates: log(p) for positive-constrained params.
double to_internal(const Param& p, double value) {
  return p.positive ? std::log(value) : value;
}

double to_external(const Param& p, double value) {
  return p.positive ? std::exp(value) : value;
}

double clamp_external(const Param& p, double value) {
  return std::clamp(value, p.lower, p.upper);
}

struct Objective {
  const ModelSpec& model;
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> w;

  std::vector<double> external(const Eigen::VectorXd& q) const {
    std::vector<double> p(model.params.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = clamp_external(model.params[i], to_external(model.params[i], q[i]));
    }
    return p;
  }

  /// Weighted residuals y - f(x; p); returns false on a non-finite value.
  bool residuals(const Eigen::VectorXd& q, Eigen::VectorXd& r) const {
    const auto p = external(q);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double fj = model.func(x[j], p);
      if (!std::isfinite(fj)) {
        return false;
      }
      const double wj = w.empty() ? 1.0 : w[j];
      r[static_cast<Eigen::Index>(j)] = wj * (y[j] - fj);
    }
    return true;
  }

  bool jacobian(const Eigen::VectorXd& q, Eigen::MatrixXd& jac) const {
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd r_plus(n), r_minus(n);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double h = 6e-6 * std::max(1.0, std::abs(q[i]));
      Eigen::VectorXd qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      if (!residuals(qp, r_plus) || !residuals(qm, r_minus)) {
        return false;
      }
      // d(residual)/dq = -(d f/dq); keep J as df/dq so the normal equations
      // below read (J^T J + lambda D) delta = J^T r.
      jac.col(i) = (r_minus - r_plus) / (2.0 * h);
    }
    return true;
  }
};

}  // namespace

FitResult nlls_fit(const ModelSpec& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights) {
  if (x.size() != y.size()) {
    throw InputError("nlls_fit: x and y lengths differ");
  }
  if (!weights.empty() && weights.size() != x.size()) {
    throw InputError("nlls_fit: weights length differs from data length");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index np = static_cast<Eigen::Index>(model.params.size());
  if (np == 0 || n < np) {
    throw InputError("nlls_fit: need at least as many points as free parameters");
  }

  FitResult out;
  for (const auto& [name, value] : model.fixed) {
    out.params[name] = value;
    out.sigma[name] = 0.0;
  }

  Eigen::VectorXd q(np);
  for (Eigen::Index i = 0; i < np; ++i) {
    const Param& p = model.params[static_cast<std::size_t>(i)];
    if (p.positive && !(p.init > 0.0)) {
      throw InputError("nlls_fit: positive parameter '" + p.name +
                       "' needs a positive initial value");
    }
    q[i] = to_internal(p, clamp_external(p, p.init));
  }

  const Objective obj{model, x, y, weights};
  Eigen::VectorXd r(n);
  if (!obj.residuals(q, r)) {
    out.message = "model is non-finite at the initial guess";
    return out;
  }
  double cost = r.squaredNorm();
  out.initial_cost = cost;

  Eigen::MatrixXd jac(n, np);
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    if (!obj.jacobian(q, jac)) {
      out.message = "model became non-finite while differentiating";
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    // Marquardt scaling: damp each direction relative to its own curvature
    // so parameters of wildly different magnitude step sensibly.
    Eigen::VectorXd diag = jtj.diagonal();
    const double diag_floor = 1e-12 * std::max(diag.maxCoeff(), 1.0);
    diag = diag.cwiseMax(diag_floor);

    bool stepped = false;
    while (lambda < 1e14) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * diag;
      const Eigen::VectorXd delta = damped.ldlt().solve(jtr);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd q_try = q + delta;
      Eigen::VectorXd r_try(n);
      if (obj.residuals(q_try, r_try)) {
        const double cost_try = r_try.squaredNorm();
        if (cost_try <= cost) {
          const double rel_drop = (cost - cost_try) / std::max(cost, 1e-300);
          q = q_try;
          r = r_try;
          cost = cost_try;
          lambda = std::max(lambda / 3.0, 1e-12);
          stepped = true;
          if (rel_drop < rel_cost_tol) {
            converged = true;
          }
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!stepped) {
      // No damping produced a downhill step: we are at a (possibly flat)
      // minimum of the quadratic model.
      converged = true;
    }
    if (converged) {
      ++iter;
      break;
    }
  }

  out.iterations = iter;
  out.final_cost = cost;
  out.residuals.assign(r.data(), r.data() + n);

  const auto p_ext = obj.external(q);
  for (Eigen::Index i = 0; i < np; ++i) {
    out.params[model.params[static_cast<std::size_t>(i)].name] = p_ext[static_cast<std::size_t>(i)];
  }

  // Goodness of fit against the weighted mean.
  double wsum = 0.0, ymean = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double wj = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(j)];
    wsum += wj * wj;
    ymean += wj * wj * y[static_cast<std::size_t>(j)];
  }
  ymean /= wsum;
  double ss_tot = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double wj = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(j)];
    const double d = wj * (y[static_cast<std::size_t>(j)] - ymean);
    ss_tot += d * d;
  }
  out.r_squared = ss_tot > 0.0 ? 1.0 - cost / ss_tot : (cost == 0.0 ? 1.0 : 0.0);

  // Covariance at the optimum, propagated back through the log transform.
  if (!obj.jacobian(q, jac)) {
    out.message = "model became non-finite at the optimum";
    return out;
  }
  // Equilibrate Jacobian columns before inverting: raw parameters can differ
  // by many orders of magnitude (a line center in Hz next to a unit offset),
  // which makes the normal matrix numerically singular even when the fit is
  // perfectly well determined.
  Eigen::VectorXd col_scale(np);
  for (Eigen::Index i = 0; i < np; ++i) {
    col_scale[i] = jac.col(i).norm();
  }
  if (!(col_scale.minCoeff() > 0.0)) {
    out.message = "singular Jacobian at the optimum";
    out.converged = false;
    return out;
  }
  const Eigen::MatrixXd jac_s = jac * col_scale.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd jtj = jac_s.transpose() * jac_s;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (!lu.isInvertible()) {
    out.message = "singular Jacobian at the optimum";
    out.converged = false;
    return out;
  }
  const double dof = static_cast<double>(std::max<Eigen::Index>(n - np, 1));
  const double variance = (n > np) ? cost / dof : 0.0;
  Eigen::MatrixXd cov = lu.inverse() * variance;
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      // Undo the equilibration, then map log-space variances back to the
      // parameter's own units (d p / d log p = p).
      const double si =
          model.params[static_cast<std::size_t>(i)].positive ? p_ext[static_cast<std::size_t>(i)] : 1.0;
      const double sj =
          model.params[static_cast<std::size_t>(j)].positive ? p_ext[static_cast<std::size_t>(j)] : 1.0;
      cov(i, j) *= si * sj / (col_scale[i] * col_scale[j]);
    }
  }
  out.covariance = cov;
  for (Eigen::Index i = 0; i < np; ++i) {
    out.sigma[model.params[static_cast<std::size_t>(i)].name] =
        cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : 0.0;
  }

  // Condition of the equilibrated curvature: measures genuine collinearity
  // between model terms rather than unit mismatch, and variance = 0 (exact
  // interpolation) cannot hide a degenerate direction.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jtj);
  const double ev_min = es.eigenvalues().minCoeff();
  const double ev_max = es.eigenvalues().maxCoeff();
  out.covariance_condition =
      ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  out.degenerate = out.covariance_condition > degenerate_condition;

  out.converged = converged;
  if (!converged && out.message.empty()) {
    out.message = "iteration limit reached before the cost settled";
  }
  return out;
}

}  // namespace shb::fit

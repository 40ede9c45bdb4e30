#include "dpmlap/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace dpmlap {

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion on the minimization problem (g is the gradient of -f).
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g,
                                const std::deque<CurvaturePair>& mem) {
  Eigen::VectorXd q = g;
  std::vector<double> a(mem.size());
  for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
    a[i] = mem[i].rho * mem[i].s.dot(q);
    q -= a[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.dot(last.y);
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double b = mem[i].rho * mem[i].y.dot(q);
    q += (a[i] - b) * mem[i].s;
  }
  return -q;
}

}  // namespace

OptimResult maximize(const ValueGradFn& fn, const Eigen::VectorXd& x0,
                     const OptimOptions& opts) {
  if (opts.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");

  // minimize phi = -f
  auto eval = [&fn](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double v = fn(x, g);
    g = -g;
    return -v;
  };

  Eigen::VectorXd x = x0;
  Eigen::VectorXd g(x.size());
  double phi = eval(x, g);
  if (!std::isfinite(phi)) throw std::invalid_argument("objective not finite at init");

  std::deque<CurvaturePair> mem;
  OptimResult res;
  res.x = x;
  res.value = -phi;
  res.grad_sup_norm = g.lpNorm<Eigen::Infinity>();
  res.iters = 0;
  if (res.grad_sup_norm <= opts.grad_tol) {
    res.converged = true;
    return res;
  }

  constexpr double c1 = 1e-4;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    Eigen::VectorXd d = lbfgs_direction(g, mem);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {  // not a descent direction; reset memory
      mem.clear();
      d = -g;
      slope = g.dot(d);
    }

    double t = mem.empty() ? std::min(1.0, 1.0 / g.lpNorm<Eigen::Infinity>()) : 1.0;
    Eigen::VectorXd x_new, g_new(x.size());
    double phi_new = phi;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + t * d;
      phi_new = eval(x_new, g_new);
      if (std::isfinite(phi_new) && phi_new <= phi + c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted && !mem.empty()) {
      // retry once along steepest descent
      mem.clear();
      d = -g;
      slope = g.dot(d);
      t = std::min(1.0, 1.0 / g.lpNorm<Eigen::Infinity>());
      for (int ls = 0; ls < 60; ++ls) {
        x_new = x + t * d;
        phi_new = eval(x_new, g_new);
        if (std::isfinite(phi_new) && phi_new <= phi + c1 * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
    }
    res.iters = iter;
    if (!accepted) break;  // no progress possible at machine precision

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      mem.push_back({std::move(s), std::move(yv), 1.0 / sy});
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }

    x = std::move(x_new);
    g = std::move(g_new);
    phi = phi_new;
    res.x = x;
    res.value = -phi;
    res.grad_sup_norm = g.lpNorm<Eigen::Infinity>();
    if (res.grad_sup_norm <= opts.grad_tol) {
      res.converged = true;
      return res;
    }
  }
  res.converged = res.grad_sup_norm <= opts.grad_tol;
  return res;
}

}  // namespace dpmlap

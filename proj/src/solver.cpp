#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gsample/design.hpp"
#include "gsample/errors.hpp"

namespace gsample::design {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("project_to_simplex: empty vector");
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += sorted[static_cast<std::size_t>(k)];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd p = (v.array() - theta).cwiseMax(0.0).matrix();
  return p / p.sum();
}

namespace {

// Quantities of the current iterate shared by gap and line search.
struct Scores {
  Eigen::VectorXd score;  // -gradient: d_i for D, s_i for A
  Eigen::LLT<Eigen::MatrixXd> llt;
  double trace_inv = 0.0;  // tr(A^-1), A only
  double objective = 0.0;
};

Scores evaluate(const DesignRows& rows, const Eigen::VectorXd& p, Criterion c) {
  const InformationMatrix A = information_matrix(rows, p);
  Scores s;
  s.llt.compute(A);
  if (s.llt.info() != Eigen::Success) throw SingularInformationMatrix("solver: iterate lost definiteness");
  const Eigen::MatrixXd L = s.llt.matrixL();
  if (c == Criterion::D) {
    Eigen::MatrixXd X = s.llt.matrixL().solve(rows.transpose());
    s.score = X.colwise().squaredNorm().transpose();
    s.objective = -2.0 * L.diagonal().array().log().sum();
  } else {
    Eigen::MatrixXd Y = s.llt.solve(rows.transpose());
    s.score = Y.colwise().squaredNorm().transpose();
    Eigen::MatrixXd Linv = s.llt.matrixL().solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
    s.trace_inv = Linv.squaredNorm();
    s.objective = s.trace_inv;
  }
  return s;
}

// Step t along A(t) = (1 - t) A + t u u^T, t in [lo, hi]. Toward steps have
// [0, 1), away steps [-p_a / (1 - p_a), 0].
double line_search_d(double d, double K, double lo, double hi) {
  if (!(d > 1.0)) return lo;  // derivative positive throughout the domain
  const double t = (d - K) / (K * (d - 1.0));
  return std::clamp(t, lo, hi);
}

double line_search_a(double T, double d, double s, double lo, double hi) {
  // phi(t) = (T g - t s) / ((1 - t) g), g = 1 + t (d - 1). phi is convex on
  // the domain; bisect on the sign of the derivative's numerator.
  auto slope = [&](double t) {
    const double g = 1.0 + t * (d - 1.0);
    const double num = T * g - t * s;
    const double den = (1.0 - t) * g;
    const double dnum = T * (d - 1.0) - s;
    const double dden = -g + (1.0 - t) * (d - 1.0);
    return dnum * den - num * dden;
  };
  if (slope(lo) >= 0.0) return lo;
  if (hi < 1.0 && slope(hi) <= 0.0) return hi;
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
    const double m = 0.5 * (a + b);
    if (slope(m) > 0.0) b = m;
    else a = m;
  }
  return 0.5 * (a + b);
}

Eigen::Index argmax_lowest(const Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[arg]) arg = i;
  return arg;
}

SolverResult frank_wolfe(const DesignRows& rows, Criterion c, const SolverOptions& opts) {
  const Eigen::Index n = rows.rows();
  const double K = static_cast<double>(rows.cols());
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  SolverResult out;
  int it = 0;
  for (;; ++it) {
    const Scores sc = evaluate(rows, p, c);
    const double mean_score = p.dot(sc.score);
    const Eigen::Index j = argmax_lowest(sc.score);
    const double fw_gap = sc.score[j] - mean_score;
    out.objective = sc.objective;
    out.gap = fw_gap;
    if (fw_gap <= opts.tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    // Away vertex: active coordinate with the smallest score.
    Eigen::Index a = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p[i] > 0.0 && (a < 0 || sc.score[i] < sc.score[a])) a = i;
    }
    const double away_gap = mean_score - sc.score[a];
    const bool away = opts.away_steps && away_gap > fw_gap && p[a] < 1.0;

    const Eigen::Index v = away ? a : j;
    const double lo = away ? -p[v] / (1.0 - p[v]) : 0.0;
    const double hi = away ? 0.0 : 1.0;

    const Eigen::VectorXd u = rows.row(v).transpose();
    const Eigen::VectorXd Ainv_u = sc.llt.solve(u);
    const double d = u.dot(Ainv_u);
    double t = 0.0;
    if (c == Criterion::D) {
      t = line_search_d(d, K, lo, hi);
    } else {
      t = line_search_a(sc.trace_inv, d, Ainv_u.squaredNorm(), lo, hi);
    }
    if (t == 0.0) {
      // No progress possible along the chosen direction; report as is.
      break;
    }
    p *= (1.0 - t);
    p[v] += t;
    if (away && t == lo) p[v] = 0.0;  // drop step
    p = p.cwiseMax(0.0);
    p /= p.sum();
  }
  out.iterations = it;
  out.weights = DesignWeights::make(std::move(p));
  return out;
}

SolverResult projected_subgradient(const DesignRows& rows, const SolverOptions& opts) {
  const Eigen::Index n = rows.rows();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd best = p;
  double best_val = criterion_value(information_matrix(rows, p), Criterion::E);
  const double step0 = 1.0 / std::sqrt(static_cast<double>(n));

  SolverResult out;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::VectorXd g = criterion_gradient(rows, p, Criterion::E);
    const double gn = g.norm();
    if (gn == 0.0) break;
    const double step = step0 / std::sqrt(static_cast<double>(it) + 1.0);
    Eigen::VectorXd next = project_to_simplex(p - (step / gn) * g);
    double val = 0.0;
    try {
      val = criterion_value(information_matrix(rows, next), Criterion::E);
    } catch (const SingularInformationMatrix&) {
      val = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(val)) break;
    p = std::move(next);
    if (val < best_val) {
      best_val = val;
      best = p;
    }
    if (it % 100 == 99 && duality_gap(rows, best, Criterion::E) <= opts.tol) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.objective = best_val;
  out.gap = duality_gap(rows, best, Criterion::E);
  out.converged = out.converged || out.gap <= opts.tol;
  out.iterations = it;
  out.weights = DesignWeights::make(std::move(best));
  return out;
}

}  // namespace

SolverResult solve_relaxed(const DesignRows& rows, Criterion c, const SolverOptions& opts) {
  if (rows.rows() < rows.cols() || rows.cols() < 1) {
    throw std::invalid_argument("solve_relaxed requires N >= K >= 1");
  }
  if (c == Criterion::E) return projected_subgradient(rows, opts);
  return frank_wolfe(rows, c, opts);
}

}  // namespace gsample::design

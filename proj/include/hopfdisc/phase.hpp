#pragma once

#include "hopfdisc/motion.hpp"

namespace hopfdisc {

namespace quad {

// Composite Simpson weights (units of h) for a run of m intervals. Odd runs
// average the two placements of the three-point end formula so the weights
// stay mirror-symmetric.
inline std::vector<double> run_weights(std::size_t m) {
  std::vector<double> w(m + 1, 0.0);
  if (m == 1) {
    w[0] = w[1] = 0.5;
    return w;
  }
  auto simpson = [&w](std::size_t from, std::size_t len, double scale) {
    for (std::size_t j = 0; j <= len; ++j) {
      double c = (j == 0 || j == len) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      w[from + j] += scale * c / 3.0;
    }
  };
  if (m % 2 == 0) {
    simpson(0, m, 1.0);
    return w;
  }
  simpson(0, m - 1, 0.5);
  w[m - 2] += 0.5 * (-1.0 / 12.0);
  w[m - 1] += 0.5 * (8.0 / 12.0);
  w[m] += 0.5 * (5.0 / 12.0);
  simpson(1, m - 1, 0.5);
  w[0] += 0.5 * (5.0 / 12.0);
  w[1] += 0.5 * (8.0 / 12.0);
  w[2] += 0.5 * (-1.0 / 12.0);
  return w;
}

// Sum of v[k] + v[n-1-k] pairs from the outside in. Negating and mirroring v
// negates the result exactly.
inline double mirror_sum(std::span<const double> v) {
  std::size_t n = v.size();
  double s = 0.0;
  for (std::size_t k = 0; k < n / 2; ++k) s += v[k] + v[n - 1 - k];
  if (n % 2 == 1) s += v[n / 2];
  return s;
}

inline double simpson_piece(const Piece& p, double fa, double fm, double fb) {
  return (p.t1 - p.t0) / 6.0 * ((fa + fb) + 4.0 * fm);
}

template <class F>
double dirty_interval(const SampledPath& path, std::size_t k, F&& f) {
  double s = 0.0;
  for (const Piece& p : path.pieces(k)) s += simpson_piece(p, f(p.a), f(p.mid), f(p.b));
  return s;
}

// Visits maximal runs [a, b] of clean intervals that contain no corner node
// in their interior, and every interval with a corner inside it.
template <class Run, class Dirty>
void walk(const SampledPath& path, Run&& run, Dirty&& dirty) {
  std::size_t N = path.intervals(), k = 0;
  while (k < N) {
    if (!path.clean(k)) {
      dirty(k);
      ++k;
      continue;
    }
    std::size_t b = k + 1;
    while (b < N && path.clean(b) && !path.corner_at_node(b)) ++b;
    run(k, b);
    k = b;
  }
}

}  // namespace quad

/// Integral over [0, 1] of f(theta, beta, theta', beta') along the path:
/// composite Simpson on nodes between corners, with one-sided values at
/// corner nodes and exact piece splitting when a corner falls inside a cell.
template <class F>
double path_integral(const SampledPath& path, F&& f) {
  std::size_t N = path.intervals();
  double h = path.step();
  std::vector<double> node_part(N + 1, 0.0), cell_part(N, 0.0);
  quad::walk(
      path,
      [&](std::size_t a, std::size_t b) {
        auto w = quad::run_weights(b - a);
        for (std::size_t j = a; j <= b; ++j) {
          PathNode p = j == a ? path.right(j) : (j == b ? path.left(j) : path.node(j));
          node_part[j] += w[j - a] * h * f(p);
        }
      },
      [&](std::size_t k) { cell_part[k] = quad::dirty_interval(path, k, f); });
  return quad::mirror_sum(node_part) + quad::mirror_sum(cell_part);
}

/// Cumulative version of path_integral: entry k holds the integral over
/// [0, t_k]. Inside a run, even offsets carry Simpson partial sums and odd
/// offsets add a three-point interval rule.
template <class F>
std::vector<double> running_path_integral(const SampledPath& path, F&& f) {
  std::size_t N = path.intervals();
  double h = path.step();
  std::vector<double> out(N + 1, 0.0);
  quad::walk(
      path,
      [&](std::size_t a, std::size_t b) {
        std::size_t m = b - a;
        std::vector<double> v(m + 1);
        for (std::size_t j = 0; j <= m; ++j)
          v[j] = f(j == 0 ? path.right(a) : (j == m ? path.left(b) : path.node(a + j)));
        if (m == 1) {
          out[b] = out[a] + 0.5 * h * (v[0] + v[1]);
          return;
        }
        for (std::size_t j = 1; j <= m; ++j) {
          if (j % 2 == 0)
            out[a + j] = out[a + j - 2] + h / 3.0 * (v[j - 2] + 4.0 * v[j - 1] + v[j]);
          else if (j < m)
            out[a + j] = out[a + j - 1] + h / 12.0 * (5.0 * v[j - 1] + 8.0 * v[j] - v[j + 1]);
          else
            out[a + j] = out[a + j - 1] + h / 12.0 * (-v[j - 2] + 8.0 * v[j - 1] + 5.0 * v[j]);
        }
      },
      [&](std::size_t k) { out[k + 1] = out[k] + quad::dirty_interval(path, k, f); });
  return out;
}

inline double geometric_integrand(const PathNode& p) { return -std::cos(p.beta) * p.dtheta; }

inline double dynamical_phase(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorKind::NonPositiveRadius, "disc radii must be positive");
  return kTwoPi * n * a / b;
}

inline double geometric_phase(const SampledPath& path) {
  return path_integral(path, geometric_integrand);
}

inline std::vector<double> running_geometric_phase(const SampledPath& path) {
  return running_path_integral(path, geometric_integrand);
}

struct PhaseResult {
  double delta_d = 0.0;
  double delta_g = 0.0;
  double delta_total = 0.0;
  std::vector<double> running_delta_g;
};

inline PhaseResult compute_phases(const SampledPath& path, double a, double b) {
  PhaseResult r;
  r.delta_d = dynamical_phase(a, b, path.winding());
  r.delta_g = geometric_phase(path);
  r.delta_total = r.delta_d + r.delta_g;
  r.running_delta_g = running_geometric_phase(path);
  return r;
}

}  // namespace hopfdisc

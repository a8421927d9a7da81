#pragma once

// Independent dense assembly of the pair-space operators: every matrix entry
// comes from evaluating the displayed pointwise formulas on basis functions,
// with no use of the sparse builders. Sources or evaluation points touching
// level 1 (undefined downward index) are zero, matching the library
// convention.

#include <Eigen/Dense>

#include "causets/einstein.hpp"

namespace oracle {

using causets::Complex;
using causets::SiteDecoherence;
using causets::SitePath;

struct DenseOps {
  Eigen::MatrixXcd nabla, curvature, metric, mass, adjoint;
};

inline DenseOps build_dense(const SiteDecoherence& sd, const SitePath& w, const SitePath& wp) {
  const auto& idx = sd.sites;
  const int S = idx.count();
  const int N = idx.N;
  const Eigen::Index dim = static_cast<Eigen::Index>(S) * S;
  auto pair = [&](int x, int y) { return static_cast<Eigen::Index>(x) * S + y; };
  auto on = [&](const SitePath& p, int s) { return p.contains(s, idx); };

  DenseOps ops;
  ops.nabla = Eigen::MatrixXcd::Zero(dim, dim);
  ops.metric = Eigen::MatrixXcd::Zero(dim, dim);
  ops.mass = Eigen::MatrixXcd::Zero(dim, dim);
  ops.adjoint = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd nabla_swapped = Eigen::MatrixXcd::Zero(dim, dim);

  for (int u = 0; u < S; ++u)
    for (int v = 0; v < S; ++v) {
      if (idx.level(u) < 2 || idx.level(v) < 2) continue;  // annihilated sources
      Eigen::Index col = pair(u, v);
      auto f = [&](int x, int y) { return x == u && y == v ? Complex(1, 0) : Complex(0, 0); };

      for (int x = 0; x < S; ++x)
        for (int y = 0; y < S; ++y) {
          int lx = idx.level(x), ly = idx.level(y);
          if (lx < 2 || ly < 2) continue;  // formulas undefined at level 1
          Eigen::Index row = pair(x, y);

          auto nabla_at = [&](const SitePath& a, const SitePath& b) {
            if (!(on(a, x) && on(b, y))) return Complex(0, 0);
            int xd = a.at(lx - 1), yd = b.at(ly - 1);
            return sd.at(xd, yd) * f(x, y) - sd.at(x, y) * f(xd, yd);
          };
          ops.nabla(row, col) = nabla_at(w, wp);
          nabla_swapped(row, col) = nabla_at(wp, w);

          Complex metric_val(0, 0);
          if (on(wp, x) && on(w, y)) metric_val += sd.at(x, y) * f(wp.at(lx - 1), w.at(ly - 1));
          if (on(w, x) && on(wp, y)) metric_val -= sd.at(x, y) * f(w.at(lx - 1), wp.at(ly - 1));
          ops.metric(row, col) = metric_val;

          Complex mass_val(0, 0);
          if (on(w, x) && on(wp, y)) mass_val += sd.at(w.at(lx - 1), wp.at(ly - 1));
          if (on(wp, x) && on(w, y)) mass_val -= sd.at(wp.at(lx - 1), w.at(ly - 1));
          ops.mass(row, col) = mass_val * f(x, y);
        }

      // adjoint closed forms, case by case
      int lu = idx.level(u), lv = idx.level(v);
      bool a_case = on(w, u) && on(wp, v);
      bool b_case = on(wp, u) && on(w, v);
      if (a_case) ops.adjoint(pair(w.at(lu - 1), wp.at(lv - 1)), col) -= std::conj(sd.at(u, v));
      if (b_case) ops.adjoint(pair(wp.at(lu - 1), w.at(lv - 1)), col) += std::conj(sd.at(u, v));
    }
  ops.curvature = ops.nabla - nabla_swapped;
  (void)N;
  return ops;
}

inline Eigen::MatrixXcd sparse_to_dense(const causets::SparsePairOperator& op) {
  return op.dense();
}

}  // namespace oracle

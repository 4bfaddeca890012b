#pragma once

// Independent reference computations used only by the tests.

#include <cmath>

#include "gscat/quadrature.hpp"
#include "gscat/single_scatter.hpp"

namespace gscat::testing {

// Raw double momentum integral for J: free-free, twice free-bound, and
// bound-bound, with Psi taken from the single-particle solver.
inline CMatrix brute_force_j(const Graph& g, const BoundStateSet& bs, double E, double eps,
                             int panels = 60, int order = 10) {
  const int m = g.n_internal();
  SingleScatterer sc(g);
  Rule k;
  for (int p = 0; p < panels; ++p) {
    const Rule piece = gauss_legendre(order, -kPi + kPi * p / panels, -kPi + kPi * (p + 1) / panels);
    k.x.insert(k.x.end(), piece.x.begin(), piece.x.end());
    k.w.insert(k.w.end(), piece.w.begin(), piece.w.end());
  }
  const int nk = k.size();
  std::vector<CMatrix> rho(nk);
  std::vector<double> e(nk);
  for (int a = 0; a < nk; ++a) {
    const CMatrix psi = sc.at_z(std::polar(1.0, k.x[a])).psi;
    rho[a] = k.w[a] * psi * psi.adjoint() / (2.0 * kPi);
    e[a] = 2.0 * std::cos(k.x[a]);
  }
  std::vector<CMatrix> xx;
  std::vector<double> eb;
  for (int i : bs.bound_indices()) {
    const RVector x = bs.states[i].x.tail(m);
    xx.push_back((x * x.transpose()).cast<cplx>());
    eb.push_back(bs.states[i].energy);
  }
  CMatrix j = CMatrix::Zero(m, m);
  for (int a = 0; a < nk; ++a) {
    for (int b = 0; b < nk; ++b)
      j += rho[a].cwiseProduct(rho[b]) / cplx(E - e[a] - e[b], eps);
    for (size_t i = 0; i < xx.size(); ++i)
      j += 2.0 * rho[a].cwiseProduct(xx[i]) / cplx(E - e[a] - eb[i], eps);
  }
  for (size_t i = 0; i < xx.size(); ++i)
    for (size_t l = 0; l < xx.size(); ++l)
      j += xx[i].cwiseProduct(xx[l]) / cplx(E - eb[i] - eb[l], eps);
  return j;
}

}  // namespace gscat::testing

#pragma once

#include <memory>

#include "gscat/bound_spectrum.hpp"
#include "gscat/graph.hpp"

namespace gscat {

// p in (-pi, 0) for E in (-2, 2); z = e^{ip}.
double energy_to_momentum(double E);
cplx energy_to_z(double E);

// Q(z) = 1 - zA - z B^T (z + 1/z - D)^{-1} B. Throws ResonanceError when
// z + 1/z is within 1e-9 of an eigenvalue of D.
CMatrix q_matrix(const Graph& g, cplx z);

// S(z) = -Q(1/z) Q(z)^{-1} by linear solve. Throws SingularMatrixError if
// Q(z) has condition number above 1e12.
CMatrix s_matrix_1p(const Graph& g, cplx z);

// Psi(z) = (z + 1/z - D)^{-1} B (1/z + z S(z)), M x N.
CMatrix psi_matrix(const Graph& g, cplx z);

struct SingleScattering {
  cplx z;
  CMatrix s;    // N x N
  CMatrix psi;  // M x N
  bool via_complement = false;  // resonant energy, solved on the confined complement
};

// Caches the confined complement so that S and Psi stay defined when
// z + 1/z hits a confined energy: there the pair is read off
// -gamma_nc(z)^{-1} gamma(1/z) = [[S, 0], [Psi / z, -1/z^2]].
class SingleScatterer {
 public:
  explicit SingleScatterer(const Graph& g);
  SingleScatterer(const Graph& g, const ConfinedSpace& cs);

  const Graph& graph() const { return g_; }
  SingleScattering at_z(cplx z) const;
  SingleScattering at_energy(double E) const { return at_z(energy_to_z(E)); }
  SingleScattering via_complement(cplx z) const;

 private:
  Graph g_;
  ComplementResolvent cr_;
  RVector d_eigs_;
};

// t^{mn}(E) = S^{mn}(e^{ip}); rails are 1-based. Falls back to the
// complement solve at confined resonances.
cplx transmission_1p(const Graph& g, double E, int m, int n);

}  // namespace gscat

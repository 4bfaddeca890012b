#include "gscat/single_scatter.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gscat {

namespace {

constexpr double kResonanceTol = 1e-9;
// the Q route loses digits like 1/|E - d_k|; switch well before the pole
constexpr double kNearResonance = 1e-2;

RVector d_spectrum(const Graph& g) {
  if (g.n_internal() == 0) return RVector(0);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g.block_d(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void check_resonance(const RVector& eigs, cplx z) {
  const cplx e = z + 1.0 / z;
  for (int i = 0; i < eigs.size(); ++i) {
    if (std::abs(e - eigs(i)) <= kResonanceTol) {
      std::ostringstream os;
      os << "z+1/z=" << e << " sits on eigenvalue " << eigs(i) << " of D";
      throw ResonanceError(os.str(), z);
    }
  }
}

CMatrix q_impl(const Graph& g, const RVector& eigs, cplx z) {
  check_resonance(eigs, z);
  const int nb = g.n_boundary(), m = g.n_internal();
  CMatrix q = CMatrix::Identity(nb, nb) - z * g.block_a().cast<cplx>();
  if (m > 0) {
    const CMatrix b = g.block_b().cast<cplx>();
    CMatrix ed = -g.block_d().cast<cplx>();
    ed.diagonal().array() += z + 1.0 / z;
    q -= z * (b.transpose() * ed.partialPivLu().solve(b));
  }
  return q;
}

SingleScattering q_route(const Graph& g, const RVector& eigs, cplx z) {
  const int nb = g.n_boundary(), m = g.n_internal();
  const CMatrix qz = q_impl(g, eigs, z);
  const CMatrix qi = q_impl(g, eigs, 1.0 / z);
  // S Q(z) = -Q(1/z)  <=>  Q(z)^T S^T = -Q(1/z)^T
  Eigen::PartialPivLU<CMatrix> lu(qz.transpose());
  const double rc = lu.rcond();
  if (!(rc > 1e-12)) throw SingularMatrixError("Q(z) is singular", z, rc);
  SingleScattering out;
  out.z = z;
  out.s = lu.solve(-qi.transpose()).transpose();
  if (m > 0) {
    CMatrix ed = -g.block_d().cast<cplx>();
    ed.diagonal().array() += z + 1.0 / z;
    CMatrix rhs = out.s * z;
    rhs.diagonal().array() += 1.0 / z;
    out.psi = ed.partialPivLu().solve(g.block_b().cast<cplx>() * rhs);
  } else {
    out.psi = CMatrix(0, nb);
  }
  return out;
}

}  // namespace

double energy_to_momentum(double E) {
  if (!(E > -2.0 && E < 2.0)) throw DomainError("energy " + std::to_string(E) + " outside (-2,2)");
  return -std::acos(E / 2.0);
}

cplx energy_to_z(double E) { return std::polar(1.0, energy_to_momentum(E)); }

CMatrix q_matrix(const Graph& g, cplx z) {
  if (z == 0.0) throw DomainError("Q(z) undefined at z=0");
  return q_impl(g, d_spectrum(g), z);
}

CMatrix s_matrix_1p(const Graph& g, cplx z) { return q_route(g, d_spectrum(g), z).s; }

CMatrix psi_matrix(const Graph& g, cplx z) { return q_route(g, d_spectrum(g), z).psi; }

SingleScatterer::SingleScatterer(const Graph& g) : SingleScatterer(g, confined_space(g)) {}

SingleScatterer::SingleScatterer(const Graph& g, const ConfinedSpace& cs)
    : g_(g), cr_(g, cs), d_eigs_(d_spectrum(g)) {}

SingleScattering SingleScatterer::via_complement(cplx z) const {
  const int nb = g_.n_boundary(), m = g_.n_internal();
  const CMatrix gi = gamma(g_, 1.0 / z);
  const CMatrix x = -cr_.full(z) * gi.leftCols(nb);
  SingleScattering out;
  out.z = z;
  out.s = x.topRows(nb);
  out.psi = z * x.bottomRows(m);
  out.via_complement = true;
  return out;
}

SingleScattering SingleScatterer::at_z(cplx z) const {
  const cplx e = z + 1.0 / z;
  for (int i = 0; i < d_eigs_.size(); ++i)
    if (std::abs(e - d_eigs_(i)) <= kNearResonance) return via_complement(z);
  try {
    return q_route(g_, d_eigs_, z);
  } catch (const ResonanceError&) {
    return via_complement(z);
  }
}

cplx transmission_1p(const Graph& g, double E, int m, int n) {
  if (m < 1 || m > g.n_boundary() || n < 1 || n > g.n_boundary())
    throw DomainError("rail index out of range");
  const cplx z = energy_to_z(E);
  try {
    return s_matrix_1p(g, z)(m - 1, n - 1);
  } catch (const ResonanceError&) {
    return SingleScatterer(g).via_complement(z).s(m - 1, n - 1);
  }
}

}  // namespace gscat

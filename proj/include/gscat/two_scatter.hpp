#pragma once

#include <limits>
#include <optional>

#include "gscat/bound_spectrum.hpp"
#include "gscat/single_scatter.hpp"

namespace gscat {

// Root of w^2 - c w + 1 = 0 with the smaller modulus, c = E - E' + i eps.
cplx omega_minus(cplx c);
cplx omega_minus(double E, double E_prime, double eps);

struct JOptions {
  double eps = 1e-3;
  int order = 12;         // GL points per panel
  double deform = 0.0;    // contour z = (1 - deform sin t) e^{it}
  bool check = false;     // also evaluate with 2*order and report the change
  double tolerance = 1e-6;
  Exec exec = Exec::Parallel;
  bool richardson = false;  // return 2 J(eps/2) - J(eps), removes the O(eps) bias
};

struct JResult {
  CMatrix j;  // M x M
  int nodes = 0;
  double convergence = 0.0;  // max entry change under order doubling, if checked
};

inline constexpr double kHardCore = std::numeric_limits<double>::infinity();

struct TwoParticleKernel {
  double energy = 0.0;
  double eps = 0.0;
  double u = kHardCore;
  CMatrix j;
  CMatrix ut_inv;  // U (1 - U J)^{-1}, or -J^{-1} at U = infinity
  int nodes = 0;
  double deform = 0.0;
  double convergence = 0.0;
};

// One particle's asymptote: a free wave (energy, 1-based rail) or a bound
// state (index into BoundStateSet::states).
struct Asymptote {
  bool bound = false;
  double energy = 0.0;
  int rail = 0;
  int index = -1;

  static Asymptote free(double E, int rail) { return {false, E, rail, -1}; }
  static Asymptote bound_state(int index) { return {true, 0.0, 0, index}; }
};

struct Channel {
  Asymptote first, second;
  Statistics stats = Statistics::Boson;
};

class TwoScatterer {
 public:
  explicit TwoScatterer(const Graph& g);
  TwoScatterer(const Graph& g, BoundStateSet bs);

  const Graph& graph() const { return g_; }
  const BoundStateSet& bound() const { return bs_; }
  const SingleScatterer& single() const { return single_; }
  const ComplementResolvent& resolvent() const { return cr_; }
  int m() const { return g_.n_internal(); }
  // QEP roots off the unit circle (evanescent and resonant), cached.
  const std::vector<cplx>& roots() const { return roots_; }
  // Largest contour deformation that keeps every resonance outside the
  // region swept between the unit circle and the deformed contour.
  double safe_deform() const;

  JResult j_matrix(double E, const JOptions& opt = {}) const;
  TwoParticleKernel kernel(double E, double U, const JOptions& opt = {}) const;
  TwoParticleKernel kernel_from(const JResult& jr, double E, double U, const JOptions& opt) const;

  double energy_of(const Asymptote& a) const;
  double total_energy(const Channel& c) const;
  // <u|k^+> on G0 in the energy normalization; also <k^-|u> for outgoing waves.
  CVector free_overlap(double E, int rail) const;
  CVector overlap(const Asymptote& a) const;

  // R-amplitude with the energy delta stripped. The kernel fixes the total
  // energy; off-shell outgoing channels are evaluated as given.
  cplx r_amplitude(const TwoParticleKernel& k, const Channel& out, const Channel& in) const;
  // Same with the overlap vectors already formed (cout = <z1|u><z2|u>).
  cplx r_amplitude(const TwoParticleKernel& k, const CVector& cout, const CVector& cin,
                   Statistics stats) const;

 private:
  void validate(const Channel& c) const;

  Graph g_;
  BoundStateSet bs_;
  SingleScatterer single_;
  ComplementResolvent cr_;
  std::vector<cplx> roots_;
};

// Psi Psi^dagger against (z^2-1) gamma(z)^{-1} + (z^-2-1) gamma(1/z)^{-1} on G0.
double psi_psi_dagger_check(const Graph& g, cplx z);

}  // namespace gscat

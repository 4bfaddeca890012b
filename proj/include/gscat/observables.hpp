#pragma once

#include <string>
#include <vector>

#include "gscat/two_scatter.hpp"

namespace gscat {

struct ObservableOptions {
  JOptions j;
  double u = kHardCore;
  Statistics stats = Statistics::Boson;
  int ejection_nodes = 512;
};

// One particle incoming at (E, rail n) meets a second one bound in chi.
struct Outcome {
  std::string kind;  // elastic, inelastic, capture, ejection
  int rail = 0;      // outgoing rail of the free particle (first particle for ejection)
  int target = -1;   // final bound index for elastic/inelastic/capture
  double energy = 0.0;  // outgoing free energy (elastic/inelastic/capture)
  double probability = 0.0;
};

struct ProcessBudget {
  double energy = 0.0;
  int chi = -1;
  int rail_in = 0;
  Statistics stats = Statistics::Boson;
  std::vector<Outcome> outcomes;
  double elastic = 0.0, inelastic = 0.0, capture = 0.0, ejection = 0.0, total = 0.0;
};

class Observables {
 public:
  explicit Observables(const TwoScatterer& ts) : ts_(ts) {}

  const TwoScatterer& scatterer() const { return ts_; }

  // t^{mn}(E) + R_{E^m chi; E^n chi}
  cplx elastic_amplitude(double E, int chi, int m, int n, const ObservableOptions& o) const;
  // R_{E_cons^m chi'; E^n chi}; zero when E_cons leaves the band
  cplx inelastic_amplitude(double E, int chi, int chi2, int m, int n,
                           const ObservableOptions& o) const;
  double ejection_probability(double E, int chi, int m, int n, const ObservableOptions& o) const;
  ProcessBudget process_budget(double E, int chi, int n, const ObservableOptions& o) const;

  // 2 Re R(xi;xi) against -sum_out |R(out;xi)|^2 for a free-free incoming pair.
  struct OpticalReport {
    cplx r_forward;
    double lhs = 0.0;          // 2 Re R(xi; xi)
    double free_free = 0.0;    // integrated |R|^2 over two free outgoing particles
    double free_bound = 0.0;   // summed |R|^2 over one bound outgoing particle
    double rhs = 0.0;          // -(counted free_free + free_bound)
    double residual = 0.0;     // |lhs - rhs| / max(|lhs|, |rhs|)
  };
  OpticalReport optical_theorem(double E1, int n1, double E2, int n2,
                                const ObservableOptions& o) const;

  struct CrossSection {
    double sigma = 0.0;
    cplx integral;
    double delta = 0.0;
    int n1 = 0, n2 = 0;
    double e1 = 0.0, e2 = 0.0;
    double convergence = 0.0;  // |sigma(2n) - sigma(n)|
  };
  CrossSection cross_section(double E1, int n1, double E2, int n2, double delta,
                             const ObservableOptions& o, int nodes = 48,
                             bool check = true) const;

 private:
  void check_chi(int chi) const;
  const TwoScatterer& ts_;
};

// Signed momenta: incoming k > 0 enters on rail 1, k < 0 on rail 2;
// outgoing k > 0 leaves on rail 2, k < 0 on rail 1 (k is the direction of
// travel along a two-rail graph). Energies 2 cos k.
struct SignedMomentum {
  double energy;
  int rail;
};
SignedMomentum incoming_momentum(double k);
SignedMomentum outgoing_momentum(double k);

struct ScanPoint {
  double k1, k2;
  cplx r;
};

// Off-shell grid of R in the momentum normalization over outgoing (k1, k2).
std::vector<ScanPoint> r_grid(const TwoScatterer& ts, double p1, double p2,
                              const std::vector<double>& k1, const std::vector<double>& k2,
                              const ObservableOptions& o);

struct CurvePoint {
  double delta_e;
  double k1, k2;
  cplx r;
};

// R restricted to 2cos k1 + 2cos k2 = 2cos p1 + 2cos p2, both k1, k2 leaving
// on the given rails, parametrized by dE = 2cos k1 - 2cos p1.
std::vector<CurvePoint> onshell_curve(const TwoScatterer& ts, double p1, double p2, int m1,
                                      int m2, int points, const ObservableOptions& o);

}  // namespace gscat

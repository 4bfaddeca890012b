#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "gscat/bound_spectrum.hpp"
#include "gscat/graph.hpp"

namespace gscat {

// Graph plus `rail_length` extra sites on every rail. Graph vertices keep
// their indices; rail n, position x >= 2 sits at n_vertices + (n-1)L + x-2.
class TruncatedSystem {
 public:
  TruncatedSystem(const Graph& g, int rail_length = 400);

  const Graph& graph() const { return g_; }
  int rail_length() const { return len_; }
  int n_sites() const { return g_.n_vertices() + g_.n_boundary() * len_; }
  int site(int rail, int x) const;  // x = 1 is the boundary vertex
  // rail and position of a site; rail 0 for internal vertices
  std::pair<int, int> locate(int i) const;
  bool internal(int i) const { return i >= g_.n_boundary() && i < g_.n_vertices(); }
  const Eigen::SparseMatrix<cplx>& hamiltonian() const { return h_; }
  double spectral_bound() const { return bound_; }

 private:
  Graph g_;
  int len_;
  Eigen::SparseMatrix<cplx> h_;
  double bound_;
};

struct Packet {
  double energy;   // central energy, |E| < 2
  int rail;
  double sigma = 20.0;   // spatial width in sites
  double center = 0.0;   // rail position; 0 means the middle of the rail
};

// Gaussian moving toward the graph, unit norm
CVector packet_state(const TruncatedSystem& sys, const Packet& p);
// bound state continued onto the rails (x z^{x-1}), unit norm on the truncated lattice
CVector bound_state_on(const TruncatedSystem& sys, const BoundState& s);

// time for the packet to reach the graph and come back out as far
double crossing_time(const TruncatedSystem& sys, const Packet& p);

// <f> over the packet's momentum density, f given as a function of energy;
// f may return a double or an Eigen vector
template <class F>
auto packet_average(const Packet& p, F&& f, int nodes = 64);

struct OneParticleResult {
  std::vector<double> rail;  // probability beyond `near` sites on each rail
  double near = 0.0;         // graph plus the first rail sites
  double edge = 0.0;         // within 10 sites of a truncation end
  double norm_error = 0.0;
  double energy_error = 0.0;
  bool inconclusive = false;
};

struct TwoParticleResult {
  // q(a, b): particle one in region a, two in region b; regions 1..nb are the
  // far rails, 0 is near
  RMatrix q;
  // bound(m-1, k): particle one far on rail m, particle two in bound state k;
  // swapped() holds the mirror (two far, one bound)
  RMatrix bound, swapped;
  // the same projections summed over every position of the other particle
  RVector bound_any, swapped_any;
  double edge = 0.0;
  double norm_error = 0.0;
  double energy_error = 0.0;
  bool inconclusive = false;
};

struct EvolveOptions {
  double chunk = 20.0;  // Chebyshev step
  int near = 60;        // rail sites counted as near the graph
  // optional: called at `samples`+1 equally spaced times with the one-body
  // density (unit sum over sites)
  int samples = 0;
  std::function<void(double, const RVector&)> observe;
};

// density summed per region: near, then the far part of each rail
std::vector<double> region_weights(const TruncatedSystem& sys, const RVector& density, int near);

OneParticleResult evolve_1p(const TruncatedSystem& sys, const CVector& psi0, double t,
                            const EvolveOptions& o = {});

// psi0(a, b) is the amplitude for particle one at a and two at b. U acts on
// internal vertices; U = infinity removes double occupancy there.
TwoParticleResult evolve_2p(const TruncatedSystem& sys, const CMatrix& psi0, double t,
                            double U, const BoundStateSet& bs, const EvolveOptions& o = {});

// the recorded wavefunction at time t, for the factorization check
CMatrix propagate_2p(const TruncatedSystem& sys, const CMatrix& psi0, double t, double U,
                     const EvolveOptions& o = {});
CVector propagate_1p(const TruncatedSystem& sys, const CVector& psi0, double t,
                     const EvolveOptions& o = {});

struct ScenarioReport {
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> observed, predicted;
  double max_difference = 0.0;
  double norm_error = 0.0;
  bool inconclusive = false;
  bool passed = false;
  std::string note;  // the paper-level bound that was also checked
  // t, near, rail 1..nb from region_weights, when samples were requested
  std::vector<std::string> series_labels;
  std::vector<std::vector<double>> series;
};

std::vector<std::string> scenario_names();
ScenarioReport run_scenario(const std::string& name, int rail_length = 400, double sigma = 20.0,
                            int samples = 0);

template <class F>
auto packet_average(const Packet& p, F&& f, int nodes) {
  // momentum density exp(-2 sigma^2 (k-k0)^2)
  const double k0 = std::acos(p.energy / 2.0), width = 6.0 / (2.0 * p.sigma);
  const double lo = std::max(k0 - width, 1e-9), hi = std::min(k0 + width, kPi - 1e-9);
  using R = std::decay_t<decltype(f(0.0))>;
  R num{};
  double den = 0.0;
  for (int i = 0; i < nodes; ++i) {
    // midpoint rule, the density is smooth and negligible at the ends
    const double k = lo + (hi - lo) * (i + 0.5) / nodes;
    const double w = std::exp(-2.0 * p.sigma * p.sigma * (k - k0) * (k - k0));
    const R v = f(2.0 * std::cos(k));
    if (i == 0) num = w * v;
    else num += w * v;
    den += w;
  }
  return R(num / den);
}

}  // namespace gscat

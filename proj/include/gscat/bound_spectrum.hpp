#pragma once

#include <string>
#include <vector>

#include "gscat/graph.hpp"

namespace gscat {

// gamma(z) = -z^2 P_M + z H_G - 1
CMatrix gamma(const Graph& g, cplx z);

// Confined subspace: eigenvectors of D inside ker B^T, embedded in V(G).
// complement is a real orthonormal basis of its orthogonal complement; it
// always contains the boundary unit vectors.
struct ConfinedSpace {
  RMatrix states;      // n x n_c
  RVector energies;    // lambda_c, one per column of states
  RMatrix complement;  // n x (n - n_c)
};

ConfinedSpace confined_space(const Graph& g);

// Spectrum of the reversed companion C = [[0, I], [-P_M, H]] (size 2n);
// mu = 1/z, mu = 0 are the eigenvalues of gamma at infinity.
struct QepSpectrum {
  CMatrix companion_vectors;  // 2n x 2n right eigenvectors
  CVector mu;                 // 2n eigenvalues
  std::vector<cplx> finite;   // z = 1/mu for |mu| above the zero threshold
  int n_infinite = 0;
  std::vector<int> kernel_dims;  // dim ker C^k, k = 1, 2, 3, ...
};

QepSpectrum solve_qep(const Graph& g);

enum class BoundClass { Confined, ConfinedPm1, Evanescent, HalfBound };

const char* to_string(BoundClass c);

struct BoundState {
  BoundClass cls;
  cplx z;        // confined: the root with Im z <= 0
  double energy;
  RVector x;     // real amplitudes on V(G)
  CVector y;     // left vector entering the residue form, empty for half-bound
};

// Evanescent x: |beta|^2 + |alpha|^2 / (1 - z^2) = 1 (graph plus rails).
// Confined x: unit norm on G. Half-bound x: unit norm on G.
struct BoundStateSet {
  std::vector<BoundState> states;
  int n_ev = 0;
  int n_c = 0;  // includes the z = +-1 confined states
  int n_h = 0;

  // Normalizable states (confined and evanescent), in storage order.
  std::vector<int> bound_indices() const;
  std::vector<int> indices(BoundClass c) const;
};

BoundStateSet classify_bound_states(const Graph& g, const QepSpectrum& q);
BoundStateSet bound_states(const Graph& g);

// Inverse of gamma restricted to the confined complement, expressed in the
// vertex basis: W (W^T gamma W)^{-1} W^T. Cached per graph; thread-safe.
class ComplementResolvent {
 public:
  explicit ComplementResolvent(const Graph& g);
  ComplementResolvent(const Graph& g, const ConfinedSpace& cs);

  const ConfinedSpace& confined() const { return cs_; }
  int n() const { return n_; }
  int n_boundary() const { return nb_; }

  CMatrix reduced(cplx z) const;      // W^T gamma(z) W
  CMatrix full(cplx z) const;         // n x n
  CMatrix internal(cplx z) const;     // M x M block on G0
  // Writes the internal block into out (M x M); avoids allocating n x n.
  void internal_into(cplx z, CMatrix& out) const;

 private:
  RMatrix h_, pm_, w_;
  RMatrix wh_w_, wpm_w_;
  ConfinedSpace cs_;
  int n_, nb_;
};

// Direct inverse of gamma(z). Throws SingularMatrixError naming the nearest
// QEP eigenvalue when z is within 1e-9 of the spectrum.
CMatrix gamma_inverse(const Graph& g, cplx z);
CMatrix gamma_inverse(const Graph& g, const QepSpectrum& q, cplx z);

// Residue data of gamma^{-1} at every finite eigenvalue, from left/right
// null spaces of the companion pencil.
struct Pole {
  cplx z;
  int multiplicity;
  CMatrix residue;  // n x n
  bool jordan_ok;   // semisimple within tolerance
};

struct ResolventData {
  std::vector<Pole> poles;
  std::vector<int> kernel_dims;
  bool complete = true;  // every pole semisimple and infinity chains of length 2
};

ResolventData resolvent_data(const Graph& g, const QepSpectrum& q);

// -1 + sum_k R_k z / (z_k (z - z_k)); valid when gamma^{-1} is bounded at
// infinity (chain condition).
CMatrix reconstruct_inverse(const ResolventData& rd, cplx z, int n);

struct ResidueReport {
  bool supported = false;
  std::string message;
  bool infinity_chains_ok = false;
  std::vector<int> kernel_dims;
  std::vector<double> residue_errors;  // one per evanescent group
  double max_error = 0.0;
  bool passed = false;
};

// Small-circle contour estimate of Res gamma_nc^{-1} at each evanescent z,
// compared with -sum x x^T / (z - 1/z).
ResidueReport verify_residues(const Graph& g, const BoundStateSet& bs, int nodes = 64,
                              double radius = 1e-4);

// Independent count of real roots of det gamma_nc on (-1, 1) from the
// inertia of LDL^T along a grid, plus nullities at +-1.
struct InertiaCount {
  int roots_open = 0;
  int nullity_plus = 0;
  int nullity_minus = 0;
};

InertiaCount inertia_scan(const Graph& g, int points = 4001);

}  // namespace gscat

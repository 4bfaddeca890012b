#include "gscat/observables.hpp"

#include <cmath>
#include <sstream>

#include "gscat/quadrature.hpp"

namespace gscat {

namespace {

// All rails at once: columns are <u|E^{n+}> on G0, energy normalized.
CMatrix free_overlaps(const TwoScatterer& ts, double E) {
  const SingleScattering s = ts.single().at_energy(E);
  return s.psi / (std::sqrt(2.0 * kPi) * std::pow(4.0 - E * E, 0.25));
}

cplx bilinear(const CVector& a, const CVector& b) { return a.cwiseProduct(b).sum(); }

cplx prefactor(Statistics s) {
  const double b = statistics_factor(s);
  return -2.0 * kPi * 1i * (b * b);
}

// Kernel applied to the incoming overlap; every amplitude out of this
// incoming channel is prefactor * cout^T v.
struct Prepared {
  TwoParticleKernel kernel;
  CVector v;
  cplx pref;
};

Prepared prepare(const TwoScatterer& ts, double Et, const CVector& cin, const ObservableOptions& o) {
  Prepared p;
  p.kernel = ts.kernel(Et, o.u, o.j);
  p.v = p.kernel.ut_inv * cin;
  p.pref = prefactor(o.stats);
  return p;
}

// integral over the first outgoing energy of sum_{m,m'} |R|^2 with both
// particles free; per-rail totals of the first particle in `per_rail`
double free_free(const TwoScatterer& ts, const Prepared& p, double Et, int nodes,
                 std::vector<double>* per_rail) {
  const int nb = ts.graph().n_boundary();
  if (per_rail) per_rail->assign(nb, 0.0);
  const double lo = std::max(-2.0, Et - 2.0), hi = std::min(2.0, Et + 2.0);
  if (!(hi > lo)) return 0.0;
  const Rule r = cosine_rule(lo, hi, nodes);
  double total = 0.0;
  for (int k = 0; k < r.size(); ++k) {
    const CMatrix a1 = free_overlaps(ts, r.x[k]);
    const CMatrix a2 = free_overlaps(ts, Et - r.x[k]);
    const CMatrix amp = p.pref * (a1.transpose() * p.v.asDiagonal() * a2);
    for (int m = 0; m < nb; ++m) {
      const double s = r.w[k] * amp.row(m).cwiseAbs2().sum();
      total += s;
      if (per_rail) (*per_rail)[m] += s;
    }
  }
  return total;
}

}  // namespace

void Observables::check_chi(int chi) const {
  const auto& st = ts_.bound().states;
  if (chi < 0 || chi >= static_cast<int>(st.size()) || st[chi].cls == BoundClass::HalfBound)
    throw DomainError("chi must index a confined or evanescent state");
}

cplx Observables::elastic_amplitude(double E, int chi, int m, int n,
                                    const ObservableOptions& o) const {
  check_chi(chi);
  const Channel in{Asymptote::free(E, n), Asymptote::bound_state(chi), o.stats};
  const Channel out{Asymptote::free(E, m), Asymptote::bound_state(chi), o.stats};
  const double Et = ts_.total_energy(in);
  const cplx t = ts_.single().at_energy(E).s(m - 1, n - 1);
  return t + ts_.r_amplitude(ts_.kernel(Et, o.u, o.j), out, in);
}

cplx Observables::inelastic_amplitude(double E, int chi, int chi2, int m, int n,
                                      const ObservableOptions& o) const {
  check_chi(chi);
  check_chi(chi2);
  const double Et = E + ts_.bound().states[chi].energy;
  const double Ec = Et - ts_.bound().states[chi2].energy;
  if (!(std::abs(Ec) < 2.0)) return 0.0;
  const Channel in{Asymptote::free(E, n), Asymptote::bound_state(chi), o.stats};
  const Channel out{Asymptote::free(Ec, m), Asymptote::bound_state(chi2), o.stats};
  return ts_.r_amplitude(ts_.kernel(Et, o.u, o.j), out, in);
}

double Observables::ejection_probability(double E, int chi, int m, int n,
                                         const ObservableOptions& o) const {
  check_chi(chi);
  if (m < 1 || m > ts_.graph().n_boundary()) throw DomainError("rail index out of range");
  const double Et = E + ts_.bound().states[chi].energy;
  const CVector cin = ts_.free_overlap(E, n).cwiseProduct(ts_.overlap(Asymptote::bound_state(chi)));
  const Prepared p = prepare(ts_, Et, cin, o);
  std::vector<double> per;
  free_free(ts_, p, Et, o.ejection_nodes, &per);
  return (o.stats == Statistics::Boson ? 0.5 : 1.0) * per[m - 1];
}

ProcessBudget Observables::process_budget(double E, int chi, int n,
                                          const ObservableOptions& o) const {
  check_chi(chi);
  const BoundStateSet& bs = ts_.bound();
  const int nb = ts_.graph().n_boundary();
  if (n < 1 || n > nb) throw DomainError("rail index out of range");
  ProcessBudget b;
  b.energy = E;
  b.chi = chi;
  b.rail_in = n;
  b.stats = o.stats;
  const double Et = E + bs.states[chi].energy;
  const CVector xchi = ts_.overlap(Asymptote::bound_state(chi));
  const CMatrix ain = free_overlaps(ts_, E);
  const Prepared p = prepare(ts_, Et, ain.col(n - 1).cwiseProduct(xchi), o);
  const CMatrix s = ts_.single().at_energy(E).s;

  for (int m = 1; m <= nb; ++m) {
    const cplx amp = s(m - 1, n - 1) + p.pref * bilinear(ain.col(m - 1).cwiseProduct(xchi), p.v);
    b.outcomes.push_back({"elastic", m, chi, E, std::norm(amp)});
    b.elastic += std::norm(amp);
  }
  for (int k : bs.bound_indices()) {
    const double Ec = Et - bs.states[k].energy;
    if (!(std::abs(Ec) < 2.0)) continue;
    const CVector xk = ts_.overlap(Asymptote::bound_state(k));
    const CMatrix aout = free_overlaps(ts_, Ec);
    for (int m = 1; m <= nb; ++m) {
      const double pr = std::norm(p.pref * bilinear(aout.col(m - 1).cwiseProduct(xk), p.v));
      if (k != chi) {
        b.outcomes.push_back({"inelastic", m, k, Ec, pr});
        b.inelastic += pr;
      }
      // distinguishable: the incoming particle stays bound in k, the other leaves
      if (o.stats == Statistics::Distinguishable) {
        b.outcomes.push_back({"capture", m, k, Ec, pr});
        b.capture += pr;
      }
    }
  }
  std::vector<double> per;
  free_free(ts_, p, Et, o.ejection_nodes, &per);
  const double half = o.stats == Statistics::Boson ? 0.5 : 1.0;
  for (int m = 1; m <= nb; ++m) {
    b.outcomes.push_back({"ejection", m, -1, 0.0, half * per[m - 1]});
    b.ejection += half * per[m - 1];
  }
  b.total = b.elastic + b.inelastic + b.capture + b.ejection;
  return b;
}

Observables::OpticalReport Observables::optical_theorem(double E1, int n1, double E2, int n2,
                                                        const ObservableOptions& o) const {
  OpticalReport rep;
  const double Et = E1 + E2;
  const CVector cin = ts_.free_overlap(E1, n1).cwiseProduct(ts_.free_overlap(E2, n2));
  const Prepared p = prepare(ts_, Et, cin, o);
  // forward element between incoming (+) states: the bra is conjugated
  rep.r_forward = p.pref * cin.dot(p.v);
  rep.lhs = 2.0 * rep.r_forward.real();
  rep.free_free = free_free(ts_, p, Et, o.ejection_nodes, nullptr);
  for (int k : ts_.bound().bound_indices()) {
    const double Ec = Et - ts_.bound().states[k].energy;
    if (!(std::abs(Ec) < 2.0)) continue;
    const CVector xk = ts_.overlap(Asymptote::bound_state(k));
    const CMatrix aout = free_overlaps(ts_, Ec);
    for (int m = 0; m < aout.cols(); ++m)
      rep.free_bound += std::norm(p.pref * bilinear(aout.col(m).cwiseProduct(xk), p.v));
  }
  if (o.stats == Statistics::Boson)
    rep.rhs = -(0.5 * rep.free_free + rep.free_bound);
  else
    rep.rhs = -(rep.free_free + 2.0 * rep.free_bound);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.residual = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
  return rep;
}

namespace {

// v(Et) = int a_{n1}(e) * a_{n2}(Et - e) de over the part of both packets
// compatible with Et
CVector packet_overlap(const TwoScatterer& ts, double Et, double E1, int n1, double E2, int n2,
                       double delta, int nodes) {
  const double lo = std::max(E1 - delta, Et - E2 - delta);
  const double hi = std::min(E1 + delta, Et - E2 + delta);
  CVector v = CVector::Zero(ts.m());
  if (!(hi > lo)) return v;
  const Rule r = gauss_legendre(nodes, lo, hi);
  for (int k = 0; k < r.size(); ++k)
    v += r.w[k] * ts.free_overlap(r.x[k], n1).cwiseProduct(ts.free_overlap(Et - r.x[k], n2));
  return v;
}

cplx packet_integral(const TwoScatterer& ts, double E1, int n1, double E2, int n2, double delta,
                     const ObservableOptions& o, int nodes) {
  const double ec = E1 + E2;
  // the overlap length is a tent in Et with its kink at ec
  Rule left = gauss_legendre(nodes, ec - 2.0 * delta, ec);
  Rule right = gauss_legendre(nodes, ec, ec + 2.0 * delta);
  std::vector<double> xs = left.x, ws = left.w;
  xs.insert(xs.end(), right.x.begin(), right.x.end());
  ws.insert(ws.end(), right.w.begin(), right.w.end());
  const int n = static_cast<int>(xs.size());
  std::vector<cplx> terms(n);
  JOptions jo = o.j;
  jo.exec = Exec::Serial;
  const cplx pref = prefactor(o.stats);
  auto one = [&](int k) {
    const CVector v = packet_overlap(ts, xs[k], E1, n1, E2, n2, delta, nodes);
    const TwoParticleKernel kern = ts.kernel(xs[k], o.u, jo);
    terms[k] = ws[k] * pref * v.dot(kern.ut_inv * v);
  };
  if (o.j.exec == Exec::Parallel) {
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
      try {
        one(k);
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
    if (!failure.empty()) throw Error(failure);
  } else {
    for (int k = 0; k < n; ++k) one(k);
  }
  cplx total = 0.0;
  for (const cplx& t : terms) total += t;
  return total / (4.0 * delta * delta);
}

}  // namespace

Observables::CrossSection Observables::cross_section(double E1, int n1, double E2, int n2,
                                                     double delta, const ObservableOptions& o,
                                                     int nodes, bool check) const {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(E1 - delta > -2.0 && E1 + delta < 2.0 && E2 - delta > -2.0 && E2 + delta < 2.0))
    throw DomainError("wavepacket leaves the band");
  const int nb = ts_.graph().n_boundary();
  if (n1 < 1 || n1 > nb || n2 < 1 || n2 > nb) throw DomainError("rail index out of range");
  if (nodes < 2) throw DomainError("need at least 2 nodes");
  CrossSection cs;
  cs.delta = delta;
  cs.n1 = n1;
  cs.n2 = n2;
  cs.e1 = E1;
  cs.e2 = E2;
  cs.integral = packet_integral(ts_, E1, n1, E2, n2, delta, o, nodes);
  cs.sigma = -2.0 * cs.integral.real();
  if (check) {
    const cplx fine = packet_integral(ts_, E1, n1, E2, n2, delta, o, 2 * nodes);
    const double sf = -2.0 * fine.real();
    cs.convergence = std::abs(sf - cs.sigma);
    if (cs.convergence > 1e-2 * std::max(std::abs(sf), 1e-6)) {
      std::ostringstream os;
      os << "cross section changed by " << cs.convergence << " under node doubling";
      throw AccuracyError(os.str());
    }
    cs.integral = fine;
    cs.sigma = sf;
  }
  return cs;
}

SignedMomentum incoming_momentum(double k) {
  if (!(std::abs(k) > 0.0 && std::abs(k) < kPi)) throw DomainError("momentum must lie in (-pi,0) or (0,pi)");
  return {2.0 * std::cos(k), k > 0.0 ? 1 : 2};
}

SignedMomentum outgoing_momentum(double k) {
  if (!(std::abs(k) > 0.0 && std::abs(k) < kPi)) throw DomainError("momentum must lie in (-pi,0) or (0,pi)");
  return {2.0 * std::cos(k), k > 0.0 ? 2 : 1};
}

namespace {

// <u|k^{rail}> in the momentum normalization
CVector momentum_overlap(const TwoScatterer& ts, const SignedMomentum& s) {
  return ts.free_overlap(s.energy, s.rail) * std::pow(4.0 - s.energy * s.energy, 0.25);
}

}  // namespace

std::vector<ScanPoint> r_grid(const TwoScatterer& ts, double p1, double p2,
                              const std::vector<double>& k1, const std::vector<double>& k2,
                              const ObservableOptions& o) {
  const SignedMomentum a = incoming_momentum(p1), b = incoming_momentum(p2);
  const CVector cin = momentum_overlap(ts, a).cwiseProduct(momentum_overlap(ts, b));
  const TwoParticleKernel kern = ts.kernel(a.energy + b.energy, o.u, o.j);
  std::vector<CVector> o1, o2;
  for (double k : k1) o1.push_back(momentum_overlap(ts, outgoing_momentum(k)));
  for (double k : k2) o2.push_back(momentum_overlap(ts, outgoing_momentum(k)));
  std::vector<ScanPoint> out(k1.size() * k2.size());
  const int n1 = static_cast<int>(k1.size()), n2 = static_cast<int>(k2.size());
#pragma omp parallel for collapse(2) if (o.j.exec == Exec::Parallel)
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      out[i * n2 + j] = {k1[i], k2[j],
                         ts.r_amplitude(kern, o1[i].cwiseProduct(o2[j]), cin, o.stats)};
  return out;
}

std::vector<CurvePoint> onshell_curve(const TwoScatterer& ts, double p1, double p2, int m1,
                                      int m2, int points, const ObservableOptions& o) {
  if (points < 1) throw DomainError("need at least one point");
  const int nb = ts.graph().n_boundary();
  if (nb != 2) throw DomainError("on-shell curves need a two-rail graph");
  if (m1 < 1 || m1 > 2 || m2 < 1 || m2 > 2) throw DomainError("rail index out of range");
  const SignedMomentum a = incoming_momentum(p1), b = incoming_momentum(p2);
  const double Et = a.energy + b.energy;
  const CVector cin = momentum_overlap(ts, a).cwiseProduct(momentum_overlap(ts, b));
  const TwoParticleKernel kern = ts.kernel(Et, o.u, o.j);
  const double lo = std::max(-2.0, Et - 2.0), hi = std::min(2.0, Et + 2.0);
  std::vector<CurvePoint> out;
  for (int i = 0; i < points; ++i) {
    const double e1 = lo + (hi - lo) * (i + 0.5) / points, e2 = Et - e1;
    const double k1 = std::acos(e1 / 2.0) * (m1 == 2 ? 1.0 : -1.0);
    const double k2 = std::acos(e2 / 2.0) * (m2 == 2 ? 1.0 : -1.0);
    const CVector cout = momentum_overlap(ts, {e1, m1}).cwiseProduct(momentum_overlap(ts, {e2, m2}));
    out.push_back({e1 - a.energy, k1, k2, ts.r_amplitude(kern, cout, cin, o.stats)});
  }
  return out;
}

}  // namespace gscat

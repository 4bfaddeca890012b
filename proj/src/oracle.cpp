#include "gscat/oracle.hpp"

#include "gscat/observables.hpp"
#include "gscat/single_scatter.hpp"

#include <cmath>
#include <sstream>

namespace gscat {

TruncatedSystem::TruncatedSystem(const Graph& g, int rail_length) : g_(g), len_(rail_length) {
  if (rail_length < 20) throw DomainError("rail_length must be at least 20");
  const int n = n_sites(), nv = g.n_vertices();
  std::vector<Eigen::Triplet<cplx>> t;
  const RMatrix& a = g.adjacency();
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (a(i, j) != 0.0) t.emplace_back(i, j, a(i, j));
  for (int r = 1; r <= g.n_boundary(); ++r)
    for (int x = 1; x <= len_; ++x) {
      const int i = site(r, x), j = site(r, x + 1);
      t.emplace_back(i, j, 1.0);
      t.emplace_back(j, i, 1.0);
    }
  h_.resize(n, n);
  h_.setFromTriplets(t.begin(), t.end());
  bound_ = 0.0;
  for (int k = 0; k < h_.outerSize(); ++k) {
    double s = 0.0;
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(h_, k); it; ++it) s += std::abs(it.value());
    bound_ = std::max(bound_, s);
  }
}

int TruncatedSystem::site(int rail, int x) const {
  if (rail < 1 || rail > g_.n_boundary() || x < 1 || x > len_ + 1)
    throw DomainError("site outside the truncated rails");
  if (x == 1) return rail - 1;
  return g_.n_vertices() + (rail - 1) * len_ + (x - 2);
}

std::pair<int, int> TruncatedSystem::locate(int i) const {
  const int nv = g_.n_vertices();
  if (i < g_.n_boundary()) return {i + 1, 1};
  if (i < nv) return {0, 0};
  const int k = i - nv;
  return {k / len_ + 1, k % len_ + 2};
}

CVector packet_state(const TruncatedSystem& sys, const Packet& p) {
  if (!(std::abs(p.energy) < 2.0)) throw DomainError("packet energy outside the band");
  const double x0 = p.center > 0.0 ? p.center : 0.5 * sys.rail_length();
  if (x0 - 5.0 * p.sigma < 1.0 || x0 + 5.0 * p.sigma > sys.rail_length() + 1)
    throw DomainError("packet does not fit on the rail");
  const double k0 = std::acos(p.energy / 2.0);
  CVector psi = CVector::Zero(sys.n_sites());
  for (int x = 2; x <= sys.rail_length() + 1; ++x) {
    const double d = (x - x0) / p.sigma;
    psi(sys.site(p.rail, x)) = std::exp(-0.25 * d * d) * std::polar(1.0, k0 * x);
  }
  return psi / psi.norm();
}

CVector bound_state_on(const TruncatedSystem& sys, const BoundState& s) {
  if (s.cls == BoundClass::HalfBound) throw DomainError("half-bound states do not fit a finite lattice");
  const Graph& g = sys.graph();
  CVector psi = CVector::Zero(sys.n_sites());
  psi.head(g.n_vertices()) = s.x.cast<cplx>();
  if (s.cls == BoundClass::Evanescent) {
    const double z = s.z.real();
    for (int r = 1; r <= g.n_boundary(); ++r) {
      double amp = s.x(r - 1);
      for (int x = 2; x <= sys.rail_length() + 1; ++x) {
        amp *= z;
        psi(sys.site(r, x)) = amp;
      }
    }
  }
  return psi / psi.norm();
}

double crossing_time(const TruncatedSystem& sys, const Packet& p) {
  const double x0 = p.center > 0.0 ? p.center : 0.5 * sys.rail_length();
  const double v = 2.0 * std::sin(std::acos(p.energy / 2.0));
  return 2.0 * x0 / v;
}

namespace {

// e^{-iHt} psi by a Chebyshev series in H/a, applied in chunks
template <class State, class Apply>
void chebyshev(State& psi, double t, double a, double chunk, Apply&& h) {
  int steps = std::max(1, static_cast<int>(std::ceil(t / chunk)));
  const double dt = t / steps;
  const double x = a * dt;
  std::vector<cplx> c;
  for (int k = 0;; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(k), x);
    c.push_back((k == 0 ? 1.0 : 2.0) * std::pow(-1i, k) * j);
    if (k > x + 10 && std::abs(j) < 1e-17) break;
  }
  for (int s = 0; s < steps; ++s) {
    State t0 = psi;
    State t1 = h(t0) / a;
    State acc = c[0] * t0 + c[1] * t1;
    for (std::size_t k = 2; k < c.size(); ++k) {
      State t2 = 2.0 * h(t1) / a - t0;
      acc += c[k] * t2;
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    psi = std::move(acc);
  }
}

// evolve to t, reporting the density at the requested sample times
template <class Step, class Density>
void run_observed(const EvolveOptions& o, double t, Step&& step, Density&& density) {
  if (o.samples <= 0 || !o.observe) {
    step(t);
    return;
  }
  o.observe(0.0, density());
  for (int s = 1; s <= o.samples; ++s) {
    step(t / o.samples);
    o.observe(t * s / o.samples, density());
  }
}

struct TwoBody {
  const TruncatedSystem& sys;
  double u;
  bool hard;
  std::vector<int> internal;

  TwoBody(const TruncatedSystem& s, double U)
      : sys(s), u(U), hard(std::isinf(U)) {
    for (int i = s.graph().n_boundary(); i < s.graph().n_vertices(); ++i) internal.push_back(i);
  }
  CMatrix operator()(const CMatrix& psi) const {
    const auto& h = sys.hamiltonian();
    CMatrix out = h * psi;
    out += (h * psi.transpose()).transpose();
    for (int i : internal) out(i, i) = hard ? 0.0 : out(i, i) + u * psi(i, i);
    return out;
  }
  double bound() const { return 2.0 * sys.spectral_bound() + (hard ? 0.0 : std::abs(u)); }
};

double edge_weight(const TruncatedSystem& sys, const CVector& p) {
  double e = 0.0;
  for (int r = 1; r <= sys.graph().n_boundary(); ++r)
    for (int x = sys.rail_length() - 8; x <= sys.rail_length() + 1; ++x)
      e += std::norm(p(sys.site(r, x)));
  return e;
}

// region of a site: rail index when far, 0 when near the graph
int region(const TruncatedSystem& sys, int i, int near) {
  const auto [r, x] = sys.locate(i);
  return (r > 0 && x > near) ? r : 0;
}

}  // namespace

std::vector<double> region_weights(const TruncatedSystem& sys, const RVector& density, int near) {
  std::vector<double> w(sys.graph().n_boundary() + 1, 0.0);
  for (int i = 0; i < density.size(); ++i) w[region(sys, i, near)] += density(i);
  return w;
}

CVector propagate_1p(const TruncatedSystem& sys, const CVector& psi0, double t,
                     const EvolveOptions& o) {
  CVector psi = psi0;
  const auto& h = sys.hamiltonian();
  run_observed(
      o, t,
      [&](double dt) {
        chebyshev(psi, dt, sys.spectral_bound() * 1.01, o.chunk,
                  [&](const CVector& v) -> CVector { return h * v; });
      },
      [&] { return RVector(psi.cwiseAbs2() / psi.squaredNorm()); });
  return psi;
}

OneParticleResult evolve_1p(const TruncatedSystem& sys, const CVector& psi0, double t,
                            const EvolveOptions& o) {
  const auto& h = sys.hamiltonian();
  const CVector psi = propagate_1p(sys, psi0, t, o);
  OneParticleResult r;
  const int nb = sys.graph().n_boundary();
  r.rail.assign(nb, 0.0);
  for (int i = 0; i < psi.size(); ++i) {
    const int g = region(sys, i, o.near);
    if (g > 0) r.rail[g - 1] += std::norm(psi(i));
    else r.near += std::norm(psi(i));
  }
  r.edge = edge_weight(sys, psi);
  r.norm_error = std::abs(psi.squaredNorm() - psi0.squaredNorm());
  r.energy_error = std::abs(psi.dot(h * psi) - psi0.dot(h * psi0));
  r.inconclusive = r.edge > 1e-4;
  return r;
}

CMatrix propagate_2p(const TruncatedSystem& sys, const CMatrix& psi0, double t, double U,
                     const EvolveOptions& o) {
  TwoBody hb(sys, U);
  CMatrix psi = psi0;
  if (hb.hard)
    for (int i : hb.internal) psi(i, i) = 0.0;
  run_observed(
      o, t, [&](double dt) { chebyshev(psi, dt, hb.bound() * 1.01, o.chunk, hb); },
      [&] {
        return RVector((psi.rowwise().squaredNorm() + psi.colwise().squaredNorm().transpose()) /
                       (2.0 * psi.squaredNorm()));
      });
  return psi;
}

TwoParticleResult evolve_2p(const TruncatedSystem& sys, const CMatrix& psi0, double t,
                            double U, const BoundStateSet& bs, const EvolveOptions& o) {
  const int n = sys.n_sites(), nb = sys.graph().n_boundary();
  if (psi0.rows() != n || psi0.cols() != n) throw DomainError("two-particle state has the wrong size");
  TwoBody hb(sys, U);
  CMatrix start = psi0;
  if (hb.hard)
    for (int i : hb.internal) start(i, i) = 0.0;
  const CMatrix psi = propagate_2p(sys, start, t, U, o);

  TwoParticleResult r;
  r.q = RMatrix::Zero(nb + 1, nb + 1);
  std::vector<int> reg(n);
  for (int i = 0; i < n; ++i) reg[i] = region(sys, i, o.near);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) r.q(reg[a], reg[b]) += std::norm(psi(a, b));

  const int nk = static_cast<int>(bs.states.size());
  r.bound = RMatrix::Zero(nb, nk);
  r.swapped = RMatrix::Zero(nb, nk);
  r.bound_any = RVector::Zero(nk);
  r.swapped_any = RVector::Zero(nk);
  for (int k = 0; k < nk; ++k) {
    if (bs.states[k].cls == BoundClass::HalfBound) continue;
    const CVector chi = bound_state_on(sys, bs.states[k]);
    const CVector one = psi * chi.conjugate();              // particle two in chi
    const CVector two = psi.transpose() * chi.conjugate();  // particle one in chi
    r.bound_any(k) = one.squaredNorm();
    r.swapped_any(k) = two.squaredNorm();
    for (int a = 0; a < n; ++a) {
      if (reg[a] == 0) continue;
      r.bound(reg[a] - 1, k) += std::norm(one(a));
      r.swapped(reg[a] - 1, k) += std::norm(two(a));
    }
  }

  double edge = 0.0;
  const CVector m1 = psi.rowwise().squaredNorm().cast<cplx>();
  const CVector m2 = psi.colwise().squaredNorm().transpose().cast<cplx>();
  edge = edge_weight(sys, m1.cwiseSqrt()) + edge_weight(sys, m2.cwiseSqrt());
  r.edge = edge;
  r.norm_error = std::abs(psi.squaredNorm() - start.squaredNorm());
  const cplx e0 = (start.conjugate().cwiseProduct(hb(start))).sum();
  const cplx e1 = (psi.conjugate().cwiseProduct(hb(psi))).sum();
  r.energy_error = std::abs(e1 - e0);
  r.inconclusive = r.edge > 1e-4;
  return r;
}

namespace {

int top_state(const BoundStateSet& bs, BoundClass c) {
  int best = -1;
  for (int i : bs.indices(c))
    if (best < 0 || bs.states[i].energy > bs.states[best].energy) best = i;
  if (best < 0) throw DomainError("graph has no bound state of the requested class");
  return best;
}

void add(ScenarioReport& r, const std::string& label, double obs, double pred) {
  r.labels.push_back(label);
  r.observed.push_back(obs);
  r.predicted.push_back(pred);
  r.max_difference = std::max(r.max_difference, std::abs(obs - pred));
}

// records region_weights into r.series while evolving
EvolveOptions recording(ScenarioReport& r, const TruncatedSystem& sys, int samples) {
  EvolveOptions o;
  if (samples <= 0) return o;
  o.samples = samples;
  r.series_labels = {"t", "near"};
  for (int m = 1; m <= sys.graph().n_boundary(); ++m) r.series_labels.push_back("rail_" + std::to_string(m));
  o.observe = [&r, &sys, near = o.near](double t, const RVector& d) {
    std::vector<double> row{t};
    const std::vector<double> w = region_weights(sys, d, near);
    row.insert(row.end(), w.begin(), w.end());
    r.series.push_back(std::move(row));
  };
  return o;
}

ScenarioReport one_particle(const std::string& name, const char* family, double E,
                            int rail_length, double sigma, int samples) {
  ScenarioReport r;
  r.name = name;
  Graph g = make_family(parse_family(family));
  TruncatedSystem sys(g, rail_length);
  Packet p{E, 1, sigma};
  const OneParticleResult res =
      evolve_1p(sys, packet_state(sys, p), crossing_time(sys, p), recording(r, sys, samples));
  SingleScatterer sc(g);
  for (int m = 1; m <= g.n_boundary(); ++m) {
    const double pred = packet_average(p, [&](double e) { return std::norm(sc.at_energy(e).s(m - 1, 0)); });
    add(r, "rail " + std::to_string(m), res.rail[m - 1], pred);
  }
  r.norm_error = res.norm_error;
  r.inconclusive = res.inconclusive;
  r.passed = !r.inconclusive && r.max_difference <= 2e-2 && r.norm_error <= 1e-8;
  return r;
}

// packet on rail 1 meets a particle bound in chi, bosons, hard core
ScenarioReport bound_collision(const std::string& name, const char* family, BoundClass cls,
                               double E, int rail_length, double sigma, int samples) {
  ScenarioReport r;
  r.name = name;
  Graph g = make_family(parse_family(family));
  BoundStateSet bs = bound_states(g);
  const int chi = top_state(bs, cls);
  TruncatedSystem sys(g, rail_length);
  Packet p{E, 1, sigma};
  const CVector a = packet_state(sys, p), b = bound_state_on(sys, bs.states[chi]);
  CMatrix psi0 = a * b.transpose() + b * a.transpose();
  for (int i = g.n_boundary(); i < g.n_vertices(); ++i) psi0(i, i) = 0.0;
  psi0 /= psi0.norm();
  const TwoParticleResult res =
      evolve_2p(sys, psi0, crossing_time(sys, p), kHardCore, bs, recording(r, sys, samples));

  TwoScatterer ts(g, bs);
  Observables ob(ts);
  ObservableOptions o;
  o.j.eps = 1e-4;
  o.j.richardson = true;
  const int nb = g.n_boundary();
  auto budget = [&](double e) {
    const ProcessBudget pb = ob.process_budget(e, chi, 1, o);
    RVector v = RVector::Zero(nb + 2);
    for (const auto& oc : pb.outcomes) {
      if (oc.kind == "elastic") v(oc.rail - 1) += oc.probability;
      else if (oc.kind == "ejection") v(nb + 1) += oc.probability;
      else v(nb) += oc.probability;
    }
    return v;
  };
  const RVector pred = packet_average(p, budget, 24);
  for (int m = 1; m <= nb; ++m)
    add(r, "elastic rail " + std::to_string(m), res.bound(m - 1, chi) + res.swapped(m - 1, chi),
        pred(m - 1));
  // ejection: nobody is left in a bound state (slow pairs may still be near)
  double inel = 0.0, ej = 1.0;
  for (int k = 0; k < static_cast<int>(bs.states.size()); ++k) {
    if (k != chi) inel += res.bound.col(k).sum() + res.swapped.col(k).sum();
    ej -= res.bound_any(k) + res.swapped_any(k);
  }
  add(r, "inelastic", inel, pred(nb));
  add(r, "ejection", ej, pred(nb + 1));
  r.norm_error = res.norm_error;
  r.inconclusive = res.inconclusive;
  r.passed = !r.inconclusive && r.max_difference <= 2e-2 && r.norm_error <= 1e-8;
  return r;
}

ScenarioReport factorization(int rail_length, double sigma, int samples) {
  ScenarioReport r;
  r.name = "u0-factorization";
  Graph g = make_family(parse_family("AC:4"));
  TruncatedSystem sys(g, rail_length);
  Packet p1{1.0, 1, sigma}, p2{-0.5, 2, sigma};
  const CVector a = packet_state(sys, p1), b = packet_state(sys, p2);
  const double t = std::max(crossing_time(sys, p1), crossing_time(sys, p2));
  const CMatrix psi = propagate_2p(sys, a * b.transpose(), t, 0.0, recording(r, sys, samples));
  const CVector at = propagate_1p(sys, a, t), bt = propagate_1p(sys, b, t);
  const double diff = (psi - at * bt.transpose()).cwiseAbs().maxCoeff();
  add(r, "max |psi - psi1 psi2|", diff, 0.0);
  r.norm_error = std::abs(psi.squaredNorm() - 1.0);
  r.passed = diff <= 1e-6 && r.norm_error <= 1e-8;
  return r;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"bridge-1p",        "ac4-transmission", "ac4-reflection",    "ac4-confined",
          "u0-factorization", "c105-confined",    "ac4-evanescent"};
}

ScenarioReport run_scenario(const std::string& name, int rail_length, double sigma, int samples) {
  // outgoing packets end where they started; they must clear the near zone
  if (rail_length / 2.0 - 3.0 * sigma <= EvolveOptions{}.near)
    throw DomainError("rail too short for this packet width: need rail_length/2 - 3 sigma > " +
                      std::to_string(EvolveOptions{}.near));
  ScenarioReport r;
  if (name == "bridge-1p") {
    r = one_particle(name, "Line:0", 0.5, rail_length, sigma, samples);
    r.note = "transmission >= 1 - 2e-3";
    r.passed = r.passed && r.observed[1] >= 1.0 - 2e-3;
  } else if (name == "ac4-transmission") {
    r = one_particle(name, "AC:4", 0.0, rail_length, sigma, samples);
    r.note = "transmission >= 0.99";
    r.passed = r.passed && r.observed[1] >= 0.99;
  } else if (name == "ac4-reflection") {
    r = one_particle(name, "AC:4", std::sqrt(2.0), rail_length, sigma, samples);
    r.note = "reflection >= 0.98";
    r.passed = r.passed && r.observed[0] >= 0.98;
  } else if (name == "ac4-confined") {
    r = bound_collision(name, "AC:4", BoundClass::Confined, 1.0, rail_length, sigma, samples);
    r.note = "elastic transmission >= 0.99";
    r.passed = r.passed && r.observed[1] >= 0.99;
  } else if (name == "u0-factorization") {
    r = factorization(rail_length, sigma, samples);
    r.note = "product of one-particle runs to 1e-6";
  } else if (name == "c105-confined") {
    r = bound_collision(name, "C:10:5", BoundClass::Confined, 1.5, rail_length, sigma, samples);
    r.note = "elastic transmission <= 1e-3";
    r.passed = r.passed && r.observed[1] <= 1e-3;
  } else if (name == "ac4-evanescent") {
    r = bound_collision(name, "AC:4", BoundClass::Evanescent, 0.0, rail_length, sigma, samples);
    r.note = "budget split against the S-matrix";
  } else {
    throw DomainError("unknown oracle scenario '" + name + "'");
  }
  return r;
}

}  // namespace gscat

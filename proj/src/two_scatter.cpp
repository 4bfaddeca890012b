#include "gscat/two_scatter.hpp"

#include <cmath>
#include <sstream>

#include <omp.h>

#include "gscat/quadrature.hpp"

namespace gscat {

cplx omega_minus(cplx c) {
  const cplx w = 0.5 * (c - std::sqrt(c - 2.0) * std::sqrt(c + 2.0));
  return w;
}

cplx omega_minus(double E, double E_prime, double eps) {
  return omega_minus(cplx(E - E_prime, eps));
}

TwoScatterer::TwoScatterer(const Graph& g) : TwoScatterer(g, bound_states(g)) {}

TwoScatterer::TwoScatterer(const Graph& g, BoundStateSet bs)
    : g_(g), bs_(std::move(bs)), single_(g), cr_(g) {
  if (g.n_internal() == 0) return;
  for (cplx z : solve_qep(g).finite)
    if (std::abs(std::abs(z) - 1.0) > 1e-7) roots_.push_back(z);
}

double TwoScatterer::safe_deform() const {
  double gap = 0.2;
  for (cplx z : roots_)
    if (std::abs(z) > 1.0) gap = std::min(gap, std::abs(z) - 1.0);
  return 0.5 * gap;
}

namespace {

// theta in (0, 2 pi) where E - 2 cos theta = c
void add_crossings(std::vector<double>& out, double E, double c) {
  const double x = 0.5 * (E - c);
  if (std::abs(x) > 1.0) return;
  const double t = std::acos(x);
  out.push_back(t);
  out.push_back(2.0 * kPi - t);
}

}  // namespace

JResult TwoScatterer::j_matrix(double E, const JOptions& opt) const {
  if (!(opt.eps > 0.0)) throw DomainError("eps must be positive");
  if (opt.richardson) {
    JOptions o = opt;
    o.richardson = false;
    JResult coarse = j_matrix(E, o);
    o.eps = 0.5 * opt.eps;
    JResult fine = j_matrix(E, o);
    fine.j = 2.0 * fine.j - coarse.j;
    fine.nodes += coarse.nodes;
    fine.convergence = std::max(fine.convergence, coarse.convergence);
    return fine;
  }
  const int m = g_.n_internal();
  JResult res;
  res.j = CMatrix::Zero(m, m);
  if (m == 0) return res;

  std::vector<int> ev = bs_.indices(BoundClass::Evanescent);
  std::vector<double> cross{kPi};
  add_crossings(cross, E, 2.0);
  add_crossings(cross, E, -2.0);
  for (int i : ev) add_crossings(cross, E, bs_.states[i].energy);
  std::vector<Breakpoint> bp;
  for (double t : cross) bp.push_back({t, 0.05 * opt.eps});
  // sharp features from roots close to the circle
  for (cplx z : roots_) {
    const double d = std::abs(std::abs(z) - 1.0);
    if (d > 0.3) continue;
    double t = std::arg(z);
    if (t <= 0.0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t -= 2.0 * kPi;
    bp.push_back({t, 0.25 * d});
    // omega^- sweeps the unit circle and passes the same root
    const cplx er = z + 1.0 / z;
    std::vector<double> tr;
    add_crossings(tr, E, er.real());
    for (double x : tr) bp.push_back({x, std::max(0.05 * opt.eps, 0.1 * std::abs(er.imag()))});
  }

  auto contour = [&](int order) {
    const Rule rule = graded_rule(0.0, 2.0 * kPi, bp, order);
    const int nn = rule.size();
    const double a = opt.deform;
    CMatrix total = CMatrix::Zero(m, m);
    auto body = [&](int k, CMatrix& acc, CMatrix& g1, CMatrix& g2) {
      const double t = rule.x[k];
      const double r = 1.0 - a * std::sin(t), dr = -a * std::cos(t);
      const cplx z = std::polar(r, t);
      const cplx om = omega_minus(cplx(E, opt.eps) - (z + 1.0 / z));
      cr_.internal_into(om, g1);
      cr_.internal_into(z, g2);
      // dz / (2 pi i z) = (dr + i r) / (2 pi i r) dt
      const cplx meas = rule.w[k] * cplx(dr, r) / (2.0 * kPi * 1i * r);
      acc.noalias() -= (meas * om * (z * z - 1.0)) * g1.cwiseProduct(g2);
    };
    if (opt.exec == Exec::Serial) {
      CMatrix g1, g2;
      for (int k = 0; k < nn; ++k) body(k, total, g1, g2);
    } else {
#pragma omp parallel
      {
        CMatrix acc = CMatrix::Zero(m, m), g1, g2;
#pragma omp for schedule(static)
        for (int k = 0; k < nn; ++k) body(k, acc, g1, g2);
#pragma omp critical
        total += acc;
      }
    }
    return std::make_pair(total, nn);
  };

  auto [ja, nodes] = contour(opt.order);
  res.nodes = nodes;
  if (opt.check) {
    auto fine = contour(2 * opt.order);
    res.convergence = (fine.first - ja).cwiseAbs().maxCoeff();
    if (res.convergence > opt.tolerance) {
      std::ostringstream os;
      os << "J quadrature not converged at E=" << E << ": change " << res.convergence;
      throw AccuracyError(os.str());
    }
  }
  res.j = ja;

  // single sums: evanescent with weight 1, confined with weight 2; confined pairs
  CMatrix g1;
  std::vector<int> conf;
  for (int i : bs_.bound_indices()) {
    const BoundState& s = bs_.states[i];
    const bool confined = s.cls != BoundClass::Evanescent;
    if (confined) conf.push_back(i);
    const RVector xi = s.x.tail(m);
    const cplx om = omega_minus(E, s.energy, opt.eps);
    cr_.internal_into(om, g1);
    res.j -= ((confined ? 2.0 : 1.0) * om) * g1.cwiseProduct((xi * xi.transpose()).cast<cplx>());
  }
  for (int i : conf)
    for (int jdx : conf) {
      const RVector xi = bs_.states[i].x.tail(m), xj = bs_.states[jdx].x.tail(m);
      const cplx den(E - bs_.states[i].energy - bs_.states[jdx].energy, opt.eps);
      res.j += ((xi * xi.transpose()).cwiseProduct(xj * xj.transpose())).cast<cplx>() / den;
    }
  return res;
}

TwoParticleKernel TwoScatterer::kernel_from(const JResult& jr, double E, double U,
                                            const JOptions& opt) const {
  const int m = g_.n_internal();
  TwoParticleKernel k;
  k.energy = E;
  k.eps = opt.eps;
  k.u = U;
  k.j = jr.j;
  k.nodes = jr.nodes;
  k.deform = opt.deform;
  k.convergence = jr.convergence;
  if (m == 0 || U == 0.0) {
    k.ut_inv = CMatrix::Zero(m, m);
    return k;
  }
  const CMatrix id = CMatrix::Identity(m, m);
  if (std::isinf(U)) {
    Eigen::PartialPivLU<CMatrix> lu(k.j);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) throw SingularMatrixError("J is singular in the hard-core limit", E, rc);
    k.ut_inv = -lu.solve(id);
  } else {
    Eigen::PartialPivLU<CMatrix> lu(id - U * k.j);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) throw SingularMatrixError("1 - U J is singular", E, rc);
    k.ut_inv = U * lu.solve(id);
  }
  return k;
}

TwoParticleKernel TwoScatterer::kernel(double E, double U, const JOptions& opt) const {
  return kernel_from(j_matrix(E, opt), E, U, opt);
}

double TwoScatterer::energy_of(const Asymptote& a) const {
  if (!a.bound) return a.energy;
  return bs_.states.at(a.index).energy;
}

double TwoScatterer::total_energy(const Channel& c) const {
  return energy_of(c.first) + energy_of(c.second);
}

CVector TwoScatterer::free_overlap(double E, int rail) const {
  if (rail < 1 || rail > g_.n_boundary()) throw DomainError("rail index out of range");
  const SingleScattering s = single_.at_energy(E);
  const double norm = std::sqrt(2.0 * kPi) * std::pow(4.0 - E * E, 0.25);
  return s.psi.col(rail - 1) / norm;
}

CVector TwoScatterer::overlap(const Asymptote& a) const {
  if (!a.bound) return free_overlap(a.energy, a.rail);
  if (a.index < 0 || a.index >= static_cast<int>(bs_.states.size()))
    throw DomainError("bound index out of range");
  const BoundState& s = bs_.states[a.index];
  if (s.cls == BoundClass::HalfBound) throw DomainError("half-bound states are not channels");
  return s.x.tail(m()).cast<cplx>();
}

void TwoScatterer::validate(const Channel& c) const {
  if (c.first.bound && c.second.bound)
    throw DomainError("a channel may hold at most one bound state");
}

cplx TwoScatterer::r_amplitude(const TwoParticleKernel& k, const CVector& cout,
                               const CVector& cin, Statistics stats) const {
  const double b = statistics_factor(stats);
  if (b == 0.0 || k.ut_inv.size() == 0) return 0.0;
  return -2.0 * kPi * 1i * (b * b) * cout.transpose() * k.ut_inv * cin;
}

cplx TwoScatterer::r_amplitude(const TwoParticleKernel& k, const Channel& out,
                               const Channel& in) const {
  validate(out);
  validate(in);
  const CVector co = overlap(out.first).cwiseProduct(overlap(out.second));
  const CVector ci = overlap(in.first).cwiseProduct(overlap(in.second));
  return r_amplitude(k, co, ci, in.stats);
}

double psi_psi_dagger_check(const Graph& g, cplx z) {
  const int m = g.n_internal();
  if (m == 0) return 0.0;
  const CMatrix psi = SingleScatterer(g).at_z(z).psi;
  const CMatrix rhs = (z * z - 1.0) * gamma_inverse(g, z).bottomRightCorner(m, m) +
                      (1.0 / (z * z) - 1.0) * gamma_inverse(g, 1.0 / z).bottomRightCorner(m, m);
  return (psi * psi.adjoint() - rhs).cwiseAbs().maxCoeff();
}

}  // namespace gscat

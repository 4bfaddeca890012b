#include "gscat/bound_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gscat {

namespace {

constexpr double kRealTol = 1e-9;
constexpr double kGroupTol = 1e-7;
constexpr double kNullTol = 1e-8;

RMatrix companion(const Graph& g) {
  const int n = g.n_vertices();
  RMatrix c = RMatrix::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n).setIdentity();
  c.bottomLeftCorner(n, n) = -g.internal_projector();
  c.bottomRightCorner(n, n) = g.adjacency();
  return c;
}

// Orthonormal basis of the null space of a (possibly wide) matrix.
RMatrix null_basis(const RMatrix& a, double tol) {
  if (a.cols() == 0) return RMatrix(0, 0);
  if (a.rows() == 0) return RMatrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

void fix_sign(RVector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0) v = -v;
}

// Weighted norm^2 of an evanescent vector including the rail tails.
double rail_norm2(const RVector& x, int nb, double z) {
  const double bd = x.head(nb).squaredNorm();
  const double in = x.tail(x.size() - nb).squaredNorm();
  return in + bd / (1.0 - z * z);
}

// Kernel dims of C^k from the recursion ker C^k = {v : C v in ker C^{k-1}}.
std::vector<int> kernel_sequence(const RMatrix& c) {
  const int m = static_cast<int>(c.rows());
  const double tol = 1e-9 * std::max(1.0, c.norm());
  std::vector<int> dims;
  RMatrix basis(m, 0);
  for (int k = 0; k < m; ++k) {
    RMatrix proj = RMatrix::Identity(m, m) - basis * basis.transpose();
    RMatrix next = null_basis(proj * c, tol);
    const int d = static_cast<int>(next.cols());
    if (!dims.empty() && d == dims.back()) break;
    dims.push_back(d);
    basis = next;
  }
  return dims;
}

}  // namespace

CMatrix gamma(const Graph& g, cplx z) {
  const int n = g.n_vertices();
  CMatrix out = (z * g.adjacency()).cast<cplx>();
  for (int i = 0; i < n; ++i) out(i, i) -= 1.0;
  for (int i = g.n_boundary(); i < n; ++i) out(i, i) -= z * z;
  return out;
}

ConfinedSpace confined_space(const Graph& g) {
  const int n = g.n_vertices(), nb = g.n_boundary(), m = g.n_internal();
  ConfinedSpace cs;
  if (m == 0) {
    cs.states = RMatrix(n, 0);
    cs.energies = RVector(0);
    cs.complement = RMatrix::Identity(n, n);
    return cs;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g.block_d());
  const RVector& ev = es.eigenvalues();
  const RMatrix& vecs = es.eigenvectors();
  const RMatrix bt = g.block_b().transpose();

  std::vector<RVector> betas;
  std::vector<double> energies;
  int i = 0;
  while (i < m) {
    int j = i + 1;
    while (j < m && ev(j) - ev(j - 1) <= 1e-8) ++j;
    RMatrix v = vecs.middleCols(i, j - i);
    RMatrix nul = null_basis(bt * v, 1e-9);
    const double lam = ev.segment(i, j - i).mean();
    for (int c = 0; c < nul.cols(); ++c) {
      betas.push_back(v * nul.col(c));
      energies.push_back(lam);
    }
    i = j;
  }

  const int nc = static_cast<int>(betas.size());
  cs.states = RMatrix::Zero(n, nc);
  cs.energies = RVector(nc);
  RMatrix beta(m, nc);
  for (int c = 0; c < nc; ++c) {
    RVector b = betas[c];
    fix_sign(b);
    beta.col(c) = b;
    cs.states.col(c).tail(m) = b;
    cs.energies(c) = energies[c];
  }
  cs.complement = RMatrix::Zero(n, n - nc);
  cs.complement.topLeftCorner(nb, nb).setIdentity();
  if (m - nc > 0) {
    RMatrix q;
    if (nc == 0) {
      q = RMatrix::Identity(m, m);
    } else {
      Eigen::HouseholderQR<RMatrix> qr(beta);
      q = qr.householderQ() * RMatrix::Identity(m, m);
      q = q.rightCols(m - nc).eval();
    }
    cs.complement.bottomRightCorner(m, m - nc) = q.rightCols(m - nc);
  }
  return cs;
}

QepSpectrum solve_qep(const Graph& g) {
  const RMatrix c = companion(g);
  Eigen::EigenSolver<RMatrix> es(c, true);
  if (es.info() != Eigen::Success) throw Error("companion eigensolver failed for " + g.name());
  QepSpectrum q;
  q.mu = es.eigenvalues();
  q.companion_vectors = es.eigenvectors();
  q.kernel_dims = kernel_sequence(c);
  q.n_infinite = q.kernel_dims.empty() ? 0 : q.kernel_dims.back();
  // The n_infinite smallest |mu| belong to infinity; Jordan chains there
  // smear them to |mu| ~ eps^{1/k}.
  std::vector<int> order(q.mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(q.mu(a)) < std::abs(q.mu(b)); });
  for (size_t k = q.n_infinite; k < order.size(); ++k) q.finite.push_back(1.0 / q.mu(order[k]));
  return q;
}

const char* to_string(BoundClass c) {
  switch (c) {
    case BoundClass::Confined:
      return "confined";
    case BoundClass::ConfinedPm1:
      return "confined_pm1";
    case BoundClass::Evanescent:
      return "evanescent";
    case BoundClass::HalfBound:
      return "half_bound";
  }
  return "?";
}

std::vector<int> BoundStateSet::bound_indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i].cls != BoundClass::HalfBound) out.push_back(i);
  return out;
}

std::vector<int> BoundStateSet::indices(BoundClass c) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i].cls == c) out.push_back(i);
  return out;
}

ComplementResolvent::ComplementResolvent(const Graph& g)
    : ComplementResolvent(g, confined_space(g)) {}

ComplementResolvent::ComplementResolvent(const Graph& g, const ConfinedSpace& cs)
    : h_(g.adjacency()),
      pm_(g.internal_projector()),
      w_(cs.complement),
      cs_(cs),
      n_(g.n_vertices()),
      nb_(g.n_boundary()) {
  wh_w_ = w_.transpose() * h_ * w_;
  wpm_w_ = w_.transpose() * pm_ * w_;
}

CMatrix ComplementResolvent::reduced(cplx z) const {
  const int r = static_cast<int>(w_.cols());
  CMatrix out = z * wh_w_.cast<cplx>() - (z * z) * wpm_w_.cast<cplx>();
  for (int i = 0; i < r; ++i) out(i, i) -= 1.0;
  return out;
}

CMatrix ComplementResolvent::full(cplx z) const {
  const CMatrix wc = w_.cast<cplx>();
  Eigen::PartialPivLU<CMatrix> lu(reduced(z));
  return wc * lu.solve(wc.transpose());
}

CMatrix ComplementResolvent::internal(cplx z) const {
  CMatrix out;
  internal_into(z, out);
  return out;
}

void ComplementResolvent::internal_into(cplx z, CMatrix& out) const {
  const int m = n_ - nb_;
  const CMatrix wi = w_.bottomRows(m).cast<cplx>();
  Eigen::PartialPivLU<CMatrix> lu(reduced(z));
  out.noalias() = wi * lu.solve(wi.transpose());
}

namespace {

// Symmetric real restriction of gamma to the complement at real x.
RMatrix reduced_real(const RMatrix& whw, const RMatrix& wpw, double x) {
  RMatrix out = x * whw - (x * x) * wpw;
  out.diagonal().array() -= 1.0;
  return out;
}

// Newton on the eigenvalue of the reduced gamma closest to zero.
double refine_root(const RMatrix& whw, const RMatrix& wpw, double x) {
  for (int it = 0; it < 60; ++it) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(reduced_real(whw, wpw, x));
    Eigen::Index k = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&k);
    const RVector v = es.eigenvectors().col(k);
    const double e = es.eigenvalues()(k);
    const double de = v.dot((whw - 2.0 * x * wpw) * v);
    if (de == 0.0) break;
    const double step = e / de;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

RMatrix null_vectors_real(const RMatrix& a, double tol) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
  std::vector<int> idx;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= tol) idx.push_back(i);
  RMatrix out(a.rows(), idx.size());
  for (size_t c = 0; c < idx.size(); ++c) out.col(c) = es.eigenvectors().col(idx[c]);
  return out;
}

}  // namespace

BoundStateSet classify_bound_states(const Graph& g, const QepSpectrum& q) {
  const int nb = g.n_boundary();
  const ConfinedSpace cs = confined_space(g);
  const RMatrix& w = cs.complement;
  const RMatrix whw = w.transpose() * g.adjacency() * w;
  const RMatrix wpw = w.transpose() * g.internal_projector() * w;
  const double scale = std::max(1.0, whw.norm());
  BoundStateSet bs;

  for (int c = 0; c < cs.states.cols(); ++c) {
    BoundState s;
    const double lam = cs.energies(c);
    s.energy = lam;
    s.x = cs.states.col(c);
    if (std::abs(std::abs(lam) - 2.0) <= kRealTol) {
      s.cls = BoundClass::ConfinedPm1;
      s.z = lam > 0 ? 1.0 : -1.0;
    } else {
      s.cls = BoundClass::Confined;
      if (std::abs(lam) < 2.0)
        s.z = cplx(lam / 2.0, -std::sqrt(4.0 - lam * lam) / 2.0);
      else
        s.z = (lam - std::copysign(std::sqrt(lam * lam - 4.0), lam)) / 2.0;
      s.y = -s.x.cast<cplx>() / (s.z - 1.0 / s.z);
    }
    bs.states.push_back(std::move(s));
    ++bs.n_c;
  }

  // Evanescent candidates: real mu with |mu| > 1.
  std::vector<double> cand;
  for (int k = 0; k < q.mu.size(); ++k) {
    const cplx mu = q.mu(k);
    if (std::abs(mu.imag()) > 1e-6 * std::abs(mu)) continue;
    if (std::abs(mu.real()) <= 1.0 + 1e-9) continue;
    cand.push_back(refine_root(whw, wpw, 1.0 / mu.real()));
  }
  std::sort(cand.begin(), cand.end());
  std::vector<double> roots;
  for (double z : cand)
    if (roots.empty() || std::abs(z - roots.back()) > kGroupTol) roots.push_back(z);

  std::vector<BoundState> ev;
  for (double z : roots) {
    if (std::abs(z) >= 1.0 - kRealTol) continue;
    RMatrix nul = null_vectors_real(reduced_real(whw, wpw, z), kNullTol * scale);
    if (nul.cols() == 0) continue;  // confined roots off the complement, or noise
    RMatrix x = w * nul;
    // Orthonormalize in the graph-plus-rails inner product.
    RMatrix wgt = RMatrix::Identity(x.rows(), x.rows());
    for (int i = 0; i < nb; ++i) wgt(i, i) = 1.0 / (1.0 - z * z);
    RMatrix gram = x.transpose() * wgt * x;
    Eigen::LLT<RMatrix> llt(gram);
    RMatrix xo = llt.matrixU().solve<Eigen::OnTheRight>(x);
    for (int c = 0; c < xo.cols(); ++c) {
      BoundState s;
      s.cls = BoundClass::Evanescent;
      s.z = z;
      s.energy = z + 1.0 / z;
      s.x = xo.col(c);
      fix_sign(s.x);
      s.x /= std::sqrt(rail_norm2(s.x, nb, z));
      if (s.x.head(nb).norm() <= 1e-9)
        throw Error("evanescent root z=" + std::to_string(z) + " has no boundary amplitude");
      s.y = -s.x.cast<cplx>() / (z - 1.0 / z);
      ev.push_back(std::move(s));
    }
  }
  std::sort(ev.begin(), ev.end(), [](const BoundState& a, const BoundState& b) {
    return a.energy < b.energy;
  });
  for (auto& s : ev) {
    bs.states.push_back(std::move(s));
    ++bs.n_ev;
  }

  for (double z : {-1.0, 1.0}) {
    RMatrix nul = null_vectors_real(reduced_real(whw, wpw, z), kNullTol * scale);
    for (int c = 0; c < nul.cols(); ++c) {
      BoundState s;
      s.cls = BoundClass::HalfBound;
      s.z = z;
      s.energy = 2.0 * z;
      s.x = w * nul.col(c);
      fix_sign(s.x);
      s.x.normalize();
      bs.states.push_back(std::move(s));
      ++bs.n_h;
    }
  }
  return bs;
}

BoundStateSet bound_states(const Graph& g) { return classify_bound_states(g, solve_qep(g)); }

CMatrix gamma_inverse(const Graph& g, cplx z) {
  Eigen::PartialPivLU<CMatrix> lu(gamma(g, z));
  const double rc = lu.rcond();
  if (!(rc > 1e-13))
    throw SingularMatrixError("gamma(z) is singular", z, rc);
  return lu.inverse();
}

CMatrix gamma_inverse(const Graph& g, const QepSpectrum& q, cplx z) {
  double best = 1e300;
  cplx nearest = 0.0;
  for (cplx zk : q.finite) {
    const double d = std::abs(z - zk);
    if (d < best) {
      best = d;
      nearest = zk;
    }
  }
  if (best <= 1e-9) {
    std::ostringstream os;
    os << "z=" << z << " within " << best << " of eigenvalue " << nearest;
    throw SingularMatrixError(os.str(), nearest, 0.0);
  }
  return gamma_inverse(g, z);
}

ResolventData resolvent_data(const Graph& g, const QepSpectrum& q) {
  const int n = g.n_vertices();
  const RMatrix c = companion(g);
  const CMatrix cc = c.cast<cplx>();
  const double tol = 1e-7 * std::max(1.0, c.norm());
  ResolventData rd;
  rd.kernel_dims = q.kernel_dims;
  rd.complete = q.kernel_dims.size() >= 2 && q.kernel_dims[0] == g.n_boundary() &&
                q.kernel_dims[1] == 2 * g.n_boundary();
  if (q.kernel_dims.size() > 2) rd.complete = false;

  std::vector<cplx> zs = q.finite;
  std::vector<bool> used(zs.size(), false);
  for (size_t i = 0; i < zs.size(); ++i) {
    if (used[i]) continue;
    std::vector<cplx> group{zs[i]};
    used[i] = true;
    for (size_t j = i + 1; j < zs.size(); ++j)
      if (!used[j] && std::abs(zs[j] - zs[i]) <= kGroupTol * std::max(1.0, std::abs(zs[i]))) {
        group.push_back(zs[j]);
        used[j] = true;
      }
    cplx zbar = 0.0;
    for (cplx zz : group) zbar += zz;
    zbar /= static_cast<double>(group.size());
    const cplx mu = 1.0 / zbar;

    CMatrix shifted = cc - mu * CMatrix::Identity(2 * n, 2 * n);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int k = 0;
    for (int t = static_cast<int>(s.size()) - 1; t >= 0 && s(t) <= tol; --t) ++k;
    Pole p;
    p.z = zbar;
    p.multiplicity = static_cast<int>(group.size());
    p.jordan_ok = (k == p.multiplicity);
    const int kk = std::max(k, 1);
    CMatrix v = svd.matrixV().rightCols(kk);
    CMatrix u = svd.matrixU().rightCols(kk);
    CMatrix uv = u.adjoint() * v;
    Eigen::FullPivLU<CMatrix> lu(uv);
    if (!lu.isInvertible()) p.jordan_ok = false;
    CMatrix proj = v * lu.solve(u.adjoint());
    p.residue = proj.block(0, n, n, n);
    if (!p.jordan_ok) rd.complete = false;
    rd.poles.push_back(std::move(p));
  }
  return rd;
}

CMatrix reconstruct_inverse(const ResolventData& rd, cplx z, int n) {
  CMatrix out = -CMatrix::Identity(n, n);
  for (const auto& p : rd.poles) out += p.residue * (z / (p.z * (z - p.z)));
  return out;
}

ResidueReport verify_residues(const Graph& g, const BoundStateSet& bs, int nodes, double radius) {
  ResidueReport rep;
  if (g.n_boundary() != 2) {
    rep.message = "residue check needs exactly two rails";
    return rep;
  }
  const ChainCondition cc = chain_condition(g);
  if (cc != ChainCondition::Holds) {
    rep.message = std::string("unsupported: chain condition ") + to_string(cc);
    return rep;
  }
  rep.supported = true;
  rep.kernel_dims = kernel_sequence(companion(g));
  rep.infinity_chains_ok = rep.kernel_dims.size() == 2 && rep.kernel_dims[0] == 2 &&
                           rep.kernel_dims[1] == 4;

  const ComplementResolvent cr(g);
  const int n = g.n_vertices();
  std::vector<int> ev = bs.indices(BoundClass::Evanescent);
  size_t i = 0;
  while (i < ev.size()) {
    const double z0 = bs.states[ev[i]].z.real();
    CMatrix expected = CMatrix::Zero(n, n);
    size_t j = i;
    while (j < ev.size() && std::abs(bs.states[ev[j]].z.real() - z0) <= kGroupTol) {
      const RVector& x = bs.states[ev[j]].x;
      expected -= (x * x.transpose()).cast<cplx>() / (z0 - 1.0 / z0);
      ++j;
    }
    CMatrix est = CMatrix::Zero(n, n);
    for (int k = 0; k < nodes; ++k) {
      const cplx e = std::polar(1.0, 2.0 * kPi * (k + 0.5) / nodes);
      est += cr.full(z0 + radius * e) * (radius * e);
    }
    est /= static_cast<double>(nodes);
    const double err =
        (est - expected).cwiseAbs().maxCoeff() / std::max(1.0, expected.cwiseAbs().maxCoeff());
    rep.residue_errors.push_back(err);
    rep.max_error = std::max(rep.max_error, err);
    i = j;
  }
  rep.passed = rep.infinity_chains_ok && rep.max_error <= 1e-6;
  if (!rep.infinity_chains_ok) rep.message = "Jordan chains at infinity are not of length 2";
  return rep;
}

InertiaCount inertia_scan(const Graph& g, int points) {
  const ConfinedSpace cs = confined_space(g);
  const RMatrix& w = cs.complement;
  const RMatrix whw = w.transpose() * g.adjacency() * w;
  const RMatrix wpw = w.transpose() * g.internal_projector() * w;
  const double scale = std::max(1.0, whw.norm());
  auto negatives = [&](double x) {
    Eigen::LDLT<RMatrix> ldlt(reduced_real(whw, wpw, x));
    return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
  };
  InertiaCount out;
  int prev = negatives(-1.0 + 2.0 / (points + 1));
  for (int k = 1; k < points; ++k) {
    const double x = -1.0 + 2.0 * (k + 1) / (points + 1);
    const int cur = negatives(x);
    out.roots_open += std::abs(cur - prev);
    prev = cur;
  }
  out.nullity_plus = static_cast<int>(null_vectors_real(reduced_real(whw, wpw, 1.0), kNullTol * scale).cols());
  out.nullity_minus = static_cast<int>(null_vectors_real(reduced_real(whw, wpw, -1.0), kNullTol * scale).cols());
  return out;
}

}  // namespace gscat

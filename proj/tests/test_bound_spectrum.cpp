#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "families.hpp"
#include "gscat/bound_spectrum.hpp"

using namespace gscat;

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> energies_of(const BoundStateSet& bs, BoundClass c) {
  std::vector<double> out;
  for (int i : bs.indices(c)) out.push_back(bs.states[i].energy);
  std::sort(out.begin(), out.end());
  return out;
}

bool has_energy(const std::vector<double>& es, double e, double tol) {
  return std::any_of(es.begin(), es.end(), [&](double x) { return std::abs(x - e) <= tol; });
}

}  // namespace

TEST_CASE("gamma identities") {
  Graph g = make_family(parse_family("AC:4"));
  const int n = g.n_vertices();
  CHECK(max_abs(gamma(g, 0.0) + CMatrix::Identity(n, n)) == 0.0);
  const CMatrix gr = gamma(g, 0.37);
  CHECK(max_abs(gr.imag()) == 0.0);
  CHECK(max_abs(gr - gr.transpose()) == 0.0);
  RMatrix pn = RMatrix::Identity(n, n) - g.internal_projector();
  for (cplx z : {cplx(0.3, 0.4), cplx(-1.2, 0.1), std::polar(1.0, -2.0)}) {
    CMatrix rhs = gamma(g, z) / (z * z) + (1.0 / (z * z) - 1.0) * pn.cast<cplx>();
    CHECK(max_abs(gamma(g, 1.0 / z) - rhs) <= 1e-12);
  }
}

TEST_CASE("AC(4) spectrum") {
  Graph g = make_family(parse_family("AC:4"));
  QepSpectrum q = solve_qep(g);
  bool ev_plus = false, ev_minus = false, conf_pair = false;
  for (cplx z : q.finite) {
    const cplx e = z + 1.0 / z;
    if (std::abs(z.imag()) < 1e-9 && std::abs(z.real()) < 1.0) {
      if (std::abs(e.real() - 2.38) < 0.01) ev_plus = true;
      if (std::abs(e.real() + 2.38) < 0.01) ev_minus = true;
    }
    if (std::abs(e) < 1e-8 && std::abs(std::abs(z) - 1.0) < 1e-8) conf_pair = true;
  }
  CHECK(ev_plus);
  CHECK(ev_minus);
  CHECK(conf_pair);

  BoundStateSet bs = classify_bound_states(g, q);
  CHECK(bs.n_ev == 2);
  CHECK(bs.n_c == 1);
  CHECK(bs.n_h == 0);
  auto ev = energies_of(bs, BoundClass::Evanescent);
  CHECK(has_energy(ev, 2.38, 0.01));
  CHECK(has_energy(ev, -2.38, 0.01));
  auto c = energies_of(bs, BoundClass::Confined);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0]) <= 1e-12);
}

TEST_CASE("C(10,5) energies") {
  Graph g = make_family(parse_family("C:10:5"));
  BoundStateSet bs = bound_states(g);
  auto c = energies_of(bs, BoundClass::Confined);
  auto ev = energies_of(bs, BoundClass::Evanescent);
  REQUIRE(c.size() == 4);
  REQUIRE(ev.size() == 4);
  // closed form: sine modes of the 10-cycle vanishing at antipodal vertices
  for (double e : {2 * std::cos(kPi / 5), 2 * std::cos(2 * kPi / 5), -2 * std::cos(kPi / 5),
                   -2 * std::cos(2 * kPi / 5)})
    CHECK(has_energy(c, e, 1e-10));
  for (double e : {0.62, 1.62, -0.62, -1.62}) CHECK(has_energy(c, e, 0.01));
  for (double e : {2.03, 2.17, -2.03, -2.17}) CHECK(has_energy(ev, e, 0.01));
}

TEST_CASE("Line(3) has no evanescent roots") {
  Graph g = make_family(parse_family("Line:3"));
  QepSpectrum q = solve_qep(g);
  for (cplx z : q.finite) {
    const bool real_inside = std::abs(z.imag()) < 1e-9 && std::abs(z.real()) < 1.0 - 1e-9;
    CHECK_FALSE(real_inside);
  }
  CHECK(q.kernel_dims.size() > 2);  // chains at infinity longer than 2
}

TEST_CASE("bridge against the 2x2 determinant") {
  // det gamma = 1 - z^2, roots +-1 only
  Graph g = make_family({Family::Line, 0, 0});
  BoundStateSet bs = bound_states(g);
  CHECK(bs.n_ev == 0);
  CHECK(bs.n_c == 0);
  CHECK(bs.n_h == 2);
  for (const auto& s : bs.states) {
    CHECK(std::abs(std::abs(s.z.real()) - 1.0) < 1e-12);
    CHECK(std::abs(1.0 - s.z * s.z) < 1e-12);
  }
}

TEST_CASE("Table I counts") {
  for (const auto& row : testing::table_one()) {
    if (testing::table_row_disputed(row.spec)) continue;
    Graph g = make_family(row.spec);
    BoundStateSet bs = bound_states(g);
    CAPTURE(row.spec.to_string());
    CHECK(bs.n_ev == row.counts[0]);
    CHECK(bs.n_c == row.counts[1]);
    CHECK(bs.n_h == row.counts[2]);
  }
}

TEST_CASE("cycle thresholds by hand") {
  // at E=+-2 each arm of length k is linear (alternating), so a half-bound state
  // needs psi_1 + psi_last = psi_0 at both rails: 2a+2(b-a)/k = a and the mirror.
  // k=3 gives a=-2b, b=-2a (none); k=4 gives b=-a (one at each threshold).
  BoundStateSet c63 = bound_states(make_family(parse_family("C:6:3")));
  CHECK(c63.n_ev == 2);
  CHECK(c63.n_c == 2);
  CHECK(c63.n_h == 0);
  BoundStateSet c84 = bound_states(make_family(parse_family("C:8:4")));
  CHECK(c84.n_ev == 2);
  CHECK(c84.n_c == 3);
  CHECK(c84.n_h == 2);
}

TEST_CASE("bound state invariants and independent root count") {
  for (const auto& spec : testing::small_families()) {
    Graph g = make_family(spec);
    BoundStateSet bs = bound_states(g);
    InertiaCount ic = inertia_scan(g);
    CAPTURE(spec.to_string());
    CHECK(ic.roots_open == bs.n_ev);
    CHECK(ic.nullity_plus + ic.nullity_minus == bs.n_h);
    const int nb = g.n_boundary();
    const RMatrix bt = g.block_b().transpose(), d = g.block_d();
    for (const auto& s : bs.states) {
      CHECK(std::abs(s.energy - (s.z + 1.0 / s.z).real()) <= 1e-9);
      CHECK(std::abs((s.z + 1.0 / s.z).imag()) <= 1e-9);
      if (s.cls == BoundClass::Confined || s.cls == BoundClass::ConfinedPm1) {
        const RVector beta = s.x.tail(g.n_internal());
        CHECK(s.x.head(nb).norm() <= 1e-9);
        CHECK((bt * beta).norm() <= 1e-9);
        CHECK((d * beta - s.energy * beta).norm() <= 1e-9);
        CHECK(std::abs(s.x.norm() - 1.0) <= 1e-12);
      }
      if (s.cls == BoundClass::Evanescent) {
        CHECK(std::abs(s.z.imag()) == 0.0);
        CHECK(std::abs(s.z.real()) < 1.0);
        CHECK(s.x.head(nb).norm() > 1e-9);
        CHECK(max_abs(gamma(g, s.z) * s.x.cast<cplx>()) <= 1e-9);
      }
      if (s.cls == BoundClass::HalfBound) CHECK(max_abs(gamma(g, s.z) * s.x.cast<cplx>()) <= 1e-9);
    }
  }
}

TEST_CASE("gamma inverse") {
  Graph g = make_family(parse_family("C:10:5"));
  const int n = g.n_vertices();
  CHECK(max_abs(gamma_inverse(g, 0.0) + CMatrix::Identity(n, n)) <= 1e-15);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  QepSpectrum q = solve_qep(g);
  for (int k = 0; k < 20; ++k) {
    const cplx z(u(rng), u(rng));
    CHECK(max_abs(gamma_inverse(g, q, z) * gamma(g, z) - CMatrix::Identity(n, n)) <= 1e-10);
  }
  BoundStateSet bs = classify_bound_states(g, q);
  const cplx z0 = bs.states[bs.indices(BoundClass::Evanescent)[0]].z;
  CHECK_THROWS_AS(gamma_inverse(g, q, z0 + 1e-11), SingularMatrixError);
}

TEST_CASE("resolvent form reconstructs gamma inverse") {
  for (const char* name : {"AC:4", "C:10:5", "AL:5", "AC2:4", "C:4:2", "C:10:4", "AC:7"}) {
    Graph g = make_family(parse_family(name));
    CAPTURE(name);
    QepSpectrum q = solve_qep(g);
    ResolventData rd = resolvent_data(g, q);
    CHECK(rd.complete);
    const int n = g.n_vertices();
    CHECK(max_abs(reconstruct_inverse(rd, 0.0, n) + CMatrix::Identity(n, n)) == 0.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const cplx z(u(rng), u(rng));
      const CMatrix direct = gamma_inverse(g, z);
      worst = std::max(worst, max_abs(reconstruct_inverse(rd, z, n) - direct) /
                                  std::max(1.0, max_abs(direct)));
    }
    CHECK(worst <= 1e-8);

    // physical poles carry residue x y^T with the analytic y
    BoundStateSet bs = classify_bound_states(g, q);
    for (const auto& s : bs.states) {
      if (s.cls != BoundClass::Evanescent && s.cls != BoundClass::Confined) continue;
      const Pole* hit = nullptr;
      for (const auto& p : rd.poles)
        if (std::abs(p.z - s.z) < 1e-6) hit = &p;
      REQUIRE(hit != nullptr);
      CMatrix expect = CMatrix::Zero(n, n);
      for (const auto& t : bs.states)
        if (t.cls == s.cls && std::abs(t.z - s.z) < 1e-7)
          expect += t.x.cast<cplx>() * t.y.transpose();
      CHECK(max_abs(hit->residue - expect) <= 1e-7);
    }
  }
}

TEST_CASE("residue verification") {
  for (const char* name : {"AC:4", "C:10:5", "AL:8", "C:12:6"}) {
    Graph g = make_family(parse_family(name));
    CAPTURE(name);
    ResidueReport rep = verify_residues(g, bound_states(g));
    CHECK(rep.supported);
    CHECK(rep.infinity_chains_ok);
    CHECK(rep.max_error <= 1e-6);
    CHECK(rep.passed);
  }
  for (const char* name : {"C:7:2", "Line:5"}) {
    Graph g = make_family(parse_family(name));
    ResidueReport rep = verify_residues(g, bound_states(g));
    CHECK_FALSE(rep.supported);
    CHECK_FALSE(rep.passed);
  }
}

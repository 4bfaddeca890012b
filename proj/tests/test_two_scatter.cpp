#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>

#include "gscat/two_scatter.hpp"
#include "oracles.hpp"

using namespace gscat;

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

JOptions serial(double eps = 1e-3) {
  JOptions o;
  o.eps = eps;
  o.exec = Exec::Serial;
  return o;
}

}  // namespace

TEST_CASE("omega minus") {
  for (double d : {-5.0, -3.0, -1.9, -0.4, 0.0, 0.7, 1.99, 3.0, 4.5}) {
    for (double eps : {1e-1, 1e-3, 1e-6}) {
      const cplx c(d, eps);
      const cplx w = omega_minus(c);
      CHECK(std::abs(w) <= 1.0);
      CHECK(std::abs(w * (c - w) - 1.0) <= 1e-12);  // omega^+ = c - omega^- = 1/omega^-
    }
  }
  const double g = (3.0 - std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(omega_minus(3.0, 0.0, 1e-3) - g) <= 2e-3);
  CHECK(std::abs(omega_minus(-3.0, 0.0, 1e-3) + g) <= 2e-3);
  CHECK(std::abs(omega_minus(0.5, 0.5, 1e-3).imag()) > 0.99);
}

TEST_CASE("J against the raw double momentum integral") {
  for (const char* name : {"Line:1", "AC:4", "C:10:5", "AL:3", "C:6:3", "C:8:4", "Line:3"}) {
    Graph g = make_family(parse_family(name));
    TwoScatterer ts(g);
    CAPTURE(std::string(name));
    for (double E : {-2.9, -0.7, 0.3, 1.9, 3.3}) {
      const CMatrix j = ts.j_matrix(E, serial(0.05)).j;
      const CMatrix ref = testing::brute_force_j(g, ts.bound(), E, 0.05, 100, 10);
      CHECK(max_abs(j - ref) <= 1e-7);
    }
  }
}

TEST_CASE("J quadrature converges and is contour independent") {
  for (const char* name : {"AC:4", "C:10:5", "C:10:4", "AL:10"}) {
    Graph g = make_family(parse_family(name));
    TwoScatterer ts(g);
    CAPTURE(std::string(name));
    for (double E : {-3.1, -1.3, 0.2, 1.41, 2.7}) {
      JOptions o = serial();
      o.check = true;
      const JResult r = ts.j_matrix(E, o);
      CHECK(r.convergence <= 1e-6);
      JOptions d = serial();
      d.deform = ts.safe_deform();
      CHECK(d.deform > 0.0);
      CHECK(max_abs(ts.j_matrix(E, d).j - r.j) <= 1e-6);
    }
  }
}

TEST_CASE("J is symmetric with negative semidefinite imaginary part") {
  for (const char* name : {"AC:4", "C:10:5", "AL:6"}) {
    Graph g = make_family(parse_family(name));
    TwoScatterer ts(g);
    CAPTURE(std::string(name));
    for (double E : {-3.5, -1.0, 0.0, 2.2}) {
      double prev = -1.0;
      for (double eps : {1e-2, 1e-3, 1e-4}) {
        const CMatrix j = ts.j_matrix(E, serial(eps)).j;
        CHECK(max_abs(j - j.transpose()) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<RMatrix> es(j.imag());
        CHECK(es.eigenvalues().maxCoeff() <= 1e-9);
        // away from two-bound thresholds E_i + E_j (a 1/(i eps) term) the
        // absorptive part settles as eps shrinks
        bool pair = false;
        for (int a : ts.bound().bound_indices())
          for (int b : ts.bound().bound_indices())
            pair |= std::abs(E - ts.bound().states[a].energy - ts.bound().states[b].energy) < 0.05;
        const double mag = es.eigenvalues().cwiseAbs().maxCoeff();
        if (!pair && prev >= 0.0) CHECK(std::abs(mag - prev) <= 0.05 * std::max(mag, 1e-3));
        prev = mag;
      }
    }
  }
}

TEST_CASE("parallel J equals the serial reference") {
  Graph g = make_family(parse_family("C:10:4"));
  TwoScatterer ts(g);
  JOptions p = serial();
  p.exec = Exec::Parallel;
  for (double E : {-1.0, 0.5}) CHECK(max_abs(ts.j_matrix(E, p).j - ts.j_matrix(E, serial()).j) <= 1e-13);
}

TEST_CASE("kernel limits") {
  Graph g = make_family(parse_family("AC:4"));
  TwoScatterer ts(g);
  const int m = ts.m();
  const CMatrix id = CMatrix::Identity(m, m);
  const double E = 0.8;
  const JResult jr = ts.j_matrix(E, serial());
  const TwoParticleKernel zero = ts.kernel_from(jr, E, 0.0, serial());
  CHECK(max_abs(zero.ut_inv) == 0.0);
  const TwoParticleKernel hard = ts.kernel_from(jr, E, kHardCore, serial());
  CHECK(max_abs(hard.ut_inv * hard.j + id) <= 1e-8);
  const TwoParticleKernel soft = ts.kernel_from(jr, E, 3.0, serial());
  CHECK(max_abs(soft.ut_inv * (id - 3.0 * soft.j) - 3.0 * id) <= 1e-10);
  const TwoParticleKernel big = ts.kernel_from(jr, E, 1e6, serial());
  CHECK(max_abs(big.ut_inv - hard.ut_inv) / max_abs(hard.ut_inv) <= 1e-4);
}

TEST_CASE("R amplitude symmetries") {
  Graph g = make_family(parse_family("C:10:5"));
  TwoScatterer ts(g);
  const double E1 = -0.6, E2 = 1.1;
  const TwoParticleKernel k = ts.kernel(E1 + E2, kHardCore, serial());
  const Channel in{Asymptote::free(E1, 1), Asymptote::free(E2, 2), Statistics::Boson};
  const Channel out{Asymptote::free(0.2, 2), Asymptote::free(E1 + E2 - 0.2, 2), Statistics::Boson};
  const cplx r = ts.r_amplitude(k, out, in);
  CHECK(std::abs(r) > 1e-6);
  const Channel out_sw{out.second, out.first, Statistics::Boson};
  const Channel in_sw{in.second, in.first, Statistics::Boson};
  CHECK(std::abs(ts.r_amplitude(k, out_sw, in) - r) <= 1e-12 * std::abs(r));
  CHECK(std::abs(ts.r_amplitude(k, out, in_sw) - r) <= 1e-12 * std::abs(r));
  // reciprocity on shell
  CHECK(std::abs(ts.r_amplitude(k, in, out) - r) <= 1e-8 * std::abs(r));
  Channel fermi = in;
  fermi.stats = Statistics::Fermion;
  CHECK(ts.r_amplitude(k, out, fermi) == 0.0);
  CHECK(std::abs(ts.r_amplitude(ts.kernel(E1 + E2, 0.0, serial()), out, in)) == 0.0);

  const Channel bad{Asymptote::bound_state(0), Asymptote::bound_state(1), Statistics::Boson};
  CHECK_THROWS_AS(ts.r_amplitude(k, bad, in), DomainError);
  const Channel rail{Asymptote::free(E1, 3), Asymptote::free(E2, 1), Statistics::Boson};
  CHECK_THROWS_AS(ts.r_amplitude(k, out, rail), DomainError);
  const Channel idx{Asymptote::bound_state(99), Asymptote::free(E2, 1), Statistics::Boson};
  CHECK_THROWS_AS(ts.r_amplitude(k, out, idx), DomainError);
}

TEST_CASE("Psi Psi^dagger lemma") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-kPi, 0.0);
  for (const char* name : {"AC:4", "C:10:5", "AL:7", "C:10:4"}) {
    Graph g = make_family(parse_family(name));
    CAPTURE(std::string(name));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) worst = std::max(worst, psi_psi_dagger_check(g, std::polar(1.0, u(rng))));
    CHECK(worst <= 1e-9);
  }
  CHECK(psi_psi_dagger_check(make_family({Family::Line, 0, 0}), std::polar(1.0, -1.0)) == 0.0);
  // 1.4e-4 away from the top eigenvalue 2cos(pi/7) of the internal path
  CHECK(psi_psi_dagger_check(make_family(parse_family("Line:6")), std::polar(1.0, 0.448636)) <= 1e-12);
}

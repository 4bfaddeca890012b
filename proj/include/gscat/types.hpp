#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gscat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

using namespace std::complex_literals;

inline constexpr double kPi = 3.14159265358979323846;

// Base for every error the library raises; callers that only need to know
// "the computation could not proceed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

// z + 1/z sits on an eigenvalue of the internal block D.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, cplx z) : Error(what), z_(z) {}
  cplx z() const { return z_; }

 private:
  cplx z_;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, cplx z, double rcond)
      : Error(what), z_(z), rcond_(rcond) {}
  cplx z() const { return z_; }
  double rcond() const { return rcond_; }

 private:
  cplx z_;
  double rcond_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

enum class Statistics { Distinguishable, Boson, Fermion };

// Amplitude prefactor b of the symmetrized contact overlap: 1, sqrt(2), 0.
double statistics_factor(Statistics s);
const char* to_string(Statistics s);
Statistics parse_statistics(const std::string& s);

// Execution policy for the data-parallel kernels. Serial is the reference
// path the tests compare against.
enum class Exec { Serial, Parallel };

}  // namespace gscat

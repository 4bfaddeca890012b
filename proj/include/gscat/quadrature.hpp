#pragma once

#include <vector>

namespace gscat {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

// n-point Gauss-Legendre on [-1, 1], cached per n.
const Rule& gauss_legendre(int n);

// GL mapped onto [a, b].
Rule gauss_legendre(int n, double a, double b);

// Composite GL on [a, b]: panels shrink geometrically (factor `ratio`) toward
// every breakpoint until they reach `finest`, then panels of width at most
// `coarse` cover the rest.
Rule graded_rule(double a, double b, std::vector<double> breakpoints, int order, double finest,
                 double ratio = 0.25, double coarse = 0.25);

struct Breakpoint {
  double x;
  double finest;
};

Rule graded_rule(double a, double b, const std::vector<Breakpoint>& breakpoints, int order,
                 double ratio = 0.25, double coarse = 0.25);

// x = lo + (hi - lo)(1 - cos t)/2 on t in (0, pi): clusters nodes at both ends
// and cancels inverse square-root endpoint behaviour.
Rule cosine_rule(double lo, double hi, int n);

}  // namespace gscat

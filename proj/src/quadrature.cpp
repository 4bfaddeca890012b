#include "gscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "gscat/types.hpp"

namespace gscat {

namespace {

Rule compute_gl(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) r.x[0] = 0.0, r.w[0] = 2.0;
  return r;
}

void append(Rule& out, const Rule& base, double a, double b) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < base.size(); ++i) {
    out.x.push_back(c + h * base.x[i]);
    out.w.push_back(h * base.w[i]);
  }
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule out;
  append(out, gauss_legendre(n), a, b);
  return out;
}

Rule graded_rule(double a, double b, const std::vector<Breakpoint>& bp, int order, double ratio,
                 double coarse) {
  if (!(b > a)) throw DomainError("empty integration interval");
  std::vector<double> cuts{a, b};
  for (const auto& p : bp) {
    if (p.x > a && p.x < b) cuts.push_back(p.x);
    // geometric ladder on both sides, down to p.finest
    for (double h = p.finest; h < coarse; h /= ratio) {
      if (p.x - h > a && p.x - h < b) cuts.push_back(p.x - h);
      if (p.x + h > a && p.x + h < b) cuts.push_back(p.x + h);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double c : cuts)
    if (merged.empty() || c - merged.back() > 1e-15 * std::max(1.0, std::abs(c)))
      merged.push_back(c);
  const Rule& base = gauss_legendre(order);
  Rule out;
  for (size_t k = 0; k + 1 < merged.size(); ++k) {
    const double lo = merged[k], hi = merged[k + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / coarse - 1e-12)));
    for (int j = 0; j < pieces; ++j)
      append(out, base, lo + (hi - lo) * j / pieces, lo + (hi - lo) * (j + 1) / pieces);
  }
  return out;
}

Rule graded_rule(double a, double b, std::vector<double> bp, int order, double finest,
                 double ratio, double coarse) {
  std::vector<Breakpoint> pts;
  for (double x : bp) pts.push_back({x, finest});
  return graded_rule(a, b, pts, order, ratio, coarse);
}

Rule cosine_rule(double lo, double hi, int n) {
  const Rule t = gauss_legendre(n, 0.0, kPi);
  Rule out;
  out.x.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = lo + 0.5 * (hi - lo) * (1.0 - std::cos(t.x[i]));
    out.w[i] = t.w[i] * 0.5 * (hi - lo) * std::sin(t.x[i]);
  }
  return out;
}

}  // namespace gscat

#include "pam/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pam {

namespace {

GaussRule compute_rule(int n) {
  // Newton iteration on Legendre polynomials, symmetric roots.
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 2 || order > 128) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order) {
  const GaussRule& rule = gauss_legendre(order);
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

double integrate_refined(const std::function<double(double)>& f, double a, double b,
                         double toward, int panels, int order) {
  // Geometric panel sizes shrinking toward one endpoint.
  if (toward != a && toward != b) return integrate(f, a, b, panels, order);
  std::vector<double> cuts(panels + 1);
  const double len = b - a;
  for (int i = 0; i <= panels; ++i) {
    const double frac = std::pow(0.5, panels - i);  // 2^-panels ... 1
    cuts[i] = (i == 0) ? 0.0 : frac;
  }
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo, hi;
    if (toward == a) {
      lo = a + cuts[p] * len;
      hi = a + cuts[p + 1] * len;
    } else {
      lo = b - cuts[p + 1] * len;
      hi = b - cuts[p] * len;
    }
    total += integrate(f, lo, hi, 1, order);
  }
  return total;
}

double integrate_power_weight(const std::function<double(double)>& f, double alpha,
                              double b, int panels, int order) {
  if (alpha <= -1.0) throw std::domain_error("integrate_power_weight: alpha <= -1 diverges");
  if (b <= 0.0) return 0.0;
  const double q = 1.0 + alpha;
  const double ub = std::pow(b, q);
  auto g = [&](double u) { return f(std::pow(u, 1.0 / q)) / q; };
  return integrate(g, 0.0, ub, panels, order);
}

WeightedNodes power_weighted_nodes(double alpha, double a, double b, int panels, int order) {
  if (alpha <= -1.0) throw std::domain_error("power_weighted_nodes: alpha <= -1 diverges");
  if (!(a < b)) throw std::invalid_argument("power_weighted_nodes: need a < b");
  WeightedNodes out;
  const GaussRule& rule = gauss_legendre(order);
  const double q = 1.0 + alpha;
  // One signed half at a time; substitution u = |x|^q removes the weight.
  auto add_half = [&](double lo, double hi, double sign) {
    if (!(hi > lo) || hi <= 0.0) return;
    const double ulo = std::pow(lo, q), uhi = std::pow(hi, q);
    const double h = (uhi - ulo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double base = ulo + p * h;
      const double mid = base + 0.5 * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = mid + 0.5 * h * rule.nodes[i];
        out.x.push_back(sign * std::pow(u, 1.0 / q));
        out.w.push_back(0.5 * h * rule.weights[i] / q);
      }
    }
  };
  if (a >= 0.0) {
    add_half(a, b, +1.0);
  } else if (b <= 0.0) {
    add_half(-b, -a, -1.0);
  } else {
    add_half(0.0, -a, -1.0);
    add_half(0.0, b, +1.0);
  }
  return out;
}

}  // namespace pam

#ifndef PAM_QUADRATURE_HPP
#define PAM_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace pam {

// Fixed-order Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);  // cached; order in [2, 128]

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 8, int order = 32);

// Same with panels geometrically refined toward the endpoint `toward`
// (useful when f is steep but finite there).
double integrate_refined(const std::function<double(double)>& f, double a, double b,
                         double toward, int panels = 16, int order = 32);

// int_0^b f(x) * x^alpha dx for alpha > -1; the power-law factor is removed
// exactly by the substitution x = u^{1/(1+alpha)}.
double integrate_power_weight(const std::function<double(double)>& f, double alpha,
                              double b, int panels = 8, int order = 32);

// Nodes and weights tabulating int f(x) w(x) dx ~ sum_i W_i f(X_i) for the
// weight w(x) = |x|^alpha on [a, b] (a < b, interval may straddle 0).
struct WeightedNodes {
  std::vector<double> x;
  std::vector<double> w;
};
WeightedNodes power_weighted_nodes(double alpha, double a, double b,
                                   int panels = 8, int order = 32);

}  // namespace pam

#endif

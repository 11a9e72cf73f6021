#include "onebit/quadrature.hpp"

#include "onebit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace onebit {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

constexpr int kPanelNodes = 10;
constexpr int kMaxSplits = 100000;

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(kPanelNodes);
  return rule;
}

struct Segment {
  double a, b;
  double left, right;  // panel values on the two halves
  double error;        // |left + right - panel value on [a, b]|
  bool operator<(const Segment& other) const { return error < other.error; }
};

class Adaptive {
 public:
  Adaptive(const std::function<double(double)>& f, long max_evaluations) : f_(f), max_evaluations_(max_evaluations) {}

  double panel(double a, double b) {
    if (evaluations_ + kPanelNodes > max_evaluations_)
      throw NumericalError("integrate_adaptive: evaluation budget exhausted before reaching tolerance");
    const GaussRule& rule = panel_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kPanelNodes; ++i) sum += rule.weights[i] * f_(mid + half * rule.nodes[i]);
    evaluations_ += kPanelNodes;
    return half * sum;
  }

  Segment segment(double a, double b, double whole) {
    const double mid = 0.5 * (a + b);
    const double left = panel(a, mid);
    const double right = panel(mid, b);
    return {a, b, left, right, std::abs(left + right - whole)};
  }

  long evaluations() const { return evaluations_; }

 private:
  const std::function<double(double)>& f_;
  long max_evaluations_;
  long evaluations_ = 0;
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, long max_evaluations) {
  // Global bisection: always split the segment with the largest error
  // estimate until the summed estimate meets abs_tol.
  Adaptive state(f, max_evaluations);
  std::vector<Segment> heap;
  heap.push_back(state.segment(a, b, state.panel(a, b)));
  double total_error = heap.front().error;
  int splits = 0;
  while (total_error > abs_tol) {
    if (++splits > kMaxSplits) throw NumericalError("integrate_adaptive: subdivision limit reached");
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw NumericalError("integrate_adaptive: interval collapsed before reaching tolerance");
    total_error -= worst.error;
    for (const Segment& child : {state.segment(worst.a, mid, worst.left), state.segment(mid, worst.b, worst.right)}) {
      total_error += child.error;
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end());
    }
    // guard against drift from repeated subtraction
    if (total_error <= abs_tol) {
      total_error = 0.0;
      for (const Segment& s : heap) total_error += s.error;
    }
  }
  // sum in left-to-right order
  std::sort(heap.begin(), heap.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  QuadratureResult result;
  for (const Segment& s : heap) result.value += s.left + s.right;
  result.error_estimate = total_error;
  result.evaluations = state.evaluations();
  return result;
}

}  // namespace onebit

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace regmdp {

/// Raised when an effort or parameter falls outside the domain of a model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * Probability that a harm event occurs given platform effort e.
 *
 * Two families are supported. The default exponential-decay family
 *
 *     h(e) = h_min + (h_max - h_min) * exp(-k e)
 *
 * is strictly decreasing and strictly convex on [0, inf). The piecewise-linear
 * family interpolates a convex, strictly decreasing set of knots and has
 * h''(e) = 0 almost everywhere; it exists to exercise the weak-convexity edge.
 * Its domain is [0, last knot].
 */
class HarmModel {
 public:
  struct Exponential {
    double h_min;
    double h_max;
    double k;
  };
  struct PiecewiseLinear {
    std::vector<std::pair<double, double>> knots;  // (effort, probability)
  };

  static HarmModel exponential(double h_min, double h_max, double k);
  /// Knots must start at effort 0, be strictly increasing in effort, strictly
  /// decreasing in probability, and have non-decreasing slopes.
  static HarmModel piecewise_linear(std::vector<std::pair<double, double>> knots);

  double prob(double e) const;
  /// Right derivative at the knots of the piecewise-linear family.
  double derivative(double e) const;
  double second_derivative(double e) const;

  /// Largest effort at which the model is defined.
  double domain_max() const;

  const std::variant<Exponential, PiecewiseLinear>& family() const { return family_; }

 private:
  explicit HarmModel(std::variant<Exponential, PiecewiseLinear> f) : family_(std::move(f)) {}
  std::variant<Exponential, PiecewiseLinear> family_;
};

/// Quadratic effort cost c(e) = a e^2 + b e with a, b > 0.
struct CostModel {
  double a;
  double b;

  CostModel(double a, double b);

  double cost(double e) const;
  double derivative(double e) const;
  double second_derivative() const { return 2.0 * a; }
};

/// Per-state probability that the required effort drifts one level down when
/// no harm occurs. The lowest state never drifts.
class DriftModel {
 public:
  explicit DriftModel(std::vector<double> drift_probs);
  /// p for every state except the lowest, which gets 0.
  static DriftModel constant(double p, std::size_t n_states);

  double prob(std::size_t state) const { return probs_.at(state); }
  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

struct WelfareModel {
  HarmModel harm;
  CostModel cost;
  double damage;  ///< societal cost D of one harm event
};

double harm_prob(const HarmModel& model, double e);
double harm_prob_derivative(const HarmModel& model, double e);
double cost(const CostModel& model, double e);
double cost_derivative(const CostModel& model, double e);

/// EW(e) = -h(e) D - c(e).
double expected_welfare(const WelfareModel& model, double e);

/// First-best effort e* = argmax over [0, e_max] of expected_welfare.
///
/// EW is concave, so its derivative -h'(e) D - c'(e) is non-increasing and the
/// maximizer is either an interior root (located by bisection to within tol) or
/// a boundary.
double socially_optimal_effort(const WelfareModel& model, double e_max, double tol = 1e-12);

}  // namespace regmdp

#include "regmdp/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace regmdp {

namespace {

void require_nonnegative(double e) {
  if (!(e >= 0.0)) {
    std::ostringstream msg;
    msg << "effort must be non-negative, got " << e;
    throw DomainError(msg.str());
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Index of the segment [knots[i], knots[i+1]) containing e; the last segment is
// closed on the right.
std::size_t segment_of(const HarmModel::PiecewiseLinear& pl, double e) {
  const auto& kn = pl.knots;
  if (e > kn.back().first) {
    std::ostringstream msg;
    msg << "effort " << e << " beyond piecewise-linear harm domain [0, " << kn.back().first << "]";
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(kn.begin(), kn.end(), e,
                             [](double x, const auto& knot) { return x < knot.first; });
  auto idx = static_cast<std::size_t>(std::distance(kn.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, kn.size() - 2);
}

double segment_slope(const HarmModel::PiecewiseLinear& pl, std::size_t i) {
  const auto& [e0, h0] = pl.knots[i];
  const auto& [e1, h1] = pl.knots[i + 1];
  return (h1 - h0) / (e1 - e0);
}

}  // namespace

HarmModel HarmModel::exponential(double h_min, double h_max, double k) {
  if (!(h_min > 0.0 && h_min < 1.0)) throw DomainError("h_min must lie in (0,1)");
  if (!(h_max > h_min && h_max <= 1.0)) throw DomainError("h_max must lie in (h_min,1]");
  if (!(k > 0.0)) throw DomainError("k must be positive");
  return HarmModel(Exponential{h_min, h_max, k});
}

HarmModel HarmModel::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw DomainError("piecewise-linear harm needs at least two knots");
  if (knots.front().first != 0.0) throw DomainError("first harm knot must sit at effort 0");
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [e, h] = knots[i];
    if (!(h > 0.0 && h <= 1.0)) throw DomainError("harm knot probabilities must lie in (0,1]");
    if (i == 0) continue;
    const auto [e_prev, h_prev] = knots[i - 1];
    if (!(e > e_prev)) throw DomainError("harm knot efforts must be strictly increasing");
    if (!(h < h_prev)) throw DomainError("harm knot probabilities must be strictly decreasing");
    const double slope = (h - h_prev) / (e - e_prev);
    if (slope < prev_slope) throw DomainError("harm knots must describe a convex function");
    prev_slope = slope;
  }
  return HarmModel(PiecewiseLinear{std::move(knots)});
}

double HarmModel::prob(double e) const {
  require_nonnegative(e);
  return std::visit(Overloaded{
                        [e](const Exponential& m) { return m.h_min + (m.h_max - m.h_min) * std::exp(-m.k * e); },
                        [e](const PiecewiseLinear& m) {
                          const auto i = segment_of(m, e);
                          return m.knots[i].second + segment_slope(m, i) * (e - m.knots[i].first);
                        },
                    },
                    family_);
}

double HarmModel::derivative(double e) const {
  require_nonnegative(e);
  return std::visit(Overloaded{
                        [e](const Exponential& m) { return -m.k * (m.h_max - m.h_min) * std::exp(-m.k * e); },
                        [e](const PiecewiseLinear& m) { return segment_slope(m, segment_of(m, e)); },
                    },
                    family_);
}

double HarmModel::second_derivative(double e) const {
  require_nonnegative(e);
  return std::visit(Overloaded{
                        [e](const Exponential& m) { return m.k * m.k * (m.h_max - m.h_min) * std::exp(-m.k * e); },
                        [e](const PiecewiseLinear& m) {
                          segment_of(m, e);
                          return 0.0;
                        },
                    },
                    family_);
}

double HarmModel::domain_max() const {
  return std::visit(Overloaded{
                        [](const Exponential&) { return std::numeric_limits<double>::infinity(); },
                        [](const PiecewiseLinear& m) { return m.knots.back().first; },
                    },
                    family_);
}

CostModel::CostModel(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0)) throw DomainError("cost coefficient a must be positive");
  if (!(b > 0.0)) throw DomainError("cost coefficient b must be positive");
}

double CostModel::cost(double e) const {
  require_nonnegative(e);
  return a * e * e + b * e;
}

double CostModel::derivative(double e) const {
  require_nonnegative(e);
  return 2.0 * a * e + b;
}

DriftModel::DriftModel(std::vector<double> drift_probs) : probs_(std::move(drift_probs)) {
  if (probs_.empty()) throw DomainError("drift model needs at least one state");
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("drift probabilities must lie in [0,1]");
  }
  if (probs_.front() != 0.0) throw DomainError("the lowest state cannot drift: its drift probability must be 0");
}

DriftModel DriftModel::constant(double p, std::size_t n_states) {
  if (n_states == 0) throw DomainError("drift model needs at least one state");
  std::vector<double> probs(n_states, p);
  probs.front() = 0.0;
  return DriftModel(std::move(probs));
}

double harm_prob(const HarmModel& model, double e) { return model.prob(e); }
double harm_prob_derivative(const HarmModel& model, double e) { return model.derivative(e); }
double cost(const CostModel& model, double e) { return model.cost(e); }
double cost_derivative(const CostModel& model, double e) { return model.derivative(e); }

double expected_welfare(const WelfareModel& model, double e) {
  return -model.harm.prob(e) * model.damage - model.cost.cost(e);
}

double socially_optimal_effort(const WelfareModel& model, double e_max, double tol) {
  if (!(model.damage >= 0.0)) throw DomainError("damage must be non-negative");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!(e_max > 0.0)) throw DomainError("e_max must be positive");
  if (e_max > model.harm.domain_max()) throw DomainError("e_max exceeds the harm model domain");

  // Marginal welfare; non-increasing because EW is concave.
  auto marginal = [&](double e) { return -model.harm.derivative(e) * model.damage - model.cost.derivative(e); };

  if (marginal(0.0) <= 0.0) return 0.0;
  if (marginal(e_max) >= 0.0) return e_max;

  double lo = 0.0;
  double hi = e_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (marginal(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace regmdp

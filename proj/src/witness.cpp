#include "corrfix/witness.hpp"

#include <algorithm>
#include <cmath>

namespace corrfix {

namespace {
const PiecewiseLinearMap kIdentity{};
}

PiecewiseLinearMap::PiecewiseLinearMap() : t_{0.0, 1.0}, v_{0.0, 1.0} {}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> t, std::vector<double> v)
    : t_(std::move(t)), v_(std::move(v)) {
  require(t_.size() == v_.size() && t_.size() >= 2, ErrorCode::invalid_argument,
          "knot lists need matching length >= 2");
  require(t_.front() == 0.0 && v_.front() == 0.0, ErrorCode::invalid_argument,
          "piecewise-linear map must fix 0");
  require(t_.back() == 1.0 && v_.back() == 1.0, ErrorCode::invalid_argument,
          "piecewise-linear map must fix 1");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    require(t_[i] > t_[i - 1], ErrorCode::invalid_argument,
            "knot abscissae must be strictly increasing");
    require(v_[i] > v_[i - 1], ErrorCode::invalid_argument,
            "knot values must be strictly increasing (bijective component)");
  }
}

PiecewiseLinearMap PiecewiseLinearMap::power_samples(double p, int segments) {
  require(p > 0, ErrorCode::invalid_argument, "power must be positive");
  require(segments >= 1, ErrorCode::invalid_argument, "need >= 1 segments");
  std::vector<double> t, v;
  for (int j = 0; j <= segments; ++j) {
    double tj = static_cast<double>(j) / segments;
    t.push_back(tj);
    v.push_back(j == segments ? 1.0 : std::pow(tj, p));
  }
  return PiecewiseLinearMap(std::move(t), std::move(v));
}

PiecewiseLinearMap PiecewiseLinearMap::complement() const {
  std::vector<double> t, v;
  for (std::size_t i = t_.size(); i-- > 0;) {
    t.push_back(i == 0 ? 1.0 : 1.0 - t_[i]);
    v.push_back(i == 0 ? 1.0 : 1.0 - v_[i]);
  }
  // reversed knots start at (1-1, 1-1) = (0,0) exactly
  t.front() = 0.0;
  v.front() = 0.0;
  return PiecewiseLinearMap(std::move(t), std::move(v));
}

double PiecewiseLinearMap::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  if (hi >= t_.size()) hi = t_.size() - 1;
  std::size_t lo = hi - 1;
  if (t == t_[lo]) return v_[lo]; // knots evaluate exactly
  double s = (t - t_[lo]) / (t_[hi] - t_[lo]);
  return v_[lo] + s * (v_[hi] - v_[lo]);
}

bool PiecewiseLinearMap::is_identity() const {
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i] != v_[i]) return false;
  return true;
}

double PiecewiseLinearMap::max_slope() const {
  double s = 0.0;
  for (std::size_t i = 1; i < t_.size(); ++i)
    s = std::max(s, (v_[i] - v_[i - 1]) / (t_[i] - t_[i - 1]));
  return s;
}

const PiecewiseLinearMap& WnqWitness::g_at(std::size_t i) const {
  if (g.empty()) return kIdentity;
  return g[i];
}

bool WnqWitness::identity_g() const {
  if (g.empty()) return true;
  return std::all_of(g.begin(), g.end(),
                     [](const PiecewiseLinearMap& m) { return m.is_identity(); });
}

} // namespace corrfix

#include "ofspline/spline_core.hpp"

#include "ofspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ofspline {

double cardinal_eval(int p, double t) {
  if (p < 0) throw ConfigError("cardinal_eval: negative degree");
  if (t < 0.0 || t >= p + 1.0) return 0.0;
  // vals[j] holds N_k(t - j) while k climbs from 0 to p.
  std::vector<double> vals(static_cast<std::size_t>(p) + 1);
  for (int j = 0; j <= p; ++j) {
    const double s = t - j;
    vals[j] = (s >= 0.0 && s < 1.0) ? 1.0 : 0.0;
  }
  for (int k = 1; k <= p; ++k) {
    for (int j = 0; j + k <= p; ++j) {
      const double s = t - j;
      vals[j] = (s / k) * vals[j] + ((k + 1 - s) / k) * vals[j + 1];
    }
  }
  return vals[0];
}

double cardinal_derivative(int p, int r, double t) {
  if (r < 0 || r > p) {
    throw ConfigError("cardinal_derivative: order " + std::to_string(r) +
                      " outside [0, " + std::to_string(p) + "]");
  }
  // N_p^{(r)}(t) = sum_j (-1)^j C(r, j) N_{p-r}(t - j)
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= r; ++j) {
    sum += ((j % 2 == 0) ? binom : -binom) * cardinal_eval(p - r, t - j);
    binom = binom * (r - j) / (j + 1);
  }
  return sum;
}

KnotVector::KnotVector(int degree, int num_elements, std::vector<double> values)
    : degree_(degree), num_elements_(num_elements), values_(std::move(values)) {
  if (degree_ < 0) throw ConfigError("KnotVector: negative degree");
  if (num_elements_ < 1) throw ConfigError("KnotVector: need at least one element");
  const auto expected = static_cast<std::size_t>(num_elements_ + 2 * degree_ + 1);
  if (values_.size() != expected) {
    throw ConfigError("KnotVector: expected " + std::to_string(expected) + " knots, got " +
                      std::to_string(values_.size()));
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i - 1] <= values_[i])) throw ConfigError("KnotVector: knots must be nondecreasing");
  }
  for (int i = 1; i < num_elements_ - 1; ++i) {
    if (!((*this)[i] < (*this)[i + 1])) {
      throw ConfigError("KnotVector: interior knots must be strictly increasing");
    }
  }
  const auto& k = *this;
  if (!(k[0] <= 0.0 && 0.0 < k[1])) throw ConfigError("KnotVector: need xi_0 <= 0 < xi_1");
  if (!(k[num_elements_ - 1] < 1.0 && 1.0 <= k[num_elements_])) {
    throw ConfigError("KnotVector: need xi_{n_el-1} < 1 <= xi_{n_el}");
  }
}

KnotVector KnotVector::uniform(int degree, int num_elements, double inverse_spacing, double shift) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(num_elements + 2 * degree + 1));
  for (int i = -degree; i <= num_elements + degree; ++i) v.push_back((i - shift) / inverse_spacing);
  return KnotVector(degree, num_elements, std::move(v));
}

KnotVector KnotVector::open_uniform(int degree, int num_elements) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(num_elements + 2 * degree + 1));
  for (int i = 0; i < degree; ++i) v.push_back(0.0);
  for (int i = 0; i <= num_elements; ++i) v.push_back(static_cast<double>(i) / num_elements);
  for (int i = 0; i < degree; ++i) v.push_back(1.0);
  return KnotVector(degree, num_elements, std::move(v));
}

int KnotVector::find_span(double x) const {
  // number of interior knots xi_1 .. xi_{n_el-1} that are <= x
  const auto first = values_.begin() + degree_ + 1;
  const auto last = values_.begin() + degree_ + num_elements_;
  return static_cast<int>(std::upper_bound(first, last, x) - first);
}

std::vector<double> KnotVector::breaks() const {
  std::vector<double> b;
  b.reserve(static_cast<std::size_t>(num_elements_) + 1);
  b.push_back(0.0);
  for (int i = 1; i < num_elements_; ++i) b.push_back((*this)[i]);
  b.push_back(1.0);
  return b;
}

BasisEval bspline_eval_all(const KnotVector& knots, int r, double x) {
  const int p = knots.degree();
  if (r < 0 || r > p) {
    throw ConfigError("bspline_eval_all: derivative order " + std::to_string(r) +
                      " outside [0, " + std::to_string(p) + "]");
  }
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("bspline_eval_all: x outside [0, 1]");

  const int span = knots.find_span(x);
  auto U = [&](int i) { return knots[i]; };

  // Piegl & Tiller, algorithm A2.3.
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(static_cast<std::size_t>(p) + 1), right(static_cast<std::size_t>(p) + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U(span + 1 - j);
    right[j] = U(span + j) - x;
    double saved = 0.0;
    for (int k = 0; k < j; ++k) {
      ndu(j, k) = right[k + 1] + left[j - k];
      const double temp = ndu(k, j - 1) / ndu(j, k);
      ndu(k, j) = saved + right[k + 1] * temp;
      saved = left[j - k] * temp;
    }
    ndu(j, j) = saved;
  }

  BasisEval out;
  out.first_active = span;  // knot index span - p, shifted by +p
  out.values.setZero(r + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.values(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int k0 = 0; k0 <= p; ++k0) {
    int s1 = 0;
    int s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int k = 1; k <= r; ++k) {
      double d = 0.0;
      const int rk = k0 - k;
      const int pk = p - k;
      if (k0 >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (k0 - 1 <= pk) ? k - 1 : p - k0;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (k0 <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, k0);
        d += a(s2, k) * ndu(k0, pk);
      }
      out.values(k, k0) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= r; ++k) {
    out.values.row(k) *= factor;
    factor *= (p - k);
  }
  return out;
}

}  // namespace ofspline

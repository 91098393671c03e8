/*
 * Copyright 2026 The tvopf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tvopf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tvopf/error.hpp"

namespace tvopf {

int Poly4::degree() const {
  for (int k = 4; k >= 0; --k)
    if (c[k] != 0.0) return k;
  return -1;
}

Poly4 operator*(const Poly4& a, const Poly4& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da < 0 || db < 0) return Poly4{};
  if (da + db > 4) throw std::logic_error("Poly4 product exceeds degree 4");
  Poly4 out;
  for (int i = 0; i <= da; ++i)
    for (int j = 0; j <= db; ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

namespace {

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a};
  if (q != 0.0) r.push_back(c / q);
  return r;
}

// One Newton step on a x^3 + b x^2 + c x + d, kept only if it helps.
double polish(double x, double a, double b, double c, double d) {
  auto f = [&](double t) { return ((a * t + b) * t + c) * t + d; };
  const double fp = (3.0 * a * x + 2.0 * b) * x + c;
  if (fp == 0.0) return x;
  const double y = x - f(x) / fp;
  return std::abs(f(y)) < std::abs(f(x)) ? y : x;
}

}  // namespace

std::vector<double> cubic_roots(double a, double b, double c, double d) {
  if (a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0)
    throw std::invalid_argument("cubic_roots: all coefficients are zero");

  std::vector<double> roots;
  if (a == 0.0) {
    roots = quadratic_roots(b, c, d);
  } else {
    const double bn = b / a;
    const double cn = c / a;
    const double dn = d / a;
    const double shift = bn / 3.0;
    // Depressed cubic y^3 + p y + q with x = y - b/3a.
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    const double half_q = q / 2.0;
    const double third_p = p / 3.0;
    double disc = half_q * half_q + third_p * third_p * third_p;
    const double scale = half_q * half_q + std::abs(third_p * third_p * third_p);
    if (std::abs(disc) <= 1e-14 * scale) disc = 0.0;

    if (p == 0.0 && q == 0.0) {
      roots = {-shift};
    } else if (disc > 0.0) {
      // Cardano, arranged to avoid cancellation.
      const double u = std::cbrt(-half_q - std::copysign(std::sqrt(disc), half_q));
      const double y = (u != 0.0) ? u - third_p / u : 0.0;
      roots = {y - shift};
    } else if (disc == 0.0) {
      const double u = std::cbrt(-half_q);
      roots = {2.0 * u - shift, -u - shift};
    } else {
      // Three distinct real roots: trigonometric form.
      const double r = 2.0 * std::sqrt(-third_p);
      const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
    for (double& x : roots) x = polish(x, a, b, c, d);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double x : roots) {
    if (!std::isfinite(x)) continue;
    if (!unique.empty() && std::abs(x - unique.back()) <= 1e-9 * std::max(1.0, std::abs(x))) continue;
    unique.push_back(x);
  }
  return unique;
}

UnivariateMin minimize_univariate(const Poly4& p, double lo, double hi, std::string_view what) {
  if (!(lo <= hi)) throw std::invalid_argument("minimize_univariate: empty interval");
  const int deg = p.degree();
  constexpr double inf = std::numeric_limits<double>::infinity();

  if (deg >= 1) {
    const double lead = p.c[deg];
    const bool up_ok = hi < inf || lead > 0.0;
    const bool down_ok = lo > -inf || (deg % 2 == 0 ? lead > 0.0 : lead < 0.0);
    if (!up_ok || !down_ok)
      throw NumericError("univariate subproblem unbounded below for " + std::string(what));
  }

  std::vector<double> candidates{std::clamp(0.0, lo, hi)};
  if (lo > -inf) candidates.push_back(lo);
  if (hi < inf) candidates.push_back(hi);
  if (deg >= 2) {
    for (double r : cubic_roots(4.0 * p.c[4], 3.0 * p.c[3], 2.0 * p.c[2], p.c[1]))
      if (r >= lo && r <= hi) candidates.push_back(r);
  }

  UnivariateMin best{candidates.front(), p(candidates.front())};
  for (double a : candidates) {
    const double v = p(a);
    const double tol = 1e-14 * (1.0 + std::abs(best.value));
    if (v < best.value - tol || (std::abs(v - best.value) <= tol && std::abs(a) < std::abs(best.argmin)))
      best = {a, v};
  }
  if (!std::isfinite(best.value))
    throw NumericError("univariate subproblem overflowed for " + std::string(what));
  return best;
}

}  // namespace tvopf

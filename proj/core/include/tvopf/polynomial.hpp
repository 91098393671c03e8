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

#pragma once

#include <array>
#include <string_view>
#include <vector>

namespace tvopf {

/// Univariate polynomial of degree at most four, coefficients in ascending
/// order: c[0] + c[1] a + ... + c[4] a^4.
struct Poly4 {
  std::array<double, 5> c{};

  static Poly4 constant(double v) { return Poly4{{v, 0, 0, 0, 0}}; }
  static Poly4 quadratic(double c0, double c1, double c2) {
    return Poly4{{c0, c1, c2, 0, 0}};
  }

  [[nodiscard]] double operator()(double a) const {
    return c[0] + a * (c[1] + a * (c[2] + a * (c[3] + a * c[4])));
  }
  [[nodiscard]] double derivative(double a) const {
    return c[1] + a * (2 * c[2] + a * (3 * c[3] + a * 4 * c[4]));
  }
  /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
  [[nodiscard]] int degree() const;

  Poly4& operator+=(const Poly4& o) {
    for (size_t k = 0; k < 5; ++k) c[k] += o.c[k];
    return *this;
  }
  Poly4& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend Poly4 operator+(Poly4 a, const Poly4& b) { return a += b; }
  friend Poly4 operator-(Poly4 a, const Poly4& b) {
    for (size_t k = 0; k < 5; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Poly4 operator*(Poly4 a, double s) { return a *= s; }
  friend Poly4 operator*(double s, Poly4 a) { return a *= s; }
  /// Product; throws std::logic_error if the degree would exceed four.
  friend Poly4 operator*(const Poly4& a, const Poly4& b);
};

/// Real roots of a x^3 + b x^2 + c x + d, ascending, multiplicities
/// collapsed. a == 0 falls through to the quadratic / linear case. Throws
/// std::invalid_argument when all coefficients are zero.
std::vector<double> cubic_roots(double a, double b, double c, double d);

struct UnivariateMin {
  double argmin = 0.0;
  double value = 0.0;
};

/// Global minimizer of p over [lo, hi] (either end may be infinite) by
/// enumerating stationary points and finite endpoints. Among equal values the
/// candidate closest to zero wins. Throws NumericError naming `what` when p is
/// unbounded below on the interval.
UnivariateMin minimize_univariate(const Poly4& p, double lo, double hi,
                                  std::string_view what = "coordinate");

}  // namespace tvopf

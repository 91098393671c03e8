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

#include <complex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "tvopf/network.hpp"

namespace tvopf {

using Complex = std::complex<double>;

/// How the fixed slack voltage enters the quadratic forms.
///  - embedded: the slack is an ordinary modeled bus whose two x entries are
///    frozen at rho0 e^{j theta0}; no linear terms.
///  - folded: the slack bus is removed from the modeled set and its coupling
///    becomes per-bus linear terms omega, omega-bar.
enum class SlackMode { embedded, folded };

/// Row-wise sparse complex matrix.
struct ComplexSparse {
  int dim = 0;
  std::vector<std::vector<std::pair<int, Complex>>> rows;

  explicit ComplexSparse(int n = 0) : dim(n), rows(static_cast<size_t>(n)) {}

  [[nodiscard]] Complex at(int r, int c) const;
  void add(int r, int c, Complex v);
  [[nodiscard]] int max_row_nonzeros() const;
};

/// Standard pi-model bus admittance over every bus of the model.
ComplexSparse build_admittance(const NetworkModel& model);

/// Removes the slack row/column. `coupling[i]` is y_{i,slack} for the
/// remaining buses, in model order with the slack skipped.
struct FoldedAdmittance {
  ComplexSparse reduced;
  std::vector<Complex> coupling;
};
FoldedAdmittance fold_slack(const ComplexSparse& full, int slack_bus);

/// Real symmetric sparse matrix in CSR form, both triangles stored.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;
  /// Builds from (row, col, value) triplets; duplicates are summed, exact
  /// zeros dropped. The caller supplies both triangles.
  SparseSymmetric(int dim, std::vector<std::tuple<int, int, double>> triplets);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] size_t nonzeros() const { return values_.size(); }
  [[nodiscard]] double at(int r, int c) const;
  [[nodiscard]] double diagonal(int j) const { return at(j, j); }
  /// (A x)_j
  [[nodiscard]] double row_dot(int j, std::span<const double> x) const;
  [[nodiscard]] bool row_empty(int j) const { return row_ptr_[j] == row_ptr_[j + 1]; }

  template <typename F>
  void for_each(F&& f) const {
    for (int r = 0; r < dim_; ++r)
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) f(r, cols_[k], values_[k]);
  }

 private:
  int dim_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

/// tr(A x x^T) = x^T A x over the sparse pattern.
double quad_form_trace(const SparseSymmetric& a, std::span<const double> x);

using SparseVector = std::vector<std::pair<int, double>>;

double dot(const SparseVector& w, std::span<const double> x);

/// M_i, Y_i and Ybar_i for one modeled bus, plus the folded-slack linear
/// terms (empty in embedded mode).
struct BusForms {
  SparseSymmetric magnitude;  // M_i
  SparseSymmetric active;  // Y_i
  SparseSymmetric reactive;  // Ybar_i
  SparseVector active_linear;  // omega_i
  SparseVector reactive_linear;  // omega-bar_i
};

/// M_i, Y_i, Ybar_i built from row i of y (dimension 2n).
BusForms build_constant_matrices(const ComplexSparse& y, int i);

enum class FormKind { active, reactive, magnitude };

struct FormRef {
  int bus;
  FormKind kind;
};

struct ConstantMatrices {
  int n = 0;  // modeled buses; x has 2n entries
  int p = 1;  // max row nonzeros of the modeled y
  SlackMode mode = SlackMode::embedded;
  std::vector<BusForms> forms;
  /// For each x coordinate, every form whose value depends on it.
  std::vector<std::vector<FormRef>> touching;

  [[nodiscard]] const SparseSymmetric& matrix(FormRef f) const;
  [[nodiscard]] const SparseVector* linear(FormRef f) const;
  /// x^T A x + omega^T x for the referenced form.
  [[nodiscard]] double value(FormRef f, std::span<const double> x) const;
};

/// Constant matrices for the modeled buses of `model` under `mode`.
/// `modeled_buses` lists model bus indices in modeled order.
ConstantMatrices build_all_constant_matrices(const NetworkModel& model, SlackMode mode,
                                             std::span<const int> modeled_buses);

}  // namespace tvopf

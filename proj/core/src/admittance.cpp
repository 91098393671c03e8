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

#include "tvopf/admittance.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tvopf/error.hpp"

namespace tvopf {

Complex ComplexSparse::at(int r, int c) const {
  for (const auto& [col, v] : rows.at(static_cast<size_t>(r)))
    if (col == c) return v;
  return {};
}

void ComplexSparse::add(int r, int c, Complex v) {
  auto& row = rows.at(static_cast<size_t>(r));
  for (auto& [col, val] : row)
    if (col == c) {
      val += v;
      return;
    }
  row.emplace_back(c, v);
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

int ComplexSparse::max_row_nonzeros() const {
  size_t best = 0;
  for (const auto& row : rows) {
    size_t nz = 0;
    for (const auto& [c, v] : row) nz += (v != Complex{});
    best = std::max(best, nz);
  }
  return static_cast<int>(best);
}

ComplexSparse build_admittance(const NetworkModel& model) {
  ComplexSparse y(model.bus_count());
  for (const Line& l : model.lines) {
    const Complex series = 1.0 / Complex(l.r, l.x);
    const Complex half_shunt(0.0, l.b_shunt / 2.0);
    y.add(l.from, l.from, series + half_shunt);
    y.add(l.to, l.to, series + half_shunt);
    y.add(l.from, l.to, -series);
    y.add(l.to, l.from, -series);
  }
  return y;
}

FoldedAdmittance fold_slack(const ComplexSparse& full, int slack_bus) {
  if (slack_bus < 0 || slack_bus >= full.dim) throw ValidationError("slack bus out of range");
  auto reduced_index = [slack_bus](int i) { return i < slack_bus ? i : i - 1; };
  FoldedAdmittance out{ComplexSparse(full.dim - 1), {}};
  out.coupling.assign(static_cast<size_t>(full.dim - 1), Complex{});
  for (int r = 0; r < full.dim; ++r) {
    if (r == slack_bus) continue;
    for (const auto& [c, v] : full.rows[r]) {
      if (c == slack_bus)
        out.coupling[reduced_index(r)] = v;
      else
        out.reduced.add(reduced_index(r), reduced_index(c), v);
    }
  }
  return out;
}

SparseSymmetric::SparseSymmetric(int dim, std::vector<std::tuple<int, int, double>> triplets)
    : dim_(dim) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& [r, c, v] : triplets) {
    if (r < 0 || r >= dim || c < 0 || c >= dim) throw std::out_of_range("sparse entry out of range");
    acc[{r, c}] += v;
  }
  row_ptr_.assign(static_cast<size_t>(dim) + 1, 0);
  for (const auto& [rc, v] : acc) {
    if (v == 0.0) continue;
    ++row_ptr_[rc.first + 1];
    cols_.push_back(rc.second);
    values_.push_back(v);
  }
  for (int r = 0; r < dim; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

double SparseSymmetric::at(int r, int c) const {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (cols_[k] == c) return values_[k];
  return 0.0;
}

double SparseSymmetric::row_dot(int j, std::span<const double> x) const {
  double s = 0.0;
  for (int k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k) s += values_[k] * x[cols_[k]];
  return s;
}

double quad_form_trace(const SparseSymmetric& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.dim())
    throw std::invalid_argument("quad_form_trace: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(a.dim()) + ")");
  double s = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    if (!a.row_empty(r)) s += x[r] * a.row_dot(r, x);
  return s;
}

double dot(const SparseVector& w, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [k, v] : w) s += v * x[k];
  return s;
}

BusForms build_constant_matrices(const ComplexSparse& y, int i) {
  const int n = y.dim;
  if (i < 0 || i >= n)
    throw std::out_of_range("bus index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(n) + ")");

  std::vector<std::tuple<int, int, double>> m, yp, yq;
  m.emplace_back(i, i, 1.0);
  m.emplace_back(n + i, n + i, 1.0);

  // Row i of y is the only nonzero row of y_i; y_i^T holds it as column i.
  for (const auto& [c, v] : y.rows[i]) {
    const double g = v.real();
    const double b = v.imag();
    // Y_i = 1/2 [[Re(y_i + y_i^T), Im(y_i^T - y_i)], [Im(y_i - y_i^T), Re(y_i + y_i^T)]]
    for (int off : {0, n}) {
      yp.emplace_back(off + i, off + c, 0.5 * g);
      yp.emplace_back(off + c, off + i, 0.5 * g);
    }
    yp.emplace_back(c, n + i, 0.5 * b);
    yp.emplace_back(i, n + c, -0.5 * b);
    yp.emplace_back(n + i, c, 0.5 * b);
    yp.emplace_back(n + c, i, -0.5 * b);
    // Ybar_i = -1/2 [[Im(y_i + y_i^T), Re(y_i - y_i^T)], [Re(y_i^T - y_i), Im(y_i + y_i^T)]]
    for (int off : {0, n}) {
      yq.emplace_back(off + i, off + c, -0.5 * b);
      yq.emplace_back(off + c, off + i, -0.5 * b);
    }
    yq.emplace_back(i, n + c, -0.5 * g);
    yq.emplace_back(c, n + i, 0.5 * g);
    yq.emplace_back(n + c, i, -0.5 * g);
    yq.emplace_back(n + i, c, 0.5 * g);
  }
  return BusForms{SparseSymmetric(2 * n, std::move(m)), SparseSymmetric(2 * n, std::move(yp)),
                  SparseSymmetric(2 * n, std::move(yq)), {}, {}};
}

const SparseSymmetric& ConstantMatrices::matrix(FormRef f) const {
  const BusForms& bf = forms[f.bus];
  switch (f.kind) {
    case FormKind::active:
      return bf.active;
    case FormKind::reactive:
      return bf.reactive;
    case FormKind::magnitude:
      break;
  }
  return bf.magnitude;
}

const SparseVector* ConstantMatrices::linear(FormRef f) const {
  const BusForms& bf = forms[f.bus];
  switch (f.kind) {
    case FormKind::active:
      return &bf.active_linear;
    case FormKind::reactive:
      return &bf.reactive_linear;
    case FormKind::magnitude:
      break;
  }
  return nullptr;
}

double ConstantMatrices::value(FormRef f, std::span<const double> x) const {
  double v = quad_form_trace(matrix(f), x);
  if (const SparseVector* w = linear(f)) v += dot(*w, x);
  return v;
}

ConstantMatrices build_all_constant_matrices(const NetworkModel& model, SlackMode mode,
                                             std::span<const int> modeled_buses) {
  const ComplexSparse full = build_admittance(model);
  ConstantMatrices out;
  out.mode = mode;
  out.n = static_cast<int>(modeled_buses.size());

  ComplexSparse y = full;
  std::vector<Complex> coupling;
  if (mode == SlackMode::folded) {
    FoldedAdmittance folded = fold_slack(full, model.slack.bus);
    y = std::move(folded.reduced);
    coupling = std::move(folded.coupling);
  }
  if (y.dim != out.n) throw std::logic_error("modeled bus list does not match admittance size");
  out.p = std::max(1, y.max_row_nonzeros());

  const Complex v0 = std::polar(model.slack.rho0, model.slack.theta0);
  const int n = out.n;
  for (int i = 0; i < n; ++i) {
    BusForms bf = build_constant_matrices(y, i);
    if (mode == SlackMode::folded && coupling[i] != Complex{}) {
      // Re/Im of V_i conj(y_{i0} V_0), linear in x.
      const Complex w = std::conj(coupling[i] * v0);
      bf.active_linear = {{i, w.real()}, {n + i, -w.imag()}};
      bf.reactive_linear = {{i, w.imag()}, {n + i, w.real()}};
    }
    out.forms.push_back(std::move(bf));
  }

  out.touching.assign(static_cast<size_t>(2 * n), {});
  for (int i = 0; i < n; ++i) {
    for (FormKind kind : {FormKind::active, FormKind::reactive, FormKind::magnitude}) {
      const FormRef ref{i, kind};
      std::vector<char> hit(static_cast<size_t>(2 * n), 0);
      const SparseSymmetric& a = out.matrix(ref);
      for (int r = 0; r < 2 * n; ++r) hit[r] = !a.row_empty(r);
      if (const SparseVector* w = out.linear(ref))
        for (const auto& [k, v] : *w) hit[k] = 1;
      for (int r = 0; r < 2 * n; ++r)
        if (hit[r]) out.touching[r].push_back(ref);
    }
  }
  return out;
}

}  // namespace tvopf

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

#include "tvopf/lifted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tvopf/error.hpp"

namespace tvopf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -lambda r + mu/2 r^2 for a residual polynomial r.
Poly4 multiplier_pair(const Poly4& r, double lambda, double mu) {
  return r * (-lambda) + (r * r) * (0.5 * mu);
}

double multiplier_pair(double r, double lambda, double mu) { return -lambda * r + 0.5 * mu * r * r; }

struct BusValues {
  double active, reactive, magnitude;
};

BusValues bus_values(const Formulation& f, std::span<const double> x, int i) {
  const ConstantMatrices& cm = f.matrices;
  return {cm.value({i, FormKind::active}, x), cm.value({i, FormKind::reactive}, x),
          cm.value({i, FormKind::magnitude}, x)};
}

double linear_coefficient(const SparseVector* w, int j) {
  if (w == nullptr) return 0.0;
  for (const auto& [k, v] : *w)
    if (k == j) return v;
  return 0.0;
}

}  // namespace

StateLayout::StateLayout(int n, int ng) : n_(n), ng_(ng) {
  if (n < 1 || ng < 0 || ng > n)
    throw std::invalid_argument("state layout needs N >= 1 and 0 <= N_G <= N");
}

int StateLayout::offset(Block b) const {
  switch (b) {
    case Block::x:
      return 0;
    case Block::t:
      return 2 * n_;
    case Block::g:
      return 3 * n_;
    case Block::h:
      return 4 * n_;
    case Block::z:
      return 5 * n_;
    case Block::lambda_t:
      return 5 * n_ + ng_;
    case Block::lambda_g:
      return 6 * n_ + ng_;
    case Block::lambda_h:
      return 7 * n_ + ng_;
    case Block::lambda_z:
      return 8 * n_ + ng_;
  }
  return 0;
}

int StateLayout::length(Block b) const {
  switch (b) {
    case Block::x:
      return 2 * n_;
    case Block::z:
    case Block::lambda_z:
      return ng_;
    default:
      return n_;
  }
}

Coordinate StateLayout::locate(int i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("lifted coordinate out of range");
  for (Block b : {Block::lambda_z, Block::lambda_h, Block::lambda_g, Block::lambda_t, Block::z,
                  Block::h, Block::g, Block::t, Block::x}) {
    if (i >= offset(b) && length(b) > 0) return {b, i - offset(b)};
  }
  return {Block::x, i};
}

LiftedComponents unpack(const StateLayout& layout, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != layout.size()) throw std::invalid_argument("unpack: size mismatch");
  auto take = [&](Block b) {
    auto s = xi.subspan(static_cast<size_t>(layout.offset(b)), static_cast<size_t>(layout.length(b)));
    return std::vector<double>(s.begin(), s.end());
  };
  return {take(Block::x),        take(Block::t),        take(Block::g),
          take(Block::h),        take(Block::z),        take(Block::lambda_t),
          take(Block::lambda_g), take(Block::lambda_h), take(Block::lambda_z)};
}

std::vector<double> pack(const StateLayout& layout, const LiftedComponents& parts) {
  std::vector<double> xi;
  xi.reserve(static_cast<size_t>(layout.size()));
  auto put = [&](Block b, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != layout.length(b)) throw std::invalid_argument("pack: block size mismatch");
    xi.insert(xi.end(), v.begin(), v.end());
  };
  put(Block::x, parts.x);
  put(Block::t, parts.t);
  put(Block::g, parts.g);
  put(Block::h, parts.h);
  put(Block::z, parts.z);
  put(Block::lambda_t, parts.lambda_t);
  put(Block::lambda_g, parts.lambda_g);
  put(Block::lambda_h, parts.lambda_h);
  put(Block::lambda_z, parts.lambda_z);
  return xi;
}

std::vector<int> Formulation::frozen() const {
  if (slack_position < 0) return {};
  return {slack_position, n() + slack_position};
}

bool Formulation::is_frozen(int i) const {
  return slack_position >= 0 && (i == slack_position || i == n() + slack_position);
}

std::shared_ptr<const Formulation> make_formulation(NetworkModel model, SlackMode mode) {
  auto violations = validate_network(model);
  if (!violations.empty()) throw ValidationError("invalid network: " + violations.front());

  auto f = std::make_shared<Formulation>();
  f->mode = mode;
  for (int b = 0; b < model.bus_count(); ++b) {
    if (mode == SlackMode::folded && b == model.slack.bus) continue;
    if (b == model.slack.bus) f->slack_position = static_cast<int>(f->bus_of.size());
    f->bus_of.push_back(b);
  }
  if (f->bus_of.empty()) throw ValidationError("folded mode needs at least one non-slack bus");
  const int n = static_cast<int>(f->bus_of.size());
  f->gen_of.assign(static_cast<size_t>(n), -1);
  for (int g = 0; g < model.generator_count(); ++g) {
    const int bus = model.generators[g].bus;
    auto it = std::find(f->bus_of.begin(), f->bus_of.end(), bus);
    if (it == f->bus_of.end()) continue;
    const int local = static_cast<int>(it - f->bus_of.begin());
    f->gen_of[local] = static_cast<int>(f->gen_bus.size());
    f->gen_bus.push_back(local);
    f->gen_model.push_back(g);
  }
  f->layout = StateLayout(n, static_cast<int>(f->gen_bus.size()));
  f->matrices = build_all_constant_matrices(model, mode, f->bus_of);
  f->model = std::move(model);
  return f;
}

ProblemInstance make_instance(std::shared_ptr<const Formulation> f, std::span<const double> pl,
                              std::span<const double> ql, std::span<const double> pav,
                              double timestamp) {
  const NetworkModel& m = f->model;
  if (static_cast<int>(pl.size()) != m.bus_count() || static_cast<int>(ql.size()) != m.bus_count() ||
      static_cast<int>(pav.size()) != m.generator_count())
    throw ValidationError("instance data does not match the network dimensions");
  ProblemInstance inst;
  for (int b : f->bus_of) {
    if (!std::isfinite(pl[b]) || !std::isfinite(ql[b])) throw ValidationError("loads must be finite");
    inst.pl.push_back(pl[b]);
    inst.ql.push_back(ql[b]);
  }
  for (int g : f->gen_model) {
    if (!(pav[g] >= 0.0)) throw ValidationError("available power P_av must be non-negative");
    inst.pav.push_back(pav[g]);
  }
  inst.timestamp = timestamp;
  inst.formulation = std::move(f);
  return inst;
}

ProblemInstance static_instance(std::shared_ptr<const Formulation> f) {
  std::vector<double> pl, ql, pav;
  for (const Bus& b : f->model.buses) {
    pl.push_back(b.pd);
    ql.push_back(b.qd);
  }
  for (const Generator& g : f->model.generators) pav.push_back(g.p_av_max);
  return make_instance(std::move(f), pl, ql, pav);
}

bool BoxSet::contains(std::span<const double> xi) const {
  for (size_t i = 0; i < xi.size(); ++i)
    if (xi[i] < lo[i] || xi[i] > hi[i]) return false;
  return true;
}

BoxSet make_box(const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  const StateLayout& L = f.layout;
  const int n = f.n();
  BoxSet box{std::vector<double>(static_cast<size_t>(L.size()), -kInf),
             std::vector<double>(static_cast<size_t>(L.size()), kInf)};
  auto pin = [&](int i, double v) { box.lo[i] = box.hi[i] = v; };

  if (f.slack_position >= 0) {
    const double re = f.model.slack.rho0 * std::cos(f.model.slack.theta0);
    const double im = f.model.slack.rho0 * std::sin(f.model.slack.theta0);
    pin(L.index(Block::x, f.slack_position), re);
    pin(L.index(Block::x, n + f.slack_position), im);
  }
  for (int i = 0; i < n; ++i) {
    const int gk = f.gen_of[i];
    const int ti = L.index(Block::t, i);
    const int gi = L.index(Block::g, i);
    if (gk < 0) {
      pin(ti, -inst.pl[i]);
      pin(gi, -inst.ql[i]);
    } else {
      const Generator& gen = f.model.generators[f.gen_model[gk]];
      box.lo[ti] = -inst.pl[i];
      box.hi[ti] = std::min(inst.pav[gk], gen.s_rating) - inst.pl[i];
    }
    const Bus& bus = f.model.buses[f.bus_of[i]];
    const int hi = L.index(Block::h, i);
    if (bus.regulated) {
      box.lo[hi] = bus.vmin * bus.vmin;
      box.hi[hi] = bus.vmax * bus.vmax;
    } else {
      box.lo[hi] = 0.0;
    }
  }
  for (int k = 0; k < f.ng(); ++k) {
    const double s = f.model.generators[f.gen_model[k]].s_rating;
    box.hi[L.index(Block::z, k)] = s * s;
  }
  return box;
}

void project_box(std::span<double> xi, const BoxSet& box) {
  for (size_t i = 0; i < xi.size(); ++i) xi[i] = std::clamp(xi[i], box.lo[i], box.hi[i]);
}

std::vector<double> projected(std::vector<double> xi, const BoxSet& box) {
  project_box(xi, box);
  return xi;
}

std::vector<double> initial_state(const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  const StateLayout& L = f.layout;
  const int n = f.n();
  std::vector<double> xi(static_cast<size_t>(L.size()), 0.0);
  for (int i = 0; i < n; ++i) xi[i] = 1.0;
  const BoxSet box = make_box(inst);
  project_box(xi, box);  // places the frozen slack entries
  std::span<const double> x(xi.data(), static_cast<size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const BusValues v = bus_values(f, x, i);
    xi[L.index(Block::t, i)] = v.active;
    xi[L.index(Block::g, i)] = v.reactive;
    xi[L.index(Block::h, i)] = v.magnitude;
  }
  project_box(xi, box);
  for (int k = 0; k < f.ng(); ++k) {
    const int i = f.gen_bus[k];
    const double tp = xi[L.index(Block::t, i)] + inst.pl[i];
    const double gq = xi[L.index(Block::g, i)] + inst.ql[i];
    xi[L.index(Block::z, k)] = tp * tp + gq * gq;
  }
  project_box(xi, box);
  return xi;
}

double eval_lagrangian(std::span<const double> xi, double mu, const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  const StateLayout& L = f.layout;
  const int n = f.n();
  if (static_cast<int>(xi.size()) != L.size()) throw std::invalid_argument("eval_lagrangian: size mismatch");
  std::span<const double> x = xi.first(static_cast<size_t>(2 * n));

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const BusValues v = bus_values(f, x, i);
    const int gk = f.gen_of[i];
    if (gk >= 0) {
      const Generator& gen = f.model.generators[f.gen_model[gk]];
      const double p = inst.pl[i] + v.active;
      const double q = inst.ql[i] + v.reactive;
      total += gen.c * p * p + gen.d * q * q;
    }
    total += multiplier_pair(v.active - xi[L.index(Block::t, i)], xi[L.index(Block::lambda_t, i)], mu);
    total += multiplier_pair(v.reactive - xi[L.index(Block::g, i)], xi[L.index(Block::lambda_g, i)], mu);
    total += multiplier_pair(v.magnitude - xi[L.index(Block::h, i)], xi[L.index(Block::lambda_h, i)], mu);
  }
  for (int k = 0; k < f.ng(); ++k) {
    const int i = f.gen_bus[k];
    const double tp = xi[L.index(Block::t, i)] + inst.pl[i];
    const double gq = xi[L.index(Block::g, i)] + inst.ql[i];
    total += multiplier_pair(tp * tp + gq * gq - xi[L.index(Block::z, k)], xi[L.index(Block::lambda_z, k)], mu);
  }
  if (!std::isfinite(total)) throw NumericError("augmented Lagrangian is not finite (overflow)");
  return total;
}

Poly4 coord_restriction(std::span<const double> xi, double mu, const ProblemInstance& inst, int i) {
  const Formulation& f = inst.f();
  const StateLayout& L = f.layout;
  const ConstantMatrices& cm = f.matrices;
  const int n = f.n();
  std::span<const double> x = xi.first(static_cast<size_t>(2 * n));
  const Coordinate at = L.locate(i);
  const int k = at.local;

  // Generator power-circle residual as a polynomial in a step on t (or g).
  auto circle = [&](int gk, bool on_t) {
    const int bus = f.gen_bus[gk];
    const double tp = xi[L.index(Block::t, bus)] + inst.pl[bus];
    const double gq = xi[L.index(Block::g, bus)] + inst.ql[bus];
    const double moving = on_t ? tp : gq;
    const double s0 = tp * tp + gq * gq - xi[L.index(Block::z, gk)];
    return Poly4::quadratic(s0, 2.0 * moving, 1.0);
  };

  Poly4 out;
  switch (at.block) {
    case Block::x: {
      for (const FormRef ref : cm.touching[k]) {
        const SparseSymmetric& a = cm.matrix(ref);
        const double q = cm.value(ref, x);
        const double slope = 2.0 * a.row_dot(k, x) + linear_coefficient(cm.linear(ref), k);
        const Poly4 u = Poly4::quadratic(q, slope, a.diagonal(k));
        const int bus = ref.bus;
        const int gk = f.gen_of[bus];
        switch (ref.kind) {
          case FormKind::active: {
            if (gk >= 0) {
              const Poly4 p = u + Poly4::constant(inst.pl[bus]);
              out += (p * p) * f.model.generators[f.gen_model[gk]].c;
            }
            out += multiplier_pair(u - Poly4::constant(xi[L.index(Block::t, bus)]),
                                   xi[L.index(Block::lambda_t, bus)], mu);
            break;
          }
          case FormKind::reactive: {
            if (gk >= 0) {
              const Poly4 q2 = u + Poly4::constant(inst.ql[bus]);
              out += (q2 * q2) * f.model.generators[f.gen_model[gk]].d;
            }
            out += multiplier_pair(u - Poly4::constant(xi[L.index(Block::g, bus)]),
                                   xi[L.index(Block::lambda_g, bus)], mu);
            break;
          }
          case FormKind::magnitude:
            out += multiplier_pair(u - Poly4::constant(xi[L.index(Block::h, bus)]),
                                   xi[L.index(Block::lambda_h, bus)], mu);
            break;
        }
      }
      break;
    }
    case Block::t:
    case Block::g: {
      const bool on_t = at.block == Block::t;
      const double form = cm.value({k, on_t ? FormKind::active : FormKind::reactive}, x);
      const double current = xi[i];
      const double lambda = xi[L.index(on_t ? Block::lambda_t : Block::lambda_g, k)];
      out += multiplier_pair(Poly4::quadratic(form - current, -1.0, 0.0), lambda, mu);
      const int gk = f.gen_of[k];
      if (gk >= 0) out += multiplier_pair(circle(gk, on_t), xi[L.index(Block::lambda_z, gk)], mu);
      break;
    }
    case Block::h: {
      const double m = cm.value({k, FormKind::magnitude}, x);
      out += multiplier_pair(Poly4::quadratic(m - xi[i], -1.0, 0.0), xi[L.index(Block::lambda_h, k)], mu);
      break;
    }
    case Block::z: {
      const int bus = f.gen_bus[k];
      const double tp = xi[L.index(Block::t, bus)] + inst.pl[bus];
      const double gq = xi[L.index(Block::g, bus)] + inst.ql[bus];
      out += multiplier_pair(Poly4::quadratic(tp * tp + gq * gq - xi[i], -1.0, 0.0),
                             xi[L.index(Block::lambda_z, k)], mu);
      break;
    }
    case Block::lambda_t:
      out.c[1] = -(cm.value({k, FormKind::active}, x) - xi[L.index(Block::t, k)]);
      break;
    case Block::lambda_g:
      out.c[1] = -(cm.value({k, FormKind::reactive}, x) - xi[L.index(Block::g, k)]);
      break;
    case Block::lambda_h:
      out.c[1] = -(cm.value({k, FormKind::magnitude}, x) - xi[L.index(Block::h, k)]);
      break;
    case Block::lambda_z: {
      const int bus = f.gen_bus[k];
      const double tp = xi[L.index(Block::t, bus)] + inst.pl[bus];
      const double gq = xi[L.index(Block::g, bus)] + inst.ql[bus];
      out.c[1] = -(tp * tp + gq * gq - xi[L.index(Block::z, k)]);
      break;
    }
  }
  out.c[0] = 0.0;
  return out;
}

double coord_gradient(std::span<const double> xi, double mu, const ProblemInstance& inst, int i) {
  return coord_restriction(xi, mu, inst, i).c[1];
}

double coord_curvature(std::span<const double> xi, double mu, const ProblemInstance& inst, int i) {
  return 2.0 * coord_restriction(xi, mu, inst, i).c[2];
}

Residuals residuals(std::span<const double> xi, const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  const StateLayout& L = f.layout;
  const int n = f.n();
  std::span<const double> x = xi.first(static_cast<size_t>(2 * n));
  Residuals r;
  for (int i = 0; i < n; ++i) {
    const BusValues v = bus_values(f, x, i);
    r.t.push_back(v.active - xi[L.index(Block::t, i)]);
    r.g.push_back(v.reactive - xi[L.index(Block::g, i)]);
    r.h.push_back(v.magnitude - xi[L.index(Block::h, i)]);
  }
  for (int k = 0; k < f.ng(); ++k) {
    const int i = f.gen_bus[k];
    const double tp = xi[L.index(Block::t, i)] + inst.pl[i];
    const double gq = xi[L.index(Block::g, i)] + inst.ql[i];
    r.z.push_back(tp * tp + gq * gq - xi[L.index(Block::z, k)]);
  }
  return r;
}

Metrics eval_metrics(std::span<const double> xi, const ProblemInstance& inst) {
  const Formulation& f = inst.f();
  const int n = f.n();
  std::span<const double> x = xi.first(static_cast<size_t>(2 * n));
  const Residuals r = residuals(xi, inst);

  Metrics m;
  for (int k = 0; k < f.ng(); ++k) {
    const int i = f.gen_bus[k];
    const Generator& gen = f.model.generators[f.gen_model[k]];
    const BusValues v = bus_values(f, x, i);
    const double p = inst.pl[i] + v.active;
    const double q = inst.ql[i] + v.reactive;
    m.cost += gen.c * p * p + gen.d * q * q;
  }
  // T' first, then T = T' + the non-generator balance terms, so T' <= T
  // holds exactly in floating point.
  double lower = 0.0;
  double non_generator = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tg = r.t[i] * r.t[i] + r.g[i] * r.g[i];
    lower += r.h[i] * r.h[i];
    if (f.gen_of[i] < 0)
      non_generator += tg;
    else
      lower += tg;
  }
  for (double v : r.z) lower += v * v;
  m.infeasibility_lower = lower;
  m.infeasibility = lower + non_generator;
  for (int i = 0; i < n; ++i) m.vmag.push_back(std::hypot(x[i], x[n + i]));
  return m;
}

}  // namespace tvopf

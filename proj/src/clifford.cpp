// Copyright 2026 The pulsekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "pulsekit/bench.hpp"
#include "pulsekit/errors.hpp"

namespace pulsekit {

namespace {

/// Phase-normalized fingerprint: rotate the first nonzero entry to the
/// positive real axis, then round. Collapses global phase.
std::string phase_invariant_key(const CMatrix& u) {
  complexd anchor(1.0, 0.0);
  bool found = false;
  for (Eigen::Index i = 0; i < u.rows() && !found; ++i) {
    for (Eigen::Index j = 0; j < u.cols() && !found; ++j) {
      if (std::abs(u(i, j)) > 1e-8) {
        anchor = u(i, j) / std::abs(u(i, j));
        found = true;
      }
    }
  }
  std::string key;
  key.reserve(static_cast<std::size_t>(u.size()) * 24);
  char buf[40];
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const complexd v = u(i, j) / anchor;
      // Round before formatting so values straddling zero share a key.
      const double re = std::round(v.real() * 1e6) / 1e6 + 0.0;
      const double im = std::round(v.imag() * 1e6) / 1e6 + 0.0;
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f;", re, im);
      key += buf;
    }
  }
  return key;
}

std::vector<CMatrix> enumerate_single_qubit_group() {
  CMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  CMatrix sg(2, 2);
  sg << 1, 0, 0, complexd(0, 1);

  std::vector<CMatrix> elements;
  std::map<std::string, int> seen;
  std::vector<CMatrix> frontier{identity(2)};
  seen[phase_invariant_key(frontier[0])] = 0;
  elements.push_back(frontier[0]);

  // Breadth-first closure over the {H, S} generators, deduplicating up to
  // global phase. Terminates at the full 24-element group.
  while (!frontier.empty()) {
    std::vector<CMatrix> next;
    for (const CMatrix& g : frontier) {
      for (const CMatrix* gen : {&h, &sg}) {
        CMatrix candidate = (*gen) * g;
        const std::string key = phase_invariant_key(candidate);
        if (seen.emplace(key, static_cast<int>(elements.size())).second) {
          elements.push_back(candidate);
          next.push_back(candidate);
        }
      }
    }
    frontier = std::move(next);
  }
  return elements;
}

/// 120-degree rotation about (1,1,1)/sqrt(3); cyclically permutes the Pauli
/// axes. Together with its square it indexes the axis-permutation cosets of
/// the two-qubit entangling classes.
CMatrix axis_cycle() {
  const complexd mi(0.0, -1.0);
  CMatrix v(2, 2);
  v = 0.5 * (identity(2) + mi * (sigma_x() + sigma_y() + sigma_z()));
  return v;
}

CMatrix cx_gate() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(2, 3) = 1;
  u(3, 2) = 1;
  return u;
}

CMatrix iswap_gate() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1;
  u(3, 3) = 1;
  u(1, 2) = complexd(0, 1);
  u(2, 1) = complexd(0, 1);
  return u;
}

CMatrix swap_gate() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 2) = 1;
  u(2, 1) = 1;
  u(3, 3) = 1;
  return u;
}

}  // namespace

const std::vector<CMatrix>& single_qubit_cliffords() {
  static const std::vector<CMatrix> group = enumerate_single_qubit_group();
  return group;
}

Clifford sample_clifford(int n_qubits, std::mt19937_64& rng) {
  const auto& c1 = single_qubit_cliffords();
  const long n1 = static_cast<long>(c1.size());

  if (n_qubits == 1) {
    std::uniform_int_distribution<long> pick(0, n1 - 1);
    const long idx = pick(rng);
    return {c1[idx], idx};
  }
  if (n_qubits != 2) {
    throw ValidationError("sample_clifford supports 1 or 2 qubits");
  }

  static const CMatrix v = axis_cycle();
  static const std::vector<CMatrix> axis{identity(2), v, v * v};
  static const CMatrix cx = cx_gate();
  static const CMatrix iswap = iswap_gate();
  static const CMatrix swap = swap_gate();

  // Class sizes 576, 5184, 5184, 576 (total 11520); uniform group sampling
  // follows from uniform within-class parameters.
  std::uniform_int_distribution<long> pick(0, 11519);
  const long raw = pick(rng);
  std::uniform_int_distribution<long> pick1(0, n1 - 1);
  std::uniform_int_distribution<long> pick3(0, 2);
  const long a = pick1(rng);
  const long b = pick1(rng);
  const CMatrix locals = kron(c1[a], c1[b]);

  if (raw < 576) {
    return {locals, a * n1 + b};
  }
  if (raw < 576 + 5184) {
    const long c = pick3(rng);
    const long d = pick3(rng);
    const long idx = 576 + ((a * n1 + b) * 3 + c) * 3 + d;
    return {locals * cx * kron(axis[c], axis[d]), idx};
  }
  if (raw < 576 + 2 * 5184) {
    const long c = pick3(rng);
    const long d = pick3(rng);
    const long idx = 5760 + ((a * n1 + b) * 3 + c) * 3 + d;
    return {locals * iswap * kron(axis[c], axis[d]), idx};
  }
  return {locals * swap, 10944 + a * n1 + b};
}

}  // namespace pulsekit

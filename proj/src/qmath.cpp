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

#include "pulsekit/qmath.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "pulsekit/errors.hpp"

namespace pulsekit {

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0, complexd(0, -1), complexd(0, 1), 0;
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix lowering(Eigen::Index levels) {
  CMatrix a = CMatrix::Zero(levels, levels);
  for (Eigen::Index n = 1; n < levels; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

EigHermitian eig_hermitian(const CMatrix& h) {
  if (!is_hermitian(h)) {
    throw NonHermitianError("matrix deviates from h = h^dagger by more than " +
                            std::to_string(kHermTol));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NoConvergenceError("Hermitian eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm_hermitian_scaled(const CMatrix& h, complexd scale) {
  const EigHermitian eig = eig_hermitian(h);
  CVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases[i] = std::exp(scale * eig.values[i]);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

CMatrix expm_general(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("matrix exponential requires a square matrix");
  }
  return m.exp();
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw DimensionMismatchError("vector length does not match matrix shape");
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace pulsekit

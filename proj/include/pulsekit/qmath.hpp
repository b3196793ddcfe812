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

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pulsekit {

using complexd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Entrywise Hermiticity tolerance used throughout; inputs here are
/// constructed operators, not measured data.
inline constexpr double kHermTol = 1e-10;

CMatrix identity(Eigen::Index dim);
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();

/// Bosonic lowering operator truncated to `levels` (a|n> = sqrt(n)|n-1>).
CMatrix lowering(Eigen::Index levels);

/// Kronecker product; dimensions multiply.
CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermTol);

struct EigHermitian {
  RVector values;   // ascending
  CMatrix vectors;  // unitary; column j pairs with values[j]
};

/// Hermitian eigendecomposition, h = V diag(values) V^dagger.
/// Throws NonHermitianError / NoConvergenceError.
EigHermitian eig_hermitian(const CMatrix& h);

/// exp(scale*h) for Hermitian h, via eigendecomposition. For
/// scale = -i*t the result is unitary.
CMatrix expm_hermitian_scaled(const CMatrix& h, complexd scale);

/// General dense matrix exponential (Pade scaling-and-squaring); used for
/// Lindblad superoperators, which are not Hermitian.
CMatrix expm_general(const CMatrix& m);

/// Column-stacking vectorization and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace pulsekit

// Copyright 2026 The otrobust Authors.
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
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "otrobust/controller.hpp"
#include "otrobust/error.hpp"

namespace otrobust {
namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cd = std::complex<double>;

// Swap adjacent diagonal entries k, k+1 of upper triangular T with a unitary
// similarity, updating the Schur vectors U.
void swap_adjacent(MatrixXcd& T, MatrixXcd& U, Eigen::Index k) {
  const cd a = T(k, k), b = T(k, k + 1), c = T(k + 1, k + 1);
  // Eigenvector of the 2x2 block for eigenvalue c.
  cd v1 = b, v2 = c - a;
  const double nv = std::sqrt(std::norm(v1) + std::norm(v2));
  if (nv == 0.0) return;  // equal eigenvalues, nothing to do
  v1 /= nv;
  v2 /= nv;
  Eigen::Matrix2cd G;
  G << v1, -std::conj(v2), v2, std::conj(v1);
  T.middleCols(k, 2) = T.middleCols(k, 2) * G;
  T.middleRows(k, 2) = G.adjoint() * T.middleRows(k, 2);
  U.middleCols(k, 2) = U.middleCols(k, 2) * G;
  T(k + 1, k) = 0.0;
}

// Solve Acl' X + X Acl + W = 0 via the Kronecker form.
MatrixXd lyapunov(const MatrixXd& Acl, const MatrixXd& W) {
  const Eigen::Index n = Acl.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd L = MatrixXd::Zero(n * n, n * n);
  // vec(Acl' X) = (I kron Acl') vec X, vec(X Acl) = (Acl' kron I) vec X
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += I(i, j) * Acl.transpose();
      L.block(i * n, j * n, n, n) += Acl(j, i) * I;
    }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(W.data(), n * n);
  const Eigen::VectorXd x = L.partialPivLu().solve(-w);
  MatrixXd X = Eigen::Map<const MatrixXd>(x.data(), n, n);
  return 0.5 * (X + X.transpose());
}

}  // namespace

double spectral_abscissa(const MatrixXd& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return es.eigenvalues().real().maxCoeff();
}

double care_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                     const MatrixXd& R, const MatrixXd& P) {
  const MatrixXd G = B * R.llt().solve(B.transpose());
  return (A.transpose() * P + P * A - P * G * P + Q).norm();
}

MatrixXd solve_care(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                    const MatrixXd& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols())
    throw InvalidInput("solve_care: dimension mismatch");
  if (!A.allFinite() || !B.allFinite() || !Q.allFinite() || !R.allFinite())
    throw InvalidInput("solve_care: non-finite input");
  Eigen::LLT<MatrixXd> Rllt(R);
  if (Rllt.info() != Eigen::Success) throw InvalidInput("solve_care: R is not positive definite");
  const MatrixXd G = B * Rllt.solve(B.transpose());

  MatrixXd H(2 * n, 2 * n);
  H << A, -G, -Q, -A.transpose();

  Eigen::ComplexSchur<MatrixXd> schur(H);
  if (schur.info() != Eigen::Success) throw SynthesisError("solve_care: Schur decomposition failed");
  MatrixXcd T = schur.matrixT();
  MatrixXcd U = schur.matrixU();

  // Bubble stable eigenvalues to the leading block.
  const Eigen::Index N = 2 * n;
  for (Eigen::Index pass = 0; pass < N; ++pass) {
    bool swapped = false;
    for (Eigen::Index k = 0; k + 1 < N; ++k) {
      if (T(k, k).real() >= 0.0 && T(k + 1, k + 1).real() < 0.0) {
        swap_adjacent(T, U, k);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  for (Eigen::Index k = 0; k < N; ++k) {
    const bool stable = T(k, k).real() < 0.0;
    if (stable != (k < n))
      throw SynthesisError("solve_care: Hamiltonian has eigenvalues on the imaginary axis "
                           "or the stable subspace has the wrong dimension");
  }

  const MatrixXcd U11 = U.topLeftCorner(n, n);
  const MatrixXcd U21 = U.bottomLeftCorner(n, n);
  Eigen::PartialPivLU<MatrixXcd> lu(U11);
  if (!(std::abs(lu.determinant()) > 1e-14))
    throw SynthesisError("solve_care: stable subspace is not a graph (U11 singular)");
  MatrixXd P = (U21 * lu.inverse()).real();
  P = 0.5 * (P + P.transpose());

  // One Newton-Kleinman step, kept only if it helps.
  {
    const MatrixXd K = Rllt.solve(B.transpose() * P);
    const MatrixXd Acl = A - B * K;
    if (spectral_abscissa(Acl) < 0.0) {
      const MatrixXd Pn = lyapunov(Acl, Q + K.transpose() * R * K);
      if (Pn.allFinite() && care_residual(A, B, Q, R, Pn) < care_residual(A, B, Q, R, P))
        P = Pn;
    }
  }

  const double res = care_residual(A, B, Q, R, P);
  const double floor = 1e-12 * (1.0 + A.norm() * P.norm() + P.norm() * G.norm() * P.norm());
  if (!(res <= 1e-8 * Q.norm() + floor))
    throw SynthesisError("solve_care: residual " + std::to_string(res) + " too large");
  const MatrixXd Acl = A - G * P;
  if (!(spectral_abscissa(Acl) < 0.0))
    throw SynthesisError("solve_care: closed loop is not Hurwitz");
  return P;
}

MatrixXd lqr_gain_matrix(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                         const MatrixXd& R) {
  const MatrixXd P = solve_care(A, B, Q, R);
  return -R.llt().solve(B.transpose() * P);
}

}  // namespace otrobust

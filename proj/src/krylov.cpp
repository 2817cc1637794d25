// Copyright 2026 The jchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jchsim/krylov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jchsim/errors.hpp"

namespace jchsim {

namespace {

constexpr double kSafety = 0.9;
constexpr double kAccept = 1.2;

double round_two_digits(double x) {
  const double s = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
  return std::ceil(x / s) * s;
}

CMatrix expm_minus_i(const CMatrix& h, double s) {
  const CMatrix a = cplx(0.0, -s) * h;
  return a.exp();
}

}  // namespace

CVector KrylovSubstep::at(double s) const {
  if (s == tau_) return end_;
  const CMatrix f = expm_minus_i(hess_, s);
  return beta_ * (basis_.leftCols(static_cast<Eigen::Index>(cols_)) *
                  f.col(0).head(static_cast<Eigen::Index>(cols_)));
}

KrylovPropagator::KrylovPropagator(SparseMatrix m, KrylovOptions opts) : m_(std::move(m)), opts_(opts) {
  if (opts_.krylov_dim < 2) throw InvalidArgument("krylov: krylov_dim must be >= 2");
  if (!(opts_.tol > 0.0)) throw InvalidArgument("krylov: tol must be positive");
  const auto& s = m_.storage();
  for (Eigen::Index r = 0; r < s.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::Storage::InnerIterator it(s, r); it; ++it) row += std::abs(it.value());
    anorm_ = std::max(anorm_, row);
  }
}

KrylovSubstep KrylovPropagator::step(const CVector& v, double max_tau, double& hint, KrylovStats* stats) const {
  if (static_cast<std::size_t>(v.size()) != m_.dim()) throw InvalidArgument("krylov: dimension mismatch");
  if (!(max_tau > 0.0)) throw InvalidArgument("krylov: substep length must be positive");
  KrylovSubstep out;
  const double beta = v.norm();
  if (beta == 0.0 || anorm_ == 0.0) {
    out.tau_ = max_tau;
    out.beta_ = 1.0;
    out.cols_ = 1;
    out.basis_ = v;
    out.hess_ = CMatrix::Zero(1, 1);
    out.end_ = v;
    if (stats) ++stats->substeps;
    return out;
  }

  const auto n = static_cast<std::size_t>(v.size());
  const std::size_t m = std::min(opts_.krylov_dim, n);
  const auto mi = static_cast<Eigen::Index>(m);
  CMatrix basis(v.size(), mi + 1);
  CMatrix h = CMatrix::Zero(mi + 2, mi + 2);
  basis.col(0) = v / beta;
  const double btol = 1e-12 * anorm_;
  std::size_t used = m;
  bool breakdown = false;
  CVector p;
  std::size_t matvecs = 0;
  for (Eigen::Index j = 0; j < mi; ++j) {
    m_.multiply(basis.col(j), p);
    ++matvecs;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        const cplx c = basis.col(i).dot(p);
        h(i, j) += c;
        p -= c * basis.col(i);
      }
    }
    const double nrm = p.norm();
    if (nrm < btol) {
      breakdown = true;
      used = static_cast<std::size_t>(j + 1);
      break;
    }
    h(j + 1, j) = nrm;
    basis.col(j + 1) = p / nrm;
  }
  double avnorm = 0.0;
  if (!breakdown) {
    h(mi + 1, mi) = 1.0;
    m_.multiply(basis.col(mi), p);
    ++matvecs;
    avnorm = p.norm();
  }
  if (stats) stats->matvecs += matvecs;

  const double tol = opts_.tol * beta;
  if (breakdown) {
    // the Krylov space is invariant, so any step length is exact
    const auto u = static_cast<Eigen::Index>(used);
    out.tau_ = max_tau;
    out.beta_ = beta;
    out.cols_ = used;
    out.basis_ = basis.leftCols(u);
    out.hess_ = h.topLeftCorner(u, u);
    out.end_ = beta * (out.basis_ * expm_minus_i(out.hess_, max_tau).col(0));
    if (stats) ++stats->substeps;
    return out;
  }

  double tau = hint;
  if (!(tau > 0.0)) {
    const double md = static_cast<double>(m);
    const double fact = std::pow((md + 1.0) / std::numbers::e, md + 1.0) * std::sqrt(2.0 * std::numbers::pi * (md + 1.0));
    tau = round_two_digits((1.0 / anorm_) * std::pow(fact * opts_.tol / (4.0 * anorm_), 1.0 / md));
  }
  tau = std::min(tau, max_tau);

  for (std::size_t reject = 0;; ++reject) {
    const CMatrix f = expm_minus_i(h, tau);
    const double p1 = std::abs(f(mi, 0)) * beta;
    const double p2 = std::abs(f(mi + 1, 0)) * beta * avnorm;
    double err;
    double xm = 1.0 / static_cast<double>(m);
    if (p1 > 10.0 * p2) {
      err = p2;
    } else if (p1 > p2) {
      err = p1 * p2 / (p1 - p2);
    } else {
      err = p1;
      xm = 1.0 / static_cast<double>(std::max<std::size_t>(m - 1, 1));
    }
    if (err <= kAccept * tau * tol) {
      out.tau_ = tau;
      out.beta_ = beta;
      out.cols_ = m + 1;
      out.basis_ = std::move(basis);
      out.hess_ = h;
      out.end_ = beta * (out.basis_ * f.col(0).head(mi + 1));
      hint = err > 0.0 ? round_two_digits(kSafety * tau * std::pow(tau * tol / err, xm)) : 10.0 * tau;
      if (stats) ++stats->substeps;
      return out;
    }
    if (stats) ++stats->rejections;
    if (reject >= opts_.max_rejections) {
      std::ostringstream msg;
      msg << "krylov: too many rejected substeps (tau=" << tau << ", error=" << err << ")";
      throw NumericalError(msg.str());
    }
    tau = round_two_digits(kSafety * tau * std::pow(tau * tol / err, xm));
    if (!(tau > 1e-14 / anorm_)) {
      std::ostringstream msg;
      msg << "krylov: step size underflow (tau=" << tau << ", error=" << err << ")";
      throw NumericalError(msg.str());
    }
  }
}

CVector KrylovPropagator::apply(const CVector& v, double t, KrylovStats* stats) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("krylov: time must be finite and >= 0");
  CVector w = v;
  double now = 0.0;
  double hint = 0.0;
  while (t - now > 1e-15 * t) {
    KrylovSubstep s = step(w, t - now, hint, stats);
    now += s.tau();
    w = s.end();
  }
  return w;
}

}  // namespace jchsim

// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <random>
#include <vector>

#include "rap/core.hpp"
#include "rap/preconditioner.hpp"
#include "rap/spd_matrix.hpp"

namespace rap {

/// Quality measurements for a preconditioner B against the pencil (A, M),
/// taken over the sublevel set {f <= rho_star} near the smallest eigenvector.
/// cos_theta_est is a lower bound of the true supremum (outer maximization is
/// sampled, inner maximization is exact); varrho_est is an upper bound of the
/// true infimum for the same reason.
struct PreconQuality {
  double kappa_nu = 0.0;
  double cos_theta_est = 0.0;
  double varrho_est = 0.0;
  double varsigma_est = 0.0;
  double sigma = 0.0;
  double nu1 = 0.0;
  double nu_min = 0.0;
  double nu_max = 0.0;
  double rho_star = 0.0;
  double epsilon = 0.0;       // sqrt((rho* - l1)/(l2 - l1))
  double epsilon_star = 0.0;  // l2 cos(theta)/(l2 - l1) + epsilon
  int sample_count = 0;
};

/// Sublevel-set sampling plan: geodesic perturbations of the eigenvector with
/// `radii` radius steps and `directions` random directions per radius,
/// rejecting samples outside {f <= rho_star}.
struct SamplingPlan {
  int radii = 16;
  int directions = 64;
  double max_radius = 1.0;
  unsigned seed = 42;
};

/// kappa_nu = nu_max/nu_min of the pencil (A, B), estimated from the actions.
inline double kappa_nu(const SpdMatrix& a, const PreconditionerHandle& pc, int iters) {
  if (pc.dim() != a.rows()) throw UsageError("kappa_nu: dimension mismatch");
  const auto ext = extremal_pencil_eigs([&a](const DenseVector& v) { return a * v; },
                                        [&pc](const DenseVector& r) { return pc.apply(r); },
                                        a.rows(), iters);
  return ext.nu_max / ext.nu_min;
}

/// Dense B^{-1} assembled by applying the handle to unit vectors. Diagnostic
/// use only; refuses dimensions beyond 2000.
inline Eigen::MatrixXd assemble_inverse_operator(const PreconditionerHandle& pc) {
  const Index n = pc.dim();
  if (n > 2000) throw UsageError("assemble_inverse_operator: dimension too large");
  Eigen::MatrixXd binv(n, n);
  DenseVector e = DenseVector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    binv.col(j) = pc.apply(e);
    e[j] = 0.0;
  }
  return 0.5 * (binv + binv.transpose());
}

/// Explicit sparse B recovered from the inverse action.
inline SpdMatrix assembled_preconditioner_matrix(const PreconditionerHandle& pc) {
  const Eigen::MatrixXd binv = assemble_inverse_operator(pc);
  Eigen::LLT<Eigen::MatrixXd> llt(binv);
  if (llt.info() != Eigen::Success)
    throw MatrixError("assembled_preconditioner_matrix: inverse action not SPD");
  Eigen::MatrixXd b = llt.solve(Eigen::MatrixXd::Identity(binv.rows(), binv.cols()));
  b = 0.5 * (b + b.transpose()).eval();
  return SpdMatrix::from_dense(b);
}

namespace detail {

struct SymmetricSqrt {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

inline SymmetricSqrt symmetric_sqrt(const Eigen::MatrixXd& a, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0)
    throw MatrixError(std::string(who) + ": matrix is not positive definite");
  const Eigen::VectorXd d = es.eigenvalues();
  const Eigen::MatrixXd& u = es.eigenvectors();
  SymmetricSqrt out;
  out.sqrt = u * d.cwiseSqrt().asDiagonal() * u.transpose();
  out.inv_sqrt = u * d.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  return out;
}

inline double leading_cos_prepared(const SymmetricSqrt& a_ops, const Eigen::MatrixXd& b,
                                   const DenseVector& x) {
  if (x.squaredNorm() == 0.0) throw DomainError("per_point_leading_cos: zero vector");
  DenseVector ahat = a_ops.sqrt * x;
  DenseVector bhat = a_ops.inv_sqrt * (b * x);
  ahat /= ahat.norm();
  bhat /= bhat.norm();
  const double c = ahat.dot(bhat);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

/// Points of {f <= rho_star} around u1, drawn by the fixed-seed radius sweep.
/// u1 itself is always included.
inline std::vector<DenseVector> sublevel_samples(const MatrixPencil& p, const DenseVector& u1,
                                                 double rho_star, const SamplingPlan& plan) {
  std::mt19937 rng(plan.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Index n = p.dim();
  const DenseVector base = u1 / u1.norm();
  std::vector<DenseVector> out;
  out.push_back(base);
  for (int ri = 1; ri <= plan.radii; ++ri) {
    const double r = plan.max_radius * static_cast<double>(ri) / plan.radii;
    for (int d = 0; d < plan.directions; ++d) {
      DenseVector dir(n);
      for (Index i = 0; i < n; ++i) dir[i] = gauss(rng);
      dir -= base.dot(dir) * base;
      const double dn = dir.norm();
      if (dn == 0.0) continue;
      dir /= dn;
      DenseVector cand = std::cos(r) * base + std::sin(r) * dir;
      if (rayleigh_quotient(p, cand) <= rho_star) out.push_back(std::move(cand));
    }
  }
  return out;
}

inline void check_rho_star(double rho_star, double l1, double l2, const char* who) {
  if (!(rho_star >= l1 - 1e-12 * std::abs(l1)) || !(rho_star < 0.5 * (l1 + l2)))
    throw DomainError(std::string(who) +
                      ": rho_star must lie in [lambda1, (lambda1+lambda2)/2)");
}

}  // namespace detail

/// Largest cosine the A-angle between x and the B-orthogonal complement of x
/// can reach: sqrt(1 - (ahat'bhat)^2) with ahat = A^{1/2}x and
/// bhat = A^{-1/2}Bx, both normalized. Needs an explicit B.
inline double per_point_leading_cos(const SpdMatrix& a, const SpdMatrix& b_explicit,
                                    const DenseVector& x) {
  if (a.rows() != b_explicit.rows() || a.rows() != x.size())
    throw UsageError("per_point_leading_cos: dimension mismatch");
  const auto ops = detail::symmetric_sqrt(a.to_dense(), "per_point_leading_cos");
  return detail::leading_cos_prepared(ops, b_explicit.to_dense(), x);
}

/// Sampled lower bound on cos(theta) over the sublevel set {f <= rho_star}:
/// the inner maximization over the B-orthogonal hyperplane is exact, the
/// outer supremum is sampled.
inline double leading_angle_estimate(const SpdMatrix& a, const SpdMatrix& m,
                                     const SpdMatrix& b_explicit, double rho_star,
                                     const SamplingPlan& plan = {}) {
  const MatrixPencil p{a, m};
  const auto eig = dense_generalized_eig(p);
  detail::check_rho_star(rho_star, eig.values[0], eig.values[1], "leading_angle_estimate");
  const auto ops = detail::symmetric_sqrt(a.to_dense(), "leading_angle_estimate");
  const Eigen::MatrixXd b = b_explicit.to_dense();
  const auto samples = detail::sublevel_samples(p, eig.vectors.col(0), rho_star, plan);
  double best = 0.0;
  for (const auto& x : samples)
    best = std::max(best, detail::leading_cos_prepared(ops, b, x));
  return best;
}

/// Sampled estimates of varrho (upper bound of the inf), varsigma, sigma and
/// nu1. For each sampled x the inner infimum of f over {v : v'Bx = 0} is
/// solved exactly as a deflated dense eigenproblem.
struct VarRhoSigma {
  double varrho_est;
  double varsigma_est;
  double sigma;
  double nu1;
  int sample_count;
};

inline VarRhoSigma varrho_varsigma_estimate(const SpdMatrix& a, const SpdMatrix& m,
                                            const SpdMatrix& b_explicit, double rho_star,
                                            const SamplingPlan& plan = {}) {
  const MatrixPencil p{a, m};
  const auto eig = dense_generalized_eig(p);
  detail::check_rho_star(rho_star, eig.values[0], eig.values[1], "varrho_varsigma_estimate");
  const Index n = p.dim();
  const Eigen::MatrixXd ad = a.to_dense();
  const Eigen::MatrixXd md = m.to_dense();
  const Eigen::MatrixXd bd = b_explicit.to_dense();
  const DenseVector u1 = eig.vectors.col(0);

  const double sigma = u1.dot(ad * u1) / u1.dot(bd * u1);
  Eigen::LLT<Eigen::MatrixXd> bllt(bd);
  if (bllt.info() != Eigen::Success)
    throw MatrixError("varrho_varsigma_estimate: B is not positive definite");
  const DenseVector au1 = ad * u1;
  const double nu1 = au1.dot(bllt.solve(au1)) / u1.dot(au1);

  const auto samples = detail::sublevel_samples(p, u1, rho_star, plan);
  double varrho = std::numeric_limits<double>::infinity();
  double varsigma = 0.0;
  for (const auto& x : samples) {
    // Householder complement of Bx: columns 2..n of the reflector sending
    // e1 to Bx/||Bx|| span {v : v'Bx = 0}.
    DenseVector bx = bd * x;
    bx /= bx.norm();
    DenseVector u = bx;
    u[0] += (bx[0] >= 0.0 ? 1.0 : -1.0);
    u /= u.norm();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * u * u.transpose();
    const Eigen::MatrixXd z = h.rightCols(n - 1);
    Eigen::MatrixXd az = z.transpose() * ad * z;
    Eigen::MatrixXd mz = z.transpose() * md * z;
    az = 0.5 * (az + az.transpose()).eval();
    mz = 0.5 * (mz + mz.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> des(az, mz,
                                                                  Eigen::EigenvaluesOnly);
    if (des.info() != Eigen::Success)
      throw MatrixError("varrho_varsigma_estimate: deflated solve failed");
    varrho = std::min(varrho, des.eigenvalues()(0));
    varsigma = std::max(varsigma, std::abs(x.dot(ad * x) / x.dot(bd * x) - sigma));
  }
  return {varrho, varsigma, sigma, nu1, static_cast<int>(samples.size())};
}

/// All quality measurements in one pass, with kappa_nu taken exactly from the
/// dense pencil (A, B).
inline PreconQuality precond_quality(const SpdMatrix& a, const SpdMatrix& m,
                                     const SpdMatrix& b_explicit, double rho_star,
                                     const SamplingPlan& plan = {}) {
  const auto eig = dense_generalized_eig(MatrixPencil{a, m});
  detail::check_rho_star(rho_star, eig.values[0], eig.values[1], "precond_quality");
  const auto nub = dense_generalized_eig(MatrixPencil{a, b_explicit});
  PreconQuality q;
  q.nu_min = nub.values[0];
  q.nu_max = nub.values[nub.values.size() - 1];
  q.kappa_nu = q.nu_max / q.nu_min;
  q.cos_theta_est = leading_angle_estimate(a, m, b_explicit, rho_star, plan);
  const auto vs = varrho_varsigma_estimate(a, m, b_explicit, rho_star, plan);
  q.varrho_est = vs.varrho_est;
  q.varsigma_est = vs.varsigma_est;
  q.sigma = vs.sigma;
  q.nu1 = vs.nu1;
  q.rho_star = rho_star;
  const double l1 = eig.values[0], l2 = eig.values[1];
  q.epsilon = std::sqrt(std::max(0.0, (rho_star - l1) / (l2 - l1)));
  q.epsilon_star = l2 * q.cos_theta_est / (l2 - l1) + q.epsilon;
  q.sample_count = vs.sample_count;
  return q;
}

/// Geodesic convexity and smoothness constants of the preconditioned
/// Rayleigh quotient on the unit sphere, evaluated literally from the
/// measured quantities:
///   C_X  = 8 k_nu rho_X ((rho_X - l1)/l1 + sqrt((rho_X - l1)/l1) cos(theta))
///   mu_B = 2 nu_min l1 / (sigma + varsigma) (1 - rho_X/varrho) - C_X
///   L_B  = 2 nu_max rho_X / (sigma - varsigma) (1 - l1/ln) + C_X
/// The quality inputs must describe the already-transformed problem
/// (A_B, M_B) with identity preconditioner when the constants are meant for
/// the B-sphere function.
struct ConvexityConstants {
  double mu_b;
  double ell_b;
  double c_x;
  double rho_x;
  bool convex;     // mu_b > 0
  double kappa_b;  // ell_b/mu_b when convex
};

inline ConvexityConstants convexity_constants(const PreconQuality& q, double lambda1,
                                              double lambda2, double lambdan, double rho_x) {
  detail::check_rho_star(rho_x, lambda1, lambda2, "convexity_constants");
  if (!(q.varrho_est > rho_x))
    throw DomainError("convexity_constants: admissibility varrho > rho_X fails");
  const double gap_ratio = std::max(0.0, (rho_x - lambda1) / lambda1);
  const double c_x =
      8.0 * q.kappa_nu * rho_x * (gap_ratio + std::sqrt(gap_ratio) * q.cos_theta_est);
  const double mu_b =
      2.0 * q.nu_min * lambda1 / (q.sigma + q.varsigma_est) * (1.0 - rho_x / q.varrho_est) -
      c_x;
  double ell_b = std::numeric_limits<double>::infinity();
  if (q.sigma - q.varsigma_est > 0.0)
    ell_b = 2.0 * q.nu_max * rho_x / (q.sigma - q.varsigma_est) * (1.0 - lambda1 / lambdan) +
            c_x;
  ConvexityConstants out;
  out.mu_b = mu_b;
  out.ell_b = ell_b;
  out.c_x = c_x;
  out.rho_x = rho_x;
  out.convex = mu_b > 0.0 && std::isfinite(ell_b);
  out.kappa_b = out.convex ? ell_b / mu_b : std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Pointwise check of the four sublevel-set inequalities behind the
/// estimates: the M-angle between x and u1, both angle lower bounds, the
/// M-orthogonal-complement value bracket, and the residual bound. Margins are
/// oriented so satisfied means >= 0.
struct EpicReport {
  bool pair_angle_ok;
  bool angle_bounds_ok;
  bool complement_ok;
  bool residual_ok;
  double pair_angle_margin;
  double angle_bounds_margin;
  double complement_margin;
  double residual_margin;

  bool all_ok() const { return pair_angle_ok && angle_bounds_ok && complement_ok && residual_ok; }
};

inline EpicReport epic_check(const MatrixPencil& p, const DenseVector& x, double rho_star,
                             int complement_samples = 16, unsigned seed = 42) {
  const auto eig = dense_generalized_eig(p);
  const double l1 = eig.values[0], l2 = eig.values[1];
  const double ln = eig.values[eig.values.size() - 1];
  detail::check_rho_star(rho_star, l1, l2, "epic_check");
  const double rho = rayleigh_quotient(p, x);
  if (!(rho <= rho_star + 1e-12 * std::abs(rho_star)))
    throw DomainError("epic_check: x is outside the sublevel set");

  const Eigen::MatrixXd ad = p.a.to_dense();
  const Eigen::MatrixXd md = p.m.to_dense();
  const DenseVector u1 = eig.vectors.col(0);
  const DenseVector mx = md * x;
  const DenseVector ax = ad * x;
  const double xm = std::sqrt(x.dot(mx));
  const double xa = std::sqrt(x.dot(ax));
  const double u1m = std::sqrt(u1.dot(md * u1));
  const double u1a = std::sqrt(u1.dot(ad * u1));

  EpicReport rep{};
  const double slack = 1e-12;  // rounding allowance; the bounds are exact in
                               // exact arithmetic and tight at x = u1

  // Pairwise M-angle bound with the pair (x, u1).
  const double lhs_pair = std::abs(x.dot(md * u1)) / (xm * u1m);
  const double rhs_pair = 1.0 - 2.0 * (rho - l1) / (l2 - l1);
  rep.pair_angle_margin = lhs_pair - rhs_pair;
  rep.pair_angle_ok = rep.pair_angle_margin >= -slack;

  // Squared-angle lower bounds in the M and A inner products.
  const double mcos2 = std::pow(x.dot(md * u1) / (xm * u1m), 2);
  const double acos2 = std::pow(x.dot(ad * u1) / (xa * u1a), 2);
  const double m_margin = mcos2 - (l2 - rho) / (l2 - l1);
  const double a_margin = acos2 - (1.0 / rho - 1.0 / l2) / (1.0 / l1 - 1.0 / l2);
  rep.angle_bounds_margin = std::min(m_margin, a_margin);
  rep.angle_bounds_ok = rep.angle_bounds_margin >= -slack;

  // Value bracket on the M-orthogonal complement of x: l1 + l2 - rho <= f(v) <= ln.
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double cmargin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < complement_samples; ++s) {
    DenseVector v(p.dim());
    for (Index i = 0; i < p.dim(); ++i) v[i] = gauss(rng);
    v -= (v.dot(mx) / x.dot(mx)) * x;
    if (v.norm() == 0.0) continue;
    const double fv = rayleigh_quotient(p, v);
    cmargin = std::min(cmargin, std::min(fv - (l1 + l2 - rho), ln - fv));
  }
  rep.complement_margin = cmargin;
  rep.complement_ok = cmargin >= -slack * ln;

  // Residual bound: r'A^{-1}r / x'Mx <= rho (rho - l1)/l1.
  const DenseVector r = ax - rho * mx;
  Eigen::LLT<Eigen::MatrixXd> allt(ad);
  if (allt.info() != Eigen::Success) throw MatrixError("epic_check: A not positive definite");
  const double lhs_res = r.dot(allt.solve(r)) / x.dot(mx);
  rep.residual_margin = rho * (rho - l1) / l1 - lhs_res;
  rep.residual_ok = rep.residual_margin >= -slack * std::abs(rho);
  return rep;
}

inline void write_quality_csv(std::ostream& out, const PreconQuality& q,
                              const ConvexityConstants* c = nullptr) {
  out << "kappa_nu,cos_theta_est,varrho_est,varsigma_est,sigma,nu1,nu_min,nu_max,rho_star,"
         "epsilon,epsilon_star,sample_count";
  if (c) out << ",mu_b,ell_b,c_x,rho_x,convex,kappa_b";
  out << "\n";
  char buf[64];
  auto put = [&](double v, bool lead_comma = true) {
    if (lead_comma) out << ",";
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    out << buf;
  };
  put(q.kappa_nu, false);
  put(q.cos_theta_est);
  put(q.varrho_est);
  put(q.varsigma_est);
  put(q.sigma);
  put(q.nu1);
  put(q.nu_min);
  put(q.nu_max);
  put(q.rho_star);
  put(q.epsilon);
  put(q.epsilon_star);
  out << "," << q.sample_count;
  if (c) {
    put(c->mu_b);
    put(c->ell_b);
    put(c->c_x);
    put(c->rho_x);
    out << "," << (c->convex ? 1 : 0);
    put(c->kappa_b);
  }
  out << "\n";
}

inline void write_quality_jsonl(std::ostream& out, const PreconQuality& q,
                                const ConvexityConstants* c = nullptr) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return std::string(buf);
  };
  out << "{\"kappa_nu\":" << num(q.kappa_nu) << ",\"cos_theta_est\":" << num(q.cos_theta_est)
      << ",\"varrho_est\":" << num(q.varrho_est) << ",\"varsigma_est\":" << num(q.varsigma_est)
      << ",\"sigma\":" << num(q.sigma) << ",\"nu1\":" << num(q.nu1)
      << ",\"nu_min\":" << num(q.nu_min) << ",\"nu_max\":" << num(q.nu_max)
      << ",\"rho_star\":" << num(q.rho_star) << ",\"epsilon\":" << num(q.epsilon)
      << ",\"epsilon_star\":" << num(q.epsilon_star)
      << ",\"sample_count\":" << q.sample_count;
  if (c) {
    out << ",\"mu_b\":" << num(c->mu_b) << ",\"ell_b\":" << num(c->ell_b)
        << ",\"c_x\":" << num(c->c_x) << ",\"rho_x\":" << num(c->rho_x)
        << ",\"convex\":" << (c->convex ? "true" : "false")
        << ",\"kappa_b\":" << num(c->kappa_b);
  }
  out << "}\n";
}

}  // namespace rap

#pragma once

#include <Eigen/Dense>

#include "hawkesdp/discretize.hpp"
#include "hawkesdp/rng.hpp"

namespace hawkesdp {

// Optimization variable, d x (dp+1): bin-scaled kernel blocks plus baseline.
using ParamMatrix = Eigen::MatrixXd;

struct FrobeniusBall {
  double radius = 1.0;
};

struct NuclearBall {
  double radius = 1.0;
};

// 1/2 || U A - B ||_F^2 with A = gram, B = cross; identical to the
// (n-p)^-2-normalized residual on the raw Z, Y products.
double loss(const ParamMatrix& U, const DesignMatrices& design);

// (U A - B) A.
ParamMatrix gradient(const ParamMatrix& U, const DesignMatrices& design);

// Unconstrained least squares solution B A^{-1}. Throws numerical_error,
// reporting the condition number, when gram is singular beyond 1e12.
ParamMatrix cls_closed_form(const DesignMatrices& design);

// Radial projection onto { ||U||_F <= radius }.
ParamMatrix project_frobenius(const ParamMatrix& U, double radius);

struct SingularTriple {
  double sigma = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  int iterations = 0;
  bool converged = false;
};

// Top singular triple. Power iteration on the smaller Gram side with a
// random unit start; direct dense SVD when min(rows, cols) <= 4. Convergence
// when ||G^T u - sigma v|| <= tol * sigma (and symmetrically). Sign fixed so
// the first nonzero entry of u is positive. A non-converged result is
// returned with converged = false rather than thrown.
SingularTriple top_singular_pair(const Eigen::MatrixXd& G, double tol,
                                 int max_iter, Rng& rng);

struct LmoResult {
  ParamMatrix vertex;
  bool zero_gradient = false;
};

// argmin of <U, G> over the nuclear ball: -radius * u1 v1^T, inner product
// -radius * sigma1(G). Falls back to a dense SVD if power iteration stalls;
// a zero gradient yields the zero matrix, flagged.
LmoResult nuclear_lmo(const Eigen::MatrixXd& G, double radius, Rng& rng,
                      double tol = 1e-9, int max_iter = 10000);

double nuclear_norm(const Eigen::MatrixXd& m);

}  // namespace hawkesdp

#include "hawkesdp/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hawkesdp/errors.hpp"

namespace hawkesdp {

namespace {

void check_shapes(const ParamMatrix& U, const DesignMatrices& design) {
  if (U.rows() != design.cross.rows() || U.cols() != design.gram.rows())
    throw std::invalid_argument("parameter matrix shape does not match design");
}

// First nonzero entry of u made positive, v flipped along.
void fix_sign(Eigen::VectorXd& u, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) != 0.0) {
      if (u(i) < 0.0) {
        u = -u;
        v = -v;
      }
      return;
    }
  }
}

SingularTriple dense_top_pair(const Eigen::MatrixXd& G) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriple out;
  out.sigma = svd.singularValues()(0);
  out.u = svd.matrixU().col(0);
  out.v = svd.matrixV().col(0);
  out.converged = true;
  fix_sign(out.u, out.v);
  return out;
}

}  // namespace

double loss(const ParamMatrix& U, const DesignMatrices& design) {
  check_shapes(U, design);
  return 0.5 * (U * design.gram - design.cross).squaredNorm();
}

ParamMatrix gradient(const ParamMatrix& U, const DesignMatrices& design) {
  check_shapes(U, design);
  return (U * design.gram - design.cross) * design.gram;
}

ParamMatrix cls_closed_form(const DesignMatrices& design) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(design.gram);
  const double max_ev = eigen.eigenvalues().maxCoeff();
  const double min_ev = eigen.eigenvalues().minCoeff();
  const double cond = min_ev > 0.0 ? max_ev / min_ev
                                   : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) {
    std::ostringstream msg;
    msg << "gram matrix numerically singular: condition number " << cond;
    throw numerical_error(msg.str());
  }
  return design.gram.ldlt().solve(design.cross.transpose()).transpose();
}

ParamMatrix project_frobenius(const ParamMatrix& U, double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("projection radius must be positive");
  const double norm = U.norm();
  if (norm <= radius) return U;
  return U * (radius / norm);
}

SingularTriple top_singular_pair(const Eigen::MatrixXd& G, double tol,
                                 int max_iter, Rng& rng) {
  if (G.size() == 0 || G.norm() == 0.0)
    throw std::invalid_argument("top singular pair of a zero matrix");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  if (std::min(G.rows(), G.cols()) <= 4) return dense_top_pair(G);

  // Power iteration on the smaller Gram side.
  const bool rows_side = G.rows() <= G.cols();
  const Eigen::MatrixXd gram =
      rows_side ? Eigen::MatrixXd(G * G.transpose())
                : Eigen::MatrixXd(G.transpose() * G);

  Eigen::VectorXd w(gram.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
  w.normalize();

  SingularTriple out;
  for (int it = 1; it <= max_iter; ++it) {
    w = gram * w;
    const double norm = w.norm();
    if (norm == 0.0)
      throw numerical_error("power iteration collapsed to the null space");
    w /= norm;
    out.iterations = it;

    if (rows_side) {
      out.u = w;
      Eigen::VectorXd gv = G.transpose() * w;  // sigma * v
      out.sigma = gv.norm();
      out.v = gv / out.sigma;
      if ((G * out.v - out.sigma * out.u).norm() <= tol * out.sigma) {
        out.converged = true;
        break;
      }
    } else {
      out.v = w;
      Eigen::VectorXd gu = G * w;  // sigma * u
      out.sigma = gu.norm();
      out.u = gu / out.sigma;
      if ((G.transpose() * out.u - out.sigma * out.v).norm() <=
          tol * out.sigma) {
        out.converged = true;
        break;
      }
    }
  }
  fix_sign(out.u, out.v);
  return out;
}

LmoResult nuclear_lmo(const Eigen::MatrixXd& G, double radius, Rng& rng,
                      double tol, int max_iter) {
  if (!(radius > 0.0))
    throw std::invalid_argument("nuclear ball radius must be positive");
  if (G.norm() == 0.0)
    return {ParamMatrix::Zero(G.rows(), G.cols()), true};

  SingularTriple top = top_singular_pair(G, tol, max_iter, rng);
  if (!top.converged) top = dense_top_pair(G);
  return {-radius * top.u * top.v.transpose(), false};
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().sum();
}

}  // namespace hawkesdp

#include "hawkesdp/model.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

#include "hawkesdp/errors.hpp"

namespace hawkesdp {

void validate_model(const HawkesModel& model) {
  if (model.dim <= 0) throw std::invalid_argument("model dim must be positive");
  if (model.baseline.size() != model.dim)
    throw std::invalid_argument("baseline length must equal dim");
  if ((model.baseline.array() < 0.0).any())
    throw std::invalid_argument("baseline rates must be non-negative");
  if (static_cast<int>(model.kernels.size()) != model.dim)
    throw std::invalid_argument("kernel matrix must be dim x dim");
  for (const auto& row : model.kernels) {
    if (static_cast<int>(row.size()) != model.dim)
      throw std::invalid_argument("kernel matrix must be dim x dim");
    for (const KernelSpec& spec : row) validate_kernel(spec);
  }
}

void validate_stream(const EventStream& stream) {
  if (!(stream.horizon > 0.0))
    throw std::invalid_argument("stream horizon must be positive");
  if (stream.dim <= 0) throw std::invalid_argument("stream dim must be positive");
  const Event* prev = nullptr;
  for (const Event& e : stream.events) {
    if (e.dim < 0 || e.dim >= stream.dim)
      throw std::invalid_argument("event dim out of range");
    if (!(e.time > 0.0) || e.time > stream.horizon)
      throw std::invalid_argument("event time outside (0, horizon]");
    if (prev && (prev->time > e.time ||
                 (prev->time == e.time && prev->dim > e.dim)))
      throw std::invalid_argument("events must be sorted by time, ties by dim");
    prev = &e;
  }
}

Eigen::MatrixXd branching_matrix(const HawkesModel& model) {
  Eigen::MatrixXd k(model.dim, model.dim);
  for (int i = 0; i < model.dim; ++i)
    for (int j = 0; j < model.dim; ++j)
      k(i, j) = kernel_integral(model.kernel(i, j));
  return k;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("spectral radius needs a square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const HawkesModel& model) {
  return spectral_radius(branching_matrix(model)) < 1.0;
}

Eigen::VectorXd stationary_mean(const HawkesModel& model) {
  validate_model(model);
  const Eigen::MatrixXd k = branching_matrix(model);
  const double radius = spectral_radius(k);
  if (!(radius < 1.0)) {
    std::ostringstream msg;
    msg << "model is not stationary: branching spectral radius " << radius;
    throw numerical_error(msg.str());
  }
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(model.dim, model.dim) - k;
  return lhs.partialPivLu().solve(model.baseline);
}

double intensity_at(const HawkesModel& model, const EventStream& history,
                    double t, int m) {
  if (m < 0 || m >= model.dim)
    throw std::invalid_argument("intensity dim index out of range");
  double value = model.baseline(m);
  for (const Event& e : history.events) {
    if (e.time >= t) break;  // history is sorted; only events before t count
    value += eval_kernel(model.kernel(m, e.dim), t - e.time);
  }
  return value;
}

}  // namespace hawkesdp

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hawkesdp/kernels.hpp"

namespace hawkesdp {

struct Event {
  int dim = 0;
  double time = 0.0;
};

// Timestamped events on (0, horizon], sorted by time, ties broken by dim.
struct EventStream {
  double horizon = 0.0;
  int dim = 0;
  std::vector<Event> events;
};

// Generative model: baseline rates eta and the d x d matrix of excitement
// kernels, entry (i, j) being the influence of source j on target i.
struct HawkesModel {
  int dim = 0;
  Eigen::VectorXd baseline;
  std::vector<std::vector<KernelSpec>> kernels;

  const KernelSpec& kernel(int i, int j) const { return kernels[i][j]; }
};

void validate_model(const HawkesModel& model);
void validate_stream(const EventStream& stream);

// Branching matrix K with K(i, j) = integral of h_{ij}, in closed form.
Eigen::MatrixXd branching_matrix(const HawkesModel& model);

double spectral_radius(const Eigen::MatrixXd& m);

// Stationarity gate: spectral radius of the branching matrix < 1.
bool is_stationary(const HawkesModel& model);

// First-moment identity (I - K)^{-1} eta. Throws numerical_error for
// non-stationary models.
Eigen::VectorXd stationary_mean(const HawkesModel& model);

// lambda_m(t) given the events of `history` strictly before t.
double intensity_at(const HawkesModel& model, const EventStream& history,
                    double t, int m);

}  // namespace hawkesdp

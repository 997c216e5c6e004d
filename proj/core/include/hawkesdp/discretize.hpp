#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "hawkesdp/model.hpp"

namespace hawkesdp {

// Binning layout: n = floor(horizon / delta) bins, bin k covering the
// interval ((k-1) delta, k delta]; the regression support is s = lag * delta.
struct BinConfig {
  double delta = 0.0;
  double horizon = 0.0;
  int lag = 1;

  int num_bins() const {
    return static_cast<int>(std::floor(horizon / delta + 1e-12));
  }
  double support() const { return lag * delta; }
};

void validate_config(const BinConfig& config);

using CountMatrix =
    Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic>;

// Bin-count sequence: counts(k, j) = number of dim-j events in bin k+1.
struct BinSeries {
  CountMatrix counts;  // n x d
  BinConfig config;

  int bins() const { return static_cast<int>(counts.rows()); }
  int dim() const { return static_cast<int>(counts.cols()); }
};

// Events past bin n (the ragged tail of the horizon) are discarded; an event
// exactly on a bin edge belongs to the earlier bin.
BinSeries bin_counts(const EventStream& stream, const BinConfig& config);

// Lagged regression data. Column t of Z stacks the p most recent bins in
// descending order (X_{p+t-1}, ..., X_t) plus a trailing constant 1; column t
// of Y is the next bin X_{p+t}. The estimator only consumes the normalized
// products gram = Z Z^T / (n-p) and cross = Y Z^T / (n-p), so Z and Y are
// materialized only below a size cap (dense_stored says whether they were).
struct DesignMatrices {
  Eigen::MatrixXd Z;      // (dp+1) x (n-p) when dense_stored
  Eigen::MatrixXd Y;      // d x (n-p) when dense_stored
  Eigen::MatrixXd gram;   // (dp+1) x (dp+1), symmetric PSD
  Eigen::MatrixXd cross;  // d x (dp+1)
  int d = 0;
  int p = 0;
  long cols = 0;  // n - p
  bool dense_stored = false;
};

enum class DenseStorage { automatic, always, never };

DesignMatrices build_design(const BinSeries& bins,
                            DenseStorage storage = DenseStorage::automatic);

// One count changed by exactly one; decrementing a zero count is rejected.
BinSeries perturb_neighbor(const BinSeries& bins, int bin, int dim, int sign);

// Entrywise L1 distance between equal-shaped series; neighboring datasets
// are those at distance <= 1.
long distance(const BinSeries& a, const BinSeries& b);

// Smallest data-scale constant R with ||gram||_F^2 <= R and
// ||cross||_F^2 <= R for this realized dataset. Data-dependent: useful as a
// diagnostic, not for calibrating noise that must stay private.
double estimate_R(const DesignMatrices& design);

}  // namespace hawkesdp

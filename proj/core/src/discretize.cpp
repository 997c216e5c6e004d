#include "hawkesdp/discretize.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkesdp {

void validate_config(const BinConfig& config) {
  if (!(config.delta > 0.0))
    throw std::invalid_argument("bin width delta must be positive");
  if (!(config.horizon > 0.0))
    throw std::invalid_argument("bin horizon must be positive");
  if (config.lag < 1) throw std::invalid_argument("lag p must be >= 1");
  if (config.num_bins() <= config.lag)
    throw std::invalid_argument("bin count n must exceed the lag p");
}

BinSeries bin_counts(const EventStream& stream, const BinConfig& config) {
  validate_config(config);
  validate_stream(stream);
  const int n = config.num_bins();
  if (stream.horizon + 1e-9 < n * config.delta)
    throw std::invalid_argument("stream horizon shorter than the bin grid");

  BinSeries out;
  out.config = config;
  out.counts = CountMatrix::Zero(n, stream.dim);
  for (const Event& e : stream.events) {
    // bin k covers ((k-1) delta, k delta]; the small guard keeps events that
    // sit on an edge up to rounding in the earlier bin
    int k = static_cast<int>(std::ceil(e.time / config.delta - 1e-12));
    if (k < 1) k = 1;
    if (k > n) continue;  // ragged tail past n delta is discarded
    out.counts(k - 1, e.dim) += 1;
  }
  return out;
}

DesignMatrices build_design(const BinSeries& bins, DenseStorage storage) {
  validate_config(bins.config);
  const int n = bins.bins();
  const int d = bins.dim();
  const int p = bins.config.lag;
  if (d < 1) throw std::invalid_argument("bin series has no dims");
  if (n <= p) throw std::invalid_argument("bin count n must exceed the lag p");

  const long m = n - p;
  const int width = d * p + 1;

  DesignMatrices out;
  out.d = d;
  out.p = p;
  out.cols = m;
  out.gram = Eigen::MatrixXd::Zero(width, width);
  out.cross = Eigen::MatrixXd::Zero(d, width);

  const Eigen::MatrixXd x = bins.counts.cast<double>();

  // Entry ((a,f),(b,s)) of Z Z^T is sum_{u=p-a}^{n-1-a} x(u,f) x(u+off,s)
  // with off = a - b >= 0; the same windows at a = off give Y Z^T. Sliding
  // the window over a costs O(1) per entry after one O(n) sum per family.
  for (int f = 0; f < d; ++f) {
    for (int s = 0; s < d; ++s) {
      for (int off = 0; off <= p; ++off) {
        const int a0 = std::max(off, 1);
        if (a0 > p) continue;
        double w = 0.0;
        for (long u = p - a0; u <= n - 1 - a0; ++u) w += x(u, f) * x(u + off, s);
        for (int a = a0; a <= p; ++a) {
          if (a == off) {
            // cross term: row s regressed on lag-b block of dim f, b = off
            out.cross(s, (off - 1) * d + f) = w;
          } else {
            const int b = a - off;
            const int r = (a - 1) * d + f;
            const int c = (b - 1) * d + s;
            out.gram(r, c) = w;
            out.gram(c, r) = w;
          }
          if (a < p)
            w += x(p - a - 1, f) * x(p - a - 1 + off, s) -
                 x(n - 1 - a, f) * x(n - 1 - a + off, s);
        }
      }
    }
  }

  // ones-row products
  Eigen::VectorXd prefix(n + 1);
  for (int j = 0; j < d; ++j) {
    prefix(0) = 0.0;
    for (int u = 0; u < n; ++u) prefix(u + 1) = prefix(u) + x(u, j);
    for (int b = 1; b <= p; ++b) {
      const double sum = prefix(n - b) - prefix(p - b);
      out.gram(width - 1, (b - 1) * d + j) = sum;
      out.gram((b - 1) * d + j, width - 1) = sum;
    }
    out.cross(j, width - 1) = prefix(n) - prefix(p);
  }
  out.gram(width - 1, width - 1) = static_cast<double>(m);

  out.gram /= static_cast<double>(m);
  out.cross /= static_cast<double>(m);

  const bool dense =
      storage == DenseStorage::always ||
      (storage == DenseStorage::automatic &&
       static_cast<long>(width) * m <= 4'000'000L);
  if (dense) {
    out.Z = Eigen::MatrixXd::Ones(width, m);
    out.Y = Eigen::MatrixXd(d, m);
    for (long c = 0; c < m; ++c) {
      for (int a = 1; a <= p; ++a)
        out.Z.block(static_cast<long>(a - 1) * d, c, d, 1) =
            x.row(p + c - a).transpose();
      out.Y.col(c) = x.row(p + c).transpose();
    }
    out.dense_stored = true;
  }
  return out;
}

BinSeries perturb_neighbor(const BinSeries& bins, int bin, int dim, int sign) {
  if (bin < 0 || bin >= bins.bins() || dim < 0 || dim >= bins.dim())
    throw std::invalid_argument("perturbation index out of range");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("perturbation sign must be +1 or -1");
  if (sign == -1 && bins.counts(bin, dim) == 0)
    throw std::invalid_argument("cannot decrement a zero count");
  BinSeries out = bins;
  out.counts(bin, dim) += sign;
  return out;
}

long distance(const BinSeries& a, const BinSeries& b) {
  if (a.bins() != b.bins() || a.dim() != b.dim())
    throw std::invalid_argument("bin series shapes differ");
  long total = 0;
  for (int k = 0; k < a.bins(); ++k)
    for (int j = 0; j < a.dim(); ++j) {
      const long av = a.counts(k, j);
      const long bv = b.counts(k, j);
      total += av > bv ? av - bv : bv - av;
    }
  return total;
}

double estimate_R(const DesignMatrices& design) {
  return std::max(design.gram.squaredNorm(), design.cross.squaredNorm());
}

}  // namespace hawkesdp

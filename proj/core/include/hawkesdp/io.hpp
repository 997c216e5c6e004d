#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "hawkesdp/discretize.hpp"
#include "hawkesdp/model.hpp"
#include "hawkesdp/recovery.hpp"

namespace hawkesdp {

// 17 significant digits, enough to round-trip a double; infinities and NaN
// spelled "inf" / "-inf" / "nan".
std::string format_double(double v);

// Model file: {"dim": d, "baseline": [...], "kernels": [[spec, ...], ...]}
// with spec one of {"kind":"zero"}, {"kind":"exp","alpha":a,"beta":b},
// {"kind":"box","lo":l,"hi":h,"height":v}, {"kind":"sum","terms":[...]}.
HawkesModel read_model_json(const std::string& path);
void write_model_json(const std::string& path, const HawkesModel& model);

// Event file: CSV with header "dim,time", rows sorted by time.
// The horizon defaults to the last event time, the dim count to max dim + 1.
EventStream read_events_csv(const std::string& path,
                            std::optional<double> horizon = {},
                            std::optional<int> dim = {});
void write_events_csv(const std::string& path, const EventStream& stream);

// Bin file: one CSV row per bin, one non-negative integer column per dim.
CountMatrix read_bins_csv(const std::string& path);
void write_bins_csv(const std::string& path, const CountMatrix& counts);

struct EstimateRecord {
  ParamMatrix theta;
  KernelEstimate estimate;
  double sigma2 = 0.0;
  double epsilon = std::numeric_limits<double>::infinity();
  double delta = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string method = "cls";
};

// Estimate file: JSON with theta, H_blocks, eta, delta_bin, lag, sigma2,
// epsilon ("inf" when non-private), delta, K, seed, method.
void write_estimate_json(const std::string& path, const EstimateRecord& rec);
EstimateRecord read_estimate_json(const std::string& path);

}  // namespace hawkesdp

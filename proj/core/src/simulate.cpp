#include "hawkesdp/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hawkesdp/errors.hpp"

namespace hawkesdp {

EventStream simulate(const HawkesModel& model, double horizon, Rng& rng) {
  validate_model(model);
  if (!(horizon > 0.0))
    throw std::invalid_argument("simulation horizon must be positive");
  if (!is_stationary(model))
    throw numerical_error(
        "refusing to simulate a non-stationary model (branching spectral "
        "radius >= 1)");

  EventStream out;
  out.horizon = horizon;
  out.dim = model.dim;

  std::vector<double> lambda(model.dim);
  double t = 0.0;
  while (true) {
    // Envelope dominating the total intensity at every time >= t until the
    // next accepted event.
    double bar = model.baseline.sum();
    for (const Event& e : out.events) {
      const double u = t - e.time;
      for (int m = 0; m < model.dim; ++m)
        bar += kernel_sup_after(model.kernel(m, e.dim), u);
    }
    if (!std::isfinite(bar)) {
      std::ostringstream msg;
      msg << "thinning envelope is not finite at t=" << t;
      throw numerical_error(msg.str());
    }
    if (bar <= 0.0) break;  // dead process, no further events possible

    t += rng.exponential(bar);
    if (t > horizon) break;

    double total = 0.0;
    for (int m = 0; m < model.dim; ++m) lambda[m] = model.baseline(m);
    for (const Event& e : out.events) {
      const double u = t - e.time;
      for (int m = 0; m < model.dim; ++m)
        lambda[m] += eval_kernel(model.kernel(m, e.dim), u);
    }
    for (int m = 0; m < model.dim; ++m) total += lambda[m];

    if (rng.uniform() * bar <= total) {
      double pick = rng.uniform() * total;
      int dim = model.dim - 1;
      double acc = 0.0;
      for (int m = 0; m < model.dim; ++m) {
        acc += lambda[m];
        if (pick <= acc) {
          dim = m;
          break;
        }
      }
      out.events.push_back({dim, t});
    }
  }
  return out;
}

}  // namespace hawkesdp

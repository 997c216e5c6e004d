#include "hawkesdp/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hawkesdp {

KernelSpec KernelSpec::zero() { return KernelSpec{}; }

KernelSpec KernelSpec::exponential(double alpha, double beta) {
  KernelSpec spec;
  spec.kind = KernelKind::exponential;
  spec.alpha = alpha;
  spec.beta = beta;
  validate_kernel(spec);
  return spec;
}

KernelSpec KernelSpec::box(double lo, double hi, double height) {
  KernelSpec spec;
  spec.kind = KernelKind::box;
  spec.lo = lo;
  spec.hi = hi;
  spec.height = height;
  validate_kernel(spec);
  return spec;
}

KernelSpec KernelSpec::sum(std::vector<KernelSpec> terms) {
  KernelSpec spec;
  spec.kind = KernelKind::sum;
  spec.terms = std::move(terms);
  validate_kernel(spec);
  return spec;
}

void validate_kernel(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::zero:
      return;
    case KernelKind::exponential:
      if (!(spec.alpha >= 0.0))
        throw std::invalid_argument("exponential kernel requires alpha >= 0");
      if (!(spec.beta > 0.0))
        throw std::invalid_argument("exponential kernel requires beta > 0");
      return;
    case KernelKind::box:
      if (!(spec.lo >= 0.0) || !(spec.lo < spec.hi))
        throw std::invalid_argument("box kernel requires 0 <= lo < hi");
      if (!(spec.height >= 0.0))
        throw std::invalid_argument("box kernel requires height >= 0");
      return;
    case KernelKind::sum:
      for (const KernelSpec& term : spec.terms) validate_kernel(term);
      return;
  }
  throw std::invalid_argument("unknown kernel kind");
}

double eval_kernel(const KernelSpec& spec, double t) {
  if (t < 0.0) return 0.0;
  switch (spec.kind) {
    case KernelKind::zero:
      return 0.0;
    case KernelKind::exponential:
      return spec.alpha * std::exp(-spec.beta * t);
    case KernelKind::box:
      return (spec.lo <= t && t <= spec.hi) ? spec.height : 0.0;
    case KernelKind::sum: {
      double v = 0.0;
      for (const KernelSpec& term : spec.terms) v += eval_kernel(term, t);
      return v;
    }
  }
  return 0.0;
}

double kernel_sup_after(const KernelSpec& spec, double u) {
  switch (spec.kind) {
    case KernelKind::zero:
      return 0.0;
    case KernelKind::exponential:
      // non-increasing: the supremum is the value now
      return spec.alpha * std::exp(-spec.beta * std::max(u, 0.0));
    case KernelKind::box:
      // the box can still be (or become) active as long as u <= hi
      return u <= spec.hi ? spec.height : 0.0;
    case KernelKind::sum: {
      double v = 0.0;
      for (const KernelSpec& term : spec.terms) v += kernel_sup_after(term, u);
      return v;
    }
  }
  return 0.0;
}

double kernel_integral(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::zero:
      return 0.0;
    case KernelKind::exponential:
      return spec.alpha / spec.beta;
    case KernelKind::box:
      return spec.height * (spec.hi - spec.lo);
    case KernelKind::sum: {
      double v = 0.0;
      for (const KernelSpec& term : spec.terms) v += kernel_integral(term);
      return v;
    }
  }
  return 0.0;
}

}  // namespace hawkesdp

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "undither/errors.hpp"
#include "undither/image.hpp"

namespace undither {

struct DiffusionParams {
  double p = 1.0;          // gradient exponent
  double epsilon = 0.001;  // regularizer, keeps the diffusivity finite
  double dt = 0.1;         // explicit time step
  int iterations = 200;

  void validate() const {
    if (!(p >= 0.0)) throw std::invalid_argument("diffusion p must be >= 0");
    if (!(epsilon > 0.0))
      throw std::invalid_argument("diffusion epsilon must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("diffusion dt must be > 0");
    if (iterations < 0)
      throw std::invalid_argument("diffusion iterations must be >= 0");
  }
};

// Edge-stopping conductance c = 1 / (g^p + epsilon): strictly positive,
// bounded by 1/epsilon, non-increasing in the gradient magnitude g. For
// p = 1 the flux c*g = g/(g + epsilon) is bounded by 1, which caps the
// per-step change at 4*dt regardless of the input (TV flow).
inline double diffusivity(double g, const DiffusionParams& params) {
  const double powered = params.p == 1.0 ? g : std::pow(g, params.p);
  return 1.0 / (powered + params.epsilon);
}

template <typename Scalar>
struct DiffusionStateT {
  Image<Scalar> image;
  int step = 0;
};

using DiffusionState = DiffusionStateT<double>;

// Per-step health report. `flux_bound_ok` records whether dt * sum of the
// four edge conductances stayed <= 1 at every pixel (the explicit-scheme
// max-principle premise); `range_violated` is set when the premise held
// and the value range still grew by more than 1e-9.
struct StepDiagnostics {
  double max_change = 0.0;
  bool flux_bound_ok = true;
  bool range_violated = false;
};

struct RunDiagnostics {
  int steps = 0;
  double max_change = 0.0;
  int flux_bound_failures = 0;   // steps where dt * sum(c) > 1 somewhere
  int range_violations = 0;      // steps that broke the max principle anyway

  void absorb(const StepDiagnostics& d) {
    ++steps;
    if (d.max_change > max_change) max_change = d.max_change;
    if (!d.flux_bound_ok) ++flux_bound_failures;
    if (d.range_violated) ++range_violations;
  }
};

// One explicit step of df/dt = div(c grad f) on the 4-neighbor stencil.
// The conductance is evaluated once per pixel-pair edge from the one-sided
// difference and used with opposite signs at both endpoints, so the pixel
// sum telescopes (zero-flux boundary: nothing crosses the border).
template <typename Scalar>
DiffusionStateT<Scalar> diffusion_step(const DiffusionStateT<Scalar>& state,
                                       const DiffusionParams& params,
                                       StepDiagnostics* diag = nullptr) {
  static_assert(std::is_floating_point_v<Scalar>);
  const Image<Scalar>& f = state.image;
  const Eigen::Index h = f.rows();
  const Eigen::Index w = f.cols();
  const Scalar dt = static_cast<Scalar>(params.dt);

  const auto conductance = [&params](Scalar g) {
    return static_cast<Scalar>(diffusivity(static_cast<double>(g), params));
  };

  Image<Scalar> flux = Image<Scalar>::Zero(h, w);
  Image<Scalar> csum = Image<Scalar>::Zero(h, w);

  if (w > 1) {
    // horizontal edges between (i,j) and (i,j+1)
    const Image<Scalar> d = f.rightCols(w - 1) - f.leftCols(w - 1);
    const Image<Scalar> c = d.abs().unaryExpr(conductance);
    const Image<Scalar> cd = c * d;
    flux.leftCols(w - 1) += cd;
    flux.rightCols(w - 1) -= cd;
    csum.leftCols(w - 1) += c;
    csum.rightCols(w - 1) += c;
  }
  if (h > 1) {
    // vertical edges between (i,j) and (i+1,j)
    const Image<Scalar> d = f.bottomRows(h - 1) - f.topRows(h - 1);
    const Image<Scalar> c = d.abs().unaryExpr(conductance);
    const Image<Scalar> cd = c * d;
    flux.topRows(h - 1) += cd;
    flux.bottomRows(h - 1) -= cd;
    csum.topRows(h - 1) += c;
    csum.bottomRows(h - 1) += c;
  }

  DiffusionStateT<Scalar> next{f + dt * flux, state.step + 1};

  if (!next.image.allFinite())
    throw NumericalError("non-finite value after diffusion step " +
                         std::to_string(next.step));

  if (diag) {
    diag->max_change =
        static_cast<double>((next.image - f).abs().maxCoeff());
    diag->flux_bound_ok = (dt * csum <= Scalar(1)).all();
    diag->range_violated =
        diag->flux_bound_ok &&
        (next.image.minCoeff() < f.minCoeff() - Scalar(1e-9) ||
         next.image.maxCoeff() > f.maxCoeff() + Scalar(1e-9));
  }
  return next;
}

// Runs `params.iterations` steps, invoking `observer(step, image)` after
// each one (step counts from 1). iterations = 0 returns the input as-is.
template <typename Scalar, typename Observer>
Image<Scalar> diffuse(const Image<Scalar>& img, const DiffusionParams& params,
                      Observer&& observer, RunDiagnostics* run_diag = nullptr) {
  params.validate();

  DiffusionStateT<Scalar> state{img, 0};
  for (int n = 0; n < params.iterations; ++n) {
    StepDiagnostics diag;
    state = diffusion_step(state, params, &diag);
    if (run_diag) run_diag->absorb(diag);
    observer(state.step, state.image);
  }
  return std::move(state.image);
}

template <typename Scalar>
Image<Scalar> diffuse(const Image<Scalar>& img, const DiffusionParams& params,
                      RunDiagnostics* run_diag = nullptr) {
  return diffuse(img, params, [](int, const Image<Scalar>&) {}, run_diag);
}

}  // namespace undither

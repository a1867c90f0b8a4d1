#ifndef OTTOLAB_PRESETS_HPP
#define OTTOLAB_PRESETS_HPP

#include <cstdint>

#include "ottolab/geometry.hpp"

namespace ottolab {

/** rho = 1 / mu(M). */
ScalarField preset_uniform(const GeometryPtr& g);
/** rho proportional to 1 + a * sum_axes cos(2 pi x_a / L_a), normalized. */
ScalarField preset_perturbed_uniform(const GeometryPtr& g, double a);
/** Periodized Gaussian of width u0 centered at L/2 per axis (the reference
 * model's density wrapped onto the torus; requires constant weight). */
ScalarField preset_model_patch_rho(const GeometryPtr& g, double u0);
/** Normalize a positive field to integrate to 1 against mu. */
ScalarField normalize_density(ScalarField rho);
/** Seeded random trig polynomial with modes up to kmax per axis. */
ScalarField random_trig_poly(const GeometryPtr& g, int kmax, double amplitude, std::uint64_t seed);

}  // namespace ottolab

#endif

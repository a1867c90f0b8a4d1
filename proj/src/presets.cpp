#include "ottolab/presets.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ottolab {

ScalarField normalize_density(ScalarField rho) {
    for (double x : rho.v)
        if (!(x > 0.0)) throw std::invalid_argument("normalize_density: field must be positive");
    const double mass = integrate_mu(rho);
    for (double& x : rho.v) x /= mass;
    return rho;
}

ScalarField preset_uniform(const GeometryPtr& g) {
    return normalize_density(make_scalar(g, 1.0));
}

ScalarField preset_perturbed_uniform(const GeometryPtr& g, double a) {
    if (std::abs(a) >= 1.0)
        throw std::invalid_argument("perturbed_uniform: |a| must be < 1 for positivity");
    ScalarField rho = make_scalar(g, 1.0);
    for (int axis = 0; axis < g->dim(); ++axis) {
        const double w = kTwoPi / g->period(axis);
        for (int i = 0; i < g->nodes(); ++i) rho.v[i] += a * std::cos(w * g->coord(axis, i));
    }
    return normalize_density(std::move(rho));
}

ScalarField preset_model_patch_rho(const GeometryPtr& g, double u0) {
    if (!g->weight_is_constant())
        throw std::invalid_argument("model_patch: requires constant weight f");
    if (!(u0 > 0.0)) throw std::invalid_argument("model_patch: u0 must be positive");
    ScalarField rho = make_scalar(g, 1.0);
    const double var = 2.0 * u0 * u0;  // rho_m has per-axis variance 2 u^2
    for (int axis = 0; axis < g->dim(); ++axis) {
        const double L = g->period(axis);
        for (int i = 0; i < g->nodes(); ++i) {
            const double x = g->coord(axis, i) - 0.5 * L;
            double theta = 0.0;
            for (int img = -4; img <= 4; ++img) {
                const double d = x + img * L;
                theta += std::exp(-d * d / (2.0 * var));
            }
            rho.v[i] *= theta / std::sqrt(kTwoPi * var);
        }
    }
    return normalize_density(std::move(rho));
}

ScalarField random_trig_poly(const GeometryPtr& g, int kmax, double amplitude,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<TrigTerm> terms;
    if (g->dim() == 1) {
        for (int k = 1; k <= kmax; ++k)
            terms.push_back({{k, 0}, amplitude * coeff(rng) / k, amplitude * coeff(rng) / k});
    } else {
        for (int k0 = 0; k0 <= kmax; ++k0)
            for (int k1 = (k0 == 0 ? 1 : -kmax); k1 <= kmax; ++k1) {
                const double decay = 1.0 / (k0 * k0 + k1 * k1);
                terms.push_back({{k0, k1}, amplitude * coeff(rng) * decay,
                                 amplitude * coeff(rng) * decay});
            }
    }
    return scalar_from_terms(g, terms);
}

}  // namespace ottolab

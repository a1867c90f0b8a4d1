#ifndef OTTOLAB_ENTROPY_HPP
#define OTTOLAB_ENTROPY_HPP

#include <functional>
#include <string>

#include "ottolab/flows.hpp"
#include "ottolab/geometry.hpp"
#include "ottolab/series.hpp"

namespace ottolab {

// -- pointwise functionals of a state ------------------------------------------

/** Ent(rho) = Int rho log rho dmu. */
double boltzmann_entropy(const ScalarField& rho);
/** Int |grad rho|^2 / rho dmu. */
double fisher_information(const ScalarField& rho);
/** Otto kinetic energy Int |grad phi|^2 rho dmu. */
double kinetic(const ScalarField& rho, const ScalarField& phi);
double kinetic_u(const ScalarField& rho, const VectorField& u);
/** H(rho, phi) = (c^2/2) Int |grad phi|^2 rho dmu + Ent(rho). */
double hamiltonian(const ScalarField& rho, const ScalarField& phi, double c);

/** Quadrature route for dEnt/dt along transport flows: Int <grad phi, grad rho> dmu. */
double entropy_slope_quadrature(const ScalarField& rho, const ScalarField& phi);

// -- identity right-hand sides ---------------------------------------------------

/** Shared square-completion integral
 *   scale * Int [ |Hess s - a g|^2 + (Ric_{m,n}(L) - K_sub)(grad s, grad s) ] rho dmu
 *   + (scale/(m-n)) * Int |grad s . grad f + shift|^2 rho dmu,
 * with the (m-n) term dropped when m = n (constant f required then). */
double wm_rhs_integral(const ScalarField& rho, const ScalarField& s, double m, double scale,
                       double a, double shift, double K_sub = 0.0);

/** Geodesic W-entropy RHS (scale t, a = 1/t, shift = (m-n)/t). */
double rhs_geo_wm(const ScalarField& rho, const ScalarField& phi, double m, double t);
/** Heat W-entropy RHS on the heat solution u (uses log u; scale 2t, a = -1/(2t)). */
double rhs_heat_wm(const ScalarField& u, double m, double t);
/** CD(K,m) backward-flow RHS with a = (K + 1/t)/2, on log rho. */
double rhs_heat_cdkm(const ScalarField& rho, double m, double K, double t);
/** Deformed-flow RHS: completed squares with a = alpha plus (1/c^2) Fisher. */
double rhs_langevin_mf3(const ScalarField& rho, const ScalarField& phi, double m, double alpha,
                        double c);
/** Entropy dissipation / Hessian of Ent: Int (|Hess phi|^2 + Ric(L)(grad phi)) rho dmu. */
double rhs_dissipation(const ScalarField& rho, const ScalarField& phi);
/** d^2 H/dt^2 RHS: 2 Int [c^{-2}|grad phi - grad log rho|^2 + ...] rho dmu. */
double rhs_hamiltonian_2nd(const ScalarField& rho, const ScalarField& phi, double c);
/** Cauchy-Schwarz lower bound: (2/m) [Fisher + (m/2)(K + 1/t)]^2. */
double rhs_cs_bound(double fisher, double m, double K, double t);
/** First-derivative dH/dt candidates: displayed 2 Int grad phi . grad rho dmu - Kin,
 * and the adjoint-equivalent -Int (2 L phi + |grad phi|^2) rho dmu. */
double dh_displayed(const ScalarField& rho, const ScalarField& phi);
double dh_adjoint_form(const ScalarField& rho, const ScalarField& phi);

// -- series assembly ------------------------------------------------------------

using AlphaFn = std::function<double(double)>;

struct SeriesOptions {
    double m = 1.0;
    double K = 0.0;           // CD(K,m) level, usually K_eff
    double N_eks = 0.0;       // EKS dimension; 0 means use m
    double c = 0.0;           // taken from the trajectory when 0
    AlphaFn alpha;            // alpha(t) for Langevin-type RHS columns
    bool reversed = false;    // evaluate along tau = T - t (backward flow)
    bool with_rhs = true;
};

/** Quadrature columns per snapshot: Ent, Fisher, Kin/H when a potential exists,
 * and the flow-appropriate rhs_* columns. Reversed mode re-indexes time as
 * tau = t_end - t and evaluates time-dependent RHS terms at tau. */
EntropySeries build_entropy_series(const FlowTrajectory& traj, const SeriesOptions& opt);

/** Append dEnt, d2Ent (and dH, d2H when present) via 4th-order stencils. */
void add_derivative_columns(EntropySeries& s);

enum class WmMode { heat, geodesic };

/** H_m = Ent + (m/2)(1 + log 4 pi t^alpha) with alpha = 1 (heat) or 2 (geodesic);
 * W_m = H_m + t dH_m/dt; appends Hm, Wm, dWm. Requires positive times. */
void add_hm_wm(EntropySeries& s, WmMode mode, double m);

/** Integrated W-entropy of the deformed flow: W = dEnt + Int_0^t (2a+1/c^2) dEnt ds - (1/c^2) Int_0^t Fisher ds.
 * Appends W_gen (trapezoid), dW_gen_fd (FD of W_gen), dW_gen_direct
 * (= d2Ent + (2a+1/c^2) dEnt - Fisher/c^2) and dW_gen_excess (= direct + m a^2). */
void add_w_general(EntropySeries& s, const AlphaFn& alpha, double c, double m);

/** Exponential-weight W-entropies; appends W_Hc, dW_Hc_fd, rhs_w_exp_H
 * and the Ent variant. Requires finite positive c. */
void add_w_exponential(EntropySeries& s, double c);

}  // namespace ottolab

#endif

#ifndef OTTOLAB_REFERENCE_HPP
#define OTTOLAB_REFERENCE_HPP

#include <array>
#include <vector>

namespace ottolab {

/** Exact Gaussian model on R^m driven by the ODE c^2 u'' + u' = -1/(2u):
 *   phi_m = alpha |x|^2 / 2 + beta,  rho_m = (4 pi u^2)^{-m/2} exp(-|x|^2/(4u^2)),
 * with alpha = u'/u and c^2 beta' = -beta - m log u - (m/2) log(4 pi) + 1.
 * Immutable after solve; all evaluators are pure. */
struct ReferenceModel {
    enum class Kind { finite_c, c_zero, c_infinity };

    Kind kind = Kind::finite_c;
    double c = 1.0;      // finite kinds only
    int m = 1;
    double T_preset = 1.0;  // c=0: u=sqrt(T-t); c=inf uses u=t (T unused)

    // uniform samples (finite c); presets fill these from closed forms
    std::vector<double> t, u, up, beta;
    double dt = 0.0;
    double t_horizon = 0.0;  // u > u_floor guaranteed on [t_front, t_horizon]
    double u_floor = 1e-6;

    double u_at(double tq) const;
    double up_at(double tq) const;
    double upp_at(double tq) const;  // from the ODE (presets: closed form)
    double alpha_at(double tq) const { return up_at(tq) / u_at(tq); }
    double beta_at(double tq) const;
    double beta_dot_at(double tq) const;
};

ReferenceModel solve_u_beta(double c, int m, double u0, double up0, double beta0, double t_end,
                            double dt);
/** c=0 preset: u = sqrt(T-t), alpha = -1/(2(T-t)), beta = -(m/2)log(4 pi (T-t)) + 1. */
ReferenceModel reference_preset_c_zero(int m, double T, double t_end, double dt);
/** c=infinity preset: u = t, alpha = 1/t, beta = 0 (sampled on [dt, t_end]). */
ReferenceModel reference_preset_c_infinity(int m, double t_end, double dt);

/** Closed-form model state and derivatives at one spacetime point. */
struct ModelPointEval {
    double rho, phi;
    std::array<double, 4> grad_phi{};     // alpha * x (first m entries used, m<=4 in practice)
    double hess_phi_diag;                 // alpha (Hess phi = alpha I)
    std::array<double, 4> grad_log_rho{};
    double dt_rho, dt_phi;                // analytic time partials via the ODE
};

ModelPointEval eval_model(const ReferenceModel& model, double tq, const std::vector<double>& x);

/** Sup-norms of the transport (MF1) and deformed Hamilton-Jacobi (MF2)
 * residuals over seeded spacetime samples, with time derivatives taken by
 * 4th-order finite differences on the model's own time grid.
 * `transport_sign` = +1 checks d_t rho + div(rho grad phi); -1 flips the
 * divergence sign (the --wrong-sign debug mode). */
struct ModelResidual {
    double transport = 0.0;
    double hamilton_jacobi = 0.0;
};
ModelResidual model_residual(const ReferenceModel& model, int n_samples, unsigned long seed,
                             double x_radius, int transport_sign = +1);

/** Closed-form functionals at time tq: Ent, Fisher, Kin, H (numeric via
 * (c^2/2) Kin + Ent), an alternative H normalization reported alongside, and the model
 * W-entropy slope -m alpha^2. */
struct ModelFunctionals {
    double entropy, fisher, kinetic, hamiltonian, hamiltonian_alt, dW_model;
};
ModelFunctionals model_closed_forms(const ReferenceModel& model, double tq);

}  // namespace ottolab

#endif

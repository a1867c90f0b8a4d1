#ifndef OTTOLAB_FLOWS_HPP
#define OTTOLAB_FLOWS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ottolab/geometry.hpp"

namespace ottolab {

enum class FlowKind { heat, geodesic, langevin, euler };
enum class Termination { completed, blow_up, rho_floor, hess_ceiling };

const char* to_string(FlowKind k);
const char* to_string(Termination t);

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double t_start = 0.0;
    int output_stride = 1;
    double rho_floor = 1e-10;
    double hess_ceiling = 1e3;
    bool dealias = true;
};

struct FlowState {
    double t = 0.0;
    ScalarField rho;
    std::optional<ScalarField> phi;
    std::optional<VectorField> u;
};

struct FlowTrajectory {
    FlowKind kind = FlowKind::heat;
    double c = 0.0;  // deformation parameter; unused for heat, infinity for geodesic
    SolverConfig cfg;
    GeometryPtr geom;
    std::vector<FlowState> states;
    Termination termination = Termination::completed;
    std::string note;

    double output_dt() const { return cfg.dt * cfg.output_stride; }
};

/** Heat flow d_t u = L u. The c=0 backward gradient flow d_t rho = -L rho is
 * this trajectory read in reversed time tau = T - t. */
FlowTrajectory run_heat(const ScalarField& rho0, const SolverConfig& cfg);

/** Geodesic flow: d_t rho + div_mu(rho grad phi) = 0, d_t phi + |grad phi|^2/2 = 0. */
FlowTrajectory run_geodesic(const ScalarField& rho0, const ScalarField& phi0,
                            const SolverConfig& cfg);

/** Langevin deformation: transport plus
 * c^2 (d_t phi + |grad phi|^2/2) = -phi + log rho + 1. */
FlowTrajectory run_langevin(const ScalarField& rho0, const ScalarField& phi0, double c,
                            const SolverConfig& cfg);

/** Compressible Euler with damping gamma = 1/c^2:
 * d_t rho + div_mu(rho u) = 0, d_t u + u.grad u = -u/c^2 + grad(log rho)/c^2. */
FlowTrajectory run_euler_damped(const ScalarField& rho0, const VectorField& u0, double c,
                                const SolverConfig& cfg);

/** Spectral curl in 2D (identically zero field in 1D). */
ScalarField vorticity(const VectorField& u);
double closedness_defect(const VectorField& u);
/** L^2(mu) norm of a scalar field. */
double l2_mu_norm(const ScalarField& h);
/** Sup over nodes of the Frobenius norm of grad u. */
double grad_sup_norm(const VectorField& u);
/** Sup over nodes of the Frobenius norm of Hess phi. */
double hess_sup_norm(const ScalarField& phi);

/** Brute-force Hopf-Lax solution phi(x,t) = min_y [phi0(y) + d(x,y)^2/(2t)]
 * over a trigonometrically refined candidate grid; independent of the PDE
 * solver. refine = 0 picks a default per dimension. */
ScalarField hopf_lax_oracle(const ScalarField& phi0, double t, int refine = 0);

/** Potential recovered from an Euler trajectory started at u0 = grad phi0:
 * phi(t) = e^{-gt} phi0 + e^{-gt} Int_0^t e^{gs} (g(log rho + 1) - |u|^2/2) ds,
 * trapezoid over snapshots. One field per snapshot. */
std::vector<ScalarField> recover_potential(const FlowTrajectory& traj, const ScalarField& phi0,
                                           double closedness_tol = 1e-6);

/** Shift so that the mu-mean vanishes; used for gauge-free comparisons only. */
ScalarField gauge_zero_mean(const ScalarField& phi);

}  // namespace ottolab

#endif

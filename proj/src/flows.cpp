#include "ottolab/flows.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ottolab {

namespace {

using StateVec = std::vector<std::vector<double>>;

struct PositivityError {};

std::vector<double> log_field(const std::vector<double>& rho) {
    std::vector<double> out(rho.size());
    for (size_t i = 0; i < rho.size(); ++i) {
        if (!(rho[i] > 0.0)) throw PositivityError{};
        out[i] = std::log(rho[i]);
    }
    return out;
}

// d_t rho = -div_mu(rho X)
std::vector<double> transport_rhs(const TorusGeometry& g, const std::vector<double>& rho,
                                  const std::vector<std::vector<double>>& X) {
    std::vector<std::vector<double>> flux(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        flux[a].resize(g.nodes());
        for (int i = 0; i < g.nodes(); ++i) flux[a][i] = rho[i] * X[a][i];
    }
    std::vector<double> div = g.spectral().derivative(flux[0], 1, 0);
    if (g.dim() == 2) {
        auto d1 = g.spectral().derivative(flux[1], 0, 1);
        for (int i = 0; i < g.nodes(); ++i) div[i] += d1[i];
    }
    for (int a = 0; a < g.dim(); ++a) {
        const auto& gf = g.grad_f(a);
        for (int i = 0; i < g.nodes(); ++i) div[i] -= gf[i] * flux[a][i];
    }
    for (double& x : div) x = -x;
    return div;
}

std::vector<std::vector<double>> gradient_of(const TorusGeometry& g,
                                             const std::vector<double>& h) {
    std::vector<std::vector<double>> out(g.dim());
    out[0] = g.spectral().derivative(h, 1, 0);
    if (g.dim() == 2) out[1] = g.spectral().derivative(h, 0, 1);
    return out;
}

struct FlowProblem {
    const TorusGeometry* g;
    FlowKind kind;
    double c = 0.0;
    bool dealias = true;

    StateVec rhs(const StateVec& y) const {
        const auto& geom = *g;
        StateVec out;
        switch (kind) {
            case FlowKind::heat: {
                std::vector<double> Lu = geom.spectral().laplacian(y[0]);
                auto du = gradient_of(geom, y[0]);
                for (int a = 0; a < geom.dim(); ++a) {
                    const auto& gf = geom.grad_f(a);
                    for (int i = 0; i < geom.nodes(); ++i) Lu[i] -= gf[i] * du[a][i];
                }
                out.push_back(std::move(Lu));
                break;
            }
            case FlowKind::geodesic:
            case FlowKind::langevin: {
                const auto& rho = y[0];
                const auto& phi = y[1];
                auto gphi = gradient_of(geom, phi);
                out.push_back(transport_rhs(geom, rho, gphi));
                std::vector<double> dphi(geom.nodes(), 0.0);
                for (int a = 0; a < geom.dim(); ++a)
                    for (int i = 0; i < geom.nodes(); ++i)
                        dphi[i] -= 0.5 * gphi[a][i] * gphi[a][i];
                if (kind == FlowKind::langevin) {
                    auto lr = log_field(rho);
                    const double inv_c2 = 1.0 / (c * c);
                    for (int i = 0; i < geom.nodes(); ++i)
                        dphi[i] += inv_c2 * (-phi[i] + lr[i] + 1.0);
                }
                out.push_back(std::move(dphi));
                break;
            }
            case FlowKind::euler: {
                const auto& rho = y[0];
                std::vector<std::vector<double>> u(geom.dim());
                for (int a = 0; a < geom.dim(); ++a) u[a] = y[1 + a];
                out.push_back(transport_rhs(geom, rho, u));

                auto glr = gradient_of(geom, log_field(rho));
                const double gamma = 1.0 / (c * c);
                for (int a = 0; a < geom.dim(); ++a) {
                    auto adv = gradient_of(geom, u[a]);  // adv[b] = d_b u_a
                    std::vector<double> du(geom.nodes(), 0.0);
                    for (int i = 0; i < geom.nodes(); ++i) {
                        double conv = 0.0;
                        for (int b = 0; b < geom.dim(); ++b) conv += u[b][i] * adv[b][i];
                        du[i] = -conv - gamma * u[a][i] + gamma * glr[a][i];
                    }
                    out.push_back(std::move(du));
                }
                break;
            }
        }
        if (dealias)
            for (auto& comp : out) g->spectral().dealias(comp);
        return out;
    }
};

StateVec axpy(const StateVec& y, const StateVec& k, double w) {
    StateVec out(y.size());
    for (size_t c = 0; c < y.size(); ++c) {
        out[c].resize(y[c].size());
        for (size_t i = 0; i < y[c].size(); ++i) out[c][i] = y[c][i] + w * k[c][i];
    }
    return out;
}

StateVec rk4_step(const FlowProblem& prob, const StateVec& y, double dt) {
    StateVec k1 = prob.rhs(y);
    StateVec k2 = prob.rhs(axpy(y, k1, 0.5 * dt));
    StateVec k3 = prob.rhs(axpy(y, k2, 0.5 * dt));
    StateVec k4 = prob.rhs(axpy(y, k3, dt));
    StateVec out(y.size());
    for (size_t c = 0; c < y.size(); ++c) {
        out[c].resize(y[c].size());
        for (size_t i = 0; i < y[c].size(); ++i)
            out[c][i] = y[c][i] + dt / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
    }
    return out;
}

void validate_density(const ScalarField& rho0) {
    for (double x : rho0.v)
        if (!(x > 0.0)) throw std::invalid_argument("flow: initial density must be positive");
    const double mass = integrate_mu(rho0);
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("flow: initial density must integrate to 1 w.r.t. mu");
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.dt < cfg.t_end - cfg.t_start))
        throw std::invalid_argument("flow: need 0 < dt < t_end - t_start");
    if (cfg.output_stride < 1) throw std::invalid_argument("flow: output_stride must be >= 1");
}

double effective_kmax(const TorusGeometry& g, bool dealias) {
    double k = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const int kn = dealias ? g.grid_size(a) / 3 : g.grid_size(a) / 2;
        k += kTwoPi / g.period(a) * kn;
    }
    return k;
}

// RK4 absolute-stability estimates; detection handles mid-run growth.
void validate_stability(const TorusGeometry& g, const SolverConfig& cfg, FlowKind kind, double c,
                        double vmax) {
    const double keff = effective_kmax(g, cfg.dealias);
    double lambda = 0.0;
    if (kind == FlowKind::heat) {
        lambda = keff * keff;
        if (cfg.dt * lambda > 2.78)
            throw std::invalid_argument("flow: dt too large for spectral heat operator");
        return;
    }
    lambda = keff * vmax;
    if (kind == FlowKind::langevin || kind == FlowKind::euler) {
        if (cfg.dt > 0.5 * c * c)
            throw std::invalid_argument("flow: dt exceeds relaxation bound 0.5 c^2");
        lambda += keff / c;  // acoustic branch of the linearization
    }
    if (cfg.dt * lambda > 2.8)
        throw std::invalid_argument("flow: dt violates the advective/acoustic CFL estimate");
}

FlowTrajectory integrate(FlowProblem prob, StateVec y, const SolverConfig& cfg, double c,
                         const GeometryPtr& geom) {
    validate_config(cfg);
    FlowTrajectory traj;
    traj.kind = prob.kind;
    traj.c = c;
    traj.cfg = cfg;
    traj.geom = geom;

    if (cfg.dealias)
        for (auto& comp : y) geom->spectral().dealias(comp);

    const long nsteps = std::llround((cfg.t_end - cfg.t_start) / cfg.dt);

    auto record = [&](long step) -> bool {
        FlowState st;
        st.t = cfg.t_start + step * cfg.dt;
        st.rho = ScalarField{geom, y[0]};
        if (prob.kind == FlowKind::geodesic || prob.kind == FlowKind::langevin) {
            st.phi = ScalarField{geom, y[1]};
            if (hess_sup_norm(*st.phi) > cfg.hess_ceiling) {
                traj.termination = Termination::hess_ceiling;
                traj.note = "Hessian sup-norm exceeded ceiling";
                return false;
            }
        } else if (prob.kind == FlowKind::euler) {
            VectorField u{geom, {}};
            for (int a = 0; a < geom->dim(); ++a) u.comp.push_back(y[1 + a]);
            if (grad_sup_norm(u) > cfg.hess_ceiling) {
                traj.termination = Termination::hess_ceiling;
                traj.note = "velocity gradient sup-norm exceeded ceiling";
                return false;
            }
            st.u = std::move(u);
        }
        traj.states.push_back(std::move(st));
        return true;
    };

    if (!record(0)) return traj;
    for (long step = 1; step <= nsteps; ++step) {
        try {
            y = rk4_step(prob, y, cfg.dt);
        } catch (const PositivityError&) {
            traj.termination = Termination::rho_floor;
            traj.note = "density lost positivity inside a stage";
            return traj;
        }
        for (const auto& comp : y)
            if (!all_finite(comp)) {
                traj.termination = Termination::blow_up;
                traj.note = "non-finite state";
                return traj;
            }
        double rmin = y[0][0];
        for (double x : y[0]) rmin = std::min(rmin, x);
        if (!(rmin > cfg.rho_floor)) {
            traj.termination = Termination::rho_floor;
            traj.note = "density fell below rho_floor";
            return traj;
        }
        if (step % cfg.output_stride == 0) {
            if (!record(step)) return traj;
        }
    }
    return traj;
}

}  // namespace

const char* to_string(FlowKind k) {
    switch (k) {
        case FlowKind::heat: return "heat";
        case FlowKind::geodesic: return "geodesic";
        case FlowKind::langevin: return "langevin";
        case FlowKind::euler: return "euler";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blow_up: return "blow_up";
        case Termination::rho_floor: return "rho_floor";
        case Termination::hess_ceiling: return "hess_ceiling";
    }
    return "?";
}

FlowTrajectory run_heat(const ScalarField& rho0, const SolverConfig& cfg) {
    validate_density(rho0);
    validate_stability(*rho0.geom, cfg, FlowKind::heat, 0.0, 0.0);
    FlowProblem prob{rho0.geom.get(), FlowKind::heat, 0.0, cfg.dealias};
    return integrate(prob, {rho0.v}, cfg, 0.0, rho0.geom);
}

FlowTrajectory run_geodesic(const ScalarField& rho0, const ScalarField& phi0,
                            const SolverConfig& cfg) {
    validate_density(rho0);
    VectorField g0 = grad(phi0);
    double vmax = 0.0;
    for (const auto& comp : g0.comp) vmax = std::max(vmax, sup_norm(comp));
    validate_stability(*rho0.geom, cfg, FlowKind::geodesic,
                       std::numeric_limits<double>::infinity(), vmax);
    FlowProblem prob{rho0.geom.get(), FlowKind::geodesic,
                     std::numeric_limits<double>::infinity(), cfg.dealias};
    return integrate(prob, {rho0.v, phi0.v}, cfg, std::numeric_limits<double>::infinity(),
                     rho0.geom);
}

FlowTrajectory run_langevin(const ScalarField& rho0, const ScalarField& phi0, double c,
                            const SolverConfig& cfg) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("run_langevin: c must be finite and positive");
    validate_density(rho0);
    VectorField g0 = grad(phi0);
    double vmax = 0.0;
    for (const auto& comp : g0.comp) vmax = std::max(vmax, sup_norm(comp));
    validate_stability(*rho0.geom, cfg, FlowKind::langevin, c, vmax);
    FlowProblem prob{rho0.geom.get(), FlowKind::langevin, c, cfg.dealias};
    return integrate(prob, {rho0.v, phi0.v}, cfg, c, rho0.geom);
}

FlowTrajectory run_euler_damped(const ScalarField& rho0, const VectorField& u0, double c,
                                const SolverConfig& cfg) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("run_euler_damped: c must be finite and positive");
    validate_density(rho0);
    double vmax = 0.0;
    for (const auto& comp : u0.comp) vmax = std::max(vmax, sup_norm(comp));
    validate_stability(*rho0.geom, cfg, FlowKind::euler, c, vmax);
    FlowProblem prob{rho0.geom.get(), FlowKind::euler, c, cfg.dealias};
    StateVec y{rho0.v};
    for (const auto& comp : u0.comp) y.push_back(comp);
    return integrate(prob, y, cfg, c, rho0.geom);
}

ScalarField vorticity(const VectorField& u) {
    const auto& g = *u.geom;
    if (g.dim() == 1) return make_scalar(u.geom, 0.0);
    auto d0u1 = g.spectral().derivative(u.comp[1], 1, 0);
    auto d1u0 = g.spectral().derivative(u.comp[0], 0, 1);
    std::vector<double> w(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) w[i] = d0u1[i] - d1u0[i];
    return ScalarField{u.geom, std::move(w)};
}

double closedness_defect(const VectorField& u) { return sup_norm(vorticity(u).v); }

double l2_mu_norm(const ScalarField& h) {
    ScalarField sq{h.geom, h.v};
    for (double& x : sq.v) x *= x;
    return std::sqrt(integrate_mu(sq));
}

double grad_sup_norm(const VectorField& u) {
    const auto& g = *u.geom;
    std::vector<double> fro(g.nodes(), 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        auto da = gradient_of(g, u.comp[a]);
        for (int b = 0; b < g.dim(); ++b)
            for (int i = 0; i < g.nodes(); ++i) fro[i] += da[b][i] * da[b][i];
    }
    double s = 0.0;
    for (double x : fro) s = std::max(s, x);
    return std::sqrt(s);
}

double hess_sup_norm(const ScalarField& phi) {
    SymTensorField H = hess(phi);
    const int n = phi.geom->dim();
    double s = 0.0;
    for (int i = 0; i < phi.geom->nodes(); ++i) {
        double fro = 0.0;
        if (n == 1) {
            fro = H.comp[0][i] * H.comp[0][i];
        } else {
            fro = H.comp[0][i] * H.comp[0][i] + 2.0 * H.comp[1][i] * H.comp[1][i] +
                  H.comp[2][i] * H.comp[2][i];
        }
        s = std::max(s, fro);
    }
    return std::sqrt(s);
}

ScalarField hopf_lax_oracle(const ScalarField& phi0, double t, int refine) {
    if (!(t > 0.0)) throw std::invalid_argument("hopf_lax_oracle: t must be positive");
    const auto& g = *phi0.geom;
    if (refine <= 0) {
        if (g.dim() == 1) {
            refine = 1;
            while (g.grid_size(0) * refine < 1024) refine *= 2;
        } else {
            refine = 2;
        }
    }
    const auto fine = g.spectral().upsample(phi0.v, refine);

    const int n0 = g.grid_size(0);
    const int n1 = g.dim() == 2 ? g.grid_size(1) : 1;
    const int m0 = n0 * refine;
    const int m1 = g.dim() == 2 ? n1 * refine : 1;
    const double h0f = g.period(0) / m0;
    const double h1f = g.dim() == 2 ? g.period(1) / m1 : 0.0;

    auto per_d2 = [](double d, double L) {
        d = std::fmod(std::abs(d), L);
        d = std::min(d, L - d);
        return d * d;
    };

    std::vector<double> out(g.nodes());
    const double inv2t = 0.5 / t;
    for (int i0 = 0; i0 < n0; ++i0) {
        const double x0 = g.period(0) / n0 * i0;
        for (int i1 = 0; i1 < n1; ++i1) {
            const double x1 = g.dim() == 2 ? g.period(1) / n1 * i1 : 0.0;
            double best = std::numeric_limits<double>::infinity();
            for (int j0 = 0; j0 < m0; ++j0) {
                const double d2a = per_d2(x0 - j0 * h0f, g.period(0));
                if (g.dim() == 1) {
                    best = std::min(best, fine[j0] + d2a * inv2t);
                } else {
                    const double base = d2a * inv2t;
                    const double* row = fine.data() + static_cast<size_t>(j0) * m1;
                    for (int j1 = 0; j1 < m1; ++j1) {
                        const double val =
                            row[j1] + base + per_d2(x1 - j1 * h1f, g.period(1)) * inv2t;
                        if (val < best) best = val;
                    }
                }
            }
            out[i0 * n1 + i1] = best;
        }
    }
    return ScalarField{phi0.geom, std::move(out)};
}

std::vector<ScalarField> recover_potential(const FlowTrajectory& traj, const ScalarField& phi0,
                                           double closedness_tol) {
    if (traj.kind != FlowKind::euler)
        throw std::domain_error("recover_potential: needs an Euler trajectory");
    if (traj.states.empty()) throw std::domain_error("recover_potential: empty trajectory");
    if (closedness_defect(*traj.states.front().u) > closedness_tol)
        throw std::domain_error("recover_potential: u0 is not a gradient (closedness defect)");

    const auto& g = *traj.geom;
    const double gamma = 1.0 / (traj.c * traj.c);
    const double t0 = traj.states.front().t;

    // integrand g(s) = gamma (log rho + 1) - |u|^2 / 2, weighted by e^{gamma s}
    auto integrand = [&](const FlowState& st) {
        std::vector<double> v(g.nodes());
        for (int i = 0; i < g.nodes(); ++i) {
            double u2 = 0.0;
            for (int a = 0; a < g.dim(); ++a) u2 += st.u->comp[a][i] * st.u->comp[a][i];
            v[i] = gamma * (std::log(st.rho.v[i]) + 1.0) - 0.5 * u2;
        }
        return v;
    };

    std::vector<ScalarField> out;
    std::vector<double> acc(g.nodes(), 0.0);
    std::vector<double> prev = integrand(traj.states.front());
    double prev_t = t0;
    for (size_t s = 0; s < traj.states.size(); ++s) {
        const auto& st = traj.states[s];
        if (s > 0) {
            std::vector<double> cur = integrand(st);
            const double hw = 0.5 * (st.t - prev_t);
            const double wp = std::exp(gamma * (prev_t - t0));
            const double wc = std::exp(gamma * (st.t - t0));
            for (int i = 0; i < g.nodes(); ++i) acc[i] += hw * (wp * prev[i] + wc * cur[i]);
            prev = std::move(cur);
            prev_t = st.t;
        }
        const double decay = std::exp(-gamma * (st.t - t0));
        ScalarField phi{traj.geom, std::vector<double>(g.nodes())};
        for (int i = 0; i < g.nodes(); ++i) phi.v[i] = decay * (phi0.v[i] + acc[i]);
        out.push_back(std::move(phi));
    }
    return out;
}

ScalarField gauge_zero_mean(const ScalarField& phi) {
    const double mean = integrate_mu(phi) / mu_total(phi.geom);
    ScalarField out = phi;
    for (double& x : out.v) x -= mean;
    return out;
}

}  // namespace ottolab

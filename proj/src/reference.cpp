#include "ottolab/reference.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ottolab {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kLog4Pi = 2.5310242469692907929778915942695;

struct OdeState {
    double u, up, beta;
};

OdeState ode_rhs(const OdeState& s, double c, int m) {
    OdeState d;
    d.u = s.up;
    d.up = (-s.up - 0.5 / s.u) / (c * c);
    d.beta = (-s.beta - m * std::log(s.u) - 0.5 * m * kLog4Pi + 1.0) / (c * c);
    return d;
}

OdeState rk4_step(const OdeState& s, double h, double c, int m) {
    auto add = [](const OdeState& a, const OdeState& b, double w) {
        return OdeState{a.u + w * b.u, a.up + w * b.up, a.beta + w * b.beta};
    };
    OdeState k1 = ode_rhs(s, c, m);
    OdeState k2 = ode_rhs(add(s, k1, 0.5 * h), c, m);
    OdeState k3 = ode_rhs(add(s, k2, 0.5 * h), c, m);
    OdeState k4 = ode_rhs(add(s, k3, h), c, m);
    OdeState out = s;
    out.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    out.up += h / 6.0 * (k1.up + 2.0 * k2.up + 2.0 * k3.up + k4.up);
    out.beta += h / 6.0 * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
    return out;
}

int bracket_index(const std::vector<double>& t, double tq) {
    if (t.empty()) throw std::domain_error("reference: empty model");
    if (tq < t.front() - 1e-12 || tq > t.back() + 1e-12)
        throw std::domain_error("reference: query time outside model horizon");
    const double h = t.size() > 1 ? t[1] - t[0] : 1.0;
    int i = static_cast<int>(std::floor((tq - t.front()) / h));
    if (i < 0) i = 0;
    if (i >= static_cast<int>(t.size()) - 1) i = static_cast<int>(t.size()) - 2;
    return i;
}

// cubic Hermite using stored derivatives
double hermite(double t0, double h, double y0, double y1, double d0, double d1, double tq) {
    const double s = (tq - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

ReferenceModel solve_u_beta(double c, int m, double u0, double up0, double beta0, double t_end,
                            double dt) {
    if (!(u0 > 0.0)) throw std::domain_error("solve_u_beta: u(0) must be positive");
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::domain_error("solve_u_beta: c must be finite and positive (use presets for 0/inf)");
    if (!(dt > 0.0) || !(t_end > 0.0)) throw std::domain_error("solve_u_beta: bad time grid");

    ReferenceModel model;
    model.kind = ReferenceModel::Kind::finite_c;
    model.c = c;
    model.m = m;
    model.dt = dt;

    OdeState s{u0, up0, beta0};
    const int nsteps = static_cast<int>(std::llround(t_end / dt));
    model.t.push_back(0.0);
    model.u.push_back(s.u);
    model.up.push_back(s.up);
    model.beta.push_back(s.beta);
    for (int i = 1; i <= nsteps; ++i) {
        s = rk4_step(s, dt, c, m);
        if (!(s.u > model.u_floor) || !std::isfinite(s.u) || !std::isfinite(s.beta)) break;
        model.t.push_back(i * dt);
        model.u.push_back(s.u);
        model.up.push_back(s.up);
        model.beta.push_back(s.beta);
    }
    model.t_horizon = model.t.back();
    return model;
}

ReferenceModel reference_preset_c_zero(int m, double T, double t_end, double dt) {
    if (!(T > 0.0) || !(t_end < T)) throw std::domain_error("reference preset c=0: need t_end < T");
    ReferenceModel model;
    model.kind = ReferenceModel::Kind::c_zero;
    model.c = 0.0;
    model.m = m;
    model.T_preset = T;
    model.dt = dt;
    const int nsteps = static_cast<int>(std::llround(t_end / dt));
    for (int i = 0; i <= nsteps; ++i) {
        const double tq = i * dt;
        model.t.push_back(tq);
        model.u.push_back(std::sqrt(T - tq));
        model.up.push_back(-0.5 / std::sqrt(T - tq));
        model.beta.push_back(-0.5 * m * std::log(4.0 * kPi * (T - tq)) + 1.0);
    }
    model.t_horizon = model.t.back();
    return model;
}

ReferenceModel reference_preset_c_infinity(int m, double t_end, double dt) {
    ReferenceModel model;
    model.kind = ReferenceModel::Kind::c_infinity;
    model.c = std::numeric_limits<double>::infinity();
    model.m = m;
    model.dt = dt;
    const int nsteps = static_cast<int>(std::llround(t_end / dt));
    for (int i = 1; i <= nsteps; ++i) {
        const double tq = i * dt;
        model.t.push_back(tq);
        model.u.push_back(tq);
        model.up.push_back(1.0);
        model.beta.push_back(0.0);
    }
    model.t_horizon = model.t.back();
    return model;
}

double ReferenceModel::u_at(double tq) const {
    switch (kind) {
        case Kind::c_zero: return std::sqrt(T_preset - tq);
        case Kind::c_infinity: return tq;
        case Kind::finite_c: break;
    }
    const int i = bracket_index(t, tq);
    return hermite(t[i], dt, u[i], u[i + 1], up[i], up[i + 1], tq);
}

double ReferenceModel::up_at(double tq) const {
    switch (kind) {
        case Kind::c_zero: return -0.5 / std::sqrt(T_preset - tq);
        case Kind::c_infinity: return 1.0;
        case Kind::finite_c: break;
    }
    const int i = bracket_index(t, tq);
    auto acc = [&](int j) { return (-up[j] - 0.5 / u[j]) / (c * c); };
    return hermite(t[i], dt, up[i], up[i + 1], acc(i), acc(i + 1), tq);
}

double ReferenceModel::upp_at(double tq) const {
    switch (kind) {
        case Kind::c_zero: return -0.25 / std::pow(T_preset - tq, 1.5);
        case Kind::c_infinity: return 0.0;
        case Kind::finite_c: break;
    }
    return (-up_at(tq) - 0.5 / u_at(tq)) / (c * c);
}

double ReferenceModel::beta_at(double tq) const {
    switch (kind) {
        case Kind::c_zero: return -0.5 * m * std::log(4.0 * kPi * (T_preset - tq)) + 1.0;
        case Kind::c_infinity: return 0.0;
        case Kind::finite_c: break;
    }
    const int i = bracket_index(t, tq);
    auto bdot = [&](int j) {
        return (-beta[j] - m * std::log(u[j]) - 0.5 * m * kLog4Pi + 1.0) / (c * c);
    };
    return hermite(t[i], dt, beta[i], beta[i + 1], bdot(i), bdot(i + 1), tq);
}

double ReferenceModel::beta_dot_at(double tq) const {
    switch (kind) {
        case Kind::c_zero: return 0.5 * m / (T_preset - tq);
        case Kind::c_infinity: return 0.0;
        case Kind::finite_c: break;
    }
    return (-beta_at(tq) - m * std::log(u_at(tq)) - 0.5 * m * kLog4Pi + 1.0) / (c * c);
}

ModelPointEval eval_model(const ReferenceModel& model, double tq, const std::vector<double>& x) {
    if (tq > model.t_horizon + 1e-12)
        throw std::domain_error("eval_model: time beyond model horizon");
    const int m = model.m;
    if (static_cast<int>(x.size()) != m) throw std::domain_error("eval_model: point dimension != m");

    const double u = model.u_at(tq);
    const double alpha = model.alpha_at(tq);
    const double beta = model.beta_at(tq);
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;

    ModelPointEval e;
    e.rho = std::pow(4.0 * kPi * u * u, -0.5 * m) * std::exp(-r2 / (4.0 * u * u));
    e.phi = 0.5 * alpha * r2 + beta;
    for (int a = 0; a < m; ++a) {
        e.grad_phi[a] = alpha * x[a];
        e.grad_log_rho[a] = -x[a] / (2.0 * u * u);
    }
    e.hess_phi_diag = alpha;
    e.dt_rho = e.rho * alpha * (r2 / (2.0 * u * u) - m);
    const double alpha_dot = model.upp_at(tq) / u - alpha * alpha;
    e.dt_phi = 0.5 * alpha_dot * r2 + model.beta_dot_at(tq);
    return e;
}

ModelResidual model_residual(const ReferenceModel& model, int n_samples, unsigned long seed,
                             double x_radius, int transport_sign) {
    if (model.kind != ReferenceModel::Kind::finite_c && model.kind != ReferenceModel::Kind::c_infinity &&
        model.kind != ReferenceModel::Kind::c_zero)
        throw std::domain_error("model_residual: bad model");
    const int n = static_cast<int>(model.t.size());
    if (n < 7) throw std::domain_error("model_residual: model too short for FD stencil");

    // Presets are singular at one end (u = t at 0, u = sqrt(T-t) at T); keep the
    // finite-difference stencil in the regular half of the sampled interval.
    int lo = 2, hi = n - 3;
    if (model.kind == ReferenceModel::Kind::c_infinity) lo = std::max(lo, n / 2);
    if (model.kind == ReferenceModel::Kind::c_zero) hi = std::min(hi, n / 2);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> tpick(lo, hi);
    std::uniform_real_distribution<double> xpick(-x_radius, x_radius);

    const int m = model.m;
    const double h = model.dt;
    ModelResidual res;
    for (int s = 0; s < n_samples; ++s) {
        const int i = tpick(rng);
        std::vector<double> x(m);
        // first few samples pinned at the origin / late times, the rest random
        if (s < 2) {
            for (int a = 0; a < m; ++a) x[a] = 0.0;
        } else {
            for (int a = 0; a < m; ++a) x[a] = xpick(rng);
        }
        const int it = (s == 0) ? hi : i;

        std::array<ModelPointEval, 5> st;
        for (int j = -2; j <= 2; ++j) st[j + 2] = eval_model(model, model.t[it + j], x);
        const auto& e = st[2];

        const double dt_rho_fd =
            (-st[4].rho + 8.0 * st[3].rho - 8.0 * st[1].rho + st[0].rho) / (12.0 * h);
        const double dt_phi_fd =
            (-st[4].phi + 8.0 * st[3].phi - 8.0 * st[1].phi + st[0].phi) / (12.0 * h);

        // div(rho grad phi) = rho (grad log rho . grad phi + m alpha)
        double gdot = 0.0, gp2 = 0.0;
        for (int a = 0; a < m; ++a) {
            gdot += e.grad_log_rho[a] * e.grad_phi[a];
            gp2 += e.grad_phi[a] * e.grad_phi[a];
        }
        const double div_rho_gradphi = e.rho * (gdot + m * e.hess_phi_diag);
        const double r_transport = dt_rho_fd + transport_sign * div_rho_gradphi;

        double r_hj;
        if (model.kind == ReferenceModel::Kind::c_infinity) {
            r_hj = dt_phi_fd + 0.5 * gp2;
        } else {
            const double c2 = model.c * model.c;
            r_hj = c2 * (dt_phi_fd + 0.5 * gp2) + e.phi - std::log(e.rho) - 1.0;
        }
        res.transport = std::max(res.transport, std::abs(r_transport));
        res.hamilton_jacobi = std::max(res.hamilton_jacobi, std::abs(r_hj));
    }
    return res;
}

ModelFunctionals model_closed_forms(const ReferenceModel& model, double tq) {
    if (tq > model.t_horizon + 1e-12)
        throw std::domain_error("model_closed_forms: time beyond model horizon");
    const int m = model.m;
    const double u = model.u_at(tq);
    const double up = model.up_at(tq);
    const double alpha = up / u;

    ModelFunctionals f;
    f.entropy = -0.5 * m * (1.0 + std::log(4.0 * kPi * u * u));
    f.fisher = 0.5 * m / (u * u);
    f.kinetic = 2.0 * m * up * up;
    if (model.kind == ReferenceModel::Kind::finite_c) {
        f.hamiltonian = 0.5 * model.c * model.c * f.kinetic + f.entropy;
        f.hamiltonian_alt = 0.5 * model.c * model.c * m * up * up + f.entropy;
    } else if (model.kind == ReferenceModel::Kind::c_zero) {
        f.hamiltonian = f.entropy;
        f.hamiltonian_alt = f.entropy;
    } else {
        f.hamiltonian = std::numeric_limits<double>::quiet_NaN();
        f.hamiltonian_alt = f.hamiltonian;
    }
    f.dW_model = -m * alpha * alpha;
    return f;
}

}  // namespace ottolab

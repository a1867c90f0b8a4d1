#include "ottolab/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ottolab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLog4Pi = 2.5310242469692907929778915942695;

std::vector<double> log_positive(const ScalarField& rho, const char* who) {
    std::vector<double> out(rho.v.size());
    for (size_t i = 0; i < rho.v.size(); ++i) {
        if (!(rho.v[i] > 0.0)) throw std::domain_error(std::string(who) + ": nonpositive density node");
        out[i] = std::log(rho.v[i]);
    }
    return out;
}

double weighted_integral(const ScalarField& rho, const std::vector<double>& integrand) {
    ScalarField tmp{rho.geom, std::vector<double>(rho.v.size())};
    for (size_t i = 0; i < rho.v.size(); ++i) tmp.v[i] = rho.v[i] * integrand[i];
    return integrate_mu(tmp);
}

}  // namespace

double boltzmann_entropy(const ScalarField& rho) {
    auto lr = log_positive(rho, "boltzmann_entropy");
    return weighted_integral(rho, lr);
}

double fisher_information(const ScalarField& rho) {
    log_positive(rho, "fisher_information");  // positivity check
    VectorField g = grad(rho);
    const auto& v = rho.v;
    std::vector<double> integrand(v.size(), 0.0);
    for (int a = 0; a < rho.geom->dim(); ++a)
        for (size_t i = 0; i < v.size(); ++i)
            integrand[i] += g.comp[a][i] * g.comp[a][i] / (v[i] * v[i]);
    return weighted_integral(rho, integrand);
}

double kinetic(const ScalarField& rho, const ScalarField& phi) {
    VectorField g = grad(phi);
    std::vector<double> integrand(rho.v.size(), 0.0);
    for (int a = 0; a < rho.geom->dim(); ++a)
        for (size_t i = 0; i < rho.v.size(); ++i) integrand[i] += g.comp[a][i] * g.comp[a][i];
    return weighted_integral(rho, integrand);
}

double kinetic_u(const ScalarField& rho, const VectorField& u) {
    std::vector<double> integrand(rho.v.size(), 0.0);
    for (int a = 0; a < rho.geom->dim(); ++a)
        for (size_t i = 0; i < rho.v.size(); ++i) integrand[i] += u.comp[a][i] * u.comp[a][i];
    return weighted_integral(rho, integrand);
}

double hamiltonian(const ScalarField& rho, const ScalarField& phi, double c) {
    return 0.5 * c * c * kinetic(rho, phi) + boltzmann_entropy(rho);
}

double entropy_slope_quadrature(const ScalarField& rho, const ScalarField& phi) {
    VectorField gp = grad(phi);
    VectorField gr = grad(rho);
    ScalarField dot{rho.geom, std::vector<double>(rho.v.size(), 0.0)};
    for (int a = 0; a < rho.geom->dim(); ++a)
        for (size_t i = 0; i < rho.v.size(); ++i) dot.v[i] += gp.comp[a][i] * gr.comp[a][i];
    return integrate_mu(dot);
}

double wm_rhs_integral(const ScalarField& rho, const ScalarField& s, double m, double scale,
                       double a, double shift, double K_sub) {
    const auto& geom = *rho.geom;
    const int n = geom.dim();
    if (m < n) throw std::domain_error("wm_rhs_integral: m < n");
    const bool equal = m == n;
    if (equal && !geom.weight_is_constant())
        throw std::domain_error("wm_rhs_integral: m = n requires constant weight");

    VectorField G = grad(s);
    SymTensorField H = hess(s);
    const int nn = geom.nodes();

    std::vector<double> integrand(nn, 0.0);
    for (int i = 0; i < nn; ++i) {
        double fro;  // |Hess s - a g|^2
        if (n == 1) {
            const double d = H.comp[0][i] - a;
            fro = d * d;
        } else {
            const double dxx = H.comp[0][i] - a, dyy = H.comp[2][i] - a, dxy = H.comp[1][i];
            fro = dxx * dxx + 2.0 * dxy * dxy + dyy * dyy;
        }
        double ric = 0.0, g2 = 0.0, gf = 0.0;
        for (int b = 0; b < n; ++b) {
            g2 += G.comp[b][i] * G.comp[b][i];
            gf += G.comp[b][i] * geom.grad_f(b)[i];
        }
        if (n == 1) {
            ric = geom.hess_f(0, 0)[i] * G.comp[0][i] * G.comp[0][i];
        } else {
            const double x = G.comp[0][i], y = G.comp[1][i];
            ric = geom.hess_f(0, 0)[i] * x * x + 2.0 * geom.hess_f(0, 1)[i] * x * y +
                  geom.hess_f(1, 1)[i] * y * y;
        }
        if (!equal) ric -= gf * gf / (m - n);
        integrand[i] = fro + ric - K_sub * g2;
        if (!equal) {
            const double sq = gf + shift;
            integrand[i] += sq * sq / (m - n);
        }
    }
    return scale * weighted_integral(rho, integrand);
}

double rhs_geo_wm(const ScalarField& rho, const ScalarField& phi, double m, double t) {
    const int n = rho.geom->dim();
    return wm_rhs_integral(rho, phi, m, t, 1.0 / t, (m - n) / t);
}

double rhs_heat_wm(const ScalarField& u, double m, double t) {
    const int n = u.geom->dim();
    ScalarField logu{u.geom, log_positive(u, "rhs_heat_wm")};
    return wm_rhs_integral(u, logu, m, 2.0 * t, -0.5 / t, -0.5 * (m - n) / t);
}

double rhs_heat_cdkm(const ScalarField& rho, double m, double K, double t) {
    const int n = rho.geom->dim();
    ScalarField logr{rho.geom, log_positive(rho, "rhs_heat_cdkm")};
    const double a = 0.5 * (K + 1.0 / t);
    return wm_rhs_integral(rho, logr, m, 2.0, a, (m - n) * a, K);
}

double rhs_langevin_mf3(const ScalarField& rho, const ScalarField& phi, double m, double alpha,
                        double c) {
    const int n = rho.geom->dim();
    return wm_rhs_integral(rho, phi, m, 1.0, alpha, (m - n) * alpha) +
           fisher_information(rho) / (c * c);
}

double rhs_dissipation(const ScalarField& rho, const ScalarField& phi) {
    // a = 0, shift irrelevant, m = "n with Ric(L)" : use the generic with m -> n
    // but keep Ric(L) = Hess f (no (m-n) subtraction). Direct evaluation:
    const auto& geom = *rho.geom;
    const int n = geom.dim();
    VectorField G = grad(phi);
    SymTensorField H = hess(phi);
    std::vector<double> integrand(geom.nodes(), 0.0);
    for (int i = 0; i < geom.nodes(); ++i) {
        double fro;
        if (n == 1) {
            fro = H.comp[0][i] * H.comp[0][i];
        } else {
            fro = H.comp[0][i] * H.comp[0][i] + 2.0 * H.comp[1][i] * H.comp[1][i] +
                  H.comp[2][i] * H.comp[2][i];
        }
        double ric;
        if (n == 1) {
            ric = geom.hess_f(0, 0)[i] * G.comp[0][i] * G.comp[0][i];
        } else {
            const double x = G.comp[0][i], y = G.comp[1][i];
            ric = geom.hess_f(0, 0)[i] * x * x + 2.0 * geom.hess_f(0, 1)[i] * x * y +
                  geom.hess_f(1, 1)[i] * y * y;
        }
        integrand[i] = fro + ric;
    }
    return weighted_integral(rho, integrand);
}

double rhs_hamiltonian_2nd(const ScalarField& rho, const ScalarField& phi, double c) {
    const auto& geom = *rho.geom;
    ScalarField logr{rho.geom, log_positive(rho, "rhs_hamiltonian_2nd")};
    VectorField gp = grad(phi);
    VectorField gl = grad(logr);
    std::vector<double> integrand(geom.nodes(), 0.0);
    for (int a = 0; a < geom.dim(); ++a)
        for (int i = 0; i < geom.nodes(); ++i) {
            const double d = gp.comp[a][i] - gl.comp[a][i];
            integrand[i] += d * d;
        }
    const double relax = weighted_integral(rho, integrand) / (c * c);
    return 2.0 * (relax + rhs_dissipation(rho, phi));
}

double rhs_cs_bound(double fisher, double m, double K, double t) {
    const double z = fisher + 0.5 * m * (K + 1.0 / t);
    return 2.0 / m * z * z;
}

double dh_displayed(const ScalarField& rho, const ScalarField& phi) {
    return 2.0 * entropy_slope_quadrature(rho, phi) - kinetic(rho, phi);
}

double dh_adjoint_form(const ScalarField& rho, const ScalarField& phi) {
    ScalarField lphi = witten_laplacian(phi);
    VectorField gp = grad(phi);
    std::vector<double> integrand(rho.v.size());
    for (size_t i = 0; i < rho.v.size(); ++i) {
        double g2 = 0.0;
        for (int a = 0; a < rho.geom->dim(); ++a) g2 += gp.comp[a][i] * gp.comp[a][i];
        integrand[i] = -(2.0 * lphi.v[i] + g2);
    }
    return weighted_integral(rho, integrand);
}

EntropySeries build_entropy_series(const FlowTrajectory& traj, const SeriesOptions& opt) {
    if (traj.states.size() < 2) throw std::domain_error("build_entropy_series: trajectory too short");
    const size_t nst = traj.states.size();
    const double t_last = traj.states.back().t;
    const double c = opt.c != 0.0 ? opt.c : traj.c;

    EntropySeries s;
    auto col = [&](const std::string& name) -> std::vector<double>& {
        auto& v = s.cols[name];
        if (v.empty()) v.assign(nst, kNaN);
        return v;
    };

    for (size_t j = 0; j < nst; ++j) {
        const FlowState& st = opt.reversed ? traj.states[nst - 1 - j] : traj.states[j];
        const double tj = opt.reversed ? t_last - st.t : st.t;
        s.times.push_back(tj);

        col("Ent")[j] = boltzmann_entropy(st.rho);
        col("Fisher")[j] = fisher_information(st.rho);
        col("mass")[j] = integrate_mu(st.rho);
        double rmin = st.rho.v[0];
        for (double x : st.rho.v) rmin = std::min(rmin, x);
        col("min_rho")[j] = rmin;

        if (st.phi) {
            col("Kin")[j] = kinetic(st.rho, *st.phi);
            if (traj.kind == FlowKind::langevin) col("H")[j] = hamiltonian(st.rho, *st.phi, c);
            col("hess_sup")[j] = hess_sup_norm(*st.phi);
        } else if (st.u) {
            col("Kin")[j] = kinetic_u(st.rho, *st.u);
            ScalarField w = vorticity(*st.u);
            col("vorticity_L2")[j] = l2_mu_norm(w);
            col("vorticity_sup")[j] = sup_norm(w.v);
            col("grad_u_sup")[j] = grad_sup_norm(*st.u);
        }

        if (!opt.with_rhs) continue;
        switch (traj.kind) {
            case FlowKind::heat:
                if (opt.reversed) {
                    if (tj > 0.0) {
                        col("rhs_heat_cdkm")[j] = rhs_heat_cdkm(st.rho, opt.m, opt.K, tj);
                        col("rhs_cs_bound")[j] = rhs_cs_bound(col("Fisher")[j], opt.m, opt.K, tj);
                    }
                } else {
                    if (tj > 0.0) col("rhs_heat_wm")[j] = rhs_heat_wm(st.rho, opt.m, tj);
                }
                break;
            case FlowKind::geodesic:
                if (tj > 0.0) col("rhs_geo_wm")[j] = rhs_geo_wm(st.rho, *st.phi, opt.m, tj);
                col("rhs_dissipation")[j] = rhs_dissipation(st.rho, *st.phi);
                col("dEnt_quad")[j] = entropy_slope_quadrature(st.rho, *st.phi);
                break;
            case FlowKind::langevin: {
                col("rhs_dissipation")[j] = rhs_dissipation(st.rho, *st.phi);
                col("rhs_hamiltonian_2nd")[j] = rhs_hamiltonian_2nd(st.rho, *st.phi, c);
                col("dH_displayed")[j] = dh_displayed(st.rho, *st.phi);
                col("dH_alt")[j] = dh_adjoint_form(st.rho, *st.phi);
                col("dEnt_quad")[j] = entropy_slope_quadrature(st.rho, *st.phi);
                if (opt.alpha) {
                    const double a = opt.alpha(tj);
                    col("alpha")[j] = a;
                    col("rhs_langevin_mf3")[j] = rhs_langevin_mf3(st.rho, *st.phi, opt.m, a, c);
                }
                break;
            }
            case FlowKind::euler:
                break;
        }
    }
    return s;
}

void add_derivative_columns(EntropySeries& s) {
    auto d1 = differentiate_series(s.at("Ent"), s.times, 1);
    auto d2 = differentiate_series(s.at("Ent"), s.times, 2);
    s.cols["dEnt"] = d1.value;
    s.cols["d2Ent"] = d2.value;
    s.valid_begin = d1.valid_begin;
    s.valid_end = d1.valid_end;
    if (s.has("H")) {
        s.cols["dH"] = differentiate_series(s.at("H"), s.times, 1).value;
        s.cols["d2H"] = differentiate_series(s.at("H"), s.times, 2).value;
    }
}

void add_hm_wm(EntropySeries& s, WmMode mode, double m) {
    bool any_positive = false;
    for (double t : s.times) any_positive |= t > 0.0;
    if (!any_positive) throw std::domain_error("add_hm_wm: needs positive times");
    if (!s.has("dEnt")) add_derivative_columns(s);

    const size_t n = s.times.size();
    std::vector<double> hm(n, kNaN), wm(n, kNaN);
    const double texp = mode == WmMode::geodesic ? 2.0 : 1.0;
    for (size_t j = 0; j < n; ++j) {
        const double t = s.times[j];
        if (!(t > 0.0)) continue;
        hm[j] = s.at("Ent")[j] + 0.5 * m * (1.0 + kLog4Pi + texp * std::log(t));
        // W_m = H_m + t dH_m/dt, with dH_m = dEnt + m texp / (2t)
        wm[j] = hm[j] + t * s.at("dEnt")[j] + 0.5 * m * texp;
    }
    s.cols["Hm"] = hm;
    s.cols["Wm"] = wm;
    // dW_m/dt assembled from Ent derivatives (avoids differentiating a NaN-padded series)
    std::vector<double> dwm(n, kNaN);
    for (size_t j = 0; j < n; ++j) {
        const double t = s.times[j];
        if (!(t > 0.0)) continue;
        const double de = s.at("dEnt")[j], d2e = s.at("d2Ent")[j];
        dwm[j] = t * d2e + 2.0 * de + 0.5 * m * texp / t;
    }
    s.cols["dWm"] = dwm;
}

void add_w_general(EntropySeries& s, const AlphaFn& alpha, double c, double m) {
    if (!s.has("dEnt")) add_derivative_columns(s);
    const size_t n = s.times.size();
    const double inv_c2 = 1.0 / (c * c);

    // integrands on the full grid; FD-invalid rows at the ends fall back to
    // one-sided neighbors for the running integral only
    std::vector<double> w(n, kNaN), direct(n, kNaN), excess(n, kNaN);
    std::vector<double> integrand(n, 0.0), fisher(n, 0.0), al(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
        al[j] = alpha(s.times[j]);
        fisher[j] = s.at("Fisher")[j];
        const double de = s.at("dEnt")[j];
        integrand[j] = std::isnan(de) ? 0.0 : (2.0 * al[j] + inv_c2) * de;
    }
    auto acc = cumulative_trapezoid(integrand, s.times);
    auto accF = cumulative_trapezoid(fisher, s.times);
    for (size_t j = 0; j < n; ++j) {
        const double de = s.at("dEnt")[j], d2e = s.at("d2Ent")[j];
        if (std::isnan(de)) continue;
        w[j] = de + acc[j] - inv_c2 * accF[j];
        direct[j] = d2e + (2.0 * al[j] + inv_c2) * de - inv_c2 * fisher[j];
        excess[j] = direct[j] + m * al[j] * al[j];
    }
    s.cols["W_gen"] = w;
    s.cols["dW_gen_direct"] = direct;
    s.cols["dW_gen_excess"] = excess;
    s.cols["alpha"] = al;

    // FD of the trapezoid W series where defined (interior of the valid range)
    std::vector<double> wfd(n, kNaN);
    const int vb = s.valid_begin, ve = s.valid_end;
    const double h = s.times[1] - s.times[0];
    for (int j = vb + 2; j < ve - 2; ++j)
        wfd[j] = (-w[j + 2] + 8.0 * w[j + 1] - 8.0 * w[j - 1] + w[j - 2]) / (12.0 * h);
    s.cols["dW_gen_fd"] = wfd;
}

void add_w_exponential(EntropySeries& s, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::domain_error("add_w_exponential: c must be finite and positive");
    if (!s.has("dEnt")) add_derivative_columns(s);
    const size_t n = s.times.size();
    const double c2 = c * c;

    std::vector<double> whc(n, kNaN), wentc(n, kNaN), rhs_h(n, kNaN), rhs_e(n, kNaN);
    for (size_t j = 0; j < n; ++j) {
        const double t = s.times[j];
        const double gamma2 = s.at("rhs_dissipation")[j];
        const double fisher = s.at("Fisher")[j];
        if (s.has("H") && !std::isnan(s.at("dH")[j]))
            whc[j] = s.at("H")[j] + 0.5 * c2 * (1.0 - std::exp(2.0 * t / c2)) * s.at("dH")[j];
        if (!std::isnan(s.at("dEnt")[j]))
            wentc[j] = s.at("Ent")[j] + c2 * (1.0 - std::exp(t / c2)) * s.at("dEnt")[j];
        rhs_h[j] = (1.0 - std::exp(2.0 * t / c2)) * (fisher + c2 * gamma2);
        rhs_e[j] = (1.0 - std::exp(t / c2)) * (fisher + c2 * gamma2);
    }
    s.cols["W_Hc"] = whc;
    s.cols["W_Entc"] = wentc;
    s.cols["rhs_w_exp_H"] = rhs_h;
    s.cols["rhs_w_exp_Ent"] = rhs_e;

    const double h = s.times[1] - s.times[0];
    std::vector<double> dwhc(n, kNaN), dwentc(n, kNaN);
    for (int j = s.valid_begin + 2; j < s.valid_end - 2; ++j) {
        dwhc[j] = (-whc[j + 2] + 8.0 * whc[j + 1] - 8.0 * whc[j - 1] + whc[j - 2]) / (12.0 * h);
        dwentc[j] =
            (-wentc[j + 2] + 8.0 * wentc[j + 1] - 8.0 * wentc[j - 1] + wentc[j - 2]) / (12.0 * h);
    }
    s.cols["dW_Hc_fd"] = dwhc;
    s.cols["dW_Entc_fd"] = dwentc;
}

}  // namespace ottolab

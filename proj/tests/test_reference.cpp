#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ottolab/reference.hpp"
#include "ottolab/series.hpp"

using namespace ottolab;

TEST_CASE("u ODE solution against the fine-step oracle") {
    // dt=1e-5 oracle for c=1, u(0)=1, u'(0)=0
    auto oracle = solve_u_beta(1.0, 1, 1.0, 0.0, 0.0, 0.5, 1e-5);
    auto coarse = solve_u_beta(1.0, 1, 1.0, 0.0, 0.0, 0.5, 1e-3);
    CHECK(oracle.u_at(0.1) == doctest::Approx(0.99758028881224267).epsilon(1e-9));
    CHECK(oracle.u_at(0.5) == doctest::Approx(0.94618421485303881).epsilon(1e-9));
    CHECK(std::abs(coarse.u_at(0.1) - oracle.u_at(0.1)) < 1e-9);
    CHECK(std::abs(coarse.u_at(0.37) - oracle.u_at(0.37)) < 1e-9);  // Hermite between samples
}

TEST_CASE("solve_u_beta input validation and horizon") {
    CHECK_THROWS_AS(solve_u_beta(1.0, 1, -1.0, 0.0, 0.0, 1.0, 1e-3), std::domain_error);
    CHECK_THROWS_AS(solve_u_beta(0.0, 1, 1.0, 0.0, 0.0, 1.0, 1e-3), std::domain_error);

    // strongly decaying start: u hits the floor before t_end and the model halts
    auto m = solve_u_beta(0.3, 1, 0.2, -1.0, 0.0, 10.0, 1e-4);
    CHECK(m.t_horizon < 10.0);
    for (double u : m.u) CHECK(u > m.u_floor);
    CHECK_THROWS_AS(m.u_at(m.t_horizon + 1.0), std::domain_error);
}

TEST_CASE("presets match the closed forms") {
    auto inf = reference_preset_c_infinity(1, 1.0, 1e-3);
    CHECK(inf.u_at(0.25) == doctest::Approx(0.25));
    CHECK(inf.alpha_at(0.25) == doctest::Approx(4.0));
    CHECK(inf.beta_at(0.5) == 0.0);

    auto zero = reference_preset_c_zero(2, 1.0, 0.9, 1e-3);
    CHECK(zero.u_at(0.19) == doctest::Approx(std::sqrt(0.81)));
    CHECK(zero.alpha_at(0.19) == doctest::Approx(-0.5 / 0.81));

    // c=0: phi = log rho + 1 pointwise
    for (double t : {0.0, 0.3, 0.6}) {
        for (double x : {0.0, 0.7, 1.9}) {
            auto e = eval_model(zero, t, {x, -0.4});
            CHECK(std::abs(e.phi - (std::log(e.rho) + 1.0)) < 1e-10);
        }
    }
}

TEST_CASE("eval_model point values") {
    auto model = solve_u_beta(1.0, 2, 1.0, 0.0, 0.0, 0.2, 1e-3);
    auto e = eval_model(model, 0.0, {0.0, 0.0});
    CHECK(e.grad_phi[0] == 0.0);
    CHECK(e.rho == doctest::Approx(1.0 / (4.0 * 3.14159265358979324)).epsilon(1e-12));
    CHECK(e.hess_phi_diag == doctest::Approx(0.0));  // alpha(0) = 0 for u'(0)=0

    auto m1 = solve_u_beta(1.0, 1, 1.0, 0.5, 0.0, 0.2, 1e-3);
    auto e1 = eval_model(m1, 0.1, {1.3});
    const double u = m1.u_at(0.1), a = m1.alpha_at(0.1);
    CHECK(e1.grad_phi[0] == doctest::Approx(a * 1.3));
    CHECK(e1.grad_log_rho[0] == doctest::Approx(-1.3 / (2 * u * u)));
    CHECK_THROWS_AS(eval_model(m1, 0.1, {1.0, 2.0}), std::domain_error);
}

TEST_CASE("model closed-form functionals") {
    auto model = solve_u_beta(1.0, 2, 1.0, 0.0, 0.0, 0.3, 1e-3);
    auto f = model_closed_forms(model, 0.0);
    CHECK(f.entropy == doctest::Approx(-3.5310242469692908).epsilon(1e-13));
    CHECK(f.kinetic == 0.0);  // u'(0) = 0

    auto m1 = solve_u_beta(1.0, 1, 1.0, 0.0, 0.0, 0.3, 1e-3);
    auto f1 = model_closed_forms(m1, 0.0);
    CHECK(f1.fisher == doctest::Approx(0.5).epsilon(1e-13));

    // Kin = 2 m u-prime^2; relation between the two H normalizations
    auto f2 = model_closed_forms(m1, 0.25);
    const double up = m1.up_at(0.25);
    CHECK(f2.kinetic == doctest::Approx(2.0 * up * up).epsilon(1e-12));
    CHECK(f2.hamiltonian - f2.entropy ==
          doctest::Approx(2.0 * (f2.hamiltonian_alt - f2.entropy)).epsilon(1e-12));

    // c = infinity, u = t: Ent = -(m/2)(1 + log 4 pi t^2)
    auto inf = reference_preset_c_infinity(3, 1.0, 1e-3);
    auto fi = model_closed_forms(inf, 0.5);
    CHECK(fi.entropy ==
          doctest::Approx(-1.5 * (1.0 + std::log(4.0 * 3.14159265358979324 * 0.25))));
}

TEST_CASE("model density integrates to one on a large box") {
    auto model = solve_u_beta(1.0, 1, 1.0, 0.0, 0.0, 0.3, 1e-3);
    const int n = 4000;
    const double L = 40.0, h = L / n;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -0.5 * L + (i + 0.5) * h;
        mass += eval_model(model, 0.2, {x}).rho * h;
    }
    CHECK(std::abs(mass - 1.0) < 1e-10);
}

TEST_CASE("ODE energy relation alpha' + alpha^2 = u''/u") {
    auto model = solve_u_beta(0.7, 1, 1.0, 0.2, 0.0, 0.5, 1e-4);
    std::vector<double> alpha(model.t.size());
    for (size_t j = 0; j < model.t.size(); ++j) alpha[j] = model.up[j] / model.u[j];
    auto dalpha = differentiate_series(alpha, model.t, 1);
    for (int j = dalpha.valid_begin; j < dalpha.valid_end; j += 7) {
        const double lhs = dalpha.value[j] + alpha[j] * alpha[j];
        const double rhs = model.upp_at(model.t[j]) / model.u[j];
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("model entropy-slope chain closes to the W slope") {
    for (int m : {1, 2}) {
        auto model = solve_u_beta(1.0, m, 1.0, 0.0, 0.0, 0.5, 1e-3);
        std::vector<double> dent(model.t.size()), fisher(model.t.size()), al(model.t.size());
        for (size_t j = 0; j < model.t.size(); ++j) {
            al[j] = model.up[j] / model.u[j];
            dent[j] = -m * al[j];
            fisher[j] = 0.5 * m / (model.u[j] * model.u[j]);
        }
        auto d2ent = differentiate_series(dent, model.t, 1);
        for (int j = d2ent.valid_begin; j < d2ent.valid_end; ++j) {
            const double lhs =
                d2ent.value[j] + (2.0 * al[j] + 1.0) * dent[j] - fisher[j] + m * al[j] * al[j];
            CHECK(std::abs(lhs) < 1e-6);
        }
    }
}

TEST_CASE("model residual: sign anchor") {
    auto model = solve_u_beta(1.0, 1, 1.0, 0.0, 0.0, 0.5, 1e-3);
    auto good = model_residual(model, 100, 42, 4.0, +1);
    CHECK(good.transport < 1e-6);
    CHECK(good.hamilton_jacobi < 1e-6);

    auto bad = model_residual(model, 100, 42, 4.0, -1);
    CHECK(bad.transport > 0.1);

    // c = infinity preset: pure Hamilton-Jacobi residual
    auto inf = reference_preset_c_infinity(1, 1.0, 1e-3);
    auto res_inf = model_residual(inf, 100, 7, 3.0, +1);
    CHECK(res_inf.transport < 1e-6);
    CHECK(res_inf.hamilton_jacobi < 1e-6);
}

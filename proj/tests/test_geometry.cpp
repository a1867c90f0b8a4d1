#include <doctest.h>

#include <cmath>
#include <random>

#include "ottolab/geometry.hpp"
#include "ottolab/presets.hpp"

using namespace ottolab;

namespace {

GeometryPtr flat_1d(int n = 64) {
    GeometryConfig cfg;
    cfg.dim = 1;
    cfg.grid = {n, 1};
    return build_geometry(cfg);
}

GeometryPtr weighted_1d(double amp, int n = 64) {
    GeometryConfig cfg;
    cfg.dim = 1;
    cfg.grid = {n, 1};
    cfg.f_terms.push_back({{1, 0}, amp, 0.0});
    return build_geometry(cfg);
}

GeometryPtr flat_2d(int n = 32) {
    GeometryConfig cfg;
    cfg.dim = 2;
    cfg.grid = {n, n};
    return build_geometry(cfg);
}

ScalarField sample(const GeometryPtr& g, double (*fn)(double)) {
    ScalarField out = make_scalar(g);
    for (int i = 0; i < g->nodes(); ++i) out.v[i] = fn(g->coord(0, i));
    return out;
}

}  // namespace

TEST_CASE("build_geometry validates and caches the weight") {
    auto g = weighted_1d(0.3);
    // Hess f at x=0 for f = 0.3 cos x
    CHECK(g->hess_f(0, 0)[0] == doctest::Approx(-0.3).epsilon(1e-14));
    for (int i = 0; i < g->nodes(); ++i) {
        const double x = g->coord(0, i);
        CHECK(std::abs(g->f()[i] - 0.3 * std::cos(x)) < 1e-14);
        CHECK(std::abs(g->grad_f(0)[i] + 0.3 * std::sin(x)) < 1e-14);
        CHECK(g->exp_neg_f()[i] > 0.0);
    }

    auto flat = flat_1d();
    for (int i = 0; i < flat->nodes(); ++i) CHECK(flat->exp_neg_f()[i] == 1.0);

    GeometryConfig bad;
    bad.grid = {63, 1};
    CHECK_THROWS_AS(build_geometry(bad), std::invalid_argument);
    bad.grid = {8, 1};
    CHECK_THROWS_AS(build_geometry(bad), std::invalid_argument);
    GeometryConfig nonfinite;
    nonfinite.f_terms.push_back({{1, 0}, std::nan(""), 0.0});
    CHECK_THROWS_AS(build_geometry(nonfinite), std::invalid_argument);
}

TEST_CASE("2D weight gradient vanishes at the origin") {
    GeometryConfig cfg;
    cfg.dim = 2;
    cfg.grid = {64, 64};
    cfg.f_terms.push_back({{1, 0}, 0.2, 0.0});
    cfg.f_terms.push_back({{0, 1}, 0.1, 0.0});
    auto g = build_geometry(cfg);
    CHECK(std::abs(g->grad_f(0)[0]) < 1e-15);
    CHECK(std::abs(g->grad_f(1)[0]) < 1e-15);
}

TEST_CASE("spectral derivatives are exact on trig polynomials") {
    auto g = flat_1d();
    ScalarField phi = sample(g, [](double x) { return std::cos(x); });
    VectorField dphi = grad(phi);
    SymTensorField ddphi = hess(phi);
    for (int i = 0; i < g->nodes(); ++i) {
        const double x = g->coord(0, i);
        CHECK(std::abs(dphi.comp[0][i] + std::sin(x)) < 1e-12);
        CHECK(std::abs(ddphi.comp[0][i] + std::cos(x)) < 1e-12);
    }

    // mode 3 on N=64
    ScalarField p3 = sample(g, [](double x) { return std::cos(3 * x); });
    VectorField dp3 = grad(p3);
    for (int i = 0; i < g->nodes(); ++i)
        CHECK(std::abs(dp3.comp[0][i] + 3 * std::sin(3 * g->coord(0, i))) < 1e-12);
}

TEST_CASE("spectral exactness up to N/3") {
    auto g = flat_1d(96);
    for (int k = 1; k <= 32; k += 5) {
        ScalarField p = make_scalar(g);
        for (int i = 0; i < g->nodes(); ++i) p.v[i] = std::sin(k * g->coord(0, i));
        VectorField dp = grad(p);
        double err = 0.0;
        for (int i = 0; i < g->nodes(); ++i)
            err = std::max(err, std::abs(dp.comp[0][i] - k * std::cos(k * g->coord(0, i))));
        CHECK(err < 1e-11);
    }
}

TEST_CASE("2D hessian of separable field") {
    auto g = flat_2d();
    ScalarField phi = make_scalar(g);
    for (int i = 0; i < g->nodes(); ++i)
        phi.v[i] = std::sin(g->coord(0, i)) + std::sin(g->coord(1, i));
    SymTensorField H = hess(phi);
    for (int i = 0; i < g->nodes(); ++i) {
        CHECK(std::abs(H.comp[0][i] + std::sin(g->coord(0, i))) < 1e-12);
        CHECK(std::abs(H.comp[1][i]) < 1e-12);
        CHECK(std::abs(H.comp[2][i] + std::sin(g->coord(1, i))) < 1e-12);
    }
}

TEST_CASE("div_mu examples and adjointness") {
    auto flat = flat_1d();
    VectorField X{flat, {sample(flat, [](double x) { return std::cos(x); }).v}};
    ScalarField d = div_mu(X);
    for (int i = 0; i < flat->nodes(); ++i)
        CHECK(std::abs(d.v[i] + std::sin(flat->coord(0, i))) < 1e-13);

    auto g = weighted_1d(1.0);  // f = cos x
    VectorField ones{g, {std::vector<double>(g->nodes(), 1.0)}};
    ScalarField dw = div_mu(ones);
    for (int i = 0; i < g->nodes(); ++i)
        CHECK(std::abs(dw.v[i] - std::sin(g->coord(0, i))) < 1e-13);

    // adjointness with constants: integral of div_mu X over mu vanishes
    CHECK(std::abs(integrate_mu(dw)) < 1e-10);

    // random resolved trig polynomials
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        ScalarField h = random_trig_poly(g, 8, 1.0, rng());
        ScalarField xc = random_trig_poly(g, 8, 1.0, rng());
        VectorField Xr{g, {xc.v}};
        ScalarField dv = div_mu(Xr);
        ScalarField prod{g, std::vector<double>(g->nodes())};
        for (int i = 0; i < g->nodes(); ++i) prod.v[i] = dv.v[i] * h.v[i];
        VectorField gh = grad(h);
        ScalarField dot{g, std::vector<double>(g->nodes())};
        for (int i = 0; i < g->nodes(); ++i) dot.v[i] = Xr.comp[0][i] * gh.comp[0][i];
        const double lhs = integrate_mu(prod);
        const double rhs = -integrate_mu(dot);
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
}

TEST_CASE("witten laplacian agrees with div_mu o grad") {
    auto g = weighted_1d(1.0);
    ScalarField h = sample(g, [](double x) { return std::sin(x); });
    ScalarField lh = witten_laplacian(h);
    ScalarField lh2 = div_mu(grad(h));
    for (int i = 0; i < g->nodes(); ++i) {
        const double x = g->coord(0, i);
        CHECK(std::abs(lh.v[i] - (-std::sin(x) + std::sin(x) * std::cos(x))) < 1e-12);
        CHECK(std::abs(lh.v[i] - lh2.v[i]) < 1e-10);
    }
    ScalarField c = make_scalar(g, 4.2);
    CHECK(sup_norm(witten_laplacian(c).v) < 1e-12);
}

TEST_CASE("integrate_mu closed forms") {
    auto flat = flat_1d();
    CHECK(integrate_mu(make_scalar(flat, 1.0)) == doctest::Approx(kTwoPi).epsilon(1e-14));
    ScalarField cosx = sample(flat, [](double x) { return std::cos(x); });
    CHECK(std::abs(integrate_mu(cosx)) < 1e-12);

    auto g = weighted_1d(1.0);  // f = cos x: mass = integral of e^{-cos x} = 2 pi I0(1)
    CHECK(integrate_mu(make_scalar(g, 1.0)) ==
          doctest::Approx(7.9549265210128452).epsilon(1e-12));

    ScalarField bad = make_scalar(flat, 1.0);
    bad.v[3] = std::nan("");
    CHECK_THROWS_AS(integrate_mu(bad), std::runtime_error);
}

TEST_CASE("quadrature insensitive to resolution for resolved fields") {
    for (int n : {64, 128}) {
        auto g = weighted_1d(0.3, n);
        ScalarField h = sample(g, [](double x) { return std::exp(std::cos(x)); });
        static double first = 0.0;
        if (n == 64)
            first = integrate_mu(h);
        else
            CHECK(std::abs(integrate_mu(h) - first) < 1e-10);
    }
}

TEST_CASE("bakry_emery tensor and cd lower bound") {
    auto flat = flat_1d();
    auto R0 = bakry_emery(flat, 3.0);
    CHECK(sup_norm(R0.comp[0]) == 0.0);
    CHECK(cd_lower_bound(flat, 3.0) == 0.0);
    CHECK(cd_lower_bound(flat, 1.0) == 0.0);  // m = n allowed for constant f

    auto g = weighted_1d(1.0);  // f = cos x
    auto R = bakry_emery(g, 3.0);
    CHECK(R.comp[0][0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(cd_lower_bound(g, 3.0) < 0.0);

    CHECK_THROWS_AS(bakry_emery(g, 1.0), std::domain_error);   // m = n, f nonconstant
    CHECK_THROWS_AS(bakry_emery(g, 0.5), std::domain_error);   // m < n

    auto g3 = weighted_1d(0.3);
    CHECK(cd_lower_bound(g3, 3.0) == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("2D weighted calculus and curvature") {
    GeometryConfig cfg;
    cfg.dim = 2;
    cfg.grid = {32, 32};
    cfg.f_terms.push_back({{1, 0}, 0.2, 0.0});
    cfg.f_terms.push_back({{0, 1}, 0.1, 0.0});
    auto g = build_geometry(cfg);

    // div_mu of a constant field equals -<grad f, X>
    VectorField ones{g, {std::vector<double>(g->nodes(), 1.0),
                         std::vector<double>(g->nodes(), 1.0)}};
    ScalarField d = div_mu(ones);
    for (int i = 0; i < g->nodes(); ++i) {
        const double expect = 0.2 * std::sin(g->coord(0, i)) + 0.1 * std::sin(g->coord(1, i));
        CHECK(std::abs(d.v[i] - expect) < 1e-12);
    }

    // Ric_{3,2}(L) at the origin: Hess f = diag(-0.2, -0.1), grad f = 0
    auto R = bakry_emery(g, 3.0);
    CHECK(R.comp[0][0] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(R.comp[1][0] == doctest::Approx(0.0));
    CHECK(R.comp[2][0] == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(cd_lower_bound(g, 3.0) <= -0.2 + 1e-12);
    CHECK_THROWS_AS(bakry_emery(g, 2.0), std::domain_error);  // m = n, f nonconstant
}

TEST_CASE("torus distance") {
    auto g1 = flat_1d();
    CHECK(torus_distance(*g1, {0.0, 0.0}, {0.0, 0.0}) == 0.0);
    CHECK(torus_distance(*g1, {0.1, 0.0}, {kTwoPi - 0.1, 0.0}) == doctest::Approx(0.2));
    auto g2 = flat_2d();
    const double pi = 0.5 * kTwoPi;
    CHECK(torus_distance(*g2, {0.0, 0.0}, {pi, pi}) == doctest::Approx(pi * std::sqrt(2.0)));
}

TEST_CASE("dealias removes the top third") {
    auto g = flat_1d(66);  // N/2 = 33, keep k <= 22
    ScalarField p = make_scalar(g);
    for (int i = 0; i < g->nodes(); ++i) p.v[i] = std::cos(30 * g->coord(0, i));
    std::vector<double> v = p.v;
    g->spectral().dealias(v);
    CHECK(sup_norm(v) < 1e-12);
    ScalarField low = sample(g, [](double x) { return std::cos(2 * x); });
    std::vector<double> w = low.v;
    g->spectral().dealias(w);
    CHECK(sup_diff(w, low.v) < 1e-12);
}

TEST_CASE("spectral tail diagnostic") {
    auto g = flat_1d(96);
    ScalarField low = sample(g, [](double x) { return std::cos(2 * x); });
    CHECK(g->spectral().tail_fraction(low.v) < 1e-12);
    ScalarField edgy = make_scalar(g);
    for (int i = 0; i < g->nodes(); ++i)
        edgy.v[i] = std::cos(2 * g->coord(0, i)) + 0.5 * std::cos(40 * g->coord(0, i));
    CHECK(g->spectral().tail_fraction(edgy.v) > 0.4);
}

TEST_CASE("upsample interpolates trig polynomials exactly") {
    auto g = flat_1d(32);
    ScalarField p = sample(g, [](double x) { return std::cos(3 * x) + 0.5 * std::sin(x); });
    auto fine = g->spectral().upsample(p.v, 4);
    CHECK(fine.size() == 128u);
    for (size_t j = 0; j < fine.size(); ++j) {
        const double x = kTwoPi / 128.0 * j;
        CHECK(std::abs(fine[j] - (std::cos(3 * x) + 0.5 * std::sin(x))) < 1e-12);
    }
}

#include "ottolab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ottolab {

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_diff: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

TorusGeometry::TorusGeometry(const GeometryConfig& cfg)
    : dim_(cfg.dim), n_(cfg.grid), periods_(cfg.periods), m_(cfg.m) {
    if (dim_ != 1 && dim_ != 2)
        throw std::invalid_argument("geometry: dim must be 1 or 2");
    if (dim_ == 1) {
        n_[1] = 1;
        periods_[1] = 1.0;
    }
    for (int a = 0; a < dim_; ++a) {
        if (n_[a] < 16 || n_[a] % 2 != 0)
            throw std::invalid_argument("geometry: grid sizes must be even and >= 16");
        if (!(periods_[a] > 0.0) || !std::isfinite(periods_[a]))
            throw std::invalid_argument("geometry: periods must be positive finite");
    }
    for (const auto& t : cfg.f_terms)
        if (!std::isfinite(t.cos_coeff) || !std::isfinite(t.sin_coeff))
            throw std::invalid_argument("geometry: non-finite weight coefficient");

    ntot_ = n_[0] * n_[1];
    cell_volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) cell_volume_ *= periods_[a] / n_[a];

    spectral_ = std::make_unique<SpectralWorkspace>(dim_, n_, periods_);

    f_ = eval_trig_poly(*this, cfg.f_terms, 0, 0);
    gradf_[0] = eval_trig_poly(*this, cfg.f_terms, 1, 0);
    hessf_[0] = eval_trig_poly(*this, cfg.f_terms, 2, 0);
    if (dim_ == 2) {
        gradf_[1] = eval_trig_poly(*this, cfg.f_terms, 0, 1);
        hessf_[1] = eval_trig_poly(*this, cfg.f_terms, 1, 1);
        hessf_[2] = eval_trig_poly(*this, cfg.f_terms, 0, 2);
    }
    expnf_.resize(ntot_);
    for (int i = 0; i < ntot_; ++i) expnf_[i] = std::exp(-f_[i]);

    double gsup = sup_norm(gradf_[0]);
    if (dim_ == 2) gsup = std::max(gsup, sup_norm(gradf_[1]));
    weight_constant_ = gsup == 0.0;
}

double TorusGeometry::coord(int axis, int node) const {
    const int i0 = node / n_[1];
    const int i1 = node % n_[1];
    const int idx = axis == 0 ? i0 : i1;
    return periods_[axis] / n_[axis] * idx;
}

const std::vector<double>& TorusGeometry::hess_f(int a, int b) const {
    return hessf_[SymTensorField::pack(a, b, dim_)];
}

GeometryPtr build_geometry(const GeometryConfig& cfg) {
    return std::make_shared<const TorusGeometry>(cfg);
}

std::vector<double> eval_trig_poly(const TorusGeometry& g, const std::vector<TrigTerm>& terms,
                                   int dx, int dy) {
    std::vector<double> out(g.nodes(), 0.0);
    const int n1 = g.dim() == 2 ? g.grid_size(1) : 1;
    for (const auto& t : terms) {
        const double k0 = kTwoPi / g.period(0) * t.k[0];
        const double k1 = g.dim() == 2 ? kTwoPi / g.period(1) * t.k[1] : 0.0;
        // derivative factors: each d/dx_a maps (cos,sin) -> k_a(-sin,cos)
        double amp = 1.0;
        for (int r = 0; r < dx; ++r) amp *= k0;
        for (int r = 0; r < dy; ++r) amp *= k1;
        const int phase = dx + dy;  // quarter-turn count
        for (int node = 0; node < g.nodes(); ++node) {
            const int i0 = node / n1, i1 = node % n1;
            const double th = k0 * (g.period(0) / g.grid_size(0)) * i0 +
                              (g.dim() == 2 ? k1 * (g.period(1) / g.grid_size(1)) * i1 : 0.0);
            double c = t.cos_coeff, s = t.sin_coeff;
            for (int r = 0; r < phase % 4; ++r) {
                const double cn = s, sn = -c;  // d/dth: cos->-sin, sin->cos
                c = cn;
                s = sn;
            }
            out[node] += amp * (c * std::cos(th) + s * std::sin(th));
        }
    }
    return out;
}

VectorField grad(const ScalarField& h) {
    const auto& g = *h.geom;
    VectorField out{h.geom, {}};
    out.comp.push_back(g.spectral().derivative(h.v, 1, 0));
    if (g.dim() == 2) out.comp.push_back(g.spectral().derivative(h.v, 0, 1));
    return out;
}

SymTensorField hess(const ScalarField& h) {
    const auto& g = *h.geom;
    SymTensorField out{h.geom, {}};
    out.comp.push_back(g.spectral().derivative(h.v, 2, 0));
    if (g.dim() == 2) {
        out.comp.push_back(g.spectral().derivative(h.v, 1, 1));
        out.comp.push_back(g.spectral().derivative(h.v, 0, 2));
    }
    return out;
}

ScalarField laplacian(const ScalarField& h) {
    return ScalarField{h.geom, h.geom->spectral().laplacian(h.v)};
}

ScalarField div_mu(const VectorField& X) {
    const auto& g = *X.geom;
    std::vector<double> out = g.spectral().derivative(X.comp[0], 1, 0);
    if (g.dim() == 2) {
        auto d1 = g.spectral().derivative(X.comp[1], 0, 1);
        for (int i = 0; i < g.nodes(); ++i) out[i] += d1[i];
    }
    for (int a = 0; a < g.dim(); ++a) {
        const auto& gf = g.grad_f(a);
        for (int i = 0; i < g.nodes(); ++i) out[i] -= gf[i] * X.comp[a][i];
    }
    return ScalarField{X.geom, std::move(out)};
}

ScalarField witten_laplacian(const ScalarField& h) {
    const auto& g = *h.geom;
    std::vector<double> out = g.spectral().laplacian(h.v);
    for (int a = 0; a < g.dim(); ++a) {
        auto dh = g.spectral().derivative(h.v, a == 0 ? 1 : 0, a == 0 ? 0 : 1);
        const auto& gf = g.grad_f(a);
        for (int i = 0; i < g.nodes(); ++i) out[i] -= gf[i] * dh[i];
    }
    return ScalarField{h.geom, std::move(out)};
}

double integrate_mu(const ScalarField& h) {
    const auto& g = *h.geom;
    if (!all_finite(h.v)) throw std::runtime_error("integrate_mu: non-finite field values");
    const auto& w = g.exp_neg_f();
    double s = 0.0;
    for (int i = 0; i < g.nodes(); ++i) s += h.v[i] * w[i];
    return s * g.cell_volume();
}

double mu_total(const GeometryPtr& g) { return integrate_mu(make_scalar(g, 1.0)); }

SymTensorField bakry_emery(const GeometryPtr& g, double m) {
    const int n = g->dim();
    if (m < n) throw std::domain_error("bakry_emery: m < n");
    if (m == n && !g->weight_is_constant())
        throw std::domain_error("bakry_emery: m = n requires constant weight");
    const int ncomp = n * (n + 1) / 2;
    SymTensorField out{g, std::vector<std::vector<double>>(ncomp)};
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            const int p = SymTensorField::pack(a, b, n);
            out.comp[p] = g->hess_f(a, b);
            if (m > n) {
                const auto& ga = g->grad_f(a);
                const auto& gb = g->grad_f(b);
                for (int i = 0; i < g->nodes(); ++i)
                    out.comp[p][i] -= ga[i] * gb[i] / (m - n);
            }
        }
    return out;
}

double cd_lower_bound(const GeometryPtr& g, double m) {
    SymTensorField R = bakry_emery(g, m);
    double kmin = std::numeric_limits<double>::infinity();
    if (g->dim() == 1) {
        for (double x : R.comp[0]) kmin = std::min(kmin, x);
    } else {
        for (int i = 0; i < g->nodes(); ++i) {
            const double a = R.comp[0][i], b = R.comp[1][i], c = R.comp[2][i];
            const double mean = 0.5 * (a + c);
            const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
            kmin = std::min(kmin, mean - disc);
        }
    }
    return kmin;
}

std::vector<double> tensor_quadratic_form(const SymTensorField& T, const VectorField& X) {
    const auto& g = *T.geom;
    std::vector<double> out(g.nodes(), 0.0);
    if (g.dim() == 1) {
        for (int i = 0; i < g.nodes(); ++i) out[i] = T.comp[0][i] * X.comp[0][i] * X.comp[0][i];
    } else {
        for (int i = 0; i < g.nodes(); ++i) {
            const double x = X.comp[0][i], y = X.comp[1][i];
            out[i] = T.comp[0][i] * x * x + 2.0 * T.comp[1][i] * x * y + T.comp[2][i] * y * y;
        }
    }
    return out;
}

double torus_distance(const TorusGeometry& g, const std::array<double, 2>& x,
                      const std::array<double, 2>& y) {
    double d2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const double L = g.period(a);
        double d = std::fmod(std::abs(x[a] - y[a]), L);
        d = std::min(d, L - d);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

ScalarField make_scalar(const GeometryPtr& g, double fill) {
    return ScalarField{g, std::vector<double>(g->nodes(), fill)};
}

ScalarField scalar_from_terms(const GeometryPtr& g, const std::vector<TrigTerm>& terms,
                              double constant) {
    ScalarField out{g, eval_trig_poly(*g, terms)};
    if (constant != 0.0)
        for (double& x : out.v) x += constant;
    return out;
}

}  // namespace ottolab

#include "ottolab/finite_dim.hpp"

#include <cmath>
#include <stdexcept>

namespace ottolab {

QuadraticPotential::QuadraticPotential(int d, std::vector<double> A) : d_(d), A_(std::move(A)) {
    if (static_cast<int>(A_.size()) != d_ * d_)
        throw std::invalid_argument("QuadraticPotential: matrix size mismatch");
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(A_[i * d_ + j] - A_[j * d_ + i]) > 1e-14)
                throw std::invalid_argument("QuadraticPotential: matrix must be symmetric");
}

double QuadraticPotential::value(const std::vector<double>& x) const {
    double s = 0.0;
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) s += x[i] * A_[i * d_ + j] * x[j];
    return 0.5 * s;
}

std::vector<double> QuadraticPotential::gradient(const std::vector<double>& x) const {
    std::vector<double> g(d_, 0.0);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) g[i] += A_[i * d_ + j] * x[j];
    return g;
}

std::vector<double> QuadraticPotential::hessian(const std::vector<double>&) const { return A_; }

double PolynomialPotential1D::value(const std::vector<double>& x) const {
    double s = 0.0, p = 1.0;
    for (double ck : coeffs_) {
        s += ck * p;
        p *= x[0];
    }
    return s;
}

std::vector<double> PolynomialPotential1D::gradient(const std::vector<double>& x) const {
    double s = 0.0, p = 1.0;
    for (size_t k = 1; k < coeffs_.size(); ++k) {
        s += k * coeffs_[k] * p;
        p *= x[0];
    }
    return {s};
}

std::vector<double> PolynomialPotential1D::hessian(const std::vector<double>& x) const {
    double s = 0.0, p = 1.0;
    for (size_t k = 2; k < coeffs_.size(); ++k) {
        s += k * (k - 1) * coeffs_[k] * p;
        p *= x[0];
    }
    return {s};
}

namespace {

struct Phase {
    std::vector<double> x, v;
};

Phase rhs(const Phase& s, const Potential& V, double c) {
    const int d = V.dim();
    Phase out{std::vector<double>(d), std::vector<double>(d)};
    auto g = V.gradient(s.x);
    for (int i = 0; i < d; ++i) {
        out.x[i] = s.v[i] / c;
        out.v[i] = -s.v[i] / (c * c) + g[i] / c;
    }
    return out;
}

Phase add(const Phase& a, const Phase& b, double w) {
    Phase out = a;
    for (size_t i = 0; i < a.x.size(); ++i) {
        out.x[i] += w * b.x[i];
        out.v[i] += w * b.v[i];
    }
    return out;
}

}  // namespace

std::vector<FiniteDimState> run_finite_dim(const std::vector<double>& x0,
                                           const std::vector<double>& v0, const Potential& V,
                                           double c, double dt, double t_end, int output_stride) {
    const int d = V.dim();
    if (static_cast<int>(x0.size()) != d || static_cast<int>(v0.size()) != d)
        throw std::invalid_argument("run_finite_dim: state dimension mismatch");
    if (!(c > 0.0)) throw std::invalid_argument("run_finite_dim: c must be positive");
    if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("run_finite_dim: bad time grid");

    Phase s{x0, v0};
    std::vector<FiniteDimState> out;
    out.push_back({0.0, s.x, s.v});
    const long nsteps = std::llround(t_end / dt);
    for (long step = 1; step <= nsteps; ++step) {
        Phase k1 = rhs(s, V, c);
        Phase k2 = rhs(add(s, k1, 0.5 * dt), V, c);
        Phase k3 = rhs(add(s, k2, 0.5 * dt), V, c);
        Phase k4 = rhs(add(s, k3, dt), V, c);
        for (int i = 0; i < d; ++i) {
            s.x[i] += dt / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
            s.v[i] += dt / 6.0 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
        }
        if (step % output_stride == 0) out.push_back({step * dt, s.x, s.v});
    }
    return out;
}

FiniteDimFunctionals finite_dim_functionals(const FiniteDimState& s, const Potential& V,
                                            double c) {
    const int d = V.dim();
    auto g = V.gradient(s.x);
    auto Hm = V.hessian(s.x);

    double v2 = 0.0, gv = 0.0, g2 = 0.0;
    for (int i = 0; i < d; ++i) {
        v2 += s.v[i] * s.v[i];
        gv += g[i] * s.v[i];
        g2 += g[i] * g[i];
    }
    auto quad = [&](const std::vector<double>& a) {
        double q = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) q += a[i] * Hm[i * d + j] * a[j];
        return q;
    };

    FiniteDimFunctionals f;
    f.V = V.value(s.x);
    f.H = 0.5 * v2 + f.V;
    f.dH_analytic = -v2 / (c * c) + 2.0 * gv / c;
    f.dV_analytic = gv / c;

    std::vector<double> vdot(d);
    for (int i = 0; i < d; ++i) vdot[i] = -s.v[i] / (c * c) + g[i] / c;
    double vdot2 = 0.0;
    for (int i = 0; i < d; ++i) vdot2 += vdot[i] * vdot[i];
    std::vector<double> voc(d);
    for (int i = 0; i < d; ++i) voc[i] = s.v[i] / c;

    f.rhs_5_1 = 2.0 * vdot2 + 2.0 * quad(voc);
    f.rhs_5_2 = (quad(s.v) + g2) / (c * c);
    return f;
}

}  // namespace ottolab

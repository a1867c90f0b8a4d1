#ifndef OTTOLAB_GEOMETRY_HPP
#define OTTOLAB_GEOMETRY_HPP

#include <array>
#include <memory>
#include <vector>

#include "ottolab/field.hpp"
#include "ottolab/spectral.hpp"

namespace ottolab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/** One term of a real trigonometric polynomial:
 * c * cos(k . w x) + s * sin(k . w x), with w_a = 2 pi / L_a. */
struct TrigTerm {
    std::array<int, 2> k{0, 0};
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

struct GeometryConfig {
    int dim = 1;
    std::array<double, 2> periods{kTwoPi, kTwoPi};
    std::array<int, 2> grid{64, 1};
    std::vector<TrigTerm> f_terms;  // weight f as a trig polynomial
    double m = 1.0;                 // synthetic dimension used downstream
};

/** Flat weighted torus: uniform periodic grid, weight f (a trig polynomial)
 * with analytic derivatives, and a Fourier differentiation workspace.
 * Immutable after construction. */
class TorusGeometry {
  public:
    explicit TorusGeometry(const GeometryConfig& cfg);

    int dim() const { return dim_; }
    int nodes() const { return ntot_; }
    int grid_size(int axis) const { return n_[axis]; }
    double period(int axis) const { return periods_[axis]; }
    double cell_volume() const { return cell_volume_; }
    double synthetic_dim() const { return m_; }
    bool weight_is_constant() const { return weight_constant_; }

    double coord(int axis, int node) const;

    const std::vector<double>& f() const { return f_; }
    const std::vector<double>& exp_neg_f() const { return expnf_; }
    const std::vector<double>& grad_f(int axis) const { return gradf_[axis]; }
    /** Packed Hess f component (a,b). */
    const std::vector<double>& hess_f(int a, int b) const;

    const SpectralWorkspace& spectral() const { return *spectral_; }

  private:
    int dim_;
    std::array<int, 2> n_;
    std::array<double, 2> periods_;
    int ntot_;
    double cell_volume_;
    double m_;
    bool weight_constant_;
    std::vector<double> f_, expnf_;
    std::array<std::vector<double>, 2> gradf_;
    std::array<std::vector<double>, 3> hessf_;
    std::unique_ptr<SpectralWorkspace> spectral_;
};

GeometryPtr build_geometry(const GeometryConfig& cfg);

/** Sample a trig polynomial (or its requested derivative) on the grid. */
std::vector<double> eval_trig_poly(const TorusGeometry& g, const std::vector<TrigTerm>& terms,
                                   int dx = 0, int dy = 0);

// -- spectral differential calculus ------------------------------------------

VectorField grad(const ScalarField& h);
SymTensorField hess(const ScalarField& h);
ScalarField laplacian(const ScalarField& h);
/** div_mu X = div X - <grad f, X>; adjoint to -grad w.r.t. mu. */
ScalarField div_mu(const VectorField& X);
/** Witten Laplacian L h = Delta h - <grad f, grad h>. */
ScalarField witten_laplacian(const ScalarField& h);

// -- weighted integration -----------------------------------------------------

double integrate_mu(const ScalarField& h);
double mu_total(const GeometryPtr& g);

// -- curvature ----------------------------------------------------------------

/** Ric_{m,n}(L) = Hess f - (grad f x grad f)/(m-n) on the flat torus.
 * m = n requires constant f; m < n is rejected. */
SymTensorField bakry_emery(const GeometryPtr& g, double m);
/** Minimum over grid nodes of the smallest eigenvalue of Ric_{m,n}(L). */
double cd_lower_bound(const GeometryPtr& g, double m);

/** Quadratic form T(X,X) pointwise. */
std::vector<double> tensor_quadratic_form(const SymTensorField& T, const VectorField& X);

// -- distance -----------------------------------------------------------------

/** Periodic geodesic distance: per coordinate min(|d|, L-|d|), Euclidean combination. */
double torus_distance(const TorusGeometry& g, const std::array<double, 2>& x,
                      const std::array<double, 2>& y);

// -- small field helpers ------------------------------------------------------

ScalarField make_scalar(const GeometryPtr& g, double fill = 0.0);
ScalarField scalar_from_terms(const GeometryPtr& g, const std::vector<TrigTerm>& terms,
                              double constant = 0.0);

}  // namespace ottolab

#endif

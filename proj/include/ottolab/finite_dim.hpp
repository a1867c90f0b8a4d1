#ifndef OTTOLAB_FINITE_DIM_HPP
#define OTTOLAB_FINITE_DIM_HPP

#include <memory>
#include <vector>

namespace ottolab {

/** Analytic potential with gradient and Hessian. */
class Potential {
  public:
    virtual ~Potential() = default;
    virtual int dim() const = 0;
    virtual double value(const std::vector<double>& x) const = 0;
    virtual std::vector<double> gradient(const std::vector<double>& x) const = 0;
    /** Row-major d x d Hessian. */
    virtual std::vector<double> hessian(const std::vector<double>& x) const = 0;
};

/** V(x) = x^T A x / 2 for a symmetric matrix A. */
class QuadraticPotential : public Potential {
  public:
    QuadraticPotential(int d, std::vector<double> A);
    int dim() const override { return d_; }
    double value(const std::vector<double>& x) const override;
    std::vector<double> gradient(const std::vector<double>& x) const override;
    std::vector<double> hessian(const std::vector<double>& x) const override;
    const std::vector<double>& matrix() const { return A_; }

  private:
    int d_;
    std::vector<double> A_;
};

/** V(x) = sum_k c_k x^k in one dimension. */
class PolynomialPotential1D : public Potential {
  public:
    explicit PolynomialPotential1D(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}
    int dim() const override { return 1; }
    double value(const std::vector<double>& x) const override;
    std::vector<double> gradient(const std::vector<double>& x) const override;
    std::vector<double> hessian(const std::vector<double>& x) const override;

  private:
    std::vector<double> coeffs_;
};

struct FiniteDimState {
    double t = 0.0;
    std::vector<double> x, v;
};

/** Langevin deformation on T*R^d: xdot = v/c, vdot = -v/c^2 + grad V(x)/c.
 * Classical RK4 with fixed step; snapshots every `output_stride` steps. */
std::vector<FiniteDimState> run_finite_dim(const std::vector<double>& x0,
                                           const std::vector<double>& v0, const Potential& V,
                                           double c, double dt, double t_end,
                                           int output_stride = 1);

struct FiniteDimFunctionals {
    double H;             // |v|^2/2 + V(x)
    double V;
    double dH_analytic;   // -|v|^2/c^2 + 2 grad V . v / c
    double dV_analytic;   // grad V . v / c
    double rhs_5_1;       // 2|vdot|^2 + 2 HessV(v/c, v/c)
    double rhs_5_2;       // (1/c^2)[HessV(v,v) + |grad V|^2]; the H twin carries 2/c^2
};

FiniteDimFunctionals finite_dim_functionals(const FiniteDimState& s, const Potential& V, double c);

}  // namespace ottolab

#endif

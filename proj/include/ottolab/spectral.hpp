#ifndef OTTOLAB_SPECTRAL_HPP
#define OTTOLAB_SPECTRAL_HPP

#include <array>
#include <complex>
#include <vector>

namespace ottolab {

/** Fourier differentiation engine for a uniform periodic grid.
 *
 * Plans are created once per geometry; execution uses FFTW's new-array
 * interface on per-call buffers, so const methods are safe to call from
 * several threads at once.
 */
class SpectralWorkspace {
  public:
    SpectralWorkspace(int dim, std::array<int, 2> grid, std::array<double, 2> periods);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    int total_nodes() const { return ntot_; }

    /** d^{ox}/dx0^{ox} d^{oy}/dx1^{oy} of `in`, ox+oy in {1,2}.
     * Exact for trigonometric polynomials below Nyquist; the Nyquist mode is
     * zeroed for odd derivative orders. */
    std::vector<double> derivative(const std::vector<double>& in, int ox, int oy) const;

    std::vector<double> laplacian(const std::vector<double>& in) const;

    /** 2/3-rule projection: zero all modes with |k_index| > N/3 on any axis. */
    void dealias(std::vector<double>& inout) const;

    /** Relative magnitude of the top-third spectral shell; resolution diagnostic. */
    double tail_fraction(const std::vector<double>& in) const;

    /** Trigonometric interpolation onto a grid refined by `factor` per axis.
     * Exact for resolved fields. */
    std::vector<double> upsample(const std::vector<double>& in, int factor) const;

  private:
    void forward(const std::vector<double>& in, std::vector<std::complex<double>>& spec) const;
    void backward(std::vector<std::complex<double>>& spec, std::vector<double>& out) const;
    double k0(int i) const;  // physical wavenumber along axis 0 for row index i
    double k1(int j) const;  // along axis 1 (r2c axis) for bin j
    int kindex0(int i) const;

    int dim_;
    std::array<int, 2> n_;
    std::array<double, 2> periods_;
    int ntot_;
    int nspec_;  // n0 * (n1/2 + 1) for 2D, n0/2+1 for 1D
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

}  // namespace ottolab

#endif

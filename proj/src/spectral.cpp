#include "ottolab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ottolab {

namespace {
// FFTW's planner is not thread-safe; executions on distinct arrays are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
constexpr double two_pi = 6.283185307179586476925286766559;
}  // namespace

SpectralWorkspace::SpectralWorkspace(int dim, std::array<int, 2> grid,
                                     std::array<double, 2> periods)
    : dim_(dim), n_(grid), periods_(periods) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("spectral: dim must be 1 or 2");
    if (dim_ == 1) n_[1] = 1;
    ntot_ = n_[0] * n_[1];
    nspec_ = dim_ == 1 ? n_[0] / 2 + 1 : n_[0] * (n_[1] / 2 + 1);

    std::vector<double> rbuf(ntot_);
    std::vector<std::complex<double>> cbuf(nspec_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim_ == 1) {
        plan_fwd_ = fftw_plan_dft_r2c_1d(n_[0], rbuf.data(),
                                         reinterpret_cast<fftw_complex*>(cbuf.data()), flags);
        plan_bwd_ = fftw_plan_dft_c2r_1d(n_[0], reinterpret_cast<fftw_complex*>(cbuf.data()),
                                         rbuf.data(), flags);
    } else {
        plan_fwd_ = fftw_plan_dft_r2c_2d(n_[0], n_[1], rbuf.data(),
                                         reinterpret_cast<fftw_complex*>(cbuf.data()), flags);
        plan_bwd_ = fftw_plan_dft_c2r_2d(n_[0], n_[1],
                                         reinterpret_cast<fftw_complex*>(cbuf.data()),
                                         rbuf.data(), flags);
    }
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("spectral: FFTW planning failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralWorkspace::forward(const std::vector<double>& in,
                                std::vector<std::complex<double>>& spec) const {
    if (static_cast<int>(in.size()) != ntot_) throw std::invalid_argument("spectral: size mismatch");
    std::vector<double> rcopy(in);  // r2c may clobber input
    spec.assign(nspec_, {0.0, 0.0});
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), rcopy.data(),
                         reinterpret_cast<fftw_complex*>(spec.data()));
}

void SpectralWorkspace::backward(std::vector<std::complex<double>>& spec,
                                 std::vector<double>& out) const {
    out.assign(ntot_, 0.0);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

int SpectralWorkspace::kindex0(int i) const { return i <= n_[0] / 2 ? i : i - n_[0]; }

double SpectralWorkspace::k0(int i) const { return two_pi / periods_[0] * kindex0(i); }

double SpectralWorkspace::k1(int j) const { return two_pi / periods_[1] * j; }

std::vector<double> SpectralWorkspace::derivative(const std::vector<double>& in, int ox,
                                                  int oy) const {
    if (ox < 0 || oy < 0 || ox + oy < 1 || ox + oy > 2)
        throw std::invalid_argument("spectral: derivative order must total 1 or 2");
    if (dim_ == 1 && oy != 0) throw std::invalid_argument("spectral: no axis 1 in 1D");

    std::vector<std::complex<double>> spec;
    forward(in, spec);
    const double scale = 1.0 / ntot_;
    const std::complex<double> iu(0.0, 1.0);

    if (dim_ == 1) {
        const int nb = n_[0] / 2;
        for (int j = 0; j <= nb; ++j) {
            const double k = two_pi / periods_[0] * j;
            std::complex<double> mult = (ox == 1) ? iu * k : std::complex<double>(-k * k, 0.0);
            if (ox % 2 == 1 && j == nb) mult = 0.0;  // Nyquist has no odd derivative
            spec[j] *= mult * scale;
        }
    } else {
        const int nb1 = n_[1] / 2;
        for (int i = 0; i < n_[0]; ++i) {
            const double ka = k0(i);
            const bool nyq0 = (i == n_[0] / 2);
            for (int j = 0; j <= nb1; ++j) {
                const double kb = k1(j);
                const bool nyq1 = (j == nb1);
                std::complex<double> mult(1.0, 0.0);
                for (int r = 0; r < ox; ++r) mult *= iu * ka;
                for (int r = 0; r < oy; ++r) mult *= iu * kb;
                if ((ox % 2 == 1 && nyq0) || (oy % 2 == 1 && nyq1)) mult = 0.0;
                spec[i * (nb1 + 1) + j] *= mult * scale;
            }
        }
    }
    std::vector<double> out;
    backward(spec, out);
    return out;
}

std::vector<double> SpectralWorkspace::laplacian(const std::vector<double>& in) const {
    std::vector<std::complex<double>> spec;
    forward(in, spec);
    const double scale = 1.0 / ntot_;
    if (dim_ == 1) {
        for (int j = 0; j <= n_[0] / 2; ++j) {
            double k = two_pi / periods_[0] * j;
            spec[j] *= -k * k * scale;
        }
    } else {
        const int nb1 = n_[1] / 2;
        for (int i = 0; i < n_[0]; ++i)
            for (int j = 0; j <= nb1; ++j) {
                const double ka = k0(i), kb = k1(j);
                spec[i * (nb1 + 1) + j] *= -(ka * ka + kb * kb) * scale;
            }
    }
    std::vector<double> out;
    backward(spec, out);
    return out;
}

void SpectralWorkspace::dealias(std::vector<double>& inout) const {
    std::vector<std::complex<double>> spec;
    forward(inout, spec);
    const double scale = 1.0 / ntot_;
    if (dim_ == 1) {
        const int kc = n_[0] / 3;
        for (int j = 0; j <= n_[0] / 2; ++j) spec[j] *= (j > kc) ? 0.0 : scale;
    } else {
        const int kc0 = n_[0] / 3, kc1 = n_[1] / 3;
        const int nb1 = n_[1] / 2;
        for (int i = 0; i < n_[0]; ++i) {
            const bool kill0 = std::abs(kindex0(i)) > kc0;
            for (int j = 0; j <= nb1; ++j)
                spec[i * (nb1 + 1) + j] *= (kill0 || j > kc1) ? 0.0 : scale;
        }
    }
    backward(spec, inout);
}

double SpectralWorkspace::tail_fraction(const std::vector<double>& in) const {
    std::vector<std::complex<double>> spec;
    forward(in, spec);
    double peak = 0.0, tail = 0.0;
    auto visit = [&](double mag, bool in_tail) {
        peak = std::max(peak, mag);
        if (in_tail) tail = std::max(tail, mag);
    };
    if (dim_ == 1) {
        const int nb = n_[0] / 2;
        for (int j = 1; j <= nb; ++j) visit(std::abs(spec[j]), 3 * j > 2 * nb);
    } else {
        const int nb1 = n_[1] / 2;
        for (int i = 0; i < n_[0]; ++i)
            for (int j = 0; j <= nb1; ++j) {
                if (i == 0 && j == 0) continue;
                const bool in_tail =
                    3 * std::abs(kindex0(i)) > 2 * (n_[0] / 2) || 3 * j > 2 * nb1;
                visit(std::abs(spec[i * (nb1 + 1) + j]), in_tail);
            }
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

std::vector<double> SpectralWorkspace::upsample(const std::vector<double>& in, int factor) const {
    if (factor < 1) throw std::invalid_argument("spectral: upsample factor must be >= 1");
    if (factor == 1) return in;
    std::vector<std::complex<double>> spec;
    forward(in, spec);

    const int m0 = n_[0] * factor;
    const int m1 = dim_ == 2 ? n_[1] * factor : 1;
    const int mtot = m0 * (dim_ == 2 ? m1 : 1);
    const double scale = 1.0 / ntot_;

    std::vector<double> out(mtot, 0.0);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim_ == 1) {
        std::vector<std::complex<double>> fine(m0 / 2 + 1, {0.0, 0.0});
        const int nb = n_[0] / 2;
        for (int j = 0; j <= nb; ++j) fine[j] = spec[j] * scale;
        fine[nb] *= 0.5;  // split the Nyquist pair
        fftw_plan p = fftw_plan_dft_c2r_1d(m0, reinterpret_cast<fftw_complex*>(fine.data()),
                                           out.data(), flags);
        fftw_execute(p);
        fftw_destroy_plan(p);
    } else {
        const int nb1 = n_[1] / 2, mb1 = m1 / 2;
        std::vector<std::complex<double>> fine(static_cast<size_t>(m0) * (mb1 + 1), {0.0, 0.0});
        for (int i = 0; i < n_[0]; ++i) {
            const int ki = kindex0(i);
            for (int j = 0; j <= nb1; ++j) {
                std::complex<double> c = spec[i * (nb1 + 1) + j] * scale;
                if (j == nb1) c *= 0.5;
                if (std::abs(ki) == n_[0] / 2) {
                    std::complex<double> h = 0.5 * c;
                    int ip = n_[0] / 2, im = m0 - n_[0] / 2;
                    fine[static_cast<size_t>(ip) * (mb1 + 1) + j] += h;
                    fine[static_cast<size_t>(im) * (mb1 + 1) + j] += std::conj(h);
                } else {
                    int ii = ki >= 0 ? ki : m0 + ki;
                    fine[static_cast<size_t>(ii) * (mb1 + 1) + j] += c;
                }
            }
        }
        fftw_plan p = fftw_plan_dft_c2r_2d(m0, m1, reinterpret_cast<fftw_complex*>(fine.data()),
                                           out.data(), flags);
        fftw_execute(p);
        fftw_destroy_plan(p);
    }
    return out;
}

}  // namespace ottolab

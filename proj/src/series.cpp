#include "ottolab/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ottolab {

DerivativeSeries differentiate_series(const std::vector<double>& values,
                                      const std::vector<double>& times, int order) {
    const int n = static_cast<int>(values.size());
    if (order != 1 && order != 2) throw std::domain_error("differentiate_series: order must be 1 or 2");
    if (n < 7 || times.size() != values.size())
        throw std::domain_error("differentiate_series: need >= 7 matching samples");
    const double h = times[1] - times[0];
    if (!(h > 0.0)) throw std::domain_error("differentiate_series: times must increase");
    for (int i = 1; i < n; ++i)
        if (std::abs(times[i] - times[i - 1] - h) > 1e-8 * h)
            throw std::domain_error("differentiate_series: nonuniform times");

    DerivativeSeries out;
    out.value.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.valid_begin = 2;
    out.valid_end = n - 2;
    for (int i = 2; i < n - 2; ++i) {
        const double fm2 = values[i - 2], fm1 = values[i - 1], f0 = values[i];
        const double fp1 = values[i + 1], fp2 = values[i + 2];
        if (order == 1)
            out.value[i] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        else
            out.value[i] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    }
    return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& values,
                                         const std::vector<double>& times) {
    const size_t n = values.size();
    if (times.size() != n) throw std::domain_error("cumulative_trapezoid: size mismatch");
    std::vector<double> out(n, 0.0);
    for (size_t i = 1; i < n; ++i)
        out[i] = out[i - 1] + 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    return out;
}

const std::vector<double>& EntropySeries::at(const std::string& name) const {
    auto it = cols.find(name);
    if (it == cols.end()) throw std::out_of_range("EntropySeries: missing column " + name);
    return it->second;
}

}  // namespace ottolab

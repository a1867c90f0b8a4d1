#ifndef OTTOLAB_SERIES_HPP
#define OTTOLAB_SERIES_HPP

#include <map>
#include <string>
#include <vector>

namespace ottolab {

/** Finite-difference derivative with validity bounds: entries outside
 * [valid_begin, valid_end) are NaN (stencil would leave the sample range). */
struct DerivativeSeries {
    std::vector<double> value;
    int valid_begin = 0;
    int valid_end = 0;
};

/** Centered 4th-order derivative of order 1 or 2 on a uniform time grid.
 * Requires >= 7 samples; rejects nonuniform spacing. */
DerivativeSeries differentiate_series(const std::vector<double>& values,
                                      const std::vector<double>& times, int order);

/** Cumulative trapezoid integral from times.front() to each sample time. */
std::vector<double> cumulative_trapezoid(const std::vector<double>& values,
                                         const std::vector<double>& times);

/** Named time-series columns of scalar functionals with FD derivatives.
 * Ordered map keeps CSV emission deterministic. */
struct EntropySeries {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> cols;
    int stencil_order = 4;
    int valid_begin = 0;  // rows where FD derivative columns are meaningful
    int valid_end = 0;

    bool has(const std::string& name) const { return cols.count(name) > 0; }
    const std::vector<double>& at(const std::string& name) const;
};

}  // namespace ottolab

#endif

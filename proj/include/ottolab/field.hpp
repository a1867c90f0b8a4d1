#ifndef OTTOLAB_FIELD_HPP
#define OTTOLAB_FIELD_HPP

#include <memory>
#include <vector>

namespace ottolab {

class TorusGeometry;
using GeometryPtr = std::shared_ptr<const TorusGeometry>;

/** A real scalar field sampled on the geometry's uniform grid. */
struct ScalarField {
    GeometryPtr geom;
    std::vector<double> v;
};

/** A vector field: one component array per space axis. */
struct VectorField {
    GeometryPtr geom;
    std::vector<std::vector<double>> comp;
};

/** A symmetric rank-2 tensor field in orthonormal flat coordinates,
 * packed upper-triangular: 1D {xx}; 2D {xx, xy, yy}. */
struct SymTensorField {
    GeometryPtr geom;
    std::vector<std::vector<double>> comp;

    // packed index of (a,b), a<=b
    static int pack(int a, int b, int dim) {
        if (a > b) std::swap(a, b);
        (void)dim;
        return a == 0 ? b : 2;  // (0,0)->0 (0,1)->1 (1,1)->2; 1D only (0,0)->0
    }
};

double sup_norm(const std::vector<double>& v);
double sup_diff(const std::vector<double>& a, const std::vector<double>& b);
bool all_finite(const std::vector<double>& v);

}  // namespace ottolab

#endif

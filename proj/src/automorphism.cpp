#include "latq/automorphism.hpp"

#include "latq/error.hpp"

namespace latq {

bool verify_automorphism(const Lattice& lattice, const QMat& m) {
    if (!lattice.is_exact()) throw UsageError("automorphism check requires an exact lattice");
    if (m.rows() != lattice.dim() || m.cols() != lattice.dim())
        throw UsageError("automorphism candidate dimension mismatch");
    Quad::unify(lattice.exact_basis().field(), m.field());
    if (!(m * m.transpose()).is_identity()) return false;
    const QMat& b = lattice.exact_basis();
    QMat t = b * m * b.inverse();
    return t.is_integer();
}

}  // namespace latq

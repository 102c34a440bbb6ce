#include "schro/operator.hpp"

#include <cmath>
#include <limits>

#include "schro/errors.hpp"

namespace schro {

double OperatorMatrix::norm_bound() const {
    double b = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(offdiag[i - 1]);
        if (i + 1 < diag.size()) row += std::abs(offdiag[i]);
        b = std::max(b, row);
    }
    return b;
}

OperatorMatrix assemble(const PotentialSpec& potential, GridPtr grid) {
    const std::size_t m = grid->m;
    const double h = grid->h;
    const double invh2 = 1.0 / (h * h);

    OperatorMatrix A;
    A.grid = grid;
    A.diag.assign(m, 2.0 * invh2);
    A.offdiag.assign(m > 0 ? m - 1 : 0, -invh2);

    if (potential.kind == PotentialSpec::Kind::DirectQ) {
        if (potential.q.size() != m)
            throw invalid_input("assemble: potential sampled on a different grid");
        for (std::size_t i = 0; i < m; ++i) {
            if (potential.q[i] < 0.0)
                throw invalid_input("assemble: direct potential requires q >= 0");
            A.diag[i] += potential.q[i];
        }
    } else {
        if (potential.nu_mid.size() != m + 1)
            throw invalid_input("assemble: nu sampled on a different grid");
        // diag of node i picks up (nu at right midpoint - nu at left midpoint)/h
        for (std::size_t i = 0; i < m; ++i)
            A.diag[i] += (potential.nu_mid[i + 1] - potential.nu_mid[i]) / h;
    }
    return A;
}

int sturm_count(const OperatorMatrix& matrix, double lam) {
    const std::size_t m = matrix.dim();
    double offmax2 = 0.0;
    for (double e : matrix.offdiag) offmax2 = std::max(offmax2, e * e);
    const double pivmin =
        std::numeric_limits<double>::min() * std::max(1.0, offmax2);

    int count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e2 = (i == 0) ? 0.0 : matrix.offdiag[i - 1] * matrix.offdiag[i - 1];
        d = matrix.diag[i] - lam - e2 / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace schro

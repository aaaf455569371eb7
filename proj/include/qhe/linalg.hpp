#ifndef QHE_LINALG_HPP
#define QHE_LINALG_HPP

#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qhe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Largest entry magnitude, the norm used by all unitarity checks.
inline double max_abs(const Matrix& a) {
    return a.cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const Matrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(a.adjoint() * a - Matrix::Identity(a.rows(), a.cols()));
}

inline bool is_unitary(const Matrix& a, double tol) {
    return unitarity_defect(a) <= tol;
}

inline void require_unitary(const Matrix& a, double tol, const std::string& what) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(what + ": matrix is not square");
    }
    const double defect = unitarity_defect(a);
    if (!(defect <= tol)) {
        throw std::invalid_argument(what + ": matrix is not unitary (defect " +
                                    std::to_string(defect) + ", tolerance " +
                                    std::to_string(tol) + ")");
    }
}

/// Haar-distributed random unitary via QR of a complex Ginibre matrix,
/// with the R-diagonal phase correction.
inline Matrix haar_unitary(int n, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex rjj = r(j, j);
        double mag = std::abs(rjj);
        q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
    }
    return q;
}

}  // namespace qhe

#endif

#include "qhe/fock.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qhe::fock {

std::uint64_t bosonic_dimension(int particles, int modes) {
    if (particles < 1) throw std::invalid_argument("particle count must be >= 1");
    if (modes < 1) throw std::invalid_argument("mode count must be >= 1");
    // C(modes + particles - 1, particles) with 128-bit intermediates.
    const std::uint64_t n = static_cast<std::uint64_t>(modes) + particles - 1;
    std::uint64_t k = particles;
    if (k > n - k) k = n - k;
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > UINT64_MAX) {
            throw std::overflow_error("bosonic basis dimension exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

std::vector<std::vector<int>> enumerate_occupations(int total, int slots) {
    if (total < 0 || slots < 1) {
        throw std::invalid_argument("enumerate_occupations: need total >= 0, slots >= 1");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> c(slots, 0);
    c[0] = total;
    out.push_back(c);
    while (true) {
        // Successor in descending lex: move one unit left-to-right.
        int i = slots - 2;
        while (i >= 0 && c[i] == 0) --i;
        if (i < 0) break;
        const int tail = c[slots - 1];
        c[i] -= 1;
        c[i + 1] = tail + 1;
        for (int j = i + 2; j < slots; ++j) c[j] = 0;
        out.push_back(c);
    }
    return out;
}

FockBasis::FockBasis(int particles, int modes, std::uint64_t dimension_cap)
    : particles_(particles), modes_(modes) {
    const std::uint64_t dim = bosonic_dimension(particles, modes);
    if (dim > dimension_cap) {
        throw std::invalid_argument(
            "Fock basis dimension " + std::to_string(dim) +
            " exceeds the cap of " + std::to_string(dimension_cap) +
            " (raise the cap explicitly to proceed)");
    }
    states_ = enumerate_occupations(particles, modes);
    if (states_.size() != dim) {
        throw std::logic_error("enumeration disagrees with stars-and-bars count");
    }
    index_.reserve(states_.size());
    mode_lists_.reserve(states_.size());
    inv_sqrt_fact_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
        index_.emplace(states_[i], i);
        std::vector<int> list;
        list.reserve(particles_);
        double fact = 1.0;
        for (int mode = 0; mode < modes_; ++mode) {
            for (int rep = 0; rep < states_[i][mode]; ++rep) {
                list.push_back(mode);
                fact *= static_cast<double>(rep + 1);
            }
        }
        mode_lists_.push_back(std::move(list));
        inv_sqrt_fact_.push_back(1.0 / std::sqrt(fact));
    }
}

std::size_t FockBasis::index_of(const std::vector<int>& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) {
        throw std::out_of_range("occupation vector is not an element of this basis");
    }
    return it->second;
}

bool FockBasis::contains(const std::vector<int>& occ) const {
    return index_.find(occ) != index_.end();
}

std::shared_ptr<const FockBasis> make_basis(int m, int d, std::uint64_t dimension_cap) {
    if (d < 1) throw std::invalid_argument("level count must be >= 1");
    return std::make_shared<const FockBasis>(m, m * d, dimension_cap);
}

Complex permanent(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("permanent: matrix must be square");
    }
    const int n = static_cast<int>(a.rows());
    if (n > 16) {
        throw std::invalid_argument("permanent: dimension " + std::to_string(n) +
                                    " exceeds the supported maximum of 16");
    }
    if (n == 0) return Complex(1.0, 0.0);

    // per(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij,
    // visiting subsets in Gray-code order so each step updates one column.
    std::vector<Complex> row_sum(n, Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    std::uint32_t gray_prev = 0;
    const std::uint64_t count = 1ull << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint32_t gray = static_cast<std::uint32_t>(k ^ (k >> 1));
        const std::uint32_t diff = gray ^ gray_prev;
        const int j = std::countr_zero(diff);
        const double sign_col = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) row_sum[i] += sign_col * a(i, j);
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= row_sum[i];
        const bool odd = (std::popcount(gray) & 1) != 0;
        total += odd ? -prod : prod;
        gray_prev = gray;
    }
    if (n & 1) total = -total;
    return total;
}

Matrix lift_unitary(const Matrix& u, const FockBasis& basis, double unitarity_tol) {
    require_unitary(u, unitarity_tol, "lift_unitary");
    if (u.rows() != basis.modes()) {
        throw std::invalid_argument("lift_unitary: matrix acts on " +
                                    std::to_string(u.rows()) + " modes but basis has " +
                                    std::to_string(basis.modes()));
    }
    const std::size_t dim = basis.size();
    const int n = basis.particles();
    Matrix lifted(dim, dim);
    Matrix sub(n, n);
    for (std::size_t col = 0; col < dim; ++col) {
        const auto& in_modes = basis.mode_list(col);
        for (std::size_t row = 0; row < dim; ++row) {
            const auto& out_modes = basis.mode_list(row);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    sub(r, c) = u(out_modes[r], in_modes[c]);
            lifted(row, col) = permanent(sub) * basis.inv_sqrt_factorial(row) *
                               basis.inv_sqrt_factorial(col);
        }
    }
    return lifted;
}

StateVector apply_lifted(const Matrix& lifted, const StateVector& state) {
    if (lifted.cols() != state.amplitudes.size()) {
        throw std::invalid_argument("apply_lifted: dimension mismatch");
    }
    return StateVector{state.basis, lifted * state.amplitudes};
}

StateVector plaintext_to_fock(const std::vector<int>& alpha,
                              std::shared_ptr<const FockBasis> basis) {
    if (!basis) throw std::invalid_argument("plaintext_to_fock: null basis");
    const int m = basis->particles();
    if (static_cast<int>(alpha.size()) != m) {
        throw std::invalid_argument("plaintext_to_fock: plaintext length " +
                                    std::to_string(alpha.size()) +
                                    " does not match particle count " + std::to_string(m));
    }
    if (basis->modes() % m != 0) {
        throw std::invalid_argument("plaintext_to_fock: basis modes not divisible by m");
    }
    const int d = basis->modes() / m;
    std::vector<int> occ(basis->modes(), 0);
    for (int x = 1; x <= m; ++x) {
        const int level = alpha[x - 1];
        if (level < 0 || level >= d) {
            throw std::invalid_argument("plaintext_to_fock: level " + std::to_string(level) +
                                        " at position " + std::to_string(x) +
                                        " is outside 0.." + std::to_string(d - 1));
        }
        occ[flat_index(x, level, d)] += 1;
    }
    Vector amp = Vector::Zero(basis->size());
    amp(static_cast<Eigen::Index>(basis->index_of(occ))) = Complex(1.0, 0.0);
    return StateVector{std::move(basis), std::move(amp)};
}

}  // namespace qhe::fock

#include "qhe/crypto.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qhe::crypto {

void Key::validate() const {
    if (m < 1) throw std::invalid_argument("key: m must be >= 1");
    if (d < 2) throw std::invalid_argument("key: d must be >= 2");
    if (static_cast<int>(kappa.size()) != d - 1) {
        throw std::invalid_argument("key: kappa must have length d-1 = " +
                                    std::to_string(d - 1) + ", got " +
                                    std::to_string(kappa.size()));
    }
    for (int k : kappa) {
        if (k < 0 || k > m) {
            throw std::invalid_argument("key: kappa entry " + std::to_string(k) +
                                        " is outside 0.." + std::to_string(m));
        }
    }
}

std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t mask = std::bit_ceil(bound + 1) - 1;
    std::uint64_t v;
    do {
        v = rng() & mask;
    } while (v > bound);
    return v;
}

Key keygen(int m, int d, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("keygen: m must be >= 1");
    if (d < 2) throw std::invalid_argument("keygen: d must be >= 2");
    std::mt19937_64 rng(seed);
    Key key;
    key.m = m;
    key.d = d;
    key.kappa.reserve(d - 1);
    for (int l = 1; l < d; ++l) {
        key.kappa.push_back(static_cast<int>(bounded_uniform(rng, m)));
    }
    return key;
}

Matrix fourier_matrix(int d) {
    if (d < 2) throw std::invalid_argument("fourier_matrix: d must be >= 2");
    Matrix f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int b = 0; b < d; ++b) {
        for (int a = 0; a < d; ++a) {
            const double angle = 2.0 * kPi * ((static_cast<long long>(a) * b) % d) / d;
            f(b, a) = scale * Complex(std::cos(angle), std::sin(angle));
        }
    }
    return f;
}

Matrix shift_operator(int d) {
    if (d < 2) throw std::invalid_argument("shift_operator: d must be >= 2");
    Matrix l = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a) l((a + 1) % d, a) = Complex(1.0, 0.0);
    return l;
}

Matrix delta_operator(int d, int k, DeltaKind kind) {
    if (d < 2) throw std::invalid_argument("delta_operator: d must be >= 2");
    if (k < 1 || k > d / 2) {
        throw std::invalid_argument("delta_operator: k = " + std::to_string(k) +
                                    " is outside 1.." + std::to_string(d / 2));
    }
    const Matrix l = shift_operator(d);
    Matrix lk = Matrix::Identity(d, d);
    for (int i = 0; i < k; ++i) lk = l * lk;
    const Matrix lk_inv = lk.adjoint();  // L is a permutation, L^-k = (L^k)^T
    if (kind == DeltaKind::Cosine) {
        return 0.5 * (lk + lk_inv);
    }
    return (lk - lk_inv) * Complex(0.0, 0.5);  // -(L^k - L^-k)/(2i)
}

Matrix h_operator(int d, int l) {
    if (d < 2) throw std::invalid_argument("h_operator: d must be >= 2");
    if (l < 0 || l >= d) {
        throw std::invalid_argument("h_operator: l = " + std::to_string(l) +
                                    " is outside 0.." + std::to_string(d - 1));
    }
    const int half = d / 2;
    // eta_l = (1 + (-1)^d)/2 * cos(l pi): zero for odd d, parity sign for even.
    const double eta = (d % 2 == 0) ? ((l % 2 == 0) ? 1.0 : -1.0) : 0.0;
    Matrix h = Matrix::Identity(d, d);
    if (eta != 0.0) {
        h -= eta * delta_operator(d, half, DeltaKind::Cosine);
    }
    for (int k = 1; k <= half; ++k) {
        const double c = std::cos(2.0 * kPi * l * k / d);
        const double s = std::sin(2.0 * kPi * l * k / d);
        h += 2.0 * c * delta_operator(d, k, DeltaKind::Cosine);
        h += 2.0 * s * delta_operator(d, k, DeltaKind::Sine);
    }
    return h / static_cast<double>(d);
}

Encryptor::Encryptor(Key key) : key_(std::move(key)) {
    key_.validate();
    const int d = key_.d;
    phases_.assign(d, 0.0);
    for (int l = 1; l < d; ++l) {
        phases_[l] = 2.0 * kPi * key_.kappa[l - 1] / (key_.m + 1);
    }
    // E is diagonal in the Fourier basis: eigenvalue e^{i phi_l} on |l_F>.
    const Matrix f = fourier_matrix(d);
    Vector eig(d);
    for (int l = 0; l < d; ++l) {
        eig(l) = Complex(std::cos(phases_[l]), std::sin(phases_[l]));
    }
    matrix_ = f * eig.asDiagonal() * f.adjoint();
}

Matrix Encryptor::tensor_power(int copies) const {
    if (copies < 1) throw std::invalid_argument("tensor_power: copies must be >= 1");
    Matrix out = matrix_;
    for (int i = 1; i < copies; ++i) {
        Matrix next(out.rows() * matrix_.rows(), out.cols() * matrix_.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * matrix_.rows(), c * matrix_.cols(),
                           matrix_.rows(), matrix_.cols()) = out(r, c) * matrix_;
        out = std::move(next);
    }
    return out;
}

Matrix internal_on_all_modes(const Matrix& e, int m) {
    if (m < 1) throw std::invalid_argument("internal_on_all_modes: m must be >= 1");
    const int d = static_cast<int>(e.rows());
    Matrix u = Matrix::Zero(m * d, m * d);
    for (int x = 0; x < m; ++x) {
        u.block(x * d, x * d, d, d) = e;
    }
    return u;
}

namespace {

fock::StateVector apply_internal(const fock::StateVector& state, const Key& key,
                                 bool inverse) {
    key.validate();
    if (!state.basis) throw std::invalid_argument("encrypt/decrypt: state has no basis");
    const int m = state.basis->particles();
    if (m != key.m) {
        throw std::invalid_argument("encrypt/decrypt: state carries " + std::to_string(m) +
                                    " particles, key has m = " + std::to_string(key.m));
    }
    if (state.basis->modes() != m * key.d) {
        throw std::invalid_argument(
            "encrypt/decrypt: state basis has " + std::to_string(state.basis->modes()) +
            " modes, key expects " + std::to_string(m * key.d));
    }
    const Encryptor enc(key);
    Matrix e = enc.single_particle();
    if (inverse) e = e.adjoint().eval();
    const Matrix lifted = fock::lift_unitary(internal_on_all_modes(e, m), *state.basis);
    return fock::apply_lifted(lifted, state);
}

}  // namespace

fock::StateVector encrypt(const fock::StateVector& state, const Key& key) {
    return apply_internal(state, key, false);
}

fock::StateVector decrypt(const fock::StateVector& state, const Key& key) {
    return apply_internal(state, key, true);
}

}  // namespace qhe::crypto

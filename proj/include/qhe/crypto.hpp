#ifndef QHE_CRYPTO_HPP
#define QHE_CRYPTO_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "qhe/fock.hpp"
#include "qhe/linalg.hpp"

namespace qhe::crypto {

/// Secret key: kappa_1..kappa_{d-1}, each an integer in {0,...,m}.
struct Key {
    int m = 0;
    int d = 0;
    std::vector<int> kappa;

    void validate() const;
};

/// Deterministic key generation: mt19937_64 seeded with `seed`, each entry
/// drawn uniformly on {0,...,m} by bitmask rejection. Same seed, same key,
/// on every platform.
Key keygen(int m, int d, std::uint64_t seed);

/// Draw uniformly from {0,...,bound} by masking and rejection; the mapping
/// from raw engine output is pinned here so keys are reproducible.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound);

/// Discrete Fourier transform on C^d, entries exp(2 pi i a b / d) / sqrt(d).
Matrix fourier_matrix(int d);

/// Cyclic shift L|a> = |a+1 mod d>.
Matrix shift_operator(int d);

enum class DeltaKind { Cosine, Sine };

/// Encryption generators built from shift powers, k in 1..floor(d/2):
///   cosine: (L^k + L^-k) / 2, sine: -(L^k - L^-k) / (2i).
/// Both diagonal in the Fourier basis with entries cos/sin(2 pi a k / d).
Matrix delta_operator(int d, int k, DeltaKind kind);

/// Assembles the rank-one Fourier projector |l_F><l_F| from the delta
/// generators; equals fourier_matrix conjugation of |l><l| to 1e-10.
Matrix h_operator(int d, int l);

/// The per-particle encryption unitary E = prod_l exp(i phi_l H_l) with
/// phi_l = 2 pi kappa_l / (m+1), diagonal in the Fourier basis.
class Encryptor {
public:
    explicit Encryptor(Key key);

    const Key& key() const { return key_; }
    /// phi_0 = 0 followed by phi_1..phi_{d-1}.
    const std::vector<double>& phases() const { return phases_; }
    /// The d x d matrix E.
    const Matrix& single_particle() const { return matrix_; }
    /// E applied identically to `copies` particles (Kronecker power).
    Matrix tensor_power(int copies) const;

private:
    Key key_;
    std::vector<double> phases_;
    Matrix matrix_;
};

/// Single-particle unitary on m*d modes acting as `e` on every internal
/// block: kron(I_m, e) in the spatial-major mode layout.
Matrix internal_on_all_modes(const Matrix& e, int m);

/// Apply the Fock lift of I_m (x) E to the state.
fock::StateVector encrypt(const fock::StateVector& state, const Key& key);
/// Apply the Fock lift of I_m (x) E^dagger; inverse of encrypt.
fock::StateVector decrypt(const fock::StateVector& state, const Key& key);

}  // namespace qhe::crypto

#endif

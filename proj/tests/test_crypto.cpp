#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"
#include "qhe/linalg.hpp"
#include "qhe/optics.hpp"

using namespace qhe;
using crypto::DeltaKind;

namespace {

Matrix fourier_diagonal(const Matrix& op, int d) {
    const Matrix f = crypto::fourier_matrix(d);
    return f.adjoint() * op * f;
}

}  // namespace

TEST_SUITE("crypto") {

TEST_CASE("two-point Fourier matrix is the Hadamard") {
    const Matrix f = crypto::fourier_matrix(2);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix expected(2, 2);
    expected << s, s, s, -s;
    CHECK(max_abs(f - expected) < 1e-15);
    CHECK_THROWS_AS(crypto::fourier_matrix(1), std::invalid_argument);
}

TEST_CASE("Fourier matrix is unitary with order four") {
    for (int d = 2; d <= 8; ++d) {
        CHECK(unitarity_defect(crypto::fourier_matrix(d)) <= 1e-12);
    }
    const Matrix f = crypto::fourier_matrix(4);
    CHECK(max_abs(f * f * f * f - Matrix::Identity(4, 4)) <= 1e-10);
}

TEST_CASE("shift operator cycles levels") {
    const Matrix l = crypto::shift_operator(3);
    Vector two = Vector::Zero(3);
    two(2) = 1.0;
    Vector zero = Vector::Zero(3);
    zero(0) = 1.0;
    CHECK((l * two - zero).norm() < 1e-15);
    Matrix power = Matrix::Identity(3, 3);
    for (int i = 0; i < 3; ++i) power = l * power;
    CHECK(max_abs(power - Matrix::Identity(3, 3)) < 1e-15);
    CHECK_THROWS_AS(crypto::shift_operator(0), std::invalid_argument);
}

TEST_CASE("shift is diagonal in the Fourier basis") {
    for (int d = 2; d <= 5; ++d) {
        const Matrix diag = fourier_diagonal(crypto::shift_operator(d), d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const double angle = -2.0 * kPi * a / d;
                const Complex expected =
                    (a == b) ? Complex(std::cos(angle), std::sin(angle)) : Complex(0.0);
                CHECK(std::abs(diag(a, b) - expected) <= 1e-12);
            }
        }
    }
}

TEST_CASE("delta operators at d=2 degenerate as expected") {
    const Matrix l = crypto::shift_operator(2);
    CHECK(max_abs(crypto::delta_operator(2, 1, DeltaKind::Cosine) - l) < 1e-15);
    CHECK(max_abs(crypto::delta_operator(2, 1, DeltaKind::Sine)) < 1e-15);
}

TEST_CASE("cosine delta has the cosine spectrum") {
    const Matrix diag = fourier_diagonal(crypto::delta_operator(3, 1, DeltaKind::Cosine), 3);
    CHECK(std::abs(diag(0, 0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(diag(1, 1) - Complex(-0.5)) < 1e-12);
    CHECK(std::abs(diag(2, 2) - Complex(-0.5)) < 1e-12);
}

TEST_CASE("delta operators are Hermitian with matching spectra") {
    for (int d = 2; d <= 6; ++d) {
        for (int k = 1; k <= d / 2; ++k) {
            const Matrix cos_op = crypto::delta_operator(d, k, DeltaKind::Cosine);
            const Matrix sin_op = crypto::delta_operator(d, k, DeltaKind::Sine);
            CHECK(max_abs(cos_op - cos_op.adjoint()) <= 1e-12);
            CHECK(max_abs(sin_op - sin_op.adjoint()) <= 1e-12);
            const Matrix dc = fourier_diagonal(cos_op, d);
            const Matrix ds = fourier_diagonal(sin_op, d);
            for (int a = 0; a < d; ++a) {
                CHECK(std::abs(dc(a, a) - Complex(std::cos(2.0 * kPi * a * k / d))) <= 1e-12);
                CHECK(std::abs(ds(a, a) - Complex(std::sin(2.0 * kPi * a * k / d))) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(crypto::delta_operator(4, 0, DeltaKind::Cosine), std::invalid_argument);
    CHECK_THROWS_AS(crypto::delta_operator(4, 3, DeltaKind::Sine), std::invalid_argument);
}

TEST_CASE("assembled projectors match the Fourier projectors") {
    for (int d = 2; d <= 6; ++d) {
        const Matrix f = crypto::fourier_matrix(d);
        for (int l = 0; l < d; ++l) {
            Matrix proj = Matrix::Zero(d, d);
            proj(l, l) = 1.0;
            CHECK(max_abs(crypto::h_operator(d, l) - f * proj * f.adjoint()) <= 1e-10);
        }
    }
    CHECK_THROWS_AS(crypto::h_operator(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(crypto::h_operator(3, -1), std::invalid_argument);
}

TEST_CASE("projectors are complete and orthogonal") {
    for (int d = 2; d <= 6; ++d) {
        Matrix sum = Matrix::Zero(d, d);
        for (int l = 0; l < d; ++l) sum += crypto::h_operator(d, l);
        CHECK(max_abs(sum - Matrix::Identity(d, d)) <= 1e-10);
        for (int l = 0; l < d; ++l) {
            const Matrix hl = crypto::h_operator(d, l);
            for (int lp = 0; lp < d; ++lp) {
                const Matrix expected = (l == lp) ? hl : Matrix(Matrix::Zero(d, d));
                CHECK(max_abs(hl * crypto::h_operator(d, lp) - expected) <= 1e-10);
            }
        }
    }
}

TEST_CASE("keygen respects range and determinism") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const crypto::Key key = crypto::keygen(3, 2, seed);
        REQUIRE(key.kappa.size() == 1);
        CHECK(key.kappa[0] >= 0);
        CHECK(key.kappa[0] <= 3);
    }
    const crypto::Key a = crypto::keygen(4, 5, 99);
    const crypto::Key b = crypto::keygen(4, 5, 99);
    CHECK(a.kappa == b.kappa);
    CHECK_THROWS_AS(crypto::keygen(0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(crypto::keygen(2, 1, 1), std::invalid_argument);
}

TEST_CASE("keygen draws are uniform under a chi-square-style bound") {
    const int m = 3;
    const int draws = 100000;
    std::array<int, 4> counts{};
    std::mt19937_64 rng(424242);
    for (int i = 0; i < draws; ++i) {
        ++counts[crypto::bounded_uniform(rng, m)];
    }
    const double p = 1.0 / (m + 1);
    const double mean = draws * p;
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    for (int bin = 0; bin <= m; ++bin) {
        CHECK(std::abs(counts[bin] - mean) <= 3.0 * sigma);
    }
}

TEST_CASE("zero key encrypts trivially") {
    const crypto::Encryptor enc(crypto::Key{2, 3, {0, 0}});
    CHECK(max_abs(enc.single_particle() - Matrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("encryptor is unitary and Fourier-diagonal with the key phases") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int d = 2 + static_cast<int>(rng() % 4);
        const crypto::Encryptor enc(crypto::keygen(m, d, rng()));
        const Matrix e = enc.single_particle();
        CHECK(unitarity_defect(e) <= 1e-12);
        const Matrix diag = fourier_diagonal(e, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const double phi = enc.phases()[a];
                const Complex expected =
                    (a == b) ? Complex(std::cos(phi), std::sin(phi)) : Complex(0.0);
                CHECK(std::abs(diag(a, b) - expected) <= 1e-12);
            }
        }
        CHECK(enc.phases()[0] == 0.0);
    }
}

TEST_CASE("encryptor agrees with the generator exponential") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 3);
        const int d = 2 + static_cast<int>(rng() % 3);
        const crypto::Key key = crypto::keygen(m, d, rng());
        const crypto::Encryptor enc(key);

        Matrix generator = Matrix::Zero(d, d);
        for (int l = 1; l < d; ++l) {
            generator += Complex(0.0, enc.phases()[l]) * crypto::h_operator(d, l);
        }
        CHECK(max_abs(enc.single_particle() - oracles::matrix_exp(generator)) <= 1e-10);

        Matrix product = Matrix::Identity(d, d);
        for (int l = 1; l < d; ++l) {
            const Matrix el = oracles::matrix_exp(Complex(0.0, 2.0 * kPi / (m + 1)) *
                                                  crypto::h_operator(d, l));
            for (int times = 0; times < key.kappa[l - 1]; ++times) product = el * product;
        }
        CHECK(max_abs(enc.single_particle() - product) <= 1e-10);
    }
}

TEST_CASE("encryptor powers return to the identity") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int d = 2 + static_cast<int>(rng() % 4);
        const Matrix e = crypto::Encryptor(crypto::keygen(m, d, rng())).single_particle();
        Matrix power = Matrix::Identity(d, d);
        for (int i = 0; i <= m; ++i) power = e * power;
        CHECK(max_abs(power - Matrix::Identity(d, d)) <= 1e-10);
    }
}

TEST_CASE("encryptors form an abelian group in the key") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int d = 2 + static_cast<int>(rng() % 4);
        const crypto::Key ka = crypto::keygen(m, d, rng());
        const crypto::Key kb = crypto::keygen(m, d, rng());
        crypto::Key sum{m, d, {}};
        for (int l = 0; l < d - 1; ++l) {
            sum.kappa.push_back((ka.kappa[l] + kb.kappa[l]) % (m + 1));
        }
        const Matrix ea = crypto::Encryptor(ka).single_particle();
        const Matrix eb = crypto::Encryptor(kb).single_particle();
        CHECK(max_abs(ea * eb - eb * ea) <= 1e-12);
        CHECK(max_abs(ea * eb - crypto::Encryptor(sum).single_particle()) <= 1e-10);
    }
}

TEST_CASE("encryptor commutes with the shift") {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + static_cast<int>(rng() % 5);
        const int d = 2 + static_cast<int>(rng() % 5);
        const Matrix e = crypto::Encryptor(crypto::keygen(m, d, rng())).single_particle();
        const Matrix l = crypto::shift_operator(d);
        CHECK(max_abs(e * l - l * e) <= 1e-10);
    }
}

TEST_CASE("reflection key at d=2 maps level 0 to level 1 exactly") {
    const crypto::Key key{1, 2, {1}};
    const crypto::Encryptor enc(key);
    Matrix reflection(2, 2);
    reflection << 0, 1, 1, 0;  // I - 2 |1_F><1_F|
    CHECK(max_abs(enc.single_particle() - reflection) <= 1e-15);

    auto basis = fock::make_basis(1, 2);
    const fock::StateVector zero = fock::plaintext_to_fock({0}, basis);
    const fock::StateVector out = crypto::encrypt(zero, key);
    CHECK(std::abs(out.amplitudes(basis->index_of({1, 0}))) <= 1e-15);
    CHECK(std::abs(out.amplitudes(basis->index_of({0, 1})) - Complex(1.0)) <= 1e-15);
}

TEST_CASE("tensor power stacks the single-particle matrix") {
    const crypto::Encryptor enc(crypto::keygen(2, 2, 3));
    const Matrix e = enc.single_particle();
    const Matrix e2 = enc.tensor_power(2);
    REQUIRE(e2.rows() == 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(e2(r, c) - e(r / 2, c / 2) * e(r % 2, c % 2)) <= 1e-15);
}

TEST_CASE("decrypt inverts encrypt on random states") {
    std::mt19937_64 rng(61);
    for (const auto& [m, d] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
        auto basis = fock::make_basis(m, d);
        for (int rep = 0; rep < 5; ++rep) {
            const crypto::Key key = crypto::keygen(m, d, rng());
            const fock::StateVector psi = oracles::random_state(basis, rng);
            const fock::StateVector back = crypto::decrypt(crypto::encrypt(psi, key), key);
            CHECK((back.amplitudes - psi.amplitudes).norm() <= 1e-9);
        }
    }
}

TEST_CASE("encrypt validates dimensions") {
    auto basis = fock::make_basis(2, 2);
    const fock::StateVector psi = fock::plaintext_to_fock({0, 0}, basis);
    CHECK_THROWS_AS(crypto::encrypt(psi, crypto::keygen(2, 3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(crypto::encrypt(psi, crypto::keygen(3, 2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(crypto::Encryptor(crypto::Key{2, 3, {0}}), std::invalid_argument);
    CHECK_THROWS_AS(crypto::Encryptor(crypto::Key{2, 3, {0, 3}}), std::invalid_argument);
}

TEST_CASE("lifted encryption commutes with lifted spatial circuits") {
    std::mt19937_64 rng(71);
    for (const auto& [m, d] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
        auto basis = fock::make_basis(m, d);
        for (int rep = 0; rep < 3; ++rep) {
            const crypto::Encryptor enc(crypto::keygen(m, d, rng()));
            const Matrix spatial = haar_unitary(m, rng);
            Matrix u_big = Matrix::Zero(m * d, m * d);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y)
                    u_big.block(x * d, y * d, d, d) =
                        spatial(x, y) * Matrix::Identity(d, d);
            const Matrix lift_u = fock::lift_unitary(u_big, *basis);
            const Matrix lift_e =
                fock::lift_unitary(crypto::internal_on_all_modes(enc.single_particle(), m),
                                   *basis);
            CHECK(max_abs(lift_u * lift_e - lift_e * lift_u) <= 1e-8);
        }
    }
}

}  // TEST_SUITE

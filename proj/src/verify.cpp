#include "qhe/verify.hpp"

#include <cmath>
#include <random>

#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"
#include "qhe/linalg.hpp"
#include "qhe/optics.hpp"
#include "qhe/security.hpp"

namespace qhe::verify {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw VerificationError(what);
}

void require_close(double actual, double expected, double tol, const std::string& what) {
    require(std::abs(actual - expected) <= tol,
            what + " (got " + std::to_string(actual) + ", expected " +
                std::to_string(expected) + ")");
}

}  // namespace

void verify_fock() {
    require(fock::bosonic_dimension(2, 4) == 10, "fock: dimension formula at (2 in 4)");
    require(fock::enumerate_occupations(2, 4).size() == 10, "fock: enumeration count at (2 in 4)");

    const fock::FockBasis basis(2, 4);
    require(basis.size() == 10, "fock: basis size");
    require(basis.occupation(0) == std::vector<int>{2, 0, 0, 0}, "fock: descending-lex head");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        require(basis.index_of(basis.occupation(i)) == i, "fock: index round trip");
    }

    Matrix ones = Matrix::Ones(3, 3);
    require(std::abs(fock::permanent(ones) - Complex(6.0, 0.0)) < 1e-12,
            "fock: permanent of the all-ones 3x3 is 3!");

    std::mt19937_64 rng(11);
    const Matrix u = haar_unitary(4, rng);
    const Matrix v = haar_unitary(4, rng);
    const Matrix lu = fock::lift_unitary(u, basis);
    const Matrix lv = fock::lift_unitary(v, basis);
    require(unitarity_defect(lu) < 1e-9, "fock: lift preserves unitarity");
    require(max_abs(fock::lift_unitary(u * v, basis) - lu * lv) < 1e-9,
            "fock: lift is multiplicative");
}

void verify_crypto() {
    for (int d = 2; d <= 3; ++d) {
        require(unitarity_defect(crypto::fourier_matrix(d)) < 1e-12,
                "crypto: Fourier matrix unitary at d=" + std::to_string(d));
        const Matrix f = crypto::fourier_matrix(d);
        for (int l = 0; l < d; ++l) {
            Matrix proj = Matrix::Zero(d, d);
            proj(l, l) = 1.0;
            require(max_abs(crypto::h_operator(d, l) - f * proj * f.adjoint()) < 1e-10,
                    "crypto: H_l equals the Fourier projector at d=" + std::to_string(d));
        }
    }

    const Matrix shift = crypto::shift_operator(3);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const crypto::Key key = crypto::keygen(3, 3, seed);
        const crypto::Encryptor enc(key);
        const Matrix e = enc.single_particle();
        require(unitarity_defect(e) < 1e-12, "crypto: E unitary");
        Matrix power = Matrix::Identity(3, 3);
        for (int i = 0; i <= key.m; ++i) power *= e;
        require(max_abs(power - Matrix::Identity(3, 3)) < 1e-10, "crypto: E^(m+1) = I");
        require(max_abs(e * shift - shift * e) < 1e-10, "crypto: [E, L] = 0");
    }

    const crypto::Key zero{2, 3, {0, 0}};
    require(max_abs(crypto::Encryptor(zero).single_particle() - Matrix::Identity(3, 3)) < 1e-12,
            "crypto: zero key encrypts trivially");
}

void verify_evaluate() {
    std::mt19937_64 rng(23);
    const Matrix u = haar_unitary(3, rng);
    const optics::Circuit circuit = optics::reck_decompose(u);
    require(max_abs(optics::circuit_to_unitary(circuit) - u) < 1e-8,
            "evaluate: Reck recompile at m=3");

    const int d = 2;
    auto basis = fock::make_basis(2, d);
    const fock::StateVector in = fock::plaintext_to_fock({0, 1}, basis);
    const Matrix balanced = optics::beam_splitter(2, 1, 2, kPi / 4.0, 0.0);
    const fock::StateVector out = optics::evaluate_fock(in, balanced, d);
    const auto marginal = optics::spatial_marginal(out, d);
    const auto coincidence = marginal.find(std::vector<int>{1, 1});
    require(coincidence != marginal.end(), "evaluate: marginal covers the coincidence bin");
    require_close(coincidence->second, 0.5, 1e-10,
                  "evaluate: distinguishable coincidence probability");

    const fock::StateVector same = fock::plaintext_to_fock({0, 0}, basis);
    const auto bunched = optics::spatial_marginal(optics::evaluate_fock(same, balanced, d), d);
    require(std::abs(bunched.at({1, 1})) <= 1e-12, "evaluate: HOM coincidence vanishes");

    const optics::Histogram a = optics::sample_output(out, 64, 5, optics::SampleView::Joint);
    const optics::Histogram b = optics::sample_output(out, 64, 5, optics::SampleView::Joint);
    require(a.counts == b.counts, "evaluate: sampling is deterministic under a fixed seed");
}

void verify_secinfo() {
    const std::vector<int> alpha{0, 1};
    const Matrix avg = security::rho_alpha_key_average(alpha, 2, 2);
    const Matrix closed = security::rho_alpha_closed_form(alpha, 2, 2);
    require(max_abs(avg - closed) < 1e-10, "secinfo: key average matches the block form");
    require_close(security::von_neumann_entropy_bits(avg), 1.5, 1e-10,
                  "secinfo: S(rho_alpha) at (2,2)");

    const security::AnalysisReport report =
        security::holevo(security::Prior::make_uniform(), 2, 2);
    require_close(report.chi_bits, 0.5, 1e-10, "secinfo: chi at (2,2)");
    require(report.chi_bits <= report.bound_log2_mfact_bits + 1e-8,
            "secinfo: chi respects the log2 m! bound");
    require_close(report.gap_exact_bits, 2.0 - 1.0, 1e-12, "secinfo: exact gap at (2,2)");
}

void verify_all() {
    verify_fock();
    verify_crypto();
    verify_evaluate();
    verify_secinfo();
}

}  // namespace qhe::verify

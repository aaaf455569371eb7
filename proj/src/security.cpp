#include "qhe/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"

namespace qhe::security {

namespace {

void check_alpha(const std::vector<int>& alpha, int m, int d) {
    if (static_cast<int>(alpha.size()) != m) {
        throw std::invalid_argument("plaintext length " + std::to_string(alpha.size()) +
                                    " does not match m = " + std::to_string(m));
    }
    for (int a : alpha) {
        if (a < 0 || a >= d) {
            throw std::invalid_argument("plaintext entry " + std::to_string(a) +
                                        " is outside 0.." + std::to_string(d - 1));
        }
    }
}

std::uint64_t pow_u64_checked(std::uint64_t base, int exp, const char* what) {
    unsigned __int128 v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > UINT64_MAX) throw std::overflow_error(std::string(what) + " exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

void check_caps(int m, int d, std::uint64_t dimension_cap) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    const std::uint64_t dim = pow_u64_checked(d, m, "site space dimension d^m");
    if (dim > dimension_cap) {
        throw std::invalid_argument("site space dimension d^m = " + std::to_string(dim) +
                                    " exceeds the cap of " + std::to_string(dimension_cap));
    }
}

/// F^(x)m with the big-endian site indexing.
Matrix fourier_tensor_power(int m, int d) {
    const Matrix f = crypto::fourier_matrix(d);
    Matrix out = f;
    for (int x = 1; x < m; ++x) {
        Matrix next(out.rows() * d, out.cols() * d);
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * d, c * d, d, d) = out(r, c) * f;
        out = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<Composition> compositions(int m, int d) {
    if (m < 1) throw std::invalid_argument("compositions: m must be >= 1");
    if (d < 2) throw std::invalid_argument("compositions: d must be >= 2");
    return fock::enumerate_occupations(m, d);
}

std::uint64_t multinomial(const Composition& lambda) {
    const auto overflow = [] {
        return std::overflow_error(
            "multinomial coefficient exceeds 64 bits; use log2_multinomial "
            "(the analysis switches to it automatically for m > 20)");
    };
    // prod_k C(partial_sum_k, lambda_k), each factor exact.
    unsigned __int128 result = 1;
    int partial = 0;
    for (int part : lambda) {
        if (part < 0) throw std::invalid_argument("multinomial: negative part");
        partial += part;
        unsigned __int128 binom = 1;
        for (int i = 1; i <= part; ++i) {
            binom = binom * (partial - part + i) / i;
            if (binom > UINT64_MAX) throw overflow();
        }
        result *= binom;
        if (result > UINT64_MAX) throw overflow();
    }
    return static_cast<std::uint64_t>(result);
}

double log2_multinomial(const Composition& lambda) {
    int m = 0;
    for (int part : lambda) {
        if (part < 0) throw std::invalid_argument("log2_multinomial: negative part");
        m += part;
    }
    const double ln2 = std::log(2.0);
    double v = std::lgamma(static_cast<double>(m) + 1.0);
    for (int part : lambda) v -= std::lgamma(static_cast<double>(part) + 1.0);
    return v / ln2;
}

int lee_weight(const std::vector<int>& beta, int level) {
    if (level < 0) throw std::invalid_argument("lee_weight: level must be >= 0");
    return static_cast<int>(std::count(beta.begin(), beta.end(), level));
}

std::size_t site_index(const std::vector<int>& beta, int d) {
    std::size_t idx = 0;
    for (int b : beta) {
        if (b < 0 || b >= d) throw std::invalid_argument("site_index: entry out of range");
        idx = idx * d + static_cast<std::size_t>(b);
    }
    return idx;
}

std::vector<int> site_configuration(std::size_t index, int m, int d) {
    std::vector<int> beta(m, 0);
    for (int x = m - 1; x >= 0; --x) {
        beta[x] = static_cast<int>(index % d);
        index /= d;
    }
    if (index != 0) throw std::invalid_argument("site_configuration: index out of range");
    return beta;
}

Vector psi_lambda(const std::vector<int>& alpha, const Composition& lambda, int d) {
    const int m = static_cast<int>(alpha.size());
    if (static_cast<int>(lambda.size()) != d) {
        throw std::invalid_argument("psi_lambda: composition has " +
                                    std::to_string(lambda.size()) + " parts, expected d");
    }
    int total = 0;
    for (int part : lambda) total += part;
    if (total != m) {
        throw std::invalid_argument("psi_lambda: composition sums to " +
                                    std::to_string(total) + ", expected m = " +
                                    std::to_string(m));
    }
    check_alpha(alpha, m, d);
    const std::uint64_t dim = pow_u64_checked(d, m, "site space dimension d^m");

    // The smallest arrangement of the symbol multiset, then walk all R_lambda
    // distinct arrangements with next_permutation.
    std::vector<int> beta;
    beta.reserve(m);
    for (int symbol = 0; symbol < d; ++symbol)
        for (int rep = 0; rep < lambda[symbol]; ++rep) beta.push_back(symbol);

    const double amp = 1.0 / std::sqrt(static_cast<double>(multinomial(lambda)));
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim));
    do {
        long long dot = 0;
        for (int x = 0; x < m; ++x) dot += static_cast<long long>(alpha[x]) * beta[x];
        const double angle = -2.0 * kPi * static_cast<double>(dot % d) / d;
        psi(static_cast<Eigen::Index>(site_index(beta, d))) =
            amp * Complex(std::cos(angle), std::sin(angle));
    } while (std::next_permutation(beta.begin(), beta.end()));
    return psi;
}

Matrix rho_alpha_key_average(const std::vector<int>& alpha, int m, int d,
                             std::uint64_t dimension_cap, std::uint64_t key_count_cap) {
    check_caps(m, d, dimension_cap);
    check_alpha(alpha, m, d);
    const std::uint64_t key_count = pow_u64_checked(m + 1, d - 1, "key count (m+1)^(d-1)");
    if (key_count > key_count_cap) {
        throw std::invalid_argument("key count (m+1)^(d-1) = " + std::to_string(key_count) +
                                    " exceeds the cap of " + std::to_string(key_count_cap));
    }
    const std::size_t dim = static_cast<std::size_t>(pow_u64_checked(d, m, "d^m"));

    Matrix rho = Matrix::Zero(dim, dim);
    crypto::Key key;
    key.m = m;
    key.d = d;
    key.kappa.assign(d - 1, 0);
    while (true) {
        const crypto::Encryptor enc(key);
        // E^(x)m |alpha> as a Kronecker product of the encrypted columns.
        Vector v = enc.single_particle().col(alpha[0]);
        for (int x = 1; x < m; ++x) {
            const Vector col = enc.single_particle().col(alpha[x]);
            Vector next(v.size() * d);
            for (Eigen::Index i = 0; i < v.size(); ++i)
                next.segment(i * d, d) = v(i) * col;
            v = std::move(next);
        }
        rho.noalias() += v * v.adjoint();

        int pos = d - 2;  // odometer over kappa entries
        while (pos >= 0 && key.kappa[pos] == m) {
            key.kappa[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++key.kappa[pos];
    }
    return rho / static_cast<double>(key_count);
}

Matrix rho_alpha_closed_form(const std::vector<int>& alpha, int m, int d,
                             std::uint64_t dimension_cap) {
    check_caps(m, d, dimension_cap);
    check_alpha(alpha, m, d);
    const std::size_t dim = static_cast<std::size_t>(pow_u64_checked(d, m, "d^m"));
    const double dm = static_cast<double>(dim);

    Matrix rotated = Matrix::Zero(dim, dim);
    for (const Composition& lambda : compositions(m, d)) {
        const Vector psi = psi_lambda(alpha, lambda, d);
        const double weight = static_cast<double>(multinomial(lambda)) / dm;
        rotated.noalias() += weight * (psi * psi.adjoint());
    }
    const Matrix f = fourier_tensor_power(m, d);
    return f * rotated * f.adjoint();
}

double von_neumann_entropy_bits(const Matrix& rho) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("entropy: density matrix must be square");
    }
    if (max_abs(rho - rho.adjoint()) > kHermiticityTol) {
        throw std::invalid_argument("entropy: matrix is not Hermitian within tolerance");
    }
    if (std::abs(rho.trace().real() - 1.0) > kTraceTol ||
        std::abs(rho.trace().imag()) > kTraceTol) {
        throw std::invalid_argument("entropy: trace deviates from 1 beyond tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver((rho + rho.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("entropy: eigendecomposition failed");
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double ev = solver.eigenvalues()(i);
        if (ev < -kPsdTol) {
            throw std::invalid_argument("entropy: eigenvalue " + std::to_string(ev) +
                                        " is negative beyond tolerance");
        }
        if (ev <= kEigenvalueFloor) continue;  // clipped to zero
        s -= ev * std::log2(ev);
    }
    return s;
}

Prior Prior::make_uniform() {
    return Prior{};
}

Prior Prior::point_mass(std::vector<int> alpha) {
    Prior p;
    p.uniform = false;
    p.entries.emplace_back(std::move(alpha), 1.0);
    return p;
}

Prior Prior::from_entries(std::vector<std::pair<std::vector<int>, double>> entries) {
    Prior p;
    p.uniform = false;
    p.entries = std::move(entries);
    return p;
}

std::vector<double> Prior::dense(int m, int d) const {
    const std::size_t dim = static_cast<std::size_t>(pow_u64_checked(d, m, "d^m"));
    if (uniform) {
        return std::vector<double>(dim, 1.0 / static_cast<double>(dim));
    }
    std::vector<double> p(dim, 0.0);
    double sum = 0.0;
    for (const auto& [alpha, weight] : entries) {
        check_alpha(alpha, m, d);
        if (weight < 0.0) throw std::invalid_argument("prior: negative weight");
        p[site_index(alpha, d)] += weight;
        sum += weight;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("prior: weights sum to " + std::to_string(sum) +
                                    ", expected 1 within 1e-12");
    }
    return p;
}

double theorem1_bound_bits(int m) {
    if (m < 1) throw std::invalid_argument("theorem1_bound: m must be >= 1");
    return std::lgamma(static_cast<double>(m) + 1.0) / std::log(2.0);
}

namespace {

/// Visits (lambda, log2 R_lambda) using exact integers up to m = 20 and
/// log-gamma beyond.
template <typename Fn>
void for_each_block(int m, int d, Fn&& fn) {
    const bool exact = (m <= 20);
    for (const Composition& lambda : compositions(m, d)) {
        const double log2_r = exact ? std::log2(static_cast<double>(multinomial(lambda)))
                                    : log2_multinomial(lambda);
        fn(lambda, log2_r);
    }
}

}  // namespace

double partition_log_bound_bits(int m, int d) {
    if (m < 1) throw std::invalid_argument("partition_log_bound: m must be >= 1");
    if (d < 2) throw std::invalid_argument("partition_log_bound: d must be >= 2");
    const double log2_dm = m * std::log2(static_cast<double>(d));
    double bound = 0.0;
    for_each_block(m, d, [&](const Composition&, double log2_r) {
        bound += std::exp2(log2_r - log2_dm) * log2_r;
    });
    return bound;
}

double block_weight_entropy_bits(int m, int d) {
    if (m < 1) throw std::invalid_argument("block_weight_entropy: m must be >= 1");
    if (d < 2) throw std::invalid_argument("block_weight_entropy: d must be >= 2");
    const double log2_dm = m * std::log2(static_cast<double>(d));
    double h = 0.0;
    for_each_block(m, d, [&](const Composition&, double log2_r) {
        const double w = std::exp2(log2_r - log2_dm);
        h -= w * (log2_r - log2_dm);
    });
    return h;
}

GapEstimate gap_estimate(int m, int d) {
    if (m < 1) throw std::invalid_argument("gap_estimate: m must be >= 1");
    if (d < 2) throw std::invalid_argument("gap_estimate: d must be >= 2");
    GapEstimate g;
    g.exact_bits = m * std::log2(static_cast<double>(d)) - theorem1_bound_bits(m);
    g.asymptotic_bits = m * std::log2(static_cast<double>(d) / m) + m / std::log(2.0);
    return g;
}

AnalysisReport holevo(const Prior& prior, int m, int d, std::uint64_t dimension_cap,
                      std::uint64_t key_count_cap) {
    check_caps(m, d, dimension_cap);
    const std::vector<double> p = prior.dense(m, d);
    const std::size_t dim = p.size();

    AnalysisReport report;
    report.m = m;
    report.d = d;
    report.prior = prior;
    const double dm = static_cast<double>(dim);
    for (const Composition& lambda : compositions(m, d)) {
        BlockEntry entry;
        entry.lambda = lambda;
        entry.r = multinomial(lambda);
        entry.weight = static_cast<double>(entry.r) / dm;
        report.blocks.push_back(std::move(entry));
    }

    Matrix rho_bar = Matrix::Zero(dim, dim);
    double mean_entropy = 0.0;
    double s_alpha_zero = 0.0;
    bool have_zero = false;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (p[idx] == 0.0 && idx != 0) continue;
        const std::vector<int> alpha = site_configuration(idx, m, d);
        const Matrix rho = rho_alpha_key_average(alpha, m, d, dimension_cap, key_count_cap);
        const double s = von_neumann_entropy_bits(rho);
        if (idx == 0) {
            s_alpha_zero = s;
            have_zero = true;
        }
        if (p[idx] > 0.0) {
            rho_bar.noalias() += p[idx] * rho;
            mean_entropy += p[idx] * s;
        }
    }
    if (!have_zero) s_alpha_zero = mean_entropy;

    report.s_rho_alpha_bits = s_alpha_zero;
    report.s_rho_bar_bits = von_neumann_entropy_bits(rho_bar);
    report.chi_bits = report.s_rho_bar_bits - mean_entropy;
    report.bound_log2_mfact_bits = theorem1_bound_bits(m);
    report.partition_log_bound_bits = partition_log_bound_bits(m, d);
    const GapEstimate gap = gap_estimate(m, d);
    report.gap_exact_bits = gap.exact_bits;
    report.gap_asymptotic_bits = gap.asymptotic_bits;
    report.tolerances = {
        {"hermiticity", kHermiticityTol},
        {"trace", kTraceTol},
        {"psd", kPsdTol},
        {"eigenvalue_floor", kEigenvalueFloor},
    };
    return report;
}

}  // namespace qhe::security

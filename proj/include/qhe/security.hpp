#ifndef QHE_SECURITY_HPP
#define QHE_SECURITY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhe/linalg.hpp"

namespace qhe::security {

inline constexpr std::uint64_t kDefaultDimensionCap = 20000;
inline constexpr std::uint64_t kDefaultKeyCountCap = 20000;

/// Tolerances shared by the density-matrix pipeline.
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;          // eigenvalues below -1e-10 are an error
inline constexpr double kEigenvalueFloor = 1e-12;  // values at or below this clip to 0

/// Ordered d-tuple of non-negative counts summing to m. Position-labeled:
/// lambda_j is the number of particles carrying symbol j, so distinct
/// orderings are distinct blocks and the block dimensions R_lambda sum
/// to d^m. (Plain integer partitions would not satisfy that count.)
using Composition = std::vector<int>;

/// All compositions of m into d parts, lexicographically descending.
std::vector<Composition> compositions(int m, int d);

/// Exact multinomial m! / prod lambda_j!; throws std::overflow_error with
/// a pointer to the log-domain routine when the value exceeds 64 bits.
std::uint64_t multinomial(const Composition& lambda);

/// log2 of the multinomial via lgamma; the automatic fallback the analysis
/// uses once m > 20.
double log2_multinomial(const Composition& lambda);

/// Number of positions of beta equal to `level`.
int lee_weight(const std::vector<int>& beta, int level);

/// Site-basis indexing for internal configurations beta in Z_d^m,
/// big-endian: index = sum_x beta_x d^(m-x).
std::size_t site_index(const std::vector<int>& beta, int d);
std::vector<int> site_configuration(std::size_t index, int m, int d);

/// Block state in the Fourier-rotated frame: normalized superposition of
/// all beta with symbol histogram lambda, phases e^{-2 pi i alpha.beta / d}.
Vector psi_lambda(const std::vector<int>& alpha, const Composition& lambda, int d);

/// Key-averaged ciphertext on the d^m site space: the explicit average of
/// E^(x)m |alpha><alpha| E^dag(x)m over all (m+1)^(d-1) keys.
Matrix rho_alpha_key_average(const std::vector<int>& alpha, int m, int d,
                             std::uint64_t dimension_cap = kDefaultDimensionCap,
                             std::uint64_t key_count_cap = kDefaultKeyCountCap);

/// The same state assembled from its partition blocks,
/// sum_lambda (R_lambda/d^m) |Psi><Psi|, rotated back to the computational
/// frame. Independent construction; must agree with the key average.
Matrix rho_alpha_closed_form(const std::vector<int>& alpha, int m, int d,
                             std::uint64_t dimension_cap = kDefaultDimensionCap);

/// -sum lambda_i log2 lambda_i over the eigenvalues, after validating
/// Hermiticity, unit trace, and positivity at the module tolerances.
double von_neumann_entropy_bits(const Matrix& rho);

/// Plaintext prior over Z_d^m: uniform, or an explicit sparse map.
struct Prior {
    bool uniform = true;
    std::vector<std::pair<std::vector<int>, double>> entries;  // ignored when uniform

    static Prior make_uniform();
    static Prior point_mass(std::vector<int> alpha);
    static Prior from_entries(std::vector<std::pair<std::vector<int>, double>> entries);

    /// Dense weights over site indices; validates range and unit sum.
    std::vector<double> dense(int m, int d) const;
};

struct BlockEntry {
    Composition lambda;
    std::uint64_t r = 0;  // block dimension R_lambda
    double weight = 0.0;  // R_lambda / d^m
};

struct AnalysisReport {
    int m = 0;
    int d = 0;
    std::vector<BlockEntry> blocks;
    double s_rho_alpha_bits = 0.0;
    double s_rho_bar_bits = 0.0;
    double chi_bits = 0.0;
    double bound_log2_mfact_bits = 0.0;
    /// The tighter intermediate bound sum_lambda (R_lambda/d^m) log2 R_lambda,
    /// sitting between chi and log2 m!. Not part of the file format.
    double partition_log_bound_bits = 0.0;
    double gap_exact_bits = 0.0;
    double gap_asymptotic_bits = 0.0;
    Prior prior;
    std::map<std::string, double> tolerances;
};

/// Full numerical security analysis: builds every rho_alpha from the key
/// average, eigen-decomposes, and reports chi = S(rho_bar) - sum p S(rho_a)
/// with the Holevo bound log2 m! and the information gap.
AnalysisReport holevo(const Prior& prior, int m, int d,
                      std::uint64_t dimension_cap = kDefaultDimensionCap,
                      std::uint64_t key_count_cap = kDefaultKeyCountCap);

/// log2 m! by stable log-gamma summation.
double theorem1_bound_bits(int m);

/// The intermediate bound sum_lambda (R_lambda/d^m) log2 R_lambda sitting
/// between chi and log2 m!.
double partition_log_bound_bits(int m, int d);

/// Entropy of the block-weight distribution {R_lambda/d^m}; equals
/// S(rho_alpha) for every alpha.
double block_weight_entropy_bits(int m, int d);

struct GapEstimate {
    double exact_bits = 0.0;       // m log2 d - log2 m!
    double asymptotic_bits = 0.0;  // m log2(d/m) + m / ln 2
};

GapEstimate gap_estimate(int m, int d);

}  // namespace qhe::security

#endif

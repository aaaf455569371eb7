#ifndef QHE_FOCK_HPP
#define QHE_FOCK_HPP

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qhe/linalg.hpp"

namespace qhe::fock {

/// Hard ceiling on Fock-space dimension unless the caller overrides it.
inline constexpr std::uint64_t kDefaultDimensionCap = 20000;

/// A single-particle mode: spatial mode x in 1..m, internal level in 0..d-1.
/// Flattened spatial-major: flat = (x-1)*d + level.
struct ModeLabel {
    int spatial;
    int level;
};

inline int flat_index(int spatial, int level, int d) {
    return (spatial - 1) * d + level;
}

inline ModeLabel mode_at(int flat, int d) {
    return ModeLabel{flat / d + 1, flat % d};
}

/// All length-`slots` vectors of non-negative integers summing to `total`,
/// in lexicographically descending order: (total,0,...,0) first.
std::vector<std::vector<int>> enumerate_occupations(int total, int slots);

/// C(modes + particles - 1, particles); throws std::overflow_error past 64 bits.
std::uint64_t bosonic_dimension(int particles, int modes);

/// Ordered occupation-number basis of `particles` bosons in `modes` modes.
/// The ordering (descending lex) is canonical for every matrix and vector
/// built on top of it. Immutable after construction.
class FockBasis {
public:
    FockBasis(int particles, int modes,
              std::uint64_t dimension_cap = kDefaultDimensionCap);

    int particles() const { return particles_; }
    int modes() const { return modes_; }
    std::size_t size() const { return states_.size(); }

    const std::vector<int>& occupation(std::size_t i) const { return states_[i]; }

    /// Exact inverse of occupation(); throws std::out_of_range if absent.
    std::size_t index_of(const std::vector<int>& occ) const;
    bool contains(const std::vector<int>& occ) const;

    /// 1/sqrt(prod_i n_i!) for basis element i, precomputed.
    double inv_sqrt_factorial(std::size_t i) const { return inv_sqrt_fact_[i]; }

    /// Input modes listed with multiplicity, e.g. (0,0,3) for n=(2,0,0,1).
    const std::vector<int>& mode_list(std::size_t i) const { return mode_lists_[i]; }

private:
    struct VectorHash {
        std::size_t operator()(const std::vector<int>& v) const noexcept {
            std::size_t h = 14695981039346656037ull;
            for (int x : v) {
                h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    int particles_;
    int modes_;
    std::vector<std::vector<int>> states_;
    std::vector<std::vector<int>> mode_lists_;
    std::vector<double> inv_sqrt_fact_;
    std::unordered_map<std::vector<int>, std::size_t, VectorHash> index_;
};

/// Convenience: basis of m particles in m*d modes (the scheme's layout).
std::shared_ptr<const FockBasis> make_basis(
    int m, int d, std::uint64_t dimension_cap = kDefaultDimensionCap);

/// Permanent by inclusion-exclusion with Gray-code iteration, O(2^n n).
/// Accepts n up to 16; n = 0 gives 1.
Complex permanent(const Matrix& a);

/// Normalized amplitude vector over a FockBasis.
struct StateVector {
    std::shared_ptr<const FockBasis> basis;
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

/// Lift an M x M single-particle unitary to the many-body basis:
/// <n'|U|n> = per(u[n',n]) / sqrt(prod n_i! prod n'_j!).
Matrix lift_unitary(const Matrix& u, const FockBasis& basis,
                    double unitarity_tol = 1e-9);

/// Apply the lift of `u` to a state without materializing it elsewhere.
StateVector apply_lifted(const Matrix& lifted, const StateVector& state);

/// Embed a plaintext alpha in Z_d^m as one boson per spatial mode,
/// occupying flat index (x-1)*d + alpha_x for x = 1..m.
StateVector plaintext_to_fock(const std::vector<int>& alpha,
                              std::shared_ptr<const FockBasis> basis);

}  // namespace qhe::fock

#endif

#ifndef QHE_OPTICS_HPP
#define QHE_OPTICS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "qhe/fock.hpp"
#include "qhe/linalg.hpp"

namespace qhe::optics {

/// A linear-optical gate on spatial modes. Phase shifter: e^{i theta} on
/// mode x. Beam splitter on modes x < y:
///   [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]].
struct Gate {
    enum class Kind { PhaseShifter, BeamSplitter };

    Kind kind;
    int x = 0;
    int y = 0;  // unused for phase shifters
    double theta = 0.0;
    double phi = 0.0;  // unused for phase shifters

    static Gate phase_shifter(int x, double theta);
    static Gate beam_splitter(int x, int y, double theta, double phi);
};

/// Ordered gate list on m spatial modes; the first listed gate acts first.
struct Circuit {
    int m = 0;
    std::vector<Gate> gates;

    void validate() const;
};

/// Single-particle generator of the computation group on m*d modes:
/// identity on the internal factor, |x><y| on the spatial factor.
Matrix c_generator(int m, int d, int x, int y);

Matrix phase_shifter(int m, int x, double theta);
Matrix beam_splitter(int m, int x, int y, double theta, double phi);
Matrix gate_matrix(int m, const Gate& gate);

/// Product of the gate matrices, first gate rightmost.
Matrix circuit_to_unitary(const Circuit& circuit);

/// Triangular mesh synthesis: any m x m unitary (m <= 8) as at most
/// m(m-1)/2 beam splitters followed by m phase shifters. The compiled
/// circuit reproduces the input within Frobenius error 1e-8.
Circuit reck_decompose(const Matrix& u, double unitarity_tol = 1e-9);

/// Apply the Fock lift of u (x) I_d to a state on m*d modes.
fock::StateVector evaluate_fock(const fock::StateVector& state, const Matrix& u, int d);

enum class SampleView { Joint, SpatialMarginal };

struct Histogram {
    SampleView view = SampleView::Joint;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::map<std::vector<int>, std::uint64_t> counts;
};

/// Draw occupation outcomes by inverse CDF over the exact probabilities.
/// Shot i consumes the i-th output of a SplitMix64 stream seeded with
/// `seed`, so results are independent of any shot-level parallelism.
Histogram sample_output(const fock::StateVector& state, std::uint64_t shots,
                        std::uint64_t seed, SampleView view,
                        double normalization_tol = 1e-9);

/// Exact outcome distribution marginalized to spatial occupations.
std::map<std::vector<int>, double> spatial_marginal(const fock::StateVector& state, int d);

/// i-th output of the SplitMix64 stream with the given seed.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);

}  // namespace qhe::optics

#endif

#include "qhe/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qhe::optics {

Gate Gate::phase_shifter(int x, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("phase shifter: angle must be finite");
    Gate g;
    g.kind = Kind::PhaseShifter;
    g.x = x;
    g.theta = theta;
    return g;
}

Gate Gate::beam_splitter(int x, int y, double theta, double phi) {
    if (x >= y) {
        throw std::invalid_argument("beam splitter: modes must satisfy x < y, got (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
    }
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("beam splitter: angles must be finite");
    }
    Gate g;
    g.kind = Kind::BeamSplitter;
    g.x = x;
    g.y = y;
    g.theta = theta;
    g.phi = phi;
    return g;
}

void Circuit::validate() const {
    if (m < 1) throw std::invalid_argument("circuit: m must be >= 1");
    for (const Gate& g : gates) {
        if (g.x < 1 || g.x > m) {
            throw std::invalid_argument("circuit: gate mode " + std::to_string(g.x) +
                                        " is outside 1.." + std::to_string(m));
        }
        if (g.kind == Gate::Kind::BeamSplitter) {
            if (g.y < 1 || g.y > m) {
                throw std::invalid_argument("circuit: gate mode " + std::to_string(g.y) +
                                            " is outside 1.." + std::to_string(m));
            }
            if (g.x >= g.y) {
                throw std::invalid_argument("circuit: beam splitter modes must satisfy x < y");
            }
        }
    }
}

Matrix c_generator(int m, int d, int x, int y) {
    if (m < 1 || d < 1) throw std::invalid_argument("c_generator: m, d must be >= 1");
    if (x < 1 || x > m || y < 1 || y > m) {
        throw std::invalid_argument("c_generator: mode indices outside 1.." + std::to_string(m));
    }
    Matrix c = Matrix::Zero(m * d, m * d);
    c.block((x - 1) * d, (y - 1) * d, d, d) = Matrix::Identity(d, d);
    return c;
}

Matrix phase_shifter(int m, int x, double theta) {
    if (x < 1 || x > m) {
        throw std::invalid_argument("phase_shifter: mode " + std::to_string(x) +
                                    " is outside 1.." + std::to_string(m));
    }
    if (!std::isfinite(theta)) throw std::invalid_argument("phase_shifter: angle must be finite");
    Matrix u = Matrix::Identity(m, m);
    u(x - 1, x - 1) = Complex(std::cos(theta), std::sin(theta));
    return u;
}

Matrix beam_splitter(int m, int x, int y, double theta, double phi) {
    if (x < 1 || x > m || y < 1 || y > m || x >= y) {
        throw std::invalid_argument("beam_splitter: need 1 <= x < y <= m");
    }
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("beam_splitter: angles must be finite");
    }
    Matrix u = Matrix::Identity(m, m);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex eip(std::cos(phi), std::sin(phi));
    u(x - 1, x - 1) = c;
    u(x - 1, y - 1) = -std::conj(eip) * s;
    u(y - 1, x - 1) = eip * s;
    u(y - 1, y - 1) = c;
    return u;
}

Matrix gate_matrix(int m, const Gate& gate) {
    if (gate.kind == Gate::Kind::PhaseShifter) {
        return phase_shifter(m, gate.x, gate.theta);
    }
    return beam_splitter(m, gate.x, gate.y, gate.theta, gate.phi);
}

Matrix circuit_to_unitary(const Circuit& circuit) {
    circuit.validate();
    Matrix u = Matrix::Identity(circuit.m, circuit.m);
    for (const Gate& g : circuit.gates) {
        u = gate_matrix(circuit.m, g) * u;
    }
    return u;
}

namespace {

// Mixing angles that zero the last-row entry (row, col) of w by a right
// multiplication with a beam splitter on columns (col, pivot).
struct NullingAngles {
    double theta;
    double phi;
};

NullingAngles right_nulling_angles(const Complex& a, const Complex& b) {
    // Solve cos(t) a + e^{i phi} sin(t) b = 0 with t in [0, pi/2].
    const double mag_a = std::abs(a);
    const double mag_b = std::abs(b);
    if (mag_a == 0.0) return {0.0, 0.0};
    if (mag_b == 0.0) return {kPi / 2.0, 0.0};
    const double theta = std::atan2(mag_a, mag_b);
    const double phi = kPi + std::arg(a) - std::arg(b);
    return {theta, phi};
}

}  // namespace

Circuit reck_decompose(const Matrix& u, double unitarity_tol) {
    require_unitary(u, unitarity_tol, "reck_decompose");
    const int m = static_cast<int>(u.rows());
    if (m > 8) {
        throw std::invalid_argument("reck_decompose: m = " + std::to_string(m) +
                                    " exceeds the supported maximum of 8");
    }

    // Right-multiply w by beam splitters T on column pairs (col, row) to
    // null everything left of the diagonal in row `row`, sweeping rows from
    // the bottom up. What remains is a diagonal of pure phases, so
    //   u = D * T_K^dag * ... * T_1^dag,
    // and each T^dag is the same splitter with the sign of theta flipped.
    Matrix w = u;
    Circuit circuit;
    circuit.m = m;
    for (int row = m; row >= 2; --row) {
        for (int col = 1; col <= row - 1; ++col) {
            const Complex a = w(row - 1, col - 1);
            const Complex b = w(row - 1, row - 1);
            const auto [theta, phi] = right_nulling_angles(a, b);
            if (theta != 0.0) {
                const Matrix t = beam_splitter(m, col, row, theta, phi);
                w = w * t;
                circuit.gates.push_back(Gate::beam_splitter(col, row, -theta, phi));
            } else {
                circuit.gates.push_back(Gate::beam_splitter(col, row, 0.0, 0.0));
            }
        }
    }
    for (int x = 1; x <= m; ++x) {
        circuit.gates.push_back(Gate::phase_shifter(x, std::arg(w(x - 1, x - 1))));
    }
    return circuit;
}

fock::StateVector evaluate_fock(const fock::StateVector& state, const Matrix& u, int d) {
    if (!state.basis) throw std::invalid_argument("evaluate_fock: state has no basis");
    if (d < 1) throw std::invalid_argument("evaluate_fock: d must be >= 1");
    const int m = static_cast<int>(u.rows());
    if (state.basis->modes() != m * d) {
        throw std::invalid_argument("evaluate_fock: basis has " +
                                    std::to_string(state.basis->modes()) +
                                    " modes, expected m*d = " + std::to_string(m * d));
    }
    // u (x) I_d in the spatial-major layout.
    Matrix single = Matrix::Zero(m * d, m * d);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            single.block(r * d, c * d, d, d) = u(r, c) * Matrix::Identity(d, d);
    const Matrix lifted = fock::lift_unitary(single, *state.basis);
    return fock::apply_lifted(lifted, state);
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Histogram sample_output(const fock::StateVector& state, std::uint64_t shots,
                        std::uint64_t seed, SampleView view, double normalization_tol) {
    if (!state.basis) throw std::invalid_argument("sample_output: state has no basis");
    const double norm = state.norm();
    if (std::abs(norm * norm - 1.0) > normalization_tol) {
        throw std::invalid_argument("sample_output: state norm^2 deviates from 1 by " +
                                    std::to_string(std::abs(norm * norm - 1.0)) +
                                    ", beyond tolerance");
    }
    const std::size_t dim = state.basis->size();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitudes(static_cast<Eigen::Index>(i)));
        cdf[i] = acc;
    }
    const double total = acc;

    const int m_particles = state.basis->particles();
    const int modes = state.basis->modes();
    const bool marginal = (view == SampleView::SpatialMarginal);
    int d = 1, m_spatial = modes;
    if (marginal) {
        if (modes % m_particles != 0) {
            throw std::invalid_argument("sample_output: basis modes not divisible by m");
        }
        d = modes / m_particles;
        m_spatial = m_particles;
    }

    Histogram hist;
    hist.view = view;
    hist.shots = shots;
    hist.seed = seed;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double uni =
            static_cast<double>(splitmix64_at(seed, shot) >> 11) * 0x1.0p-53 * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), uni);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= dim) idx = dim - 1;
        const auto& occ = state.basis->occupation(idx);
        if (marginal) {
            std::vector<int> spatial(m_spatial, 0);
            for (int x = 0; x < m_spatial; ++x)
                for (int s = 0; s < d; ++s) spatial[x] += occ[x * d + s];
            ++hist.counts[spatial];
        } else {
            ++hist.counts[occ];
        }
    }
    return hist;
}

std::map<std::vector<int>, double> spatial_marginal(const fock::StateVector& state, int d) {
    if (!state.basis) throw std::invalid_argument("spatial_marginal: state has no basis");
    if (d < 1 || state.basis->modes() % d != 0) {
        throw std::invalid_argument("spatial_marginal: basis modes not divisible by d");
    }
    const int m = state.basis->modes() / d;
    std::map<std::vector<int>, double> dist;
    for (std::size_t i = 0; i < state.basis->size(); ++i) {
        const auto& occ = state.basis->occupation(i);
        std::vector<int> spatial(m, 0);
        for (int x = 0; x < m; ++x)
            for (int s = 0; s < d; ++s) spatial[x] += occ[x * d + s];
        dist[spatial] += std::norm(state.amplitudes(static_cast<Eigen::Index>(i)));
    }
    return dist;
}

}  // namespace qhe::optics

#ifndef QHE_IO_HPP
#define QHE_IO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"
#include "qhe/linalg.hpp"
#include "qhe/optics.hpp"
#include "qhe/security.hpp"

/// File-based artifact exchange. Every format is strict JSON: exact field
/// names, unknown fields rejected, and write-then-read reproduces the
/// in-memory values bit for bit (doubles are serialized shortest-round-trip).
///
/// Error split: IoError means the file system or the file's raw text failed
/// (missing, unreadable, unwritable, not JSON); std::invalid_argument means
/// the JSON parsed but violates the schema or carries invalid values.
namespace qhe::io {

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// FNV-1a over the canonical serialized form, as a 16-hex-digit tag for logs.
std::string fingerprint(const std::string& serialized);

std::string serialize_key(const crypto::Key& key);
crypto::Key parse_key(const std::string& text);
void write_key(const std::string& path, const crypto::Key& key);
crypto::Key read_key(const std::string& path);

std::string serialize_circuit(const optics::Circuit& circuit);
optics::Circuit parse_circuit(const std::string& text);
void write_circuit(const std::string& path, const optics::Circuit& circuit);
optics::Circuit read_circuit(const std::string& path);

/// States carry (m, d) and the nonzero amplitudes only, each as an occupation
/// vector over the m*d modes with real and imaginary parts.
std::string serialize_state(const fock::StateVector& state, int d);
fock::StateVector parse_state(const std::string& text,
                              std::uint64_t dimension_cap = fock::kDefaultDimensionCap);
void write_state(const std::string& path, const fock::StateVector& state, int d);
fock::StateVector read_state(const std::string& path,
                             std::uint64_t dimension_cap = fock::kDefaultDimensionCap);
/// The d recorded in a state file (parse_state cannot return it alongside).
int state_level_count(const std::string& text);

std::string serialize_histogram(const optics::Histogram& hist);
optics::Histogram parse_histogram(const std::string& text);
void write_histogram(const std::string& path, const optics::Histogram& hist);
optics::Histogram read_histogram(const std::string& path);

/// Square m x m unitary, row-major, each entry an [re, im] pair.
std::string serialize_unitary(const Matrix& u);
Matrix parse_unitary(const std::string& text);
void write_unitary(const std::string& path, const Matrix& u);
Matrix read_unitary(const std::string& path);

/// Priors are either the string "uniform" or an object mapping comma-joined
/// plaintexts (e.g. "0,1") to positive weights summing to 1.
std::string serialize_prior(const security::Prior& prior);
security::Prior parse_prior(const std::string& text);
security::Prior read_prior(const std::string& path);

std::string serialize_report(const security::AnalysisReport& report);
security::AnalysisReport parse_report(const std::string& text);
void write_report(const std::string& path, const security::AnalysisReport& report);
security::AnalysisReport read_report(const std::string& path);

}  // namespace qhe::io

#endif

#include "qhe/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qhe::io {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_json(const std::string& text, const std::string& what) {
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError(what + ": file is not valid JSON");
    return j;
}

void check_fields(const ojson& j, const std::string& what,
                  std::initializer_list<const char*> required) {
    if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
    for (const char* name : required) {
        if (!j.contains(name)) {
            throw std::invalid_argument(what + ": missing field \"" + name + "\"");
        }
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        const bool known = std::any_of(required.begin(), required.end(),
                                       [&](const char* n) { return key == n; });
        if (!known) throw std::invalid_argument(what + ": unknown field \"" + key + "\"");
    }
}

int get_int(const ojson& j, const std::string& what) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) {
        throw std::invalid_argument(what + ": expected an integer");
    }
    const std::int64_t v = j.get<std::int64_t>();
    if (v < INT32_MIN || v > INT32_MAX) {
        throw std::invalid_argument(what + ": integer out of range");
    }
    return static_cast<int>(v);
}

std::uint64_t get_u64(const ojson& j, const std::string& what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw std::invalid_argument(what + ": expected a non-negative integer");
}

double get_double(const ojson& j, const std::string& what) {
    if (!j.is_number()) throw std::invalid_argument(what + ": expected a number");
    return j.get<double>();
}

std::vector<int> get_int_vector(const ojson& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + ": expected an array");
    std::vector<int> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(get_int(j[i], what + "[" + std::to_string(i) + "]"));
    }
    return v;
}

ojson prior_to_json(const security::Prior& prior) {
    if (prior.uniform) return ojson("uniform");
    ojson obj = ojson::object();
    for (const auto& [alpha, weight] : prior.entries) {
        std::string key;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (i) key += ',';
            key += std::to_string(alpha[i]);
        }
        obj[key] = weight;
    }
    return obj;
}

security::Prior prior_from_json(const ojson& j, const std::string& what) {
    if (j.is_string()) {
        if (j.get<std::string>() != "uniform") {
            throw std::invalid_argument(what + ": the only recognized string form is \"uniform\"");
        }
        return security::Prior::make_uniform();
    }
    if (!j.is_object()) {
        throw std::invalid_argument(what + ": expected \"uniform\" or an object of weights");
    }
    std::vector<std::pair<std::vector<int>, double>> entries;
    for (const auto& [key, value] : j.items()) {
        std::vector<int> alpha;
        std::size_t pos = 0;
        while (pos <= key.size()) {
            const std::size_t comma = std::min(key.find(',', pos), key.size());
            const std::string token = key.substr(pos, comma - pos);
            if (token.empty() || !std::all_of(token.begin(), token.end(),
                                              [](char c) { return c >= '0' && c <= '9'; })) {
                throw std::invalid_argument(what + ": malformed plaintext key \"" + key + "\"");
            }
            alpha.push_back(std::stoi(token));
            pos = comma + 1;
        }
        const double weight = get_double(value, what + "[\"" + key + "\"]");
        if (weight < 0.0) {
            throw std::invalid_argument(what + ": negative weight for \"" + key + "\"");
        }
        entries.emplace_back(std::move(alpha), weight);
    }
    if (entries.empty()) throw std::invalid_argument(what + ": empty weight map");
    return security::Prior::from_entries(std::move(entries));
}

std::string dump(const ojson& j) {
    return j.dump(2) + "\n";
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failure on " + path);
}

std::string fingerprint(const std::string& serialized) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : serialized) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string serialize_key(const crypto::Key& key) {
    key.validate();
    ojson j;
    j["m"] = key.m;
    j["d"] = key.d;
    j["kappa"] = key.kappa;
    return dump(j);
}

crypto::Key parse_key(const std::string& text) {
    const ojson j = parse_json(text, "key");
    check_fields(j, "key", {"m", "d", "kappa"});
    crypto::Key key;
    key.m = get_int(j["m"], "key: m");
    key.d = get_int(j["d"], "key: d");
    key.kappa = get_int_vector(j["kappa"], "key: kappa");
    key.validate();
    return key;
}

void write_key(const std::string& path, const crypto::Key& key) {
    write_text_file(path, serialize_key(key));
}

crypto::Key read_key(const std::string& path) {
    return parse_key(read_text_file(path));
}

std::string serialize_circuit(const optics::Circuit& circuit) {
    circuit.validate();
    ojson j;
    j["m"] = circuit.m;
    j["gates"] = ojson::array();
    for (const optics::Gate& gate : circuit.gates) {
        ojson g;
        if (gate.kind == optics::Gate::Kind::PhaseShifter) {
            g["kind"] = "ps";
            g["mode"] = gate.x;
            g["theta"] = gate.theta;
        } else {
            g["kind"] = "bs";
            g["modes"] = std::vector<int>{gate.x, gate.y};
            g["theta"] = gate.theta;
            g["phi"] = gate.phi;
        }
        j["gates"].push_back(std::move(g));
    }
    return dump(j);
}

optics::Circuit parse_circuit(const std::string& text) {
    const ojson j = parse_json(text, "circuit");
    check_fields(j, "circuit", {"m", "gates"});
    optics::Circuit circuit;
    circuit.m = get_int(j["m"], "circuit: m");
    if (!j["gates"].is_array()) throw std::invalid_argument("circuit: gates must be an array");
    for (std::size_t i = 0; i < j["gates"].size(); ++i) {
        const ojson& g = j["gates"][i];
        const std::string what = "circuit gate " + std::to_string(i);
        if (!g.is_object() || !g.contains("kind") || !g["kind"].is_string()) {
            throw std::invalid_argument(what + ": expected an object with a \"kind\" string");
        }
        const std::string kind = g["kind"].get<std::string>();
        if (kind == "ps") {
            check_fields(g, what, {"kind", "mode", "theta"});
            circuit.gates.push_back(optics::Gate::phase_shifter(
                get_int(g["mode"], what + ": mode"), get_double(g["theta"], what + ": theta")));
        } else if (kind == "bs") {
            check_fields(g, what, {"kind", "modes", "theta", "phi"});
            const std::vector<int> modes = get_int_vector(g["modes"], what + ": modes");
            if (modes.size() != 2) {
                throw std::invalid_argument(what + ": modes must hold exactly two entries");
            }
            circuit.gates.push_back(optics::Gate::beam_splitter(
                modes[0], modes[1], get_double(g["theta"], what + ": theta"),
                get_double(g["phi"], what + ": phi")));
        } else {
            throw std::invalid_argument(what + ": unknown kind \"" + kind + "\"");
        }
    }
    circuit.validate();
    return circuit;
}

void write_circuit(const std::string& path, const optics::Circuit& circuit) {
    write_text_file(path, serialize_circuit(circuit));
}

optics::Circuit read_circuit(const std::string& path) {
    return parse_circuit(read_text_file(path));
}

std::string serialize_state(const fock::StateVector& state, int d) {
    if (!state.basis) throw std::invalid_argument("state: missing basis");
    const int m = state.basis->particles();
    if (d < 2 || state.basis->modes() != m * d) {
        throw std::invalid_argument("state: basis has " + std::to_string(state.basis->modes()) +
                                    " modes, expected m*d = " + std::to_string(m * d));
    }
    ojson j;
    j["m"] = m;
    j["d"] = d;
    j["amplitudes"] = ojson::array();
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        const Complex a = state.amplitudes(i);
        if (a == Complex(0.0, 0.0)) continue;
        ojson entry;
        entry["n"] = state.basis->occupation(static_cast<std::size_t>(i));
        entry["re"] = a.real();
        entry["im"] = a.imag();
        j["amplitudes"].push_back(std::move(entry));
    }
    return dump(j);
}

fock::StateVector parse_state(const std::string& text, std::uint64_t dimension_cap) {
    const ojson j = parse_json(text, "state");
    check_fields(j, "state", {"m", "d", "amplitudes"});
    const int m = get_int(j["m"], "state: m");
    const int d = get_int(j["d"], "state: d");
    if (m < 1) throw std::invalid_argument("state: m must be >= 1");
    if (d < 2) throw std::invalid_argument("state: d must be >= 2");
    auto basis = fock::make_basis(m, d, dimension_cap);

    fock::StateVector state;
    state.basis = basis;
    state.amplitudes = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
    if (!j["amplitudes"].is_array()) {
        throw std::invalid_argument("state: amplitudes must be an array");
    }
    for (std::size_t i = 0; i < j["amplitudes"].size(); ++i) {
        const ojson& entry = j["amplitudes"][i];
        const std::string what = "state amplitude " + std::to_string(i);
        check_fields(entry, what, {"n", "re", "im"});
        const std::vector<int> occ = get_int_vector(entry["n"], what + ": n");
        if (!basis->contains(occ)) {
            throw std::invalid_argument(what + ": occupation is not a basis element of " +
                                        std::to_string(m) + " bosons in " +
                                        std::to_string(m * d) + " modes");
        }
        const Eigen::Index idx = static_cast<Eigen::Index>(basis->index_of(occ));
        if (state.amplitudes(idx) != Complex(0.0, 0.0)) {
            throw std::invalid_argument(what + ": duplicate occupation vector");
        }
        state.amplitudes(idx) =
            Complex(get_double(entry["re"], what + ": re"), get_double(entry["im"], what + ": im"));
    }
    return state;
}

void write_state(const std::string& path, const fock::StateVector& state, int d) {
    write_text_file(path, serialize_state(state, d));
}

fock::StateVector read_state(const std::string& path, std::uint64_t dimension_cap) {
    return parse_state(read_text_file(path), dimension_cap);
}

int state_level_count(const std::string& text) {
    const ojson j = parse_json(text, "state");
    if (!j.is_object() || !j.contains("d")) {
        throw std::invalid_argument("state: missing field \"d\"");
    }
    return get_int(j["d"], "state: d");
}

std::string serialize_histogram(const optics::Histogram& hist) {
    ojson j;
    j["view"] = hist.view == optics::SampleView::Joint ? "joint" : "spatial";
    j["shots"] = hist.shots;
    j["seed"] = hist.seed;
    j["counts"] = ojson::array();
    for (const auto& [occ, count] : hist.counts) {
        ojson entry;
        entry["n"] = occ;
        entry["count"] = count;
        j["counts"].push_back(std::move(entry));
    }
    return dump(j);
}

optics::Histogram parse_histogram(const std::string& text) {
    const ojson j = parse_json(text, "histogram");
    check_fields(j, "histogram", {"view", "shots", "seed", "counts"});
    optics::Histogram hist;
    if (!j["view"].is_string()) throw std::invalid_argument("histogram: view must be a string");
    const std::string view = j["view"].get<std::string>();
    if (view == "joint") {
        hist.view = optics::SampleView::Joint;
    } else if (view == "spatial") {
        hist.view = optics::SampleView::SpatialMarginal;
    } else {
        throw std::invalid_argument("histogram: unknown view \"" + view + "\"");
    }
    hist.shots = get_u64(j["shots"], "histogram: shots");
    hist.seed = get_u64(j["seed"], "histogram: seed");
    if (!j["counts"].is_array()) throw std::invalid_argument("histogram: counts must be an array");
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < j["counts"].size(); ++i) {
        const ojson& entry = j["counts"][i];
        const std::string what = "histogram count " + std::to_string(i);
        check_fields(entry, what, {"n", "count"});
        std::vector<int> occ = get_int_vector(entry["n"], what + ": n");
        for (int n : occ) {
            if (n < 0) throw std::invalid_argument(what + ": negative occupation");
        }
        const std::uint64_t count = get_u64(entry["count"], what + ": count");
        if (!hist.counts.emplace(std::move(occ), count).second) {
            throw std::invalid_argument(what + ": duplicate occupation vector");
        }
        total += count;
    }
    if (total != hist.shots) {
        throw std::invalid_argument("histogram: counts sum to " + std::to_string(total) +
                                    " but shots is " + std::to_string(hist.shots));
    }
    return hist;
}

void write_histogram(const std::string& path, const optics::Histogram& hist) {
    write_text_file(path, serialize_histogram(hist));
}

optics::Histogram read_histogram(const std::string& path) {
    return parse_histogram(read_text_file(path));
}

std::string serialize_unitary(const Matrix& u) {
    if (u.rows() != u.cols() || u.rows() < 1) {
        throw std::invalid_argument("unitary: matrix must be square and non-empty");
    }
    ojson j;
    j["m"] = static_cast<int>(u.rows());
    j["matrix"] = ojson::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        ojson row = ojson::array();
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            row.push_back(ojson::array({u(r, c).real(), u(r, c).imag()}));
        }
        j["matrix"].push_back(std::move(row));
    }
    return dump(j);
}

Matrix parse_unitary(const std::string& text) {
    const ojson j = parse_json(text, "unitary");
    check_fields(j, "unitary", {"m", "matrix"});
    const int m = get_int(j["m"], "unitary: m");
    if (m < 1) throw std::invalid_argument("unitary: m must be >= 1");
    if (!j["matrix"].is_array() || j["matrix"].size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("unitary: matrix must hold exactly m rows");
    }
    Matrix u(m, m);
    for (int r = 0; r < m; ++r) {
        const ojson& row = j["matrix"][r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("unitary row " + std::to_string(r) +
                                        ": expected m entries");
        }
        for (int c = 0; c < m; ++c) {
            const ojson& entry = row[c];
            const std::string what =
                "unitary entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
            if (!entry.is_array() || entry.size() != 2) {
                throw std::invalid_argument(what + ": expected an [re, im] pair");
            }
            u(r, c) = Complex(get_double(entry[0], what + " re"),
                              get_double(entry[1], what + " im"));
        }
    }
    return u;
}

void write_unitary(const std::string& path, const Matrix& u) {
    write_text_file(path, serialize_unitary(u));
}

Matrix read_unitary(const std::string& path) {
    return parse_unitary(read_text_file(path));
}

std::string serialize_prior(const security::Prior& prior) {
    return dump(prior_to_json(prior));
}

security::Prior parse_prior(const std::string& text) {
    return prior_from_json(parse_json(text, "prior"), "prior");
}

security::Prior read_prior(const std::string& path) {
    return parse_prior(read_text_file(path));
}

std::string serialize_report(const security::AnalysisReport& report) {
    ojson j;
    j["m"] = report.m;
    j["d"] = report.d;
    j["blocks"] = ojson::array();
    for (const security::BlockEntry& block : report.blocks) {
        ojson b;
        b["lambda"] = block.lambda;
        b["R"] = block.r;
        b["weight"] = block.weight;
        j["blocks"].push_back(std::move(b));
    }
    j["S_rho_alpha_bits"] = report.s_rho_alpha_bits;
    j["S_rho_bar_bits"] = report.s_rho_bar_bits;
    j["chi_bits"] = report.chi_bits;
    j["bound_log2_mfact_bits"] = report.bound_log2_mfact_bits;
    j["gap_exact_bits"] = report.gap_exact_bits;
    j["gap_asymptotic_bits"] = report.gap_asymptotic_bits;
    j["prior"] = prior_to_json(report.prior);
    j["tolerances"] = report.tolerances;
    return dump(j);
}

security::AnalysisReport parse_report(const std::string& text) {
    const ojson j = parse_json(text, "report");
    check_fields(j, "report",
                 {"m", "d", "blocks", "S_rho_alpha_bits", "S_rho_bar_bits", "chi_bits",
                  "bound_log2_mfact_bits", "gap_exact_bits", "gap_asymptotic_bits", "prior",
                  "tolerances"});
    security::AnalysisReport report;
    report.m = get_int(j["m"], "report: m");
    report.d = get_int(j["d"], "report: d");
    if (!j["blocks"].is_array()) throw std::invalid_argument("report: blocks must be an array");
    for (std::size_t i = 0; i < j["blocks"].size(); ++i) {
        const ojson& b = j["blocks"][i];
        const std::string what = "report block " + std::to_string(i);
        check_fields(b, what, {"lambda", "R", "weight"});
        security::BlockEntry entry;
        entry.lambda = get_int_vector(b["lambda"], what + ": lambda");
        entry.r = get_u64(b["R"], what + ": R");
        entry.weight = get_double(b["weight"], what + ": weight");
        report.blocks.push_back(std::move(entry));
    }
    report.s_rho_alpha_bits = get_double(j["S_rho_alpha_bits"], "report: S_rho_alpha_bits");
    report.s_rho_bar_bits = get_double(j["S_rho_bar_bits"], "report: S_rho_bar_bits");
    report.chi_bits = get_double(j["chi_bits"], "report: chi_bits");
    report.bound_log2_mfact_bits =
        get_double(j["bound_log2_mfact_bits"], "report: bound_log2_mfact_bits");
    report.gap_exact_bits = get_double(j["gap_exact_bits"], "report: gap_exact_bits");
    report.gap_asymptotic_bits =
        get_double(j["gap_asymptotic_bits"], "report: gap_asymptotic_bits");
    report.prior = prior_from_json(j["prior"], "report: prior");
    if (!j["tolerances"].is_object()) {
        throw std::invalid_argument("report: tolerances must be an object");
    }
    for (const auto& [key, value] : j["tolerances"].items()) {
        report.tolerances[key] = get_double(value, "report: tolerances[\"" + key + "\"]");
    }
    return report;
}

void write_report(const std::string& path, const security::AnalysisReport& report) {
    write_text_file(path, serialize_report(report));
}

security::AnalysisReport read_report(const std::string& path) {
    return parse_report(read_text_file(path));
}

}  // namespace qhe::io

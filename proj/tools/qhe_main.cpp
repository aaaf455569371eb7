#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"
#include "qhe/io.hpp"
#include "qhe/linalg.hpp"
#include "qhe/optics.hpp"
#include "qhe/security.hpp"
#include "qhe/verify.hpp"

namespace {

using namespace qhe;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<int> parse_alpha(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("alpha: empty plaintext");
    std::vector<int> alpha;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token = text.substr(pos, comma - pos);
        if (token.empty() || !std::all_of(token.begin(), token.end(),
                                          [](char c) { return c >= '0' && c <= '9'; })) {
            throw std::invalid_argument("alpha: malformed entry \"" + token + "\"");
        }
        alpha.push_back(std::stoi(token));
        pos = comma + 1;
    }
    return alpha;
}

double fidelity(const fock::StateVector& a, const fock::StateVector& b) {
    if (a.amplitudes.size() != b.amplitudes.size()) {
        throw std::invalid_argument("fidelity: states live on different bases");
    }
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

struct Options {
    int m = 0;
    int d = 0;
    std::uint64_t seed = 0;
    std::uint64_t shots = 1024;
    std::uint64_t max_dim = fock::kDefaultDimensionCap;
    double tolerance = 1e-9;
    bool verify = false;
    std::string out;
    std::string alpha;
    std::string state_path;
    std::string circuit_path;
    std::string key_path;
    std::string prior_path;
    std::string unitary_path;
    std::string view = "joint";
};

struct LoadedState {
    fock::StateVector state;
    int d = 0;
};

LoadedState load_state(const std::string& path, std::uint64_t cap) {
    const std::string text = io::read_text_file(path);
    return LoadedState{io::parse_state(text, cap), io::state_level_count(text)};
}

fock::StateVector plaintext_state(const std::vector<int>& alpha, int d, std::uint64_t cap) {
    const int m = static_cast<int>(alpha.size());
    return fock::plaintext_to_fock(alpha, fock::make_basis(m, d, cap));
}

void cmd_keygen(const Options& opt) {
    const crypto::Key key = crypto::keygen(opt.m, opt.d, opt.seed);
    const std::string serialized = io::serialize_key(key);
    io::write_text_file(opt.out, serialized);
    std::cout << "key fingerprint: " << io::fingerprint(serialized) << "\n";
}

void cmd_encrypt(const Options& opt, bool forward) {
    const crypto::Key key = io::read_key(opt.key_path);
    const bool have_alpha = !opt.alpha.empty();
    const bool have_state = !opt.state_path.empty();
    if (have_alpha == have_state) {
        throw std::invalid_argument("provide exactly one of --alpha and --state");
    }
    fock::StateVector in;
    if (have_alpha) {
        const std::vector<int> alpha = parse_alpha(opt.alpha);
        if (static_cast<int>(alpha.size()) != key.m) {
            throw std::invalid_argument("alpha: has " + std::to_string(alpha.size()) +
                                        " entries but key: m = " + std::to_string(key.m));
        }
        in = plaintext_state(alpha, key.d, opt.max_dim);
    } else {
        const LoadedState loaded = load_state(opt.state_path, opt.max_dim);
        if (loaded.d != key.d || loaded.state.basis->particles() != key.m) {
            throw std::invalid_argument(
                "state: (m, d) = (" + std::to_string(loaded.state.basis->particles()) + ", " +
                std::to_string(loaded.d) + ") does not match key: (m, d) = (" +
                std::to_string(key.m) + ", " + std::to_string(key.d) + ")");
        }
        in = loaded.state;
    }
    const fock::StateVector out = forward ? crypto::encrypt(in, key) : crypto::decrypt(in, key);
    io::write_state(opt.out, out, key.d);
}

void cmd_evaluate(const Options& opt) {
    const optics::Circuit circuit = io::read_circuit(opt.circuit_path);
    const bool have_alpha = !opt.alpha.empty();
    const bool have_state = !opt.state_path.empty();
    if (have_alpha == have_state) {
        throw std::invalid_argument("provide exactly one of --alpha and --state");
    }
    fock::StateVector in;
    int d = 0;
    if (have_alpha) {
        if (opt.d < 2) throw std::invalid_argument("-d is required with --alpha");
        const std::vector<int> alpha = parse_alpha(opt.alpha);
        if (static_cast<int>(alpha.size()) != circuit.m) {
            throw std::invalid_argument("alpha: has " + std::to_string(alpha.size()) +
                                        " entries but circuit: m = " + std::to_string(circuit.m));
        }
        d = opt.d;
        in = plaintext_state(alpha, d, opt.max_dim);
    } else {
        LoadedState loaded = load_state(opt.state_path, opt.max_dim);
        if (loaded.state.basis->particles() != circuit.m) {
            throw std::invalid_argument(
                "state: m = " + std::to_string(loaded.state.basis->particles()) +
                " does not match circuit: m = " + std::to_string(circuit.m));
        }
        d = loaded.d;
        in = std::move(loaded.state);
    }
    const Matrix u = optics::circuit_to_unitary(circuit);
    io::write_state(opt.out, optics::evaluate_fock(in, u, d), d);
}

void cmd_run(const Options& opt) {
    const crypto::Key key = io::read_key(opt.key_path);
    const optics::Circuit circuit = io::read_circuit(opt.circuit_path);
    if (circuit.m != key.m) {
        throw std::invalid_argument("circuit: m = " + std::to_string(circuit.m) +
                                    " does not match key: m = " + std::to_string(key.m));
    }
    const std::vector<int> alpha = parse_alpha(opt.alpha);
    if (static_cast<int>(alpha.size()) != key.m) {
        throw std::invalid_argument("alpha: has " + std::to_string(alpha.size()) +
                                    " entries but key: m = " + std::to_string(key.m));
    }
    const fock::StateVector in = plaintext_state(alpha, key.d, opt.max_dim);
    const Matrix u = optics::circuit_to_unitary(circuit);

    const fock::StateVector plain = optics::evaluate_fock(in, u, key.d);
    const fock::StateVector decrypted =
        crypto::decrypt(optics::evaluate_fock(crypto::encrypt(in, key), u, key.d), key);

    io::write_state(opt.out + ".plain.json", plain, key.d);
    io::write_state(opt.out + ".decrypted.json", decrypted, key.d);
    const double f = fidelity(decrypted, plain);
    std::cout << "fidelity = " << fmt12(f) << "\n";
    if (!(f >= 1.0 - 1e-9)) {
        throw verify::VerificationError("run: fidelity " + fmt12(f) +
                                        " fell below 1 - 1e-9; the pipeline is broken");
    }
}

void cmd_analyze(const Options& opt) {
    const security::Prior prior = opt.prior_path.empty() ? security::Prior::make_uniform()
                                                         : io::read_prior(opt.prior_path);
    const security::AnalysisReport report =
        security::holevo(prior, opt.m, opt.d, opt.max_dim, opt.max_dim);
    if (!opt.out.empty()) io::write_report(opt.out, report);
    std::cout << "chi = " << fmt12(report.chi_bits)
              << " bits, bound = " << fmt12(report.bound_log2_mfact_bits)
              << " bits, gap_exact = " << fmt12(report.gap_exact_bits)
              << " bits, gap_asymptotic = " << fmt12(report.gap_asymptotic_bits) << " bits\n";
}

void cmd_sample(const Options& opt) {
    const bool have_alpha = !opt.alpha.empty();
    const bool have_state = !opt.state_path.empty();
    if (have_alpha == have_state) {
        throw std::invalid_argument("provide exactly one of --alpha and --state");
    }
    fock::StateVector state;
    int d = 0;
    if (have_alpha) {
        if (opt.d < 2) throw std::invalid_argument("-d is required with --alpha");
        d = opt.d;
        state = plaintext_state(parse_alpha(opt.alpha), d, opt.max_dim);
    } else {
        LoadedState loaded = load_state(opt.state_path, opt.max_dim);
        d = loaded.d;
        state = std::move(loaded.state);
    }
    if (!opt.circuit_path.empty()) {
        const optics::Circuit circuit = io::read_circuit(opt.circuit_path);
        if (circuit.m != state.basis->particles()) {
            throw std::invalid_argument(
                "state: m = " + std::to_string(state.basis->particles()) +
                " does not match circuit: m = " + std::to_string(circuit.m));
        }
        state = optics::evaluate_fock(state, optics::circuit_to_unitary(circuit), d);
    }
    optics::SampleView view;
    if (opt.view == "joint") {
        view = optics::SampleView::Joint;
    } else if (opt.view == "spatial") {
        view = optics::SampleView::SpatialMarginal;
    } else {
        throw std::invalid_argument("view: expected \"joint\" or \"spatial\", got \"" +
                                    opt.view + "\"");
    }
    io::write_histogram(opt.out,
                        optics::sample_output(state, opt.shots, opt.seed, view, opt.tolerance));
}

void cmd_reck(const Options& opt) {
    const Matrix u = io::read_unitary(opt.unitary_path);
    require_unitary(u, opt.tolerance, "unitary");
    const optics::Circuit circuit = optics::reck_decompose(u, opt.tolerance);
    io::write_circuit(opt.out, circuit);
    const double err = (optics::circuit_to_unitary(circuit) - u).norm();
    std::cout << "recompile error = " << fmt12(err) << "\n";
    if (!(err <= 1e-8)) {
        throw verify::VerificationError("reck: recompiled circuit misses the input by " +
                                        fmt12(err));
    }
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--tolerance", opt.tolerance, "Unitarity / normalization tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-dim", opt.max_dim, "Dimension cap override");
    cmd->add_flag("--verify", opt.verify, "Re-run the relevant invariant suites first");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bosonic homomorphic-encryption laboratory"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* keygen = app.add_subcommand("keygen", "Generate a key file");
    keygen->add_option("-m", opt.m, "Particle / spatial mode count")->required();
    keygen->add_option("-d", opt.d, "Internal levels per particle")->required();
    keygen->add_option("--seed", opt.seed, "PRNG seed");
    keygen->add_option("-o,--out", opt.out, "Output key path")->required();
    add_common(keygen, opt);

    CLI::App* encrypt = app.add_subcommand("encrypt", "Encrypt a plaintext or state file");
    encrypt->add_option("--key", opt.key_path, "Key file")->required();
    encrypt->add_option("--alpha", opt.alpha, "Plaintext, comma-joined levels");
    encrypt->add_option("--state", opt.state_path, "Input state file");
    encrypt->add_option("-o,--out", opt.out, "Output state path")->required();
    add_common(encrypt, opt);

    CLI::App* decrypt = app.add_subcommand("decrypt", "Invert the encryption on a state file");
    decrypt->add_option("--key", opt.key_path, "Key file")->required();
    decrypt->add_option("--alpha", opt.alpha, "Plaintext, comma-joined levels");
    decrypt->add_option("--state", opt.state_path, "Input state file");
    decrypt->add_option("-o,--out", opt.out, "Output state path")->required();
    add_common(decrypt, opt);

    CLI::App* evaluate = app.add_subcommand("evaluate", "Apply a circuit to a state");
    evaluate->add_option("--circuit", opt.circuit_path, "Circuit file")->required();
    evaluate->add_option("--state", opt.state_path, "Input state file");
    evaluate->add_option("--alpha", opt.alpha, "Plaintext, comma-joined levels");
    evaluate->add_option("-d", opt.d, "Internal levels (with --alpha)");
    evaluate->add_option("-o,--out", opt.out, "Output state path")->required();
    add_common(evaluate, opt);

    CLI::App* run = app.add_subcommand(
        "run", "Encrypt, evaluate, decrypt; compare against the plain evaluation");
    run->add_option("--alpha", opt.alpha, "Plaintext, comma-joined levels")->required();
    run->add_option("--key", opt.key_path, "Key file")->required();
    run->add_option("--circuit", opt.circuit_path, "Circuit file")->required();
    run->add_option("-o,--out", opt.out, "Output path prefix (default \"run\")");
    add_common(run, opt);

    CLI::App* analyze = app.add_subcommand("analyze", "Ciphertext information analysis");
    analyze->add_option("-m", opt.m, "Particle count")->required();
    analyze->add_option("-d", opt.d, "Internal levels per particle")->required();
    analyze->add_option("--prior", opt.prior_path, "Prior file (default uniform)");
    analyze->add_option("-o,--out", opt.out, "Report output path");
    add_common(analyze, opt);

    CLI::App* sample = app.add_subcommand("sample", "Draw measurement outcomes from a state");
    sample->add_option("--state", opt.state_path, "Input state file");
    sample->add_option("--alpha", opt.alpha, "Plaintext, comma-joined levels");
    sample->add_option("-d", opt.d, "Internal levels (with --alpha)");
    sample->add_option("--circuit", opt.circuit_path, "Circuit applied before sampling");
    sample->add_option("--shots", opt.shots, "Number of outcomes to draw");
    sample->add_option("--seed", opt.seed, "Sampling seed");
    sample->add_option("--view", opt.view, "\"joint\" or \"spatial\"");
    sample->add_option("-o,--out", opt.out, "Output histogram path")->required();
    add_common(sample, opt);

    CLI::App* reck = app.add_subcommand("reck", "Compile a unitary into a triangular mesh");
    reck->add_option("--unitary", opt.unitary_path, "Unitary matrix file")->required();
    reck->add_option("-o,--out", opt.out, "Output circuit path")->required();
    add_common(reck, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (run->parsed() && opt.out.empty()) opt.out = "run";

    try {
        if (opt.verify) {
            if (keygen->parsed() || encrypt->parsed() || decrypt->parsed() || run->parsed() ||
                analyze->parsed()) {
                verify::verify_crypto();
            }
            if (!keygen->parsed() && !analyze->parsed()) verify::verify_fock();
            if (evaluate->parsed() || run->parsed() || sample->parsed() || reck->parsed()) {
                verify::verify_evaluate();
            }
            if (analyze->parsed()) verify::verify_secinfo();
        }
        if (keygen->parsed()) {
            cmd_keygen(opt);
        } else if (encrypt->parsed()) {
            cmd_encrypt(opt, true);
        } else if (decrypt->parsed()) {
            cmd_encrypt(opt, false);
        } else if (evaluate->parsed()) {
            cmd_evaluate(opt);
        } else if (run->parsed()) {
            cmd_run(opt);
        } else if (analyze->parsed()) {
            cmd_analyze(opt);
        } else if (sample->parsed()) {
            cmd_sample(opt);
        } else if (reck->parsed()) {
            cmd_reck(opt);
        }
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const verify::VerificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

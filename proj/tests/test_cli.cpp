#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "qhe/crypto.hpp"
#include "qhe/fock.hpp"
#include "qhe/io.hpp"
#include "qhe/linalg.hpp"
#include "qhe/optics.hpp"
#include "qhe/security.hpp"

using namespace qhe;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string output;  // stdout and stderr combined
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "qhe_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string path_in(const std::string& name) {
    return (scratch_dir() / name).string();
}

CliResult run_cli(const std::string& args) {
    const std::string capture = path_in("stdout.txt");
    const std::string command =
        std::string(QHE_BIN_PATH) + " " + args + " > " + capture + " 2>&1";
    const int raw = std::system(command.c_str());
    CliResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.output = io::read_text_file(capture);
    return result;
}

double overlap(const fock::StateVector& a, const fock::StateVector& b) {
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

optics::Circuit balanced_splitter_circuit() {
    optics::Circuit circuit;
    circuit.m = 2;
    circuit.gates.push_back(optics::Gate::beam_splitter(1, 2, kPi / 4.0, 0.0));
    return circuit;
}

}  // namespace

TEST_CASE("keygen writes deterministic fingerprinted keys") {
    const auto first = run_cli("keygen -m 3 -d 3 --seed 11 -o " + path_in("k1.json"));
    CHECK(first.code == 0);
    CHECK(first.output.find("key fingerprint: ") == 0);
    CHECK(first.output.size() == std::string("key fingerprint: ").size() + 17);

    const auto second = run_cli("keygen -m 3 -d 3 --seed 11 -o " + path_in("k2.json"));
    CHECK(second.code == 0);
    CHECK(io::read_text_file(path_in("k1.json")) == io::read_text_file(path_in("k2.json")));
    CHECK(first.output == second.output);

    const crypto::Key key = io::read_key(path_in("k1.json"));
    CHECK(key.m == 3);
    CHECK(key.d == 3);
    REQUIRE(key.kappa.size() == 2);
    for (int k : key.kappa) {
        CHECK(k >= 0);
        CHECK(k <= 3);
    }
}

TEST_CASE("keygen rejects bad arguments") {
    CHECK(run_cli("keygen -m 2 -d 1 -o " + path_in("bad.json")).code == 1);
    CHECK(run_cli("keygen -m 2 -d 2").code == 1);
    CHECK(run_cli("explode").code == 1);
    CHECK(run_cli("").code == 1);
    const auto help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(help.output.find("keygen") != std::string::npos);
}

TEST_CASE("encrypt and decrypt round trip through state files") {
    REQUIRE(run_cli("keygen -m 2 -d 3 --seed 5 -o " + path_in("key23.json")).code == 0);
    REQUIRE(run_cli("encrypt --key " + path_in("key23.json") + " --alpha 1,2 -o " +
                    path_in("ct.json"))
                .code == 0);
    REQUIRE(run_cli("decrypt --key " + path_in("key23.json") + " --state " +
                    path_in("ct.json") + " -o " + path_in("pt.json"))
                .code == 0);

    const fock::StateVector decrypted = io::read_state(path_in("pt.json"));
    const fock::StateVector expected =
        fock::plaintext_to_fock({1, 2}, fock::make_basis(2, 3));
    CHECK(overlap(decrypted, expected) >= 1.0 - 1e-9);
}

TEST_CASE("encrypt validates its inputs with field-level messages") {
    REQUIRE(run_cli("keygen -m 2 -d 3 --seed 5 -o " + path_in("key23.json")).code == 0);
    const std::string key = " --key " + path_in("key23.json");

    const auto both = run_cli("encrypt" + key + " --alpha 1,2 --state " + path_in("ct.json") +
                              " -o " + path_in("x.json"));
    CHECK(both.code == 1);
    CHECK(both.output.find("exactly one") != std::string::npos);

    const auto neither = run_cli("encrypt" + key + " -o " + path_in("x.json"));
    CHECK(neither.code == 1);

    const auto arity = run_cli("encrypt" + key + " --alpha 1 -o " + path_in("x.json"));
    CHECK(arity.code == 1);
    CHECK(arity.output.find("alpha") != std::string::npos);

    const auto level = run_cli("encrypt" + key + " --alpha 1,3 -o " + path_in("x.json"));
    CHECK(level.code == 1);

    CHECK(run_cli("encrypt --key " + path_in("no_such_key.json") + " --alpha 1,2 -o " +
                  path_in("x.json"))
              .code == 2);
}

TEST_CASE("mismatched state and key geometry is refused") {
    REQUIRE(run_cli("keygen -m 2 -d 3 --seed 5 -o " + path_in("key23.json")).code == 0);
    REQUIRE(run_cli("keygen -m 2 -d 2 --seed 5 -o " + path_in("key22.json")).code == 0);
    REQUIRE(run_cli("encrypt --key " + path_in("key23.json") + " --alpha 0,0 -o " +
                    path_in("ct23.json"))
                .code == 0);
    const auto wrong = run_cli("decrypt --key " + path_in("key22.json") + " --state " +
                               path_in("ct23.json") + " -o " + path_in("x.json"));
    CHECK(wrong.code == 1);
    CHECK(wrong.output.find("does not match key") != std::string::npos);
}

TEST_CASE("run pipeline round trips with unit fidelity") {
    optics::Circuit circuit = balanced_splitter_circuit();
    circuit.gates.push_back(optics::Gate::phase_shifter(1, 0.3));
    io::write_circuit(path_in("circ2.json"), circuit);
    REQUIRE(run_cli("keygen -m 2 -d 2 --seed 21 -o " + path_in("key22.json")).code == 0);

    const auto run = run_cli("run --alpha 0,1 --key " + path_in("key22.json") +
                             " --circuit " + path_in("circ2.json") + " -o " + path_in("job"));
    CHECK(run.code == 0);
    CHECK(run.output.find("fidelity = ") != std::string::npos);

    const fock::StateVector plain = io::read_state(path_in("job.plain.json"));
    const fock::StateVector decrypted = io::read_state(path_in("job.decrypted.json"));
    CHECK(overlap(plain, decrypted) >= 1.0 - 1e-9);
    CHECK(std::abs(plain.norm() - 1.0) <= 1e-9);
}

TEST_CASE("run refuses mismatched circuit and key") {
    io::write_circuit(path_in("circ2.json"), balanced_splitter_circuit());
    REQUIRE(run_cli("keygen -m 3 -d 2 --seed 2 -o " + path_in("key32.json")).code == 0);
    const auto bad = run_cli("run --alpha 0,1,0 --key " + path_in("key32.json") +
                             " --circuit " + path_in("circ2.json") + " -o " + path_in("job2"));
    CHECK(bad.code == 1);
    CHECK(bad.output.find("circuit: m") != std::string::npos);
}

TEST_CASE("evaluate applies a circuit to a plaintext") {
    io::write_circuit(path_in("circ2.json"), balanced_splitter_circuit());
    const auto done = run_cli("evaluate --circuit " + path_in("circ2.json") +
                              " --alpha 0,0 -d 2 -o " + path_in("evolved.json"));
    CHECK(done.code == 0);
    const fock::StateVector evolved = io::read_state(path_in("evolved.json"));
    CHECK(std::abs(evolved.norm() - 1.0) <= 1e-9);
    // HOM at the balanced splitter: no coincidences remain.
    CHECK(optics::spatial_marginal(evolved, 2).at({1, 1}) <= 1e-12);

    CHECK(run_cli("evaluate --circuit " + path_in("circ2.json") + " --alpha 0,0 -o " +
                  path_in("x.json"))
              .code == 1);
}

TEST_CASE("analyze prints the summary line and writes byte-stable reports") {
    const auto analyzed =
        run_cli("analyze -m 2 -d 2 -o " + path_in("report1.json"));
    CHECK(analyzed.code == 0);
    CHECK(analyzed.output.find("chi = 0.5 bits") != std::string::npos);
    CHECK(analyzed.output.find("bound = 1 bits") != std::string::npos);
    CHECK(analyzed.output.find("gap_exact = 1 bits") != std::string::npos);
    CHECK(analyzed.output.find("gap_asymptotic = 2.88539008178 bits") != std::string::npos);

    const std::string expected =
        io::serialize_report(security::holevo(security::Prior::make_uniform(), 2, 2));
    CHECK(io::read_text_file(path_in("report1.json")) == expected);

    REQUIRE(run_cli("analyze -m 2 -d 2 -o " + path_in("report2.json")).code == 0);
    CHECK(io::read_text_file(path_in("report2.json")) == expected);
}

TEST_CASE("analyze accepts prior files and enforces caps") {
    io::write_text_file(path_in("prior.json"),
                        io::serialize_prior(security::Prior::point_mass({1, 0})));
    const auto point = run_cli("analyze -m 2 -d 2 --prior " + path_in("prior.json"));
    CHECK(point.code == 0);
    CHECK(point.output.find("chi = 0 bits") != std::string::npos);

    const auto capped = run_cli("analyze -m 5 -d 8");
    CHECK(capped.code == 1);
    CHECK(capped.output.find("32768") != std::string::npos);

    CHECK(run_cli("analyze -m 2 -d 2 --prior " + path_in("no_such_prior.json")).code == 2);
}

TEST_CASE("sample draws reproducible histograms") {
    const auto first = run_cli("sample --alpha 1,0 -d 2 --shots 64 --seed 9 -o " +
                               path_in("h1.json"));
    CHECK(first.code == 0);
    const optics::Histogram h1 = io::read_histogram(path_in("h1.json"));
    REQUIRE(h1.counts.size() == 1);
    CHECK(h1.counts.begin()->first == std::vector<int>{0, 1, 1, 0});
    CHECK(h1.counts.begin()->second == 64);

    REQUIRE(run_cli("sample --alpha 1,0 -d 2 --shots 64 --seed 9 -o " + path_in("h2.json"))
                .code == 0);
    CHECK(io::read_text_file(path_in("h1.json")) == io::read_text_file(path_in("h2.json")));
}

TEST_CASE("sample composes with circuits and the spatial view") {
    io::write_circuit(path_in("circ2.json"), balanced_splitter_circuit());
    const auto hom = run_cli("sample --alpha 0,0 -d 2 --circuit " + path_in("circ2.json") +
                             " --view spatial --shots 2000 --seed 1 -o " + path_in("hom.json"));
    CHECK(hom.code == 0);
    const optics::Histogram hist = io::read_histogram(path_in("hom.json"));
    CHECK(hist.view == optics::SampleView::SpatialMarginal);
    CHECK(hist.counts.find({1, 1}) == hist.counts.end());
    CHECK(hist.counts.at({2, 0}) + hist.counts.at({0, 2}) == 2000);

    CHECK(run_cli("sample --alpha 0,0 -d 2 --view sideways -o " + path_in("x.json")).code ==
          1);
}

TEST_CASE("sample rejects unnormalized state files") {
    auto basis = fock::make_basis(1, 2);
    fock::StateVector faint;
    faint.basis = basis;
    faint.amplitudes = Vector::Zero(2);
    faint.amplitudes(0) = Complex(0.5);
    io::write_state(path_in("faint.json"), faint, 2);
    const auto bad = run_cli("sample --state " + path_in("faint.json") + " -o " +
                             path_in("x.json"));
    CHECK(bad.code == 1);
}

TEST_CASE("reck compiles unitary files into circuits that recompile") {
    std::mt19937_64 rng(2024);
    const Matrix u = haar_unitary(4, rng);
    io::write_unitary(path_in("u4.json"), u);
    const auto compiled =
        run_cli("reck --unitary " + path_in("u4.json") + " -o " + path_in("mesh.json"));
    CHECK(compiled.code == 0);
    CHECK(compiled.output.find("recompile error = ") != std::string::npos);
    const optics::Circuit mesh = io::read_circuit(path_in("mesh.json"));
    CHECK((optics::circuit_to_unitary(mesh) - u).norm() <= 1e-8);

    io::write_unitary(path_in("ones.json"), Matrix::Ones(3, 3));
    CHECK(run_cli("reck --unitary " + path_in("ones.json") + " -o " + path_in("x.json"))
              .code == 1);
    CHECK(run_cli("reck --unitary " + path_in("no_such.json") + " -o " + path_in("x.json"))
              .code == 2);
}

TEST_CASE("the verify flag gates execution on the invariant suites") {
    CHECK(run_cli("keygen -m 2 -d 2 --seed 1 -o " + path_in("kv.json") + " --verify").code ==
          0);
    CHECK(run_cli("analyze -m 2 -d 2 --verify").code == 0);
}

TEST_CASE("unwritable outputs exit with the I/O code") {
    CHECK(run_cli("keygen -m 2 -d 2 -o /nonexistent_dir_for_tests/k.json").code == 2);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "wg/config.hpp"
#include "wg/fieldio.hpp"
#include "wg/numeric.hpp"
#include "wg/report.hpp"
#include "wg/scenarios.hpp"

using namespace wg;
namespace fs = std::filesystem;

namespace {

// doubles from random bit patterns, finite only
double randomDouble(Philox& rng) {
    for (;;) {
        const double d = std::bit_cast<double>(rng.next64());
        if (std::isfinite(d)) return d;
    }
}

std::string randomToken(Philox& rng, const std::string& alphabet, int maxLen) {
    std::string s;
    const int n = 1 + int(rng.below(std::uint64_t(maxLen)));
    for (int i = 0; i < n; ++i) s += alphabet[rng.below(alphabet.size())];
    return s;
}

RunConfig randomConfig(Philox& rng) {
    const std::string word = "abcdefghijklmnopqrstuvwxyz-_0123456789";
    RunConfig c;
    c.scenario = randomToken(rng, word, 12);
    c.seed = rng.next64();
    c.threads = 1 + int(rng.below(64));
    c.outDir = "/tmp/" + randomToken(rng, word + "/.", 20);
    c.format = rng.below(2) ? "csv" : "json";
    c.accept.clear();
    for (int i = int(rng.below(4)); i > 0; --i) c.accept.push_back(randomToken(rng, word, 8));
    c.lambda = randomDouble(rng);
    c.L = randomDouble(rng);
    c.N.clear();
    for (int i = int(rng.below(6)); i > 0; --i) c.N.push_back(randomDouble(rng));
    c.ensembleSize = int(rng.below(1000)) - 10;
    c.ensembleKind = randomToken(rng, word, 10);
    c.cA = randomDouble(rng);
    c.theta = randomDouble(rng);
    c.theta2 = randomDouble(rng);
    c.comparability = randomDouble(rng);
    c.thetaRes = randomDouble(rng);
    c.tol = randomDouble(rng);
    c.maxIter = int(rng.below(100000));
    c.delta = randomDouble(rng);
    c.sign = randomToken(rng, word, 10);
    c.kickMode = randomToken(rng, word, 10);
    c.dt = randomDouble(rng);
    c.gateTol = randomDouble(rng);
    for (int i = int(rng.below(4)); i > 0; --i)
        c.extra["x" + randomToken(rng, "abc", 3) + "." + randomToken(rng, word, 6)] = "v" + randomToken(rng, word + " ,.", 16) + "v";
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratchDir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("wg-harness-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("config round trip") {
    RunConfig dflt;
    CHECK(parseConfig(serializeConfig(dflt)) == dflt);
    Philox rng(3, "config-roundtrip");
    for (int i = 0; i < 300; ++i) {
        const auto c = randomConfig(rng);
        const auto text = serializeConfig(c);
        INFO(text);
        const auto back = parseConfig(text);
        REQUIRE(back == c);
        CHECK(serializeConfig(back) == text);
    }
}

TEST_CASE("config parsing") {
    const auto c = parseConfig("# comment\n[run]\n seed = 42 \nformat=json\naccept=gate, mass-drift\n"
                               "[lattice]\nN=8..64\n[custom]\nalpha=1 2\n");
    CHECK(c.seed == 42);
    CHECK(c.format == "json");
    CHECK(c.accept == std::vector<std::string>{"gate", "mass-drift"});
    CHECK(c.N == std::vector<double>{8, 16, 32, 64});
    CHECK(c.extra.at("custom.alpha") == "1 2");
    CHECK_THROWS_AS(parseConfig("seed=1\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("[run]\nseed=x\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("[run]\nformat=xml\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("[run\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("[run]\nthreads=0\n"), ConfigError);
    CHECK_THROWS_AS(parseDoubleList("64..8"), ConfigError);
}

TEST_CASE("environment overrides only output and threads") {
    RunConfig c;
    ::setenv("WG_OUT", "/tmp/wg-env-out", 1);
    ::setenv("WG_THREADS", "3", 1);
    applyEnvironment(c);
    CHECK(c.outDir == "/tmp/wg-env-out");
    CHECK(c.threads == 3);
    CHECK(c.seed == RunConfig{}.seed);
    ::setenv("WG_THREADS", "zero", 1);
    CHECK_THROWS(applyEnvironment(c));
    ::unsetenv("WG_OUT");
    ::unsetenv("WG_THREADS");
}

TEST_CASE("shortest decimal text reads back bit for bit") {
    Philox rng(5, "format-double");
    for (int i = 0; i < 20000; ++i) {
        const double d = randomDouble(rng);
        const double back = parseDouble(formatDouble(d));
        REQUIRE(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(d));
    }
    CHECK(formatDouble(0.5) == "0.5");
    CHECK(formatDouble(1e300).find(',') == std::string::npos);
}

TEST_CASE("CSV quoting and CRLF") {
    Table t;
    t.header = {"a", "b,c", "d\"e"};
    t.addRow({"1", "x,y", "say \"hi\""});
    t.addRow({"", "line\nbreak", "cr\rhere"});
    const auto text = toCsv(t);
    CHECK(text.substr(0, 16) == "a,\"b,c\",\"d\"\"e\"\r\n");
    CHECK(text.substr(text.size() - 2) == "\r\n");
    const auto back = parseCsv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK_THROWS(t.addRow({"only one"}));
    CHECK_THROWS(parseCsv(""));
    CHECK_THROWS(parseCsv("a,\"b\n"));
}

TEST_CASE("CSV round trip on random tables") {
    Philox rng(9, "csv-roundtrip");
    const std::string alphabet = "ab,\"\r\n .1";
    for (int trial = 0; trial < 200; ++trial) {
        Table t;
        const int cols = 1 + int(rng.below(5));
        for (int c = 0; c < cols; ++c) t.header.push_back("h" + randomToken(rng, alphabet, 5));
        for (int r = int(rng.below(6)); r > 0; --r) {
            std::vector<std::string> row;
            for (int c = 0; c < cols; ++c) row.push_back(rng.below(4) ? randomToken(rng, alphabet, 8) : "");
            t.addRow(row);
        }
        const auto back = parseCsv(toCsv(t));
        REQUIRE(back.header == t.header);
        REQUIRE(back.rows == t.rows);
    }
}

TEST_CASE("reports are written through a rename and leave no temporaries") {
    const auto dir = scratchDir("report");
    Report r;
    r.name = "demo";
    r.table.header = {"x", "y"};
    r.table.addRow({"1", "2"});
    r.meta["k"] = "v";
    auto files = writeReport(r, dir.string(), "csv");
    CHECK(files.size() == 2);
    r.failures.push_back("gate");
    writeReport(r, dir.string(), "json");
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"demo.csv", "demo.json"});
    CHECK(slurp(dir / "demo.csv") == "x,y\r\n1,2\r\n");
    const auto j = nlohmann::json::parse(slurp(dir / "demo.json"));
    CHECK(j["status"] == "fail");
    CHECK(j["failures"][0] == "gate");
    CHECK(j["rows"][0]["y"] == "2");
    CHECK_THROWS(writeFileAtomic((dir / "missing" / "f.txt").string(), "x"));
    CHECK_THROWS(writeReport(r, dir.string(), "xml"));
    std::size_t count = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
    CHECK(count == 2);
    fs::remove_all(dir);
}

TEST_CASE("field files round trip bit for bit") {
    const auto lat = buildLattice(2.0, 16.0, 1.5, Geometry::RT);
    Philox rng(11, "field-io");
    auto f = SpectralField::zeros(lat);
    for (auto& c : f.coeffs) c = cplx(randomDouble(rng), rng.below(8) ? randomDouble(rng) : -0.0);
    const auto text = fieldToString(f);
    CHECK(text.rfind("lattice 2 16 1.5 RT\n", 0) == 0);
    const auto back = fieldFromString(text);
    CHECK(back.lattice == lat);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        REQUIRE(std::bit_cast<std::uint64_t>(back.coeffs[i].real()) == std::bit_cast<std::uint64_t>(f.coeffs[i].real()));
        REQUIRE(std::bit_cast<std::uint64_t>(back.coeffs[i].imag()) == std::bit_cast<std::uint64_t>(f.coeffs[i].imag()));
    }
    const auto dir = scratchDir("field");
    saveField((dir / "f.field").string(), f);
    CHECK(loadField((dir / "f.field").string()).coeffs == back.coeffs);
    fs::remove_all(dir);
}

TEST_CASE("field file errors") {
    const auto lat = buildLattice(1.0, 8.0, 1.0, Geometry::TT);
    const auto good = fieldToString(SpectralField::singleMode(lat, 2, 1, cplx(1.0, -2.0)));
    CHECK((fieldFromString(good).lattice.geometry == Geometry::TT));
    CHECK_THROWS(fieldFromString("grid 1 8 1 RT\n"));
    CHECK_THROWS(fieldFromString("lattice 1 2 1 RT\n"));  // box below the floor
    CHECK_THROWS(fieldFromString(good.substr(0, good.size() / 2)));
    CHECK_THROWS(fieldFromString(good + "0 0 0 0\n"));
    auto swapped = good;
    const auto first = swapped.find("-8 -1");
    swapped.replace(first, 5, "-7 -1");
    CHECK_THROWS(fieldFromString(swapped));
    auto nan = good;
    nan.replace(nan.find("-8 -1 0 0"), 9, "-8 -1 nan 0");
    CHECK_THROWS(fieldFromString(nan));
    CHECK_THROWS(loadField("/nonexistent/f.field"));
}

TEST_CASE("lemma corpus report is byte identical across runs") {
    const auto a = toCsv(lemmaCorpusReport(lemmaCorpusRows(7, 12, {1, 2}), 7).table);
    const auto b = toCsv(lemmaCorpusReport(lemmaCorpusRows(7, 12, {1, 2}), 7).table);
    CHECK(a == b);
    const auto c = toCsv(lemmaCorpusReport(lemmaCorpusRows(8, 12, {1, 2}), 8).table);
    CHECK(a != c);
    const auto t = parseCsv(a);
    CHECK(t.rows.size() == 24);
    CHECK(t.header[5] == "impliedC");
}

TEST_CASE("continuum ensemble draws do not depend on the box") {
    const auto small = buildLattice(1.0, 8.0, 4.0, Geometry::RT);
    const auto big = buildLattice(1.0, 16.0, 4.0, Geometry::RT);
    const auto f = ensembleMember(EnsembleKind::Continuum, small, 4, 2);
    const auto g = ensembleMember(EnsembleKind::Continuum, big, 4, 2);
    // same profile sampled twice as finely: coefficients agree up to one normalization factor
    const cplx scale = g.at(2 * 5, 1) / f.at(5, 1);
    for (int k2 = -small.n2; k2 <= small.n2; ++k2)
        for (int k1 = -small.n1; k1 <= small.n1; ++k1)
            CHECK(std::abs(g.at(2 * k1, k2) - scale * f.at(k1, k2)) <= 1e-12 * std::abs(scale));
    CHECK(std::abs(l2Norm(f) - 1.0) < 1e-12);
    CHECK(ensembleMember(EnsembleKind::Iid, small, 4, 2).coeffs == ensembleMember(EnsembleKind::Iid, small, 4, 2).coeffs);
    CHECK(ensembleMember(EnsembleKind::Iid, small, 4, 2).coeffs != ensembleMember(EnsembleKind::Iid, small, 4, 3).coeffs);
    const auto mz = ensembleMember(EnsembleKind::Continuum, small, 4, 2, true);
    for (int k1 = -small.n1; k1 <= small.n1; ++k1) CHECK(mz.at(k1, 0) == cplx(0.0));
    CHECK((ensembleKindFromString(toString(EnsembleKind::Iid)) == EnsembleKind::Iid));
}

TEST_CASE("double box gate") {
    const auto single = singleModeGate(Scenario::RTHyperbolic, 1.0, 8.0, 2.0);
    CHECK(single.pass);
    CHECK(single.relChange < 1e-12);
    CHECK(single.atL == doctest::Approx(1.0).epsilon(1e-12));
    // low cutoff, box much longer than 2N: the ensemble max is settled
    const auto settled = ensembleGate(Scenario::RTHyperbolic, 1.0, 8.0, 2.0, 4, 1);
    CHECK(settled.pass);
    // negative control: L = 2 lambda
    const auto tiny = ensembleGate(Scenario::RTHyperbolic, 1.0, 2.0, 4.0, 4, 1);
    CHECK_FALSE(tiny.pass);
    CHECK(tiny.relChange > 0.05);
    CHECK_THROWS(singleModeGate(Scenario::TTElliptic, 1.0, 8.0, 2.0));
    const auto g = doubleBoxGate("affine", 3.0, [](double L) { return 10.0 + 1.0 / L; }, 0.02);
    CHECK(g.at2L == doctest::Approx(10.0 + 1.0 / 6.0));
    CHECK(g.pass);
}

TEST_CASE("ratio sweep report columns") {
    RatioSweepOptions o;
    o.N = {1, 2, 4, 8};
    o.ensembleSize = 2;
    o.extremize = false;
    o.L = 8.0;
    const auto sw = runRatioSweep(o);
    const auto r = ratioSweepReport(sw, o);
    CHECK(r.table.header == std::vector<std::string>{"N", "ensembleMax", "extremized", "fitExponent"});
    REQUIRE(r.table.rows.size() == 4);
    for (const auto& row : r.table.rows) CHECK(row[3] == csvNumber(sw.fit.powerExponent));
    for (const auto& p : sw.points) CHECK(p.ensembleMax > 0.0);
    o.N = {4, 2};
    CHECK_THROWS(runRatioSweep(o));
}

TEST_CASE("measure report columns") {
    const auto r = measureReport("hyperbolic-annulus", 0.0, {8, 16}, 1.0);
    CHECK(r.table.header == std::vector<std::string>{"N", "euclid", "rz", "maxSlice", "impliedC"});
    REQUIRE(r.table.rows.size() == 2);
    CHECK(parseDouble(r.table.rows[1][1]) > parseDouble(r.table.rows[0][1]));
    CHECK_THROWS(measureReport("no-such-set", 0.0, {8}, 1.0));
}

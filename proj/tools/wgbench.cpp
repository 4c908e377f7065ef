#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wg/config.hpp"
#include "wg/fieldio.hpp"
#include "wg/scenarios.hpp"

using namespace wg;

namespace {

// check id -> passed; a subcommand fills in what it can decide
using Checks = std::map<std::string, bool>;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, format;
    std::optional<int> threads;
    std::vector<std::string> accept;
};

std::vector<double> listOr(const std::string& text, const std::vector<double>& dflt) {
    return text.empty() ? dflt : parseDoubleList(text);
}

double lOr(double L, double lambda) { return L > 0.0 ? L : 8.0 * std::max(lambda, 1.0); }

SpectralField randomSupport(const FrequencyLattice& lat, int count, std::uint64_t seed) {
    if (count < 1 || std::size_t(count) > lat.size()) throw std::invalid_argument("support size out of range");
    Philox rng(seed, "quadform-field");
    auto f = SpectralField::zeros(lat);
    int placed = 0;
    while (placed < count) {
        auto& c = f.coeffs[rng.below(lat.size())];
        if (c != cplx(0.0)) continue;
        c = std::abs(rng.complexNormal()) + 1e-3;
        ++placed;
    }
    return f;
}

QuadWeight::Restriction restrictionFromString(const std::string& s) {
    for (auto r : {QuadWeight::Restriction::None, QuadWeight::Restriction::A1, QuadWeight::Restriction::A2plain,
                   QuadWeight::Restriction::A2refined})
        if (toString(r) == s) return r;
    throw std::invalid_argument("unknown restriction: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wgbench: waveguide Strichartz experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "config file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "ensemble seed");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--accept", g.accept, "checks that must pass")->delimiter(',');

    // options shared by several subcommands; empty or zero falls back to the config
    std::string scenario, nList;
    double lambda = 0.0, L = 0.0, N = 0.0;
    auto lattice = [&](CLI::App* s, bool list) {
        s->add_option("--scenario", scenario, "scenario id");
        s->add_option("--lambda", lambda, "torus circumference");
        s->add_option("--L", L, "x1 box length");
        if (list) s->add_option("--N", nList, "cutoffs, a,b,c or a..b");
        else s->add_option("--N", N, "cutoff");
    };

    auto* evolveCmd = app.add_subcommand("evolve", "apply e(-tH) to a field");
    std::string inField;
    double tEvolve = 1.0;
    lattice(evolveCmd, false);
    evolveCmd->add_option("--in", inField, "field file; default is an ensemble member");
    evolveCmd->add_option("--t", tEvolve, "time");

    auto* sweepCmd = app.add_subcommand("ratio-sweep", "Strichartz ratio against N");
    int ensembleSize = 0;
    std::string ensembleKind;
    bool noExtremize = false;
    int maxIter = 0;
    lattice(sweepCmd, true);
    sweepCmd->add_option("--ensemble-size", ensembleSize);
    sweepCmd->add_option("--ensemble", ensembleKind)->check(CLI::IsMember({"iid", "continuum"}));
    sweepCmd->add_flag("--no-extremize", noExtremize);
    sweepCmd->add_option("--max-iter", maxIter);
    double boxPerN = 0.0;
    sweepCmd->add_option("--box-per-n", boxPerN, "box length at least this multiple of N");

    auto* quadCmd = app.add_subcommand("quadform", "quadrilinear form on a random support");
    int support = 20;
    std::string restriction = "none", constraint = "indicator", cAList;
    double boundC = 1.0;
    lattice(quadCmd, false);
    quadCmd->add_option("--support", support, "support size");
    quadCmd->add_option("--restriction", restriction)->check(CLI::IsMember({"none", "A1", "A2plain", "A2refined"}));
    quadCmd->add_option("--constraint", constraint)->check(CLI::IsMember({"indicator", "smooth"}));
    quadCmd->add_option("--cA", cAList, "c_A values, e.g. 10,100,1000");
    quadCmd->add_option("--C", boundC, "bound constant");

    auto* measureCmd = app.add_subcommand("measure", "measures of a catalog family against N");
    std::string setId = "hyperbolic-annulus";
    double C0 = 0.0;
    measureCmd->add_option("--set", setId, "catalog id taking (C0, N[, theta])");
    measureCmd->add_option("--C0", C0);
    measureCmd->add_option("--N", nList);
    measureCmd->add_option("--lambda", lambda);

    auto* corpusCmd = app.add_subcommand("lemma-corpus", "implied constants over the random corpus");
    int corpusCount = 50;
    std::string lambdaList;
    bool noDoubled = false;
    corpusCmd->add_option("--count", corpusCount);
    corpusCmd->add_option("--lambda", lambdaList, "lambda values");
    corpusCmd->add_flag("--no-doubled", noDoubled, "skip the doubled bounding box");

    auto* propCmd = app.add_subcommand("prop-check", "section measures over the standard v samples");
    std::string propKind = "A1";
    int magnitudes = 13, angles = 16;
    propCmd->add_option("--kind", propKind)->check(CLI::IsMember({"A1", "A2plain", "A2refined"}));
    propCmd->add_option("--lambda", lambda);
    propCmd->add_option("--magnitudes", magnitudes);
    propCmd->add_option("--angles", angles);

    auto* bilCmd = app.add_subcommand("bilinear-sweep", "bilinear ratios over (N1, N2, lambda)");
    std::string n1List, n2List;
    int refine = 0;
    bool fitBil = false;
    bilCmd->add_option("--N1", n1List)->required();
    bilCmd->add_option("--N2", n2List)->required();
    bilCmd->add_option("--lambda", lambdaList);
    bilCmd->add_option("--ensemble-size", ensembleSize);
    bilCmd->add_option("--refine", refine, "alternating ascent steps");
    bilCmd->add_flag("--fit", fitBil, "fit the scaling law");

    auto* eabCmd = app.add_subcommand("eab", "measure of E_{a,b} over random pairs");
    int draws = 32;
    eabCmd->add_option("--N1", n1List)->required();
    eabCmd->add_option("--N2", n2List)->required();
    eabCmd->add_option("--lambda", lambdaList);
    eabCmd->add_option("--draws", draws);

    auto* extCmd = app.add_subcommand("extremize", "fixed-point ascent from three inits");
    lattice(extCmd, false);
    extCmd->add_option("--max-iter", maxIter);

    auto* nlsCmd = app.add_subcommand("nls", "split-step cubic NLS");
    double T = 1.0, norm = 0.1, dt = 0.0;
    std::string sign, mode;
    int stride = 1;
    lattice(nlsCmd, false);
    nlsCmd->add_option("--T", T, "signed duration");
    nlsCmd->add_option("--dt", dt);
    nlsCmd->add_option("--norm", norm, "L2 norm of the initial ensemble member");
    nlsCmd->add_option("--sign", sign)->check(CLI::IsMember({"focusing", "defocusing", "+", "-"}));
    nlsCmd->add_option("--mode", mode)->check(CLI::IsMember({"project", "full-grid"}));
    nlsCmd->add_option("--stride", stride, "diagnostic stride");
    nlsCmd->add_option("--in", inField, "initial field file");

    auto* picCmd = app.add_subcommand("picard", "Picard iteration on [-1, 1]");
    lattice(picCmd, false);
    picCmd->add_option("--norm", norm);
    picCmd->add_option("--sign", sign)->check(CLI::IsMember({"focusing", "defocusing", "+", "-"}));
    picCmd->add_option("--max-iter", maxIter);
    picCmd->add_option("--in", inField, "initial field file");
    bool calibrate = false;
    picCmd->add_flag("--calibrate", calibrate, "bisect the contraction threshold and record it as the smallness delta");

    auto* gateCmd = app.add_subcommand("gate", "rerun at 2L and compare");
    std::string gateKind = "ensemble";
    lattice(gateCmd, false);
    gateCmd->add_option("--kind", gateKind)->check(CLI::IsMember({"ensemble", "single-mode"}));
    gateCmd->add_option("--ensemble-size", ensembleSize);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = g.config.empty() ? RunConfig{} : loadConfig(g.config);
        applyEnvironment(cfg);
        if (g.seed) cfg.seed = *g.seed;
        if (g.out) cfg.outDir = *g.out;
        if (g.threads) cfg.threads = *g.threads;
        if (g.format) cfg.format = *g.format;
        for (const auto& a : g.accept) cfg.accept.push_back(a);
        if (!scenario.empty()) cfg.scenario = scenario;
        if (lambda > 0.0) cfg.lambda = lambda;
        if (L > 0.0) cfg.L = L;
        if (!nList.empty()) cfg.N = parseDoubleList(nList);
        if (N > 0.0) cfg.N = {N};
        if (ensembleSize > 0) cfg.ensembleSize = ensembleSize;
        if (!ensembleKind.empty()) cfg.ensembleKind = ensembleKind;
        if (maxIter > 0) cfg.maxIter = maxIter;
        if (!sign.empty()) cfg.sign = sign;
        if (!mode.empty()) cfg.kickMode = mode;
        if (dt > 0.0) cfg.dt = dt;
        if (cfg.N.empty()) throw ConfigError("empty N list");

        const Scenario sc = scenarioFromString(cfg.scenario);
        const double boxL = lOr(cfg.L, cfg.lambda);
        const double N0 = cfg.N.front();
        MeasureOptions mopt;
        mopt.threads = cfg.threads;
        SectionParams sp{cfg.theta, cfg.theta2, cfg.cA};
        ExtremizerOptions eopt;
        eopt.maxIter = cfg.maxIter;
        eopt.tol = cfg.tol;
        eopt.meanZeroX2 = meanZeroOf(sc);

        auto initialField = [&](const EvolutionPlan& plan, double scale) {
            if (!inField.empty()) {
                auto f = loadField(inField);
                if (!(f.lattice == plan.lattice)) throw std::invalid_argument("field lattice does not match the run");
                return f;
            }
            return ensembleMember(ensembleKindFromString(cfg.ensembleKind), plan.lattice, cfg.seed, 0,
                                  meanZeroOf(sc))
                .scaled(scale);
        };

        Report rep;
        Checks checks;
        std::filesystem::create_directories(cfg.outDir);
        auto sub = app.get_subcommands().front()->get_name();

        if (sub == "evolve") {
            const auto plan = scenarioPlan(sc, cfg.lambda, boxL, N0, cfg.threads);
            const auto phi = initialField(plan, 1.0);
            const auto out = evolve(plan, phi, tEvolve);
            saveField((std::filesystem::path(cfg.outDir) / "evolve.field").string(), out);
            rep.name = "evolve";
            rep.table.header = {"t", "l2Norm"};
            rep.table.addRow({"0", csvNumber(l2Norm(phi))});
            rep.table.addRow({csvNumber(tEvolve), csvNumber(l2Norm(out))});
            rep.meta["scenario"] = cfg.scenario;
            rep.meta["N"] = N0;
            rep.meta["field"] = "evolve.field";
        } else if (sub == "ratio-sweep") {
            RatioSweepOptions o;
            o.scenario = sc;
            o.lambda = cfg.lambda;
            o.L = boxL;
            o.boxPerN = boxPerN;
            o.N = cfg.N;
            o.ensembleSize = cfg.ensembleSize;
            o.ensemble = ensembleKindFromString(cfg.ensembleKind);
            o.seed = cfg.seed;
            o.threads = cfg.threads;
            o.extremize = !noExtremize;
            o.extremizer = eopt;
            const auto sw = runRatioSweep(o);
            rep = ratioSweepReport(sw, o);
            if (sw.points.size() >= 4) {
                auto val = [&](const RatioSweepPoint& p) { return o.extremize ? p.extremized : p.ensembleMax; };
                checks["ratio-growth"] = val(sw.points.back()) <= 1.5 * val(sw.points.front());
                checks["power-exponent"] = sw.fit.powerExponent >= -0.05 && sw.fit.powerExponent <= 0.08;
                checks["n14-loss"] = sw.fit.powerExponent >= 0.15;
            }
        } else if (sub == "quadform") {
            const auto lat = buildLattice(cfg.lambda, boxL, N0, geometryOf(sc));
            const auto f = randomSupport(lat, support, cfg.seed);
            QuadFormOptions qo;
            qo.symbol = symbolOf(sc);
            qo.threads = cfg.threads;
            rep.name = "quadform";
            rep.table.header = {"cA", "restriction", "value", "bound", "ratio"};
            bool within = true;
            for (double cA : listOr(cAList, {cfg.cA})) {
                QuadWeight w;
                w.constraint = constraint == "smooth" ? QuadWeight::Constraint::SmoothBump
                                                      : QuadWeight::Constraint::Indicator;
                w.restriction = restrictionFromString(restriction);
                w.theta = cfg.theta;
                w.theta2 = cfg.theta2;
                w.cA = cA;
                const double value = w.restriction == QuadWeight::Restriction::A2refined
                                         ? quadFormA2RefinedSum(f, w, qo)
                                         : quadForm(f, w, qo);
                const double bound = boundC * std::pow(l2Norm(f), 4);
                within = within && value <= bound;
                rep.table.addRow({csvNumber(cA), restriction, csvNumber(value), csvNumber(bound),
                                  csvNumber(value / bound)});
            }
            checks["quad-bound"] = within;
            rep.meta["support"] = support;
            rep.meta["N"] = N0;
            rep.meta["C"] = boundC;
            rep.meta["rng"] = Philox::kAlgorithmId;
            rep.meta["seed"] = cfg.seed;
        } else if (sub == "measure") {
            rep = measureReport(setId, C0, cfg.N, cfg.lambda, cfg.theta, mopt);
            if (cfg.N.size() >= 3) {
                std::vector<double> x, y;
                for (std::size_t i = 0; i < cfg.N.size(); ++i) {
                    x.push_back(std::log(cfg.N[i]));
                    y.push_back(parseDouble(rep.table.rows[i][1]));
                }
                const auto fit = fitLine(x, y);
                rep.meta["logSlope"] = fit.slope;
                rep.meta["logIntercept"] = fit.intercept;
                rep.meta["logMaxRelResidual"] = fit.maxRelResidual;
                checks["log-law"] = fit.maxRelResidual < 0.05;
            }
        } else if (sub == "lemma-corpus") {
            const auto rows = lemmaCorpusRows(cfg.seed, corpusCount, listOr(lambdaList, {1, 2, 4}), !noDoubled, mopt);
            rep = lemmaCorpusReport(rows, cfg.seed);
            double maxC = 0.0, maxD = 0.0;
            for (const auto& r : rows) {
                maxC = std::max(maxC, r.record.impliedC);
                maxD = std::max(maxD, r.impliedCDoubled);
            }
            checks["implied-c"] = maxC <= 10.0;
            if (!noDoubled) checks["box-doubling"] = std::abs(maxD - maxC) <= 0.2 * maxC;
        } else if (sub == "prop-check") {
            const auto res = propCheck(propKindFromString(propKind), standardVSamples(cfg.lambda, magnitudes, angles),
                                       cfg.lambda, sp, mopt);
            rep = propCheckReport(res);
            checks["prop-sup"] = res.sup <= 50.0;
        } else if (sub == "bilinear-sweep") {
            const auto samples = bilinearSweep(parseDoubleList(n1List), parseDoubleList(n2List),
                                               listOr(lambdaList, {cfg.lambda}), cfg.ensembleSize, refine, cfg.seed,
                                               cfg.threads);
            std::optional<BilinearFit> fit;
            if (fitBil) {
                std::vector<BilinearPoint> pts;
                for (const auto& s : samples)
                    pts.push_back({s.N1, s.N2, s.lambda, refine > 0 ? s.refined : s.ensembleMax});
                fit = bilinearScalingFit(pts);
                checks["fit-exponents"] = fit->exponentRatio >= 0.4 && fit->exponentRatio <= 0.6 &&
                                          fit->exponentLambda >= 0.4 && fit->exponentLambda <= 0.6;
            }
            rep = bilinearSweepReport(samples, fit ? &*fit : nullptr);
            rep.meta["rng"] = Philox::kAlgorithmId;
            rep.meta["seed"] = cfg.seed;
        } else if (sub == "eab") {
            std::vector<EabSweepPoint> pts;
            for (double lam : listOr(lambdaList, {cfg.lambda}))
                for (double n1 : parseDoubleList(n1List))
                    for (double n2 : parseDoubleList(n2List))
                        if (n1 >= 4.0 * n2) pts.push_back(eabSweep(n1, n2, lam, draws, cfg.seed, cfg.thetaRes, mopt));
            rep = eabReport(pts);
            rep.meta["rng"] = Philox::kAlgorithmId;
            rep.meta["seed"] = cfg.seed;
            bool ok = true;
            for (const auto& p : pts) ok = ok && p.ratio <= 10.0;
            checks["eab-ratio"] = ok;
        } else if (sub == "extremize") {
            const auto plan = scenarioPlan(sc, cfg.lambda, boxL, N0, cfg.threads);
            const auto best = extremizeBest(plan, N0, cfg.seed, cfg.scenario, eopt);
            rep = extremizeReport(best);
            saveField((std::filesystem::path(cfg.outDir) / "extremize.field").string(), best.runs[best.best].final);
            rep.meta["field"] = "extremize.field";
        } else if (sub == "nls") {
            const auto plan = scenarioPlan(sc, cfg.lambda, boxL, N0, cfg.threads);
            auto run = makeNlsRun(plan, initialField(plan, norm), nlsSignFromString(cfg.sign), T, cfg.dt,
                                  kickModeFromString(cfg.kickMode));
            run.diagnosticStride = stride;
            run = splitStep(run);
            rep = nlsReport(run);
            checks["mass-drift"] = !run.aborted && run.maxMassDrift <= 1e-8 * std::abs(T);
        } else if (sub == "picard") {
            auto plan = makePlan(buildLattice(cfg.lambda, boxL, N0, geometryOf(sc)), symbolOf(sc), -1.0, 1.0);
            plan.threads = cfg.threads;
            PicardOptions po;
            po.delta = cfg.delta;
            if (maxIter > 0) po.maxIter = maxIter;
            const auto phi = initialField(plan, norm);
            std::optional<SmallnessCalibration> cal;
            if (calibrate) {
                cal = calibrateSmallness(plan, phi, nlsSignFromString(cfg.sign), 1e-3, 1e2, 10, po);
                cfg.delta = po.delta = cal->threshold;
            }
            const auto rec = picardIterate(plan, phi, nlsSignFromString(cfg.sign), po);
            rep = picardReport(rec, N0, l2Norm(phi));
            if (cal) {
                rep.meta["calibratedDelta"] = cal->threshold;
                rep.meta["calibrationBracketed"] = cal->bracketed;
            }
            bool contract = !rec.diverged;
            for (std::size_t i = 2; i < rec.factors.size(); ++i) contract = contract && rec.factors[i] <= 0.5;
            checks["contraction"] = contract;
            checks["below-delta"] = rec.belowDelta;
        } else if (sub == "gate") {
            const auto rec = gateKind == "single-mode"
                                 ? singleModeGate(sc, cfg.lambda, boxL, N0, cfg.gateTol)
                                 : ensembleGate(sc, cfg.lambda, boxL, N0, cfg.ensembleSize, cfg.seed,
                                                ensembleKindFromString(cfg.ensembleKind), cfg.threads, cfg.gateTol);
            rep.name = "gate";
            rep.table.header = {"name", "L", "atL", "at2L", "relChange", "tol", "pass"};
            rep.table.addRow({rec.name, csvNumber(rec.L), csvNumber(rec.atL), csvNumber(rec.at2L),
                              csvNumber(rec.relChange), csvNumber(rec.tol), rec.pass ? "1" : "0"});
            rep.meta["scenario"] = cfg.scenario;
            rep.meta["N"] = N0;
            checks["gate"] = rec.pass;
        }

        std::set<std::string> requested(cfg.accept.begin(), cfg.accept.end());
        for (const auto& id : requested) {
            auto it = checks.find(id);
            if (it == checks.end()) rep.failures.push_back(id + ":unavailable");
            else if (!it->second) rep.failures.push_back(id);
        }
        auto checked = nlohmann::ordered_json::object();
        for (const auto& [id, ok] : checks) checked[id] = ok;
        rep.meta["checks"] = checked;
        rep.meta["config"] = serializeConfig(cfg);
        for (const auto& path : writeReport(rep, cfg.outDir, cfg.format)) std::cout << path << "\n";
        for (const auto& f : rep.failures) std::cerr << "FAIL " << f << "\n";
        return rep.failures.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "wgbench: " << e.what() << "\n";
        return 2;
    }
}

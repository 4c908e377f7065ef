#include "wg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wg/config.hpp"
#include "wg/numeric.hpp"

namespace wg {

namespace {

constexpr double kBumpSpacing = 0.5;
constexpr double kBumpWidth = 0.5;

std::string num(double v) { return csvNumber(v); }

std::string octantString(const Octant& j) {
    std::string s;
    for (int c : j) s += c > 0 ? '+' : '-';
    return s;
}

void stampRng(Report& r, std::uint64_t seed) {
    r.meta["rng"] = Philox::kAlgorithmId;
    r.meta["seed"] = seed;
}

}  // namespace

std::string toString(EnsembleKind k) { return k == EnsembleKind::Iid ? "iid" : "continuum"; }

EnsembleKind ensembleKindFromString(const std::string& s) {
    if (s == "iid") return EnsembleKind::Iid;
    if (s == "continuum") return EnsembleKind::Continuum;
    throw std::invalid_argument("unknown ensemble kind: " + s);
}

SpectralField ensembleMember(EnsembleKind kind, const FrequencyLattice& lat, std::uint64_t seed, std::uint64_t member,
                             bool meanZeroX2) {
    auto f = SpectralField::zeros(lat);
    if (kind == EnsembleKind::Iid) {
        auto rng = Philox(seed, "ensemble-iid").substream(member);
        for (auto& c : f.coeffs) c = rng.complexNormal();
    } else {
        auto rng = Philox(seed, "ensemble-continuum").substream(member);
        const int mMax = std::max(0, int(std::floor((lat.N - 2.0 * kBumpWidth) / kBumpSpacing + 1e-9)));
        const int centres = 2 * mMax + 1;
        std::vector<cplx> g(std::size_t(centres) * std::size_t(lat.width2()));
        for (auto& z : g) z = rng.complexNormal();  // k2 major, centre minor
        const double reach = 10.0 * kBumpWidth;
        for (int k2 = -lat.n2; k2 <= lat.n2; ++k2) {
            const cplx* row = g.data() + std::size_t(k2 + lat.n2) * std::size_t(centres);
            for (int k1 = -lat.n1; k1 <= lat.n1; ++k1) {
                const double xi = lat.xi1(k1);
                cplx acc = 0.0;
                for (int m = -mMax; m <= mMax; ++m) {
                    const double d = xi - m * kBumpSpacing;
                    if (std::abs(d) > reach) continue;
                    acc += row[m + mMax] * std::exp(-d * d / (2.0 * kBumpWidth * kBumpWidth));
                }
                f.at(k1, k2) = acc;
            }
        }
    }
    if (meanZeroX2) f = project(f, Projection::meanZeroX2());
    return f.isZero() ? f : normalized(f);
}

EvolutionPlan scenarioPlan(Scenario s, double lambda, double L, double N, int threads) {
    if (L <= 0.0) L = 8.0 * std::max(lambda, 1.0);
    auto plan = makePlan(buildLattice(lambda, L, N, geometryOf(s)), symbolOf(s));
    plan.threads = threads;
    return plan;
}

EvolutionPlan probePlan(Scenario s, double lambda, double L, double N, int threads) {
    if (!(L > 0.0)) throw std::invalid_argument("probePlan: L must be positive");
    auto lat = buildLattice(lambda, 8.0 * std::max(lambda, 1.0), N, geometryOf(s));
    lat.L = L;
    lat.n1 = int(std::floor(N * L + 1e-9));
    auto plan = makePlan(lat, symbolOf(s));
    plan.threads = threads;
    return plan;
}

EnsembleStats ensembleRatios(const EvolutionPlan& plan, Scenario s, EnsembleKind kind, std::uint64_t seed, int size) {
    if (size < 1) throw std::invalid_argument("ensemble size must be positive");
    EnsembleStats st;
    for (int m = 0; m < size; ++m) {
        const auto f = ensembleMember(kind, plan.lattice, seed, std::uint64_t(m), meanZeroOf(s));
        const double r = f.isZero() ? 0.0 : strichartzRatio(plan, f);
        st.ratios.push_back(r);
        if (r > st.max) {
            st.max = r;
            st.argmax = std::size_t(m);
        }
    }
    return st;
}

RatioSweep runRatioSweep(const RatioSweepOptions& opt) {
    if (opt.N.empty()) throw std::invalid_argument("ratio sweep: empty N list");
    for (std::size_t i = 1; i < opt.N.size(); ++i)
        if (!(opt.N[i] > opt.N[i - 1])) throw std::invalid_argument("ratio sweep: N list must increase");
    RatioSweep sw;
    sw.scenario = opt.scenario;
    sw.lambda = opt.lambda;
    sw.L = opt.L > 0.0 ? opt.L : 8.0 * std::max(opt.lambda, 1.0);
    sw.seed = opt.seed;
    auto ext = opt.extremizer;
    ext.meanZeroX2 = meanZeroOf(opt.scenario);
    std::vector<double> Ns, R;
    for (double N : opt.N) {
        const auto plan = scenarioPlan(opt.scenario, opt.lambda, std::max(sw.L, opt.boxPerN * N), N, opt.threads);
        RatioSweepPoint p;
        p.N = N;
        p.ensembleMax = ensembleRatios(plan, opt.scenario, opt.ensemble, opt.seed, opt.ensembleSize).max;
        if (opt.extremize) p.extremized = extremizeBest(plan, N, opt.seed, toString(opt.scenario), ext).bestRatio;
        sw.points.push_back(p);
        Ns.push_back(N);
        R.push_back(opt.extremize ? p.extremized : p.ensembleMax);
    }
    if (Ns.size() >= 4) sw.fit = fitGrowth(Ns, R);
    return sw;
}

GateRecord doubleBoxGate(const std::string& name, double L, const std::function<double(double)>& quantity,
                         double tol) {
    GateRecord g;
    g.name = name;
    g.L = L;
    g.tol = tol;
    g.atL = quantity(L);
    g.at2L = quantity(2.0 * L);
    g.relChange = std::abs(g.at2L - g.atL) / std::abs(g.atL);
    g.pass = g.relChange <= tol;
    return g;
}

GateRecord singleModeGate(Scenario s, double lambda, double L, double N, double tol) {
    if (geometryOf(s) != Geometry::RT) throw std::invalid_argument("box gate needs an RT scenario");
    return doubleBoxGate("single-mode", L, [&](double box) {
        const auto plan = scenarioPlan(s, lambda, box, N);
        const auto f = SpectralField::singleMode(plan.lattice, int(std::lround(box)), 0);
        return strichartzRatio(plan, f) * std::pow(box * lambda, 0.25);
    }, tol);
}

GateRecord ensembleGate(Scenario s, double lambda, double L, double N, int size, std::uint64_t seed, EnsembleKind kind,
                        int threads, double tol) {
    if (geometryOf(s) != Geometry::RT) throw std::invalid_argument("box gate needs an RT scenario");
    const double floorL = 8.0 * std::max(lambda, 1.0);
    return doubleBoxGate("ensemble-max", L, [&](double box) {
        const auto plan = box < floorL ? probePlan(s, lambda, box, N, threads) : scenarioPlan(s, lambda, box, N, threads);
        return ensembleRatios(plan, s, kind, seed, size).max;
    }, tol);
}

Report ratioSweepReport(const RatioSweep& sweep, const RatioSweepOptions& opt) {
    Report r;
    r.name = "ratio-sweep";
    r.table.header = {"N", "ensembleMax", "extremized", "fitExponent"};
    const bool fitted = sweep.points.size() >= 4;
    for (const auto& p : sweep.points)
        r.table.addRow({num(p.N), num(p.ensembleMax), opt.extremize ? num(p.extremized) : "",
                        fitted ? num(sweep.fit.powerExponent) : ""});
    r.meta["scenario"] = toString(sweep.scenario);
    r.meta["lambda"] = sweep.lambda;
    r.meta["L"] = sweep.L;
    r.meta["boxPerN"] = opt.boxPerN;
    r.meta["ensembleSize"] = opt.ensembleSize;
    r.meta["ensembleKind"] = toString(opt.ensemble);
    r.meta["extremized"] = opt.extremize;
    r.meta["fitted"] = fitted;
    if (fitted) {
        r.meta["powerExponent"] = sweep.fit.powerExponent;
        r.meta["logCoefficient"] = sweep.fit.logCoefficient;
        r.meta["powerResiduals"] = sweep.fit.powerResiduals;
        r.meta["logResiduals"] = sweep.fit.logResiduals;
    }
    stampRng(r, sweep.seed);
    return r;
}

Report measureReport(const std::string& setId, double C0, const std::vector<double>& Ns, double lambda, double theta,
                     const MeasureOptions& opt) {
    Report r;
    r.name = "measure";
    r.table.header = {"N", "euclid", "rz", "maxSlice", "impliedC"};
    bool converged = true;
    for (double N : Ns) {
        const auto set = catalogSet(setId + ":" + formatDouble(C0) + "," + formatDouble(N) + "," + formatDouble(theta));
        const auto rec = lemmaCheck(set, lambda, opt);
        converged = converged && rec.areaConverged;
        r.table.addRow({num(N), num(rec.area), num(rec.lhs), num(rec.maxSlice), num(rec.impliedC)});
    }
    r.meta["set"] = setId;
    r.meta["C0"] = C0;
    r.meta["theta"] = theta;
    r.meta["lambda"] = lambda;
    r.meta["areaConverged"] = converged;
    return r;
}

std::vector<LemmaCorpusRow> lemmaCorpusRows(std::uint64_t seed, int count, const std::vector<double>& lambdas,
                                            bool doubled, const MeasureOptions& opt) {
    const auto corpus = lemmaCorpus(seed, count);
    std::vector<LemmaCorpusRow> rows;
    for (double lambda : lambdas)
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            LemmaCorpusRow row;
            row.index = int(i);
            row.lambda = lambda;
            row.record = lemmaCheck(corpus[i], lambda, opt);
            if (doubled) row.impliedCDoubled = lemmaCheck(corpus[i].withBox(corpus[i].box.scaled(2.0)), lambda, opt).impliedC;
            rows.push_back(row);
        }
    return rows;
}

Report lemmaCorpusReport(const std::vector<LemmaCorpusRow>& rows, std::uint64_t seed) {
    Report r;
    r.name = "lemma-corpus";
    r.table.header = {"index", "lambda", "lhs", "area", "maxSlice", "impliedC", "impliedCDoubled", "monotonicityChanges"};
    double maxC = 0.0;
    for (const auto& row : rows) {
        const auto& rec = row.record;
        maxC = std::max(maxC, rec.impliedC);
        r.table.addRow({std::to_string(row.index), num(row.lambda), num(rec.lhs), num(rec.area), num(rec.maxSlice),
                        num(rec.impliedC), num(row.impliedCDoubled), std::to_string(rec.monotonicityChanges)});
    }
    r.meta["maxImpliedC"] = maxC;
    stampRng(r, seed);
    return r;
}

Report propCheckReport(const PropCheckResult& res) {
    Report r;
    r.name = "prop-check";
    r.table.header = {"v1", "v2", "octant", "rz", "maxSlice"};
    for (const auto& s : res.samples)
        r.table.addRow({num(s.v.x), num(s.v.y), res.kind == PropKind::A2refined ? octantString(s.octant) : "",
                        num(s.rz), num(s.maxSlice)});
    r.meta["kind"] = toString(res.kind);
    r.meta["lambda"] = res.lambda;
    r.meta["sup"] = res.sup;
    r.meta["argmax"] = {res.argmax.x, res.argmax.y};
    if (res.kind == PropKind::A2refined) r.meta["argOctant"] = octantString(res.argOctant);
    r.meta["maxSlice"] = res.maxSlice;
    r.meta["rejected"] = res.rejected;
    return r;
}

std::vector<BilinearSample> bilinearSweep(const std::vector<double>& N1s, const std::vector<double>& N2s,
                                          const std::vector<double>& lambdas, int ensembleSize, int refineSteps,
                                          std::uint64_t seed, int threads) {
    std::vector<BilinearSample> out;
    for (double lambda : lambdas)
        for (double N1 : N1s)
            for (double N2 : N2s) {
                if (N1 < 4.0 * N2) continue;
                auto cfg = makeBilinearConfig(N1, N2, lambda);
                cfg.ensembleSize = ensembleSize;
                cfg.refineSteps = refineSteps;
                cfg.seed = seed;
                cfg.plan.threads = threads;
                out.push_back(bilinearEnsemble(cfg));
            }
    return out;
}

Report bilinearSweepReport(const std::vector<BilinearSample>& samples, const BilinearFit* fit) {
    Report r;
    r.name = "bilinear-sweep";
    r.table.header = {"N1", "N2", "lambda", "ensembleMax", "refined", "bound", "ratio"};
    for (const auto& s : samples)
        r.table.addRow({num(s.N1), num(s.N2), num(s.lambda), num(s.ensembleMax), num(s.refined), num(s.bound),
                        num(std::max(s.ensembleMax, s.refined) / s.bound)});
    if (fit) {
        r.meta["exponentRatio"] = fit->exponentRatio;
        r.meta["exponentLambda"] = fit->exponentLambda;
        r.meta["A"] = fit->A;
        r.meta["B"] = fit->B;
        r.meta["maxRelResidual"] = fit->maxRelResidual;
        r.meta["regimeSlopeRatio"] = fit->regimeSlopeRatio;
        r.meta["regimeSlopeLambda"] = fit->regimeSlopeLambda;
        r.meta["regimePointsRatio"] = fit->regimePointsRatio;
        r.meta["regimePointsLambda"] = fit->regimePointsLambda;
    }
    return r;
}

Report eabReport(const std::vector<EabSweepPoint>& points) {
    Report r;
    r.name = "eab";
    r.table.header = {"N1", "N2", "lambda", "maxMeasure", "maxSlice", "bound", "ratio"};
    double worst = 0.0;
    for (const auto& p : points) {
        worst = std::max(worst, p.ratio);
        r.table.addRow({num(p.N1), num(p.N2), num(p.lambda), num(p.maxMeasure), num(p.maxSlice), num(p.bound),
                        num(p.ratio)});
    }
    r.meta["maxRatio"] = worst;
    return r;
}

Report extremizeReport(const ExtremizerBest& best) {
    Report r;
    r.name = "extremize";
    r.table.header = {"init", "iteration", "ratio", "accepted", "halvings"};
    auto runs = nlohmann::ordered_json::array();
    for (const auto& tr : best.runs) {
        r.table.addRow({tr.init, "0", num(tr.initialRatio), "1", "0"});
        for (std::size_t i = 0; i < tr.iterates.size(); ++i) {
            const auto& s = tr.iterates[i];
            r.table.addRow({tr.init, std::to_string(i + 1), num(s.ratio), s.accepted ? "1" : "0",
                            std::to_string(s.halvings)});
        }
        runs.push_back({{"init", tr.init},
                        {"stop", toString(tr.stop)},
                        {"initialRatio", tr.initialRatio},
                        {"finalRatio", tr.finalRatio}});
    }
    if (!best.runs.empty()) {
        const auto& b = best.runs[best.best];
        r.meta["N"] = b.N;
        r.meta["scenario"] = b.scenario;
        r.meta["bestInit"] = b.init;
        stampRng(r, b.seed);
    }
    r.meta["bestRatio"] = best.bestRatio;
    r.meta["runs"] = runs;
    return r;
}

Report nlsReport(const NlsRun& run) {
    Report r;
    r.name = "nls";
    r.table.header = {"t", "mass"};
    for (std::size_t i = 0; i < run.times.size(); ++i) r.table.addRow({num(run.times[i]), num(run.mass[i])});
    r.meta["sign"] = toString(run.sign);
    r.meta["kickMode"] = toString(run.mode);
    r.meta["scheme"] = run.scheme;
    r.meta["N"] = run.plan.lattice.N;
    r.meta["T"] = run.T;
    r.meta["dt"] = run.dt;
    r.meta["steps"] = run.steps;
    r.meta["l4Fourth"] = run.l4Fourth;
    r.meta["maxMassDrift"] = run.maxMassDrift;
    r.meta["aborted"] = run.aborted;
    if (run.aborted) r.meta["abortReason"] = run.abortReason;
    return r;
}

Report picardReport(const PicardRecord& rec, double N, double phiNorm) {
    Report r;
    r.name = "picard";
    r.table.header = {"iteration", "l4Norm", "difference", "factor"};
    for (std::size_t i = 0; i < rec.l4Norms.size(); ++i) {
        const std::string d = i < rec.differences.size() ? num(rec.differences[i]) : "";
        const std::string f = i >= 1 && i - 1 < rec.factors.size() ? num(rec.factors[i - 1]) : "";
        r.table.addRow({std::to_string(i), num(rec.l4Norms[i]), d, f});
    }
    r.meta["N"] = N;
    r.meta["phiNorm"] = phiNorm;
    r.meta["iterations"] = rec.iterations;
    r.meta["diverged"] = rec.diverged;
    r.meta["belowDelta"] = rec.belowDelta;
    r.meta["delta"] = rec.delta;
    return r;
}

}  // namespace wg

// Acceptance run: one PASS/FAIL line per criterion, indented diagnostics below it.
// Usage: acceptance [A1 A2 ...]   (no arguments runs all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wg/scenarios.hpp"

using namespace wg;

namespace {

constexpr double kBudgetSeconds = 600.0;  // wall-clock allowance for any single criterion

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds(t0);
}

// ---- A1 -------------------------------------------------------------------

Outcome a1() {
    Outcome out;
    Philox rng(2024, "acceptance-a1");
    const QuadWeight::Restriction kinds[] = {QuadWeight::Restriction::None, QuadWeight::Restriction::A1,
                                             QuadWeight::Restriction::A2plain, QuadWeight::Restriction::A2refined};
    int mismatches = 0, compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = trial % 2 ? 2.0 : 1.0;
        const auto lat = buildLattice(lambda, 8.0 * lambda, 1, Geometry::RT);
        auto f = SpectralField::zeros(lat);
        std::set<std::size_t> used;
        const int count = 1 + int(rng.below(30));
        while (int(used.size()) < count) used.insert(std::size_t(rng.below(lat.size())));
        for (auto i : used) f.coeffs[i] = std::ldexp(rng.uniform(), int(rng.below(7)) - 3);

        QuadWeight q;
        q.theta = 0.25 + rng.uniform();
        if (trial % 5 == 4) {
            q.constraint = QuadWeight::Constraint::SmoothBump;
        } else {
            q.restriction = kinds[trial % 5];
            q.octant = {rng.below(2) ? 1 : -1, rng.below(2) ? 1 : -1, rng.below(2) ? 1 : -1};
        }
        const double got = quadForm(f, q), want = oracle::quadFormBruteForce(f, q);
        ++compared;
        if (got != want) {
            ++mismatches;
            out.details.push_back(fmt("trial %d: quadForm %.17g oracle %.17g", trial, got, want));
        }
    }
    out.pass = mismatches == 0;
    out.summary = fmt("%d/%d fields bit-identical to the brute-force oracle", compared - mismatches, compared);
    return out;
}

// ---- A2 -------------------------------------------------------------------

Outcome a2() {
    Outcome out;
    const std::vector<double> Ns{8, 16, 32, 64};
    const double boxPerN = 2.0;

    bool gatesPass = true;
    for (auto s : {Scenario::RTHyperbolic, Scenario::RTMixed}) {
        const auto g = ensembleGate(s, 1.0, 16.0, 8.0, 4, 1);
        gatesPass = gatesPass && g.pass;
        out.details.push_back(fmt("gate %s N=8 L=16->32: %.6g -> %.6g, change %.2f%% (%s)", toString(s).c_str(),
                                  g.atL, g.at2L, 100.0 * g.relChange, g.pass ? "pass" : "fail"));
    }

    // cost of the extremizer sweep: three inits, at least six fixed-point evaluations each
    const auto calPlan = scenarioPlan(Scenario::RTHyperbolic, 1.0, 16.0, 8.0);
    const auto member = ensembleMember(EnsembleKind::Continuum, calPlan.lattice, 1, 0);
    const double tCal = timed([&] { (void)fixedPointImage(calPlan, 8.0, member); });
    const double costCal = extremizerIterationCost(calPlan);
    double estimate = 0.0;
    for (double N : Ns) {
        const auto plan = scenarioPlan(Scenario::RTHyperbolic, 1.0, std::max(8.0, boxPerN * N), N);
        const double one = tCal * extremizerIterationCost(plan) / costCal;
        estimate += 2.0 * 3.0 * 6.0 * one;  // two scenarios
        out.details.push_back(fmt("N=%g L=%g: one evaluation ~ %.3g s", N, plan.lattice.L, one));
    }
    out.details.push_back(fmt("extremizer sweep lower bound %.3g s (budget %.0f s)", estimate, kBudgetSeconds));
    if (estimate > kBudgetSeconds) {
        out.pass = false;
        out.summary = fmt("infeasible: sweep needs >= %.3g s, budget %.0f s; gates %s", estimate, kBudgetSeconds,
                          gatesPass ? "pass" : "fail");
        return out;
    }

    RatioSweepOptions o;
    o.N = Ns;
    o.L = 8.0;
    o.boxPerN = boxPerN;
    o.ensembleSize = 4;
    o.scenario = Scenario::RTHyperbolic;
    const auto hyp = runRatioSweep(o);
    o.scenario = Scenario::RTMixed;
    const auto mix = runRatioSweep(o);
    const double r8 = hyp.points.front().extremized, r64 = hyp.points.back().extremized;
    const double pHyp = hyp.fit.powerExponent, pMix = mix.fit.powerExponent;
    out.pass = gatesPass && r64 / r8 <= 1.5 && pHyp >= -0.05 && pHyp <= 0.08 && pMix >= 0.15;
    out.summary = fmt("R(64)/R(8) = %.4g, exponent hyperbolic %.4g, mixed %.4g", r64 / r8, pHyp, pMix);
    return out;
}

// ---- A3 -------------------------------------------------------------------

Outcome a3() {
    Outcome out;
    std::vector<double> logN, area;
    bool saddleExact = true;
    for (double N = 8; N <= 512; N *= 2) {
        const auto r = euclidMeasure(hyperbolicAnnulus(0.0, N));
        logN.push_back(std::log(N));
        area.push_back(r.value);
        const double slice = saddleMaxSlice(0.0, N, 1.0);
        saddleExact = saddleExact && slice == 2.0 * N;
        out.details.push_back(fmt("N=%g euclid %.10g (err %.2g) saddle slice %.17g", N, r.value, r.errorEstimate, slice));
    }
    const auto fit = fitLine(logN, area);
    out.pass = fit.maxRelResidual < 0.05 && saddleExact;
    out.summary = fmt("fit %.4g log N + %.4g, max relative residual %.3g; saddle slice = 2N %s", fit.slope,
                      fit.intercept, fit.maxRelResidual, saddleExact ? "exactly" : "NOT exact");
    return out;
}

// ---- A4 -------------------------------------------------------------------

Outcome a4() {
    Outcome out;
    const auto rows = lemmaCorpusRows(7, 50, {1.0, 2.0, 4.0});
    double maxC = 0.0, maxD = 0.0, worstSet = 0.0;
    for (const auto& r : rows) {
        maxC = std::max(maxC, r.record.impliedC);
        maxD = std::max(maxD, r.impliedCDoubled);
        if (r.record.impliedC > 0) worstSet = std::max(worstSet, std::abs(r.impliedCDoubled / r.record.impliedC - 1.0));
    }
    const double change = std::abs(maxD / maxC - 1.0);
    out.details.push_back(fmt("%zu rows; largest per-set change under doubling %.3g", rows.size(), worstSet));
    out.pass = maxC <= 10.0 && change <= 0.2;
    out.summary = fmt("max impliedC %.4g, doubled box %.4g, change %.3g", maxC, maxD, change);
    return out;
}

// ---- A5 -------------------------------------------------------------------

Outcome a5() {
    Outcome out;
    const auto vs = standardVSamples(1.0);
    const auto r1 = propCheck(PropKind::A1, vs, 1.0);
    const auto r2 = propCheck(PropKind::A2refined, vs, 1.0);
    const auto rp = propCheck(PropKind::A2plain, vs, 1.0);
    out.details.push_back(fmt("A1 argmax v = (%.6g, %.6g)", r1.argmax.x, r1.argmax.y));
    out.details.push_back(fmt("A2refined argmax v = (%.6g, %.6g), octant %+d%+d%+d", r2.argmax.x, r2.argmax.y,
                              r2.argOctant[0], r2.argOctant[1], r2.argOctant[2]));
    out.details.push_back(fmt("A2plain (reported only): sup %.4g, max slice %.4g", rp.sup, rp.maxSlice));
    out.pass = r1.sup <= 50.0 && r2.sup <= 50.0;
    out.summary = fmt("%zu samples: A1 sup %.4g, A2refined sup %.4g (bound 50)", vs.size(), r1.sup, r2.sup);
    return out;
}

// ---- A6 -------------------------------------------------------------------

Outcome a6() {
    Outcome out;
    const std::vector<double> N1s{16, 32, 64, 128, 256}, N2s{1, 2, 4, 8}, lambdas{1, 2, 4, 8, 16};
    double worst = 0.0, worstLoose = 0.0;
    EabSweepPoint arg, argLoose;
    for (double lambda : lambdas)
        for (double N1 : N1s)
            for (double N2 : N2s) {
                if (N1 < 4.0 * N2) continue;
                const auto p = eabSweep(N1, N2, lambda, 256, 11);
                if (p.ratio > worstLoose) worstLoose = p.ratio, argLoose = p;
                if (N1 >= 16.0 * N2 && p.ratio > worst) worst = p.ratio, arg = p;
            }
    const bool eabPass = worst <= 10.0;
    out.details.push_back(fmt("eab, N1 >= 16 N2: worst ratio %.4g at lambda=%g N1=%g N2=%g", worst, arg.lambda,
                              arg.N1, arg.N2));
    out.details.push_back(fmt("eab, N1 >= 4 N2 (diagnostic): worst ratio %.4g at lambda=%g N1=%g N2=%g", worstLoose,
                              argLoose.lambda, argLoose.N1, argLoose.N2));

    // scaling fit over the same grid: two members, four ascent steps, one evaluation per norm and per adjoint
    const auto cal = makeBilinearConfig(16, 1, 1);
    Philox rng(5, "acceptance-a6");
    auto a = SpectralField::zeros(cal.plan.lattice), b = a;
    for (auto& c : a.coeffs) c = rng.complexNormal();
    for (auto& c : b.coeffs) c = rng.complexNormal();
    const double tCal = timed([&] { (void)bilinearNormRaw(cal.plan, a, b); });
    const double costCal = extremizerIterationCost(cal.plan);
    double estimate = 0.0;
    for (double lambda : lambdas)
        for (double N1 : N1s)
            for (double N2 : N2s) {
                if (N1 < 4.0 * N2) continue;
                const auto cfg = makeBilinearConfig(N1, N2, lambda);
                estimate += 2.0 * (1.0 + 2.0 * 4.0) * tCal * extremizerIterationCost(cfg.plan) / costCal;
            }
    out.details.push_back(fmt("bilinear sweep lower bound %.3g s (budget %.0f s)", estimate, kBudgetSeconds));
    if (estimate > kBudgetSeconds) {
        out.pass = false;
        out.summary = fmt("infeasible fit: sweep needs >= %.3g s, budget %.0f s; eab worst %.4g (%s)", estimate,
                          kBudgetSeconds, worst, eabPass ? "within 10" : "above 10");
        return out;
    }
    const auto samples = bilinearSweep(N1s, N2s, lambdas, 2, 4, 1);
    std::vector<BilinearPoint> pts;
    for (const auto& s : samples) pts.push_back({s.N1, s.N2, s.lambda, s.refined});
    const auto fit = bilinearScalingFit(pts);
    const auto in = [](double p) { return p >= 0.4 && p <= 0.6; };
    out.pass = eabPass && in(fit.exponentRatio) && in(fit.exponentLambda);
    out.summary = fmt("exponents N2/N1 %.4g, 1/lambda %.4g; eab worst %.4g", fit.exponentRatio, fit.exponentLambda, worst);
    return out;
}

// ---- A7 -------------------------------------------------------------------

cplx oneModeOracle(cplx c0, double H, double s, double cw, double t) {
    const double rate = 2.0 * std::numbers::pi * H + s * std::norm(c0) * cw * cw;
    return c0 * std::exp(cplx(0.0, -rate * t));
}

Outcome a7() {
    Outcome out;
    const double N = 16.0, dt = 1.0 / (8.0 * N * N);
    const auto plan = scenarioPlan(Scenario::RTHyperbolic, 1.0, 8.0, N);
    const auto phi = ensembleMember(EnsembleKind::Iid, plan.lattice, 3, 0).scaled(0.1);

    const auto run1 = splitStep(makeNlsRun(plan, phi, NlsSign::Defocusing, 1.0, dt, KickMode::Project));
    const auto run2 = splitStep(makeNlsRun(plan, phi, NlsSign::Defocusing, 1.0, dt / 2, KickMode::Project));
    const auto full = splitStep(makeNlsRun(plan, phi, NlsSign::Defocusing, 1.0, dt, KickMode::FullGrid));
    const double d1 = run1.maxMassDrift, d2 = run2.maxMassDrift;
    const double halving = d2 > 0 ? d1 / d2 : INFINITY;
    out.details.push_back(fmt("project drift %.3g at dt, %.3g at dt/2, ratio %.3g (order 2 needs >= 4)", d1, d2, halving));
    out.details.push_back(fmt("full-grid drift %.3g", full.maxMassDrift));

    const auto& lat = plan.lattice;
    double oneMode = 0.0;
    for (auto mode : {KickMode::Project, KickMode::FullGrid})
        for (auto sign : {NlsSign::Focusing, NlsSign::Defocusing}) {
            const cplx c0(1.5, -0.7);
            const auto run = splitStep(makeNlsRun(plan, SpectralField::singleMode(lat, 40, -3, c0), sign, 1.0, dt, mode));
            const double H = plan.symbol.eval(lat.xi1(40), lat.xi2(-3));
            oneMode = std::max(oneMode, std::abs(run.final.at(40, -3) - oneModeOracle(c0, H, signValue(sign), lat.cellWeight(), 1.0)));
        }
    out.details.push_back(fmt("one-mode error %.3g", oneMode));
    out.pass = d1 <= 1e-8 && halving >= 4.0 && oneMode <= 1e-8;
    out.summary = fmt("drift %.3g (<= 1e-8 %s), halving ratio %.3g (>= 4 %s), one-mode %.3g (<= 1e-8 %s)", d1,
                      d1 <= 1e-8 ? "ok" : "no", halving, halving >= 4.0 ? "ok" : "no", oneMode,
                      oneMode <= 1e-8 ? "ok" : "no");
    return out;
}

// ---- A8 -------------------------------------------------------------------

Outcome a8() {
    Outcome out;
    const double N = 16.0;
    const auto lat = buildLattice(1.0, 8.0, N, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic, -1.0, 1.0);
    const auto phi = ensembleMember(EnsembleKind::Iid, lat, 3, 0).scaled(0.1);
    const auto rec = picardIterate(plan, phi, NlsSign::Defocusing);
    std::string factors;
    double worst = 0.0;
    int checked = 0;
    for (std::size_t i = 0; i < rec.factors.size(); ++i) {
        factors += fmt(" %.3g", rec.factors[i]);
        if (i >= 2) worst = std::max(worst, rec.factors[i]), ++checked;
    }
    out.details.push_back("factors:" + factors);

    const auto unit = makePlan(lat, SymbolKind::Hyperbolic);
    const auto fwd = splitStep(makeNlsRun(unit, phi, NlsSign::Defocusing, 1.0));
    const auto back = splitStep(makeNlsRun(unit, phi, NlsSign::Defocusing, -1.0));
    const double split = std::pow(fwd.l4Fourth + back.l4Fourth, 0.25);
    const double picard = rec.l4Norms.back();
    const double rel = std::abs(picard - split) / split;
    out.details.push_back(fmt("L4 over [-1,1]: picard %.10g split-step %.10g", picard, split));
    out.pass = !rec.diverged && checked > 0 && worst <= 0.5 && rel <= 1e-3;
    out.summary = fmt("%d iterations, max factor from iterate 3 on %.3g (%d checked), relative gap %.3g",
                      rec.iterations, worst, checked, rel);
    return out;
}

// ---- A9 -------------------------------------------------------------------

Outcome a9() {
    Outcome out;
    out.pass = true;
    std::string parts;
    for (auto kind : {ChangeOfVarsRegion::Kind::Est11, ChangeOfVarsRegion::Kind::Est21}) {
        const char* name = kind == ChangeOfVarsRegion::Kind::Est11 ? "Est11" : "Est21";
        std::vector<double> cds{1, 10, 100, 1000};
        std::vector<AreaResult> m;
        for (double cd : cds) {
            ChangeOfVarsRegion r;
            r.kind = kind;
            r.c = cd;
            m.push_back(euclidMeasure(r.build()));
        }
        // K from the three smaller |cd|, tested at the largest with the quadrature error as slack
        double K = 0.0;
        for (std::size_t i = 0; i + 1 < cds.size(); ++i) K = std::max(K, m[i].value * cds[i]);
        const double last = m.back().value, slack = m.back().errorEstimate;
        const bool ok = last <= K / cds.back() + slack;
        out.pass = out.pass && ok;
        for (std::size_t i = 0; i < cds.size(); ++i)
            out.details.push_back(fmt("%s |cd|=%g measure %.10g (err %.2g) measure*|cd| %.10g", name, cds[i], m[i].value,
                                      m[i].errorEstimate, m[i].value * cds[i]));
        parts += fmt("%s K=%.6g %s; ", name, K, ok ? "holds" : "violated");
    }
    out.summary = parts.substr(0, parts.size() - 2);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
        {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
    std::set<std::string> only(argv + 1, argv + argc);
    int failed = 0;
    for (const auto& [id, run] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        std::printf("%s %s: %s [%.1f s]\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.summary.c_str(), seconds(t0));
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}

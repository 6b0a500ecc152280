#include "geoindex/anosov.hpp"

#include <algorithm>

#include "geoindex/io.hpp"

namespace geoindex {

namespace {

bool even(std::int64_t v) { return v % 2 == 0; }

Stage make_stage(std::string name, std::string verdict, Witness witness = Witness::object()) {
    return Stage{std::move(name), std::move(verdict), std::move(witness)};
}

Witness stringify(const Rational& r) { return to_string(r); }

std::vector<IndexGerm> pick(const std::vector<IndexGerm>& curves, bool even_index) {
    std::vector<IndexGerm> out;
    for (const auto& c : curves)
        if (even(c.initial_index) == even_index) out.push_back(c);
    return out;
}

std::vector<std::int64_t> top_indices(const std::vector<IndexGerm>& curves, const JumpCertificate& cert,
                                      const PrecisionBudget& budget) {
    std::vector<std::int64_t> tops;
    for (std::size_t k = 0; k < curves.size(); ++k)
        tops.push_back(IndexEvaluator(curves[k], budget).index(2 * cert.m[k]));
    return tops;
}

Witness report_summary(const VerificationReport& report) {
    Witness w = Witness::object();
    w["checks"] = report.checks.size();
    if (const Check* f = report.first_failure()) {
        w["first_failure"] = {{"clause", f->clause}, {"curve", f->curve}, {"witness", f->witness}};
    }
    return w;
}

// A certificate found by the search, together with everything the later
// stages need, or the reason it was passed over.
struct Accepted {
    JumpProblem problem;
    JumpCertificate cert;
    VerificationReport bounds;
    std::optional<ScaledCertificate> scaled;
    VerificationReport scaled_bounds;
    Witness skipped = Witness::array();
};

// Searches upward from n_min until a certificate also clears the jump bounds
// (and, when p_hat > 0, the scaled verification and scaled jump bounds).
Accepted find_certificate(const std::vector<IndexGerm>& curves, const SearchBudget& sb, std::int64_t m_bar,
                          std::int64_t p_hat, const PrecisionBudget& budget) {
    Rational divisor = p_hat > 0 ? Rational(p_hat) : Rational(1);
    Accepted acc{build_problem(curves, sb.delta / divisor, sb.epsilon / divisor, sb.m0, m_bar, budget), {}, {}, {}, {},
                 Witness::array()};
    std::int64_t start = std::max<std::int64_t>(sb.n_min, 2);
    SearchOptions options;
    options.workers = sb.workers;
    for (;;) {
        acc.cert = search(acc.problem, start, sb.n_max, options);
        start = acc.cert.N + 1;
        auto skip = [&](const std::string& why) {
            if (acc.skipped.size() < 16) acc.skipped.push_back({{"N", acc.cert.N}, {"reason", why}});
        };
        acc.bounds = verify_jump_bounds(curves, acc.cert, budget);
        if (!acc.bounds.passed()) {
            skip("jump bounds: " + acc.bounds.first_failure()->witness);
            continue;
        }
        if (p_hat <= 0) return acc;
        try {
            acc.scaled = scale(acc.problem, acc.cert, p_hat);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ScaleMismatch && e.code() != ErrorCode::PrecisionInsufficient) throw;
            skip(std::string("scaling: ") + e.what());
            continue;
        }
        if (!acc.scaled->ledger.passed()) {
            skip("scaled ledger: " + acc.scaled->ledger.first_failure()->clause);
            continue;
        }
        acc.scaled_bounds = verify_jump_bounds(curves, acc.scaled->as_certificate(), budget);
        if (!acc.scaled_bounds.passed()) {
            skip("scaled jump bounds: " + acc.scaled_bounds.first_failure()->witness);
            continue;
        }
        return acc;
    }
}

// Stages that follow the search on the (1, even, even) pattern.
std::vector<Stage> main_stages(const std::vector<IndexGerm>& curves, const Accepted& acc,
                               const PrecisionBudget& budget) {
    std::vector<Stage> stages;
    const JumpCertificate& cert = acc.cert;
    stages.push_back(make_stage("jump-bounds", "PASS", report_summary(acc.bounds)));

    WindowTally tally = window_tally(curves, cert, acc.bounds, budget);
    Stage top = forced_top_indices(curves, cert, tally, budget);
    stages.push_back(top);
    if (top.verdict != "PASS") return stages;

    SandwichResult base = sandwich(curves, cert, tally, budget);
    stages.push_back(base.stage);
    if (base.stage.verdict != "PASS") return stages;

    const ScaledCertificate& scaled = *acc.scaled;
    JumpCertificate hat = scaled.as_certificate();
    Witness sw = Witness::object();
    sw["p_hat"] = scaled.p_hat;
    sw["certificate"] = certificate_to_json(hat);
    sw["ledger"] = report_summary(scaled.ledger);
    stages.push_back(make_stage("scaled-jump", "PASS", sw));
    stages.push_back(make_stage("scaled-jump-bounds", "PASS", report_summary(acc.scaled_bounds)));

    WindowTally tally_hat = window_tally(curves, hat, acc.scaled_bounds, budget);
    Stage top_hat = forced_top_indices(curves, hat, tally_hat, budget);
    top_hat.name = "scaled-top-index";
    stages.push_back(top_hat);
    if (top_hat.verdict != "PASS") return stages;

    SandwichResult scaled_window = sandwich(curves, hat, tally_hat, budget);
    Stage sws = scaled_window.stage;
    sws.name = "scaled-sandwich";
    // The window the Morse inequalities impose on the scaled sum; whether the
    // scaled sum fits is decided by the next stage.
    sws.verdict = "COMPUTED";
    stages.push_back(sws);

    Mod4Verdict clash = mod4_clash(cert.N, base.S, scaled_window.S);
    bool outside = scaled_window.S < scaled_window.lower || scaled_window.S > scaled_window.upper;
    Witness mw = Witness::object();
    mw["N"] = cert.N;
    mw["S"] = stringify(base.S);
    mw["S_hat"] = stringify(scaled_window.S);
    mw["S_hat_equals_4S"] = clash.scaling_consistent;
    mw["forced_window"] = {scaled_window.lower, scaled_window.upper};
    mw["literal_window"] = {clash.window_lower, clash.window_upper};
    if (scaled_window.lower != clash.window_lower || scaled_window.upper != clash.window_upper)
        mw["window_divergence"] = "forced window differs from [8N-2, 8N-1]; the forced window decides";
    mw["explanation"] = clash.explanation;
    stages.push_back(make_stage("mod4", outside ? "CONTRADICTION" : "PASS", mw));
    return stages;
}

Stage two_odd_stage(const GeodesicSystem& system, const IndexGerm& even_curve, const Accepted& acc,
                    const PrecisionBudget& budget) {
    std::vector<IndexGerm> single{even_curve};
    WindowTally tally = window_tally(single, acc.cert, acc.bounds, budget);
    std::int64_t two_n = 2 * acc.cert.N;
    Witness w = Witness::object();
    w["pattern"] = "two odd, one even";
    w["certificate"] = certificate_to_json(acc.cert);
    w["even_curve"] = even_curve.name;
    w["top_index"] = IndexEvaluator(even_curve, budget).index(2 * acc.cert.m[0]);
    Witness odd = Witness::array();
    for (const auto& c : system.curves)
        if (!even(c.initial_index)) odd.push_back(c.name);
    w["odd_curves_contribute_only_in_odd_degrees"] = odd;
    w["M_2N"] = tally.M_2N;
    w["b_2N"] = betti(two_n);
    w["jump_bounds"] = report_summary(acc.bounds);
    if (!acc.skipped.empty()) w["skipped"] = acc.skipped;
    return make_stage("parity-screen", tally.M_2N < betti(two_n) ? "CONTRADICTION" : "PASS", w);
}

std::string final_of(const std::vector<Stage>& stages) {
    for (const auto& s : stages) {
        if (s.verdict == "CONTRADICTION") return "CONTRADICTION(" + s.name + ")";
        if (s.verdict == "INCONCLUSIVE") return "INCONCLUSIVE(" + s.witness.value("reason", s.name) + ")";
    }
    return "CONSISTENT";
}

int odd_count(const GeodesicSystem& system) {
    int odd = 0;
    for (const auto& c : system.curves) odd += even(c.initial_index) ? 0 : 1;
    return odd;
}

Witness parity_witness(const GeodesicSystem& system) {
    Witness w = Witness::object();
    Witness idx = Witness::object();
    for (const auto& c : system.curves) idx[c.name] = c.initial_index;
    w["initial_indices"] = idx;
    return w;
}

}  // namespace

const Stage* ImpossibilityReport::stage(const std::string& name) const {
    for (const auto& s : stages)
        if (s.name == name) return &s;
    return nullptr;
}

Admissibility check_admissibility(const GeodesicSystem& system) {
    Admissibility a;
    PrecisionBudget budget = system.budget();
    if (system.dim != 3) {
        a.dimension_ok = false;
        a.problems.push_back("only S^3 (dim 3) is supported");
    }
    for (const auto& c : system.curves) {
        if (total_dimension(c.blocks) != 4) {
            a.dimension_ok = false;
            a.problems.push_back("curve '" + c.name + "' does not have 4-dimensional blocks");
            continue;
        }
        if (c.initial_index < 1) {
            a.positive_indices = false;
            a.problems.push_back("curve '" + c.name + "' has index " + std::to_string(c.initial_index) + " < 1");
        }
        if (!is_bumpy(c)) {
            a.bumpy = false;
            a.problems.push_back("curve '" + c.name + "' is not bumpy");
        }
        int s = 0;
        try {
            s = sign(mean_index(c), budget);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionInsufficient) throw;
        }
        if (s <= 0) {
            a.positive_means = false;
            a.problems.push_back("curve '" + c.name + "' does not have a certified positive mean index");
            continue;
        }
        BottPositivity bott = bott_positivity(c, budget);
        if (!bott.holds) {
            a.bott_positive = false;
            a.problems.push_back("curve '" + c.name + "' drops below its initial index at iterate " +
                                 std::to_string(bott.first_violation));
        }
    }
    return a;
}

VerificationReport verify_jump_bounds(const std::vector<IndexGerm>& curves, const JumpCertificate& cert,
                                      const PrecisionBudget& budget) {
    if (curves.size() != cert.m.size())
        throw Error(ErrorCode::InvalidArgument, "certificate does not match the curves");
    VerificationReport report;
    const std::int64_t N = cert.N;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const IndexGerm& c = curves[k];
        const std::int64_t mk = cert.m[k];
        const std::int64_t i1 = c.initial_index;
        IndexEvaluator eval(c, budget);

        Check below{kBelowWindowClause, c.name, true, ""};
        std::int64_t worst = std::numeric_limits<std::int64_t>::min();
        for (std::int64_t j = 1; j < 2 * mk; ++j) {
            std::int64_t i = eval.index(j);
            worst = std::max(worst, i);
            if (i > 2 * N - i1 && below.pass) {
                below.pass = false;
                below.witness = "i(c^" + std::to_string(j) + ") = " + std::to_string(i) + " > 2N - i(c) = " +
                                std::to_string(2 * N - i1);
            }
        }
        if (below.pass)
            below.witness = "max over iterates < 2m_k is " +
                            (2 * mk > 1 ? std::to_string(worst) : std::string("vacuous")) + " <= " +
                            std::to_string(2 * N - i1);
        report.add(below);

        Check above{kAboveWindowClause, c.name, true, ""};
        CertifiedReal mean = mean_index(c);
        if (sign(mean, budget) <= 0) {
            above.pass = false;
            above.witness = "mean index " + mean.to_string() + " is not positive";
        } else {
            auto [lower_slack, upper_slack] = deviation_bounds(c);
            (void)upper_slack;
            // (2m_k + m) î - lower_slack >= 2N + i(c) for every m >= horizon
            CertifiedReal need{Rational(2 * N + i1 + lower_slack)};
            Integer h = ceil_E(need / mean, budget) - 2 * mk;
            std::int64_t horizon = std::max<std::int64_t>(1, to_int64(h));
            for (std::int64_t m = 1; m < horizon; ++m) {
                std::int64_t i = eval.index(2 * mk + m);
                if (i < 2 * N + i1) {
                    above.pass = false;
                    above.witness = "i(c^{2m_k+" + std::to_string(m) + "}) = " + std::to_string(i) +
                                    " < 2N + i(c) = " + std::to_string(2 * N + i1);
                    break;
                }
            }
            if (above.pass)
                above.witness = "checked directly for m < " + std::to_string(horizon) +
                                ", linear growth covers the rest";
        }
        report.add(above);

        int C = big_C(c.blocks);
        int delta = cert.Delta[k];
        report.add({"delta-capacity", c.name, 0 <= delta && delta <= C && C <= 2,
                    "Delta = " + std::to_string(delta) + ", C = " + std::to_string(C)});
    }
    return report;
}

Stage screen_parities(const GeodesicSystem& system, const SearchBudget& sb) {
    Witness w = parity_witness(system);
    if (system.curves.size() != 3) {
        w["reason"] = "outside-assumption";
        w["detail"] = "the argument covers exactly three prime closed geodesics; got " +
                      std::to_string(system.curves.size());
        return make_stage("parity-screen", "INCONCLUSIVE", w);
    }
    int odd = odd_count(system);
    if (odd == 3) {
        // Odd-index curves only contribute in odd degrees.
        w["pattern"] = "three odd";
        w["M_2"] = 0;
        w["b_2"] = betti(2);
        return make_stage("parity-screen", "CONTRADICTION", w);
    }
    if (odd == 0) {
        w["reason"] = "outside-assumption";
        w["detail"] = "no odd-index curve";
        return make_stage("parity-screen", "INCONCLUSIVE", w);
    }
    if (odd == 1) {
        for (const auto& c : system.curves)
            if (!even(c.initial_index) && c.initial_index != 1) {
                w["reason"] = "outside-assumption";
                w["detail"] = "the odd-index curve '" + c.name + "' has index " + std::to_string(c.initial_index) +
                              ", not 1";
                return make_stage("parity-screen", "INCONCLUSIVE", w);
            }
        w["pattern"] = "one (index 1), two even";
        return make_stage("parity-screen", "PASS", w);
    }
    PrecisionBudget budget = system.budget();
    IndexGerm even_curve = pick(system.curves, true).front();
    std::int64_t m_bar = sb.mbar_override.value_or(mbar(system.curves, budget));
    Accepted acc = find_certificate({even_curve}, sb, m_bar, 0, budget);
    return two_odd_stage(system, even_curve, acc, budget);
}

Stage forced_top_indices(const std::vector<IndexGerm>& curves, const JumpCertificate& cert, const WindowTally& tally,
                         const PrecisionBudget& budget) {
    std::int64_t two_n = 2 * cert.N;
    std::vector<std::int64_t> tops = top_indices(curves, cert, budget);
    Witness w = Witness::object();
    w["N"] = cert.N;
    Witness t = Witness::object();
    bool all_forced = true;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        t[curves[k].name] = tops[k];
        if (even(curves[k].initial_index) && tops[k] != two_n) all_forced = false;
    }
    w["top_indices"] = t;
    w["M_2N"] = tally.M_2N;
    w["b_2N"] = betti(two_n);
    bool holds = tally.M_2N >= betti(two_n);
    if (holds != all_forced)
        throw Error(ErrorCode::IdentityViolation, "M_2N = " + std::to_string(tally.M_2N) +
                                                      " disagrees with the forced top indices");
    return make_stage("top-index", holds ? "PASS" : "CONTRADICTION", w);
}

SandwichResult sandwich(const std::vector<IndexGerm>& curves, const JumpCertificate& cert, const WindowTally& tally,
                        const PrecisionBudget& budget) {
    const std::int64_t N = cert.N;
    SandwichResult r;
    std::vector<std::int64_t> initial;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        IndexEvaluator eval(curves[k], budget);
        Rational gamma = gamma_invariant(eval.index(1), eval.index(2));
        Rational block = Rational(2 * cert.m[k]) * gamma;
        if (Rational(tally.euler_per_curve.at(k)) != block)
            throw Error(ErrorCode::IdentityViolation, "Euler block sum of '" + curves[k].name + "' is " +
                                                          std::to_string(tally.euler_per_curve[k]) + ", expected " +
                                                          to_string(block));
        r.S += block;
        initial.push_back(curves[k].initial_index);
    }
    std::vector<std::int64_t> tops = top_indices(curves, cert, budget);
    auto [e2n, o2n] = parity_counts(initial, tops, 2 * N);
    auto [e2n1, o2n1] = parity_counts(initial, tops, 2 * N - 1);
    if (tally.euler_total != tally.alternating_2N + e2n - o2n ||
        tally.euler_total != tally.alternating_2N_minus_1 + e2n1 - o2n1)
        throw Error(ErrorCode::IdentityViolation, "truncated alternating sums do not match the Euler block sums");

    std::int64_t b_even = betti_alternating(2 * N);
    std::int64_t b_odd = betti_alternating(2 * N - 1);
    r.lower = b_even + e2n - o2n;
    r.upper = b_odd + e2n1 - o2n1;
    bool inside = r.S >= r.lower && r.S <= r.upper;

    Witness w = Witness::object();
    w["N"] = N;
    w["S"] = stringify(r.S);
    w["counts"] = {{"e_2N", e2n}, {"o_2N", o2n}, {"e_2N-1", e2n1}, {"o_2N-1", o2n1}};
    w["alternating_M"] = {{"to_2N", tally.alternating_2N}, {"to_2N-1", tally.alternating_2N_minus_1}};
    w["alternating_b"] = {{"to_2N", b_even}, {"to_2N-1", b_odd}};
    w["forced_window"] = {r.lower, r.upper};
    w["literal_window"] = {2 * N - 2, 2 * N - 1};
    if (r.lower < 2 * N - 2 || r.upper > 2 * N - 1)
        w["window_divergence"] = "forced window is wider than [2N-2, 2N-1]";
    r.stage = make_stage("sandwich", inside ? "PASS" : "CONTRADICTION", w);
    return r;
}

Mod4Verdict mod4_clash(std::int64_t N, const Rational& S, const Rational& S_hat) {
    Mod4Verdict v;
    v.window_lower = 8 * N - 2;
    v.window_upper = 8 * N - 1;
    v.scaling_consistent = S_hat == 4 * S;
    v.half_integral = boost::multiprecision::denominator(Rational(2 * S)) == 1;
    bool inside = S_hat >= v.window_lower && S_hat <= v.window_upper;
    if (!v.scaling_consistent) {
        v.explanation = "S_hat != 4S; the scaling relation needed for the clash fails";
        return v;
    }
    if (!v.half_integral) {
        v.explanation = "2S is not an integer, which no choice of gamma invariants allows";
        return v;
    }
    v.contradiction = !inside;
    if (v.contradiction)
        v.explanation = "4S = " + to_string(S_hat) + " lies outside [" + std::to_string(v.window_lower) + ", " +
                        std::to_string(v.window_upper) + "]; 8N-2 = 2 and 8N-1 = 3 (mod 4) while 4S = " +
                        to_string(S_hat) + " is " + (boost::multiprecision::denominator(S) == 1 ? "0" : "2") +
                        " (mod 4)";
    else
        v.explanation = "4S = " + to_string(S_hat) + " = 8N-2 (S = 2N - 1/2) fits the window";
    return v;
}

ImpossibilityReport run_pipeline(const GeodesicSystem& system, const SearchBudget& sb) {
    if (sb.p_hat < 1) throw Error(ErrorCode::InvalidArgument, "p_hat must be positive");
    ImpossibilityReport report;
    report.system = system;
    report.budget = sb;
    PrecisionBudget budget = system.budget();

    Admissibility adm = check_admissibility(system);
    if (!adm.ok()) {
        std::string msg = "system is not admissible:";
        for (const auto& p : adm.problems) msg += " " + p + ";";
        throw Error(ErrorCode::Admissibility, msg);
    }
    report.stages.push_back(make_stage("admissibility", "PASS",
                                       {{"curves", system.curves.size()},
                                        {"bumpy", true},
                                        {"indices_positive", true},
                                        {"mean_indices_positive", true},
                                        {"bott_positive", true}}));

    Stage screen = screen_parities(system, sb);
    if (screen.verdict == "CONTRADICTION" && odd_count(system) == 2) {
        report.certificate = certificate_from_json(screen.witness["certificate"]);
    }
    report.stages.push_back(screen);
    if (screen.verdict != "PASS") {
        report.final_verdict = final_of(report.stages);
        return report;
    }

    report.m_bar = sb.mbar_override.value_or(mbar(system.curves, budget));
    Witness hw = Witness::object();
    hw["m_bar"] = report.m_bar;
    Witness per = Witness::object();
    for (const auto& c : system.curves) per[c.name] = mbar_single(c, budget);
    hw["per_curve"] = per;
    if (sb.mbar_override) hw["override"] = true;
    report.stages.push_back(make_stage("iteration-horizon", "PASS", hw));

    Accepted acc = find_certificate(system.curves, sb, report.m_bar, sb.p_hat, budget);
    report.certificate = acc.cert;
    report.scaled_certificate = acc.scaled->as_certificate();
    Witness jw = Witness::object();
    jw["certificate"] = certificate_to_json(acc.cert);
    jw["tolerances"] = {{"delta", to_string(acc.problem.delta)}, {"epsilon", to_string(acc.problem.epsilon)}};
    jw["diophantine"] = report_summary(verify_diophantine(acc.problem, acc.cert));
    jw["index_jump"] = report_summary(verify_index_jump(acc.problem, acc.cert));
    if (!acc.skipped.empty()) jw["skipped"] = acc.skipped;
    report.stages.push_back(make_stage("jump-search", "PASS", jw));

    for (auto& s : main_stages(system.curves, acc, budget)) report.stages.push_back(std::move(s));
    report.final_verdict = final_of(report.stages);
    return report;
}

VerificationReport reverify(const ImpossibilityReport& report) {
    VerificationReport out;
    const GeodesicSystem& system = report.system;
    PrecisionBudget budget = system.budget();
    const SearchBudget& sb = report.budget;

    auto compare_stage = [&](const Stage& fresh) {
        const Stage* old = report.stage(fresh.name);
        if (!old) {
            out.add({"stage-present", fresh.name, false, "stage missing from the report"});
            return;
        }
        bool same = old->verdict == fresh.verdict && old->witness == fresh.witness;
        out.add({"stage-reproduced", fresh.name, same,
                 same ? "verdict " + fresh.verdict : "recomputed " + fresh.verdict + " " + fresh.witness.dump()});
    };

    Admissibility adm = check_admissibility(system);
    out.add({"admissibility", "", adm.ok(), adm.ok() ? "admissible" : adm.problems.front()});
    if (!adm.ok()) return out;

    int odd = odd_count(system);
    if (system.curves.size() != 3 || odd != 2) {
        compare_stage(screen_parities(system, sb));
        if (system.curves.size() != 3 || odd != 1) {
            out.add({"final-verdict", "", final_of(report.stages) == report.final_verdict, report.final_verdict});
            return out;
        }
    }
    if (!report.certificate) {
        out.add({"certificate-present", "", false, "the report carries no certificate"});
        return out;
    }

    if (odd == 2) {
        IndexGerm even_curve = pick(system.curves, true).front();
        std::int64_t m_bar = sb.mbar_override.value_or(mbar(system.curves, budget));
        Accepted acc{build_problem({even_curve}, sb.delta, sb.epsilon, sb.m0, m_bar, budget),
                     *report.certificate, {}, {}, {}, Witness::array()};
        out.append(verify_diophantine(acc.problem, acc.cert));
        out.append(verify_index_jump(acc.problem, acc.cert));
        acc.bounds = verify_jump_bounds({even_curve}, acc.cert, budget);
        out.append(acc.bounds);
        if (acc.bounds.passed()) {
            Stage fresh = two_odd_stage(system, even_curve, acc, budget);
            // the skipped list documents the search, not the witness
            const Stage* old = report.stage("parity-screen");
            if (old && old->witness.contains("skipped")) fresh.witness["skipped"] = old->witness["skipped"];
            compare_stage(fresh);
        }
        out.add({"final-verdict", "", final_of(report.stages) == report.final_verdict, report.final_verdict});
        return out;
    }

    std::int64_t m_bar = sb.mbar_override.value_or(mbar(system.curves, budget));
    Rational p(sb.p_hat);
    Accepted acc{build_problem(system.curves, sb.delta / p, sb.epsilon / p, sb.m0, m_bar, budget),
                 *report.certificate, {}, {}, {}, Witness::array()};
    out.append(verify_diophantine(acc.problem, acc.cert));
    out.append(verify_index_jump(acc.problem, acc.cert));
    acc.bounds = verify_jump_bounds(system.curves, acc.cert, budget);
    out.append(acc.bounds);
    ScaledCertificate scaled;
    try {
        scaled = scale(acc.problem, acc.cert, sb.p_hat);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ScaleMismatch && e.code() != ErrorCode::Precondition) throw;
        out.add({"scaled-certificate", "", false, e.what()});
        return out;
    }
    out.append(scaled.ledger);
    bool same_scaled = report.scaled_certificate && *report.scaled_certificate == scaled.as_certificate();
    out.add({"scaled-certificate", "", same_scaled, "recomputed from the base certificate"});
    acc.scaled = scaled;
    acc.scaled_bounds = verify_jump_bounds(system.curves, scaled.as_certificate(), budget);
    out.append(acc.scaled_bounds);
    if (!out.passed()) return out;
    for (const auto& s : main_stages(system.curves, acc, budget)) compare_stage(s);
    out.add({"final-verdict", "", final_of(report.stages) == report.final_verdict, report.final_verdict});
    return out;
}

}  // namespace geoindex

#include "geoindex/cli.hpp"

#include <sstream>

#include <CLI11.hpp>

#include "geoindex/io.hpp"

namespace geoindex {

namespace {

struct Options {
    std::string system_path;
    std::vector<std::string> curves;
    std::int64_t m_min = 1;
    std::int64_t m_max = 12;
    std::string delta = "1/64";
    std::string epsilon;
    std::int64_t n_min = 1;
    std::int64_t n_max = 10'000'000;
    std::int64_t m0 = 1;
    std::int64_t p_hat = 4;
    std::optional<std::int64_t> mbar_override;
    int workers = 0;
    std::string output;
    std::string format = "table";
    std::string certificate;
    std::string reverify;
};

Rational tolerance(const std::string& text, const char* flag) {
    Rational r;
    try {
        r = parse_rational(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string(flag) + ": " + e.what());
    }
    if (r <= 0 || r >= Rational(1, 2)) throw Error(ErrorCode::Range, std::string(flag) + " must lie in (0, 1/2)");
    return r;
}

std::vector<IndexGerm> select(const GeodesicSystem& system, const std::vector<std::string>& names) {
    if (names.empty()) return system.curves;
    std::vector<IndexGerm> out;
    for (const auto& n : names) {
        auto it = std::find_if(system.curves.begin(), system.curves.end(), [&](const IndexGerm& g) { return g.name == n; });
        if (it == system.curves.end()) throw Error(ErrorCode::InvalidArgument, "no curve named '" + n + "'");
        out.push_back(*it);
    }
    return out;
}

std::string cell(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }
std::string cell(std::int64_t v, std::size_t w) { return cell(std::to_string(v), w); }

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    int index() {
        GeodesicSystem system = parse_system(o_.system_path);
        if (o_.m_min < 1 || o_.m_max < o_.m_min) throw Error(ErrorCode::Range, "need 1 <= m-min <= m-max");
        Json j = Json::array();
        std::ostringstream t;
        t << cell("curve", 10) << cell("m", 10) << cell("i", 10) << "nu\n";
        for (const auto& g : select(system, o_.curves)) {
            IndexEvaluator eval(g, system.budget());
            for (std::int64_t m = o_.m_min; m <= o_.m_max; ++m) {
                std::int64_t i = eval.index(m);
                int nu = eval.nullity(m);
                j.push_back({{"curve", g.name}, {"m", m}, {"index", i}, {"nullity", nu}});
                t << cell(g.name, 10) << cell(m, 10) << cell(i, 10) << nu << "\n";
            }
        }
        return emit(j, t.str());
    }

    int mean_index() {
        GeodesicSystem system = parse_system(o_.system_path);
        Json j = Json::array();
        std::ostringstream t;
        t << cell("curve", 10) << cell("mean", 28) << cell("beta", 8) << cell("S+", 6) << "C\n";
        for (const auto& g : select(system, o_.curves)) {
            SpectralSummary s = summarize(g);
            std::string mean = geoindex::mean_index(g).to_string();
            j.push_back({{"curve", g.name}, {"mean_index", mean}, {"beta", s.beta}, {"s_plus", s.s_plus}, {"C", s.c}});
            t << cell(g.name, 10) << cell(mean, 28) << cell(s.beta, 8) << cell(s.s_plus, 6) << s.c << "\n";
        }
        return emit(j, t.str());
    }

    int gamma() {
        GeodesicSystem system = parse_system(o_.system_path);
        Json j = Json::array();
        std::ostringstream t;
        t << cell("curve", 10) << cell("i(c)", 8) << cell("i(c^2)", 8) << "gamma\n";
        for (const auto& g : select(system, o_.curves)) {
            IndexEvaluator eval(g, system.budget());
            std::int64_t i1 = eval.index(1), i2 = eval.index(2);
            std::string gam = to_string(gamma_invariant(i1, i2));
            j.push_back({{"curve", g.name}, {"i1", i1}, {"i2", i2}, {"gamma", gam}});
            t << cell(g.name, 10) << cell(i1, 8) << cell(i2, 8) << gam << "\n";
        }
        return emit(j, t.str());
    }

    int mbar() {
        GeodesicSystem system = parse_system(o_.system_path);
        std::vector<IndexGerm> curves = select(system, o_.curves);
        Json per = Json::object();
        std::ostringstream t;
        for (const auto& g : curves) {
            std::int64_t v = mbar_single(g, system.budget());
            per[g.name] = v;
            t << cell(g.name, 10) << v << "\n";
        }
        std::int64_t total = geoindex::mbar(curves, system.budget());
        t << cell("system", 10) << total << "\n";
        return emit(Json{{"per_curve", per}, {"m_bar", total}}, t.str());
    }

    int jump_search() {
        GeodesicSystem system = parse_system(o_.system_path);
        JumpProblem problem = problem_for(system, select(system, o_.curves), tolerance(o_.delta, "--delta"),
                                          epsilon(), o_.m0);
        SearchOptions opts;
        opts.workers = o_.workers;
        SearchResult r = search_with_stats(problem, o_.n_min, o_.n_max, opts);
        VerificationReport v = verify_diophantine(problem, r.certificate);
        v.append(verify_index_jump(problem, r.certificate));
        Json cert = certificate_to_json(r.certificate);
        persist(cert);
        return emit(Json{{"certificate", cert}, {"verification", verification_to_json(v)}},
                     certificate_table(r.certificate) + verification_table(v));
    }

    int verify_jump() {
        GeodesicSystem system = parse_system(o_.system_path);
        JumpCertificate cert = load_certificate();
        JumpProblem problem = problem_for(system, select(system, cert.names), cert.delta, cert.epsilon, cert.M0);
        VerificationReport v = verify_diophantine(problem, cert);
        v.append(verify_index_jump(problem, cert));
        v.append(verify_jump_bounds(problem.germs, cert, system.budget()));
        Json j = verification_to_json(v);
        persist(j);
        int code = emit(j, verification_table(v));
        return v.passed() ? code : kExitError;
    }

    int scale_jump() {
        GeodesicSystem system = parse_system(o_.system_path);
        JumpCertificate cert = load_certificate();
        JumpProblem problem = problem_for(system, select(system, cert.names), cert.delta, cert.epsilon, cert.M0);
        ScaledCertificate s = scale(problem, cert, o_.p_hat);
        Json cert_json = certificate_to_json(s.as_certificate());
        persist(cert_json);
        int code = emit(Json{{"p_hat", s.p_hat}, {"certificate", cert_json}, {"ledger", verification_to_json(s.ledger)}},
                        certificate_table(s.as_certificate()) + verification_table(s.ledger));
        return s.ledger.passed() ? code : kExitError;
    }

    int morse() {
        GeodesicSystem system = parse_system(o_.system_path);
        JumpCertificate cert = load_certificate();
        std::vector<IndexGerm> curves = select(system, cert.names);
        VerificationReport bounds = verify_jump_bounds(curves, cert, system.budget());
        if (!bounds.passed())
            throw Error(ErrorCode::JumpBoundsViolation, "jump bounds fail: " + bounds.first_failure()->witness);
        MorseCounts counts = morse_numbers_up_to(curves, cert, bounds, 2 * cert.N, system.budget());
        MorseInequalities ineq = morse_inequalities(counts, 2 * cert.N);
        Json rows = Json::array();
        std::ostringstream t;
        t << cell("q", 8) << cell("M_q", 8) << "b_q\n";
        for (std::int64_t q = 0; q <= 2 * cert.N; ++q) {
            rows.push_back({{"q", q}, {"M", counts.at(q)}, {"b", betti(q)}});
            t << cell(q, 8) << cell(counts.at(q), 8) << betti(q) << "\n";
        }
        t << "alternating Morse inequalities " << (ineq.alternating_holds ? "hold" : "FAIL at q = " +
                                                    std::to_string(ineq.alternating_first_violation)) << "\n";
        Json j{{"N", cert.N}, {"rows", rows}, {"alternating_holds", ineq.alternating_holds},
               {"termwise_holds", ineq.termwise_holds}};
        if (!ineq.alternating_holds) j["alternating_first_violation"] = ineq.alternating_first_violation;
        persist(j);
        return emit(j, t.str());
    }

    int anosov() {
        if (!o_.reverify.empty()) {
            ImpossibilityReport r = report_from_json(parse_json_text(read_file(o_.reverify), "report"));
            VerificationReport v = geoindex::reverify(r);
            Json j = verification_to_json(v);
            j["final"] = r.final_verdict;
            int code = emit(j, verification_table(v) + "final: " + r.final_verdict + "\n");
            if (!v.passed()) return kExitError;
            return r.contradiction() ? kExitContradiction : code;
        }
        GeodesicSystem system = parse_system(o_.system_path);
        SearchBudget b;
        b.n_min = o_.n_min;
        b.n_max = o_.n_max;
        b.delta = tolerance(o_.delta, "--delta");
        b.epsilon = o_.epsilon.empty() ? b.delta : tolerance(o_.epsilon, "--epsilon");
        b.p_hat = o_.p_hat;
        b.workers = o_.workers;
        b.m0 = o_.m0;
        b.mbar_override = o_.mbar_override;
        ImpossibilityReport r = run_pipeline(system, b);
        Json j = report_to_json(r);
        persist(j);
        emit(j, report_table(r));
        return r.contradiction() ? kExitContradiction : kExitComputed;
    }

private:
    std::optional<Rational> epsilon() const {
        if (o_.epsilon.empty()) return std::nullopt;
        return tolerance(o_.epsilon, "--epsilon");
    }

    JumpProblem problem_for(const GeodesicSystem& system, const std::vector<IndexGerm>& curves, const Rational& delta,
                            std::optional<Rational> eps, std::int64_t m0) const {
        return build_problem(curves, delta, eps, m0, o_.mbar_override, system.budget());
    }

    JumpCertificate load_certificate() const {
        if (o_.certificate.empty()) throw Error(ErrorCode::InvalidArgument, "--certificate is required");
        return certificate_from_json(parse_json_text(read_file(o_.certificate), "certificate"));
    }

    void persist(const Json& j) const {
        if (!o_.output.empty()) write_file(o_.output, j.dump(2) + "\n");
    }

    int emit(const Json& j, const std::string& table) const {
        if (o_.format == "json")
            out_ << j.dump(2) << "\n";
        else
            out_ << table;
        return kExitComputed;
    }

    const Options& o_;
    std::ostream& out_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Index iteration, common index jumps and Morse bookkeeping for closed geodesics on S^3"};
    app.require_subcommand(1);
    Options o;

    auto system_opt = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--system", o.system_path, "system file (JSON)")->check(CLI::ExistingFile);
        if (required) opt->required();
    };
    auto format_opt = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    };
    auto curve_opt = [&](CLI::App* sub) {
        sub->add_option("--curve", o.curves, "restrict to these curves (repeatable)");
    };
    auto output_opt = [&](CLI::App* sub) { sub->add_option("--output", o.output, "write the JSON artifact here"); };
    auto mbar_opt = [&](CLI::App* sub) {
        sub->add_option("--mbar-override", o.mbar_override, "iteration horizon m_bar")->check(CLI::PositiveNumber);
    };
    auto search_opts = [&](CLI::App* sub) {
        sub->add_option("--delta", o.delta, "delta in (0, 1/2), as p/q");
        sub->add_option("--epsilon", o.epsilon, "epsilon in (0, 1/2), as p/q");
        sub->add_option("--n-min", o.n_min, "smallest N to try")->check(CLI::PositiveNumber);
        sub->add_option("--n-max", o.n_max, "largest N to try")->check(CLI::PositiveNumber);
        sub->add_option("--m0", o.m0, "N must be a multiple of m0")->check(CLI::PositiveNumber);
        sub->add_option("--workers", o.workers, "search threads (0 = hardware)")->check(CLI::NonNegativeNumber);
        mbar_opt(sub);
    };
    auto cert_opt = [&](CLI::App* sub) {
        sub->add_option("--certificate", o.certificate, "certificate file (JSON)")->required()->check(CLI::ExistingFile);
    };

    auto* index = app.add_subcommand("index", "table of i(c^m) and nullity over an m-range");
    system_opt(index);
    curve_opt(index);
    index->add_option("--m-min", o.m_min, "first iterate");
    index->add_option("--m-max", o.m_max, "last iterate");
    format_opt(index);

    auto* mean = app.add_subcommand("mean-index", "mean index and spectral summary");
    system_opt(mean);
    curve_opt(mean);
    format_opt(mean);

    auto* gamma = app.add_subcommand("gamma", "gamma invariant from i(c) and i(c^2)");
    system_opt(gamma);
    curve_opt(gamma);
    format_opt(gamma);

    auto* mbar = app.add_subcommand("mbar", "iteration horizon m_bar");
    system_opt(mbar);
    curve_opt(mbar);
    format_opt(mbar);

    auto* js = app.add_subcommand("jump-search", "search for a common index jump certificate");
    system_opt(js);
    curve_opt(js);
    search_opts(js);
    output_opt(js);
    format_opt(js);

    auto* vj = app.add_subcommand("verify-jump", "re-verify a certificate");
    system_opt(vj);
    cert_opt(vj);
    mbar_opt(vj);
    output_opt(vj);
    format_opt(vj);

    auto* sj = app.add_subcommand("scale-jump", "scale a certificate by p-hat");
    system_opt(sj);
    cert_opt(sj);
    mbar_opt(sj);
    sj->add_option("--p-hat", o.p_hat, "scale factor")->check(CLI::PositiveNumber);
    output_opt(sj);
    format_opt(sj);

    auto* mo = app.add_subcommand("morse", "Morse numbers against Betti numbers up to 2N");
    system_opt(mo);
    cert_opt(mo);
    output_opt(mo);
    format_opt(mo);

    auto* an = app.add_subcommand("anosov", "run the full impossibility pipeline");
    system_opt(an, false);
    search_opts(an);
    an->add_option("--p-hat", o.p_hat, "scale factor")->check(CLI::PositiveNumber);
    an->add_option("--reverify", o.reverify, "recheck a saved report instead of running")->check(CLI::ExistingFile);
    output_opt(an);
    format_opt(an);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitComputed : kExitError;
    }

    try {
        Runner run(o, out);
        if (*index) return run.index();
        if (*mean) return run.mean_index();
        if (*gamma) return run.gamma();
        if (*mbar) return run.mbar();
        if (*js) return run.jump_search();
        if (*vj) return run.verify_jump();
        if (*sj) return run.scale_jump();
        if (*mo) return run.morse();
        if (*an) {
            if (o.system_path.empty() == o.reverify.empty())
                throw Error(ErrorCode::InvalidArgument, "anosov needs exactly one of --system and --reverify");
            return run.anosov();
        }
    } catch (const Error& e) {
        err << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error[Internal]: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace geoindex

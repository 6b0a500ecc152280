#include "geoindex/jump.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace geoindex {

namespace {

CertifiedReal real(const Rational& r) { return CertifiedReal(r); }
CertifiedReal real(std::int64_t n) { return CertifiedReal(Rational(n)); }

std::string str(const Integer& n) { return n.str(); }

bool is_rational_angle(const CertifiedReal& x) { return x.is_exact() && !x.declared_irrational(); }

// Where x sits relative to the nearest integer K, given |x - K| < eps.
// side_certified is false only when the interval straddles K and cannot be
// refined further; x is then on an unknown side of K and chi is recorded as 0.
struct VertexFit {
    Integer nearest;
    int chi = 0;
    bool side_certified = true;
};

std::optional<VertexFit> fit_vertex(const CertifiedReal& x, const Rational& eps, const PrecisionBudget& budget) {
    CertifiedReal current = x;
    for (;;) {
        bool loose = current.declared_irrational() && !current.is_exact();
        auto lt = [loose](const Rational& a, const Rational& b) { return loose ? a <= b : a < b; };
        Integer k = floor_of(current.midpoint() + Rational(1, 2));
        Rational lo = current.lower() - Rational(k);
        Rational hi = current.upper() - Rational(k);
        if (lt(hi, eps) && lt(-eps, lo)) {
            if (lo > 0 || (lo == 0 && (current.is_exact() || loose))) return VertexFit{k, 0, true};
            if (hi < 0 || (hi == 0 && loose)) return VertexFit{k, 1, true};
            bool can_refine = current.refinable() && current.digits() < budget.max_digits;
            if (!can_refine) return VertexFit{k, 0, false};
        } else {
            Integer base = floor_of(current.lower());
            Rational f_lo = current.lower() - Rational(base);
            Rational f_hi = current.upper() - Rational(base);
            if (f_lo >= eps && f_hi <= 1 - eps) return std::nullopt;
            if (current.is_exact()) return std::nullopt;
        }
        if (current.is_exact() || !current.refinable() || current.digits() >= budget.max_digits)
            throw Error(ErrorCode::PrecisionInsufficient,
                        "cannot decide closeness of " + x.to_string() + " to an integer");
        current = current.refined(std::min(budget.max_digits, current.digits() + budget.refine_step));
    }
}

// 0 < {x} < delta.
bool frac_below(const CertifiedReal& x, const Rational& delta, const PrecisionBudget& budget) {
    CertifiedReal f = frac(x, budget);
    return sign(f, budget) > 0 && compare(f, real(delta), budget) < 0;
}

// min({x}, 1 - {x}) < delta.
bool near_integer(const CertifiedReal& x, const Rational& delta, const PrecisionBudget& budget) {
    CertifiedReal f = frac(x, budget);
    return compare(f, real(delta), budget) < 0 || compare(real(Rational(1)) - f, real(delta), budget) < 0;
}

bool is_integer(const CertifiedReal& x) {
    return x.is_exact() && boost::multiprecision::denominator(x.exact()) == 1;
}

void check_delta_hypothesis(const Rational& delta, int max_mu, const char* what) {
    if (delta <= 0 || delta >= Rational(1, 2) || delta * max_mu >= Rational(1, 2))
        throw Error(ErrorCode::Precondition, std::string(what) + " " + to_string(delta) +
                                                 " violates 0 < delta < 1/2, delta*max_mu < 1/2 (max_mu = " +
                                                 std::to_string(max_mu) + ")");
}

// Aggregates per-m results into one check per clause and curve.
class ClauseTally {
public:
    ClauseTally(std::string clause, std::string curve) : check_{std::move(clause), std::move(curve), true, ""} {}
    void fail(const std::string& witness) {
        if (check_.pass) {
            check_.pass = false;
            check_.witness = witness;
        }
    }
    Check done(const std::string& ok_witness) {
        if (check_.pass) check_.witness = ok_witness;
        return check_;
    }

private:
    Check check_;
};

}  // namespace

int JumpProblem::max_mu() const {
    std::size_t mu = 0;
    for (const auto& c : curves) mu = std::max(mu, c.alphas.size());
    return static_cast<int>(mu);
}

bool VerificationReport::passed() const { return first_failure() == nullptr; }

const Check* VerificationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

JumpProblem build_problem(const std::vector<IndexGerm>& germs, const Rational& delta, std::optional<Rational> epsilon,
                          std::int64_t M0, std::optional<std::int64_t> m_bar, const PrecisionBudget& budget) {
    if (germs.empty()) throw Error(ErrorCode::InvalidArgument, "jump problem needs at least one curve");
    if (M0 < 1) throw Error(ErrorCode::InvalidArgument, "M0 must be positive");
    JumpProblem p;
    p.germs = germs;
    p.delta = delta;
    p.M0 = M0;
    p.budget = budget;

    Integer M = 1;
    for (const auto& germ : germs) {
        SpectralSummary s = summarize(germ);
        JumpCurve curve;
        curve.name = germ.name;
        curve.beta = s.beta;
        curve.s_plus = s.s_plus;
        curve.c = s.c;
        for (const auto& t : s.terms)
            for (int k = 0; k < t.weight; ++k) curve.alphas.push_back(t.alpha);
        curve.mean = mean_index(germ);
        int sg = 0;
        try {
            sg = sign(curve.mean, budget);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionInsufficient) throw;
        }
        if (sg == 0)
            throw Error(ErrorCode::ZeroMeanIndex, "curve '" + germ.name + "' has zero (or unresolved) mean index");
        curve.rho = sg;
        for (const auto& block : germ.blocks)
            for (const auto& point : spectral_points(block))
                if (is_rational_angle(point.angle_over_pi))
                    M = boost::multiprecision::lcm(M, boost::multiprecision::denominator(point.angle_over_pi.exact()));
        p.curves.push_back(std::move(curve));
    }
    check_delta_hypothesis(delta, p.max_mu(), "delta");
    p.M = to_int64(M);

    CertifiedReal Mr = real(p.M);
    std::vector<CertifiedReal> abs_means;
    for (const auto& c : p.curves) abs_means.push_back(c.rho > 0 ? c.mean : -c.mean);
    for (const auto& a : abs_means) p.v.push_back(real(Rational(1)) / (Mr * a));
    for (std::size_t i = 0; i < p.curves.size(); ++i) {
        const JumpCurve& c = p.curves[i];
        // With beta = 0 and a single repeated angle the mean is count*alpha, so
        // alpha / mean = 1/count exactly; an interval quotient could never
        // settle which side of an integer N/count lies on.
        bool one_angle = c.beta == 0 && !c.alphas.empty() &&
                         std::all_of(c.alphas.begin(), c.alphas.end(),
                                     [&](const CertifiedReal& a) { return a.same_as(c.alphas.front()); });
        for (const auto& alpha : c.alphas)
            p.v.push_back(one_angle ? real(Rational(1, static_cast<long>(c.alphas.size()))) : alpha / abs_means[i]);
    }

    if (epsilon) {
        p.epsilon = *epsilon;
    } else {
        Integer widest = 1;
        for (const auto& a : abs_means) widest = std::max(widest, ceil_E(Mr * a, budget));
        p.epsilon = delta / (2 * Rational(widest));
    }
    if (p.epsilon <= 0 || p.epsilon >= Rational(1, 2))
        throw Error(ErrorCode::Precondition, "epsilon must lie in (0, 1/2), got " + to_string(p.epsilon));

    if (m_bar) {
        if (*m_bar < 1) throw Error(ErrorCode::InvalidArgument, "m_bar must be positive");
        p.m_bar = *m_bar;
    } else {
        std::vector<IndexGerm> growing;
        for (std::size_t i = 0; i < germs.size(); ++i)
            if (p.curves[i].rho > 0) growing.push_back(germs[i]);
        p.m_bar = growing.empty() ? 1 : mbar(growing, budget);
    }
    return p;
}

int count_delta(const JumpCurve& curve, std::int64_t m, const Rational& delta, const PrecisionBudget& budget) {
    int count = 0;
    CertifiedReal mr = real(m);
    for (const auto& alpha : curve.alphas)
        if (frac_below(mr * alpha, delta, budget)) ++count;
    return count;
}

std::optional<JumpCertificate> candidate_at(const JumpProblem& problem, std::int64_t N) {
    JumpCertificate cert;
    cert.N = N;
    cert.M = problem.M;
    cert.M0 = problem.M0;
    cert.delta = problem.delta;
    cert.epsilon = problem.epsilon;
    CertifiedReal Nr = real(N);
    std::vector<Integer> nearest;
    for (const auto& vj : problem.v) {
        auto fit = fit_vertex(Nr * vj, problem.epsilon, problem.budget);
        if (!fit) return std::nullopt;
        cert.chi.push_back(fit->chi);
        nearest.push_back(fit->nearest);
    }
    for (std::size_t i = 0; i < problem.q(); ++i) {
        Integer m = nearest[i] * problem.M;
        if (m < 1) return std::nullopt;
        const auto& curve = problem.curves[i];
        cert.names.push_back(curve.name);
        cert.m.push_back(to_int64(m));
        cert.Delta.push_back(count_delta(curve, cert.m.back(), problem.delta, problem.budget));
        cert.rho.push_back(curve.rho);
    }
    return cert;
}

namespace {

void require_shape(const JumpProblem& problem, const JumpCertificate& cert) {
    if (cert.m.size() != problem.q() || cert.Delta.size() != problem.q() || cert.rho.size() != problem.q() ||
        cert.chi.size() != problem.l())
        throw Error(ErrorCode::InvalidArgument, "certificate shape does not match the problem");
    if (!cert.names.empty())
        for (std::size_t i = 0; i < problem.q(); ++i)
            if (cert.names[i] != problem.curves[i].name)
                throw Error(ErrorCode::InvalidArgument,
                            "certificate curve '" + cert.names[i] + "' does not match '" + problem.curves[i].name + "'");
}

}  // namespace

VerificationReport verify_diophantine(const JumpProblem& problem, const JumpCertificate& cert) {
    require_shape(problem, cert);
    const auto& budget = problem.budget;
    VerificationReport report;
    {
        Check c{"delta-hypothesis", "", true, "delta*max_mu = " + to_string(cert.delta * problem.max_mu()) + " < 1/2"};
        if (cert.delta <= 0 || cert.delta >= Rational(1, 2) || cert.delta * problem.max_mu() >= Rational(1, 2)) {
            c.pass = false;
            c.witness = "delta = " + to_string(cert.delta) + ", max_mu = " + std::to_string(problem.max_mu());
        }
        report.add(c);
    }
    for (std::size_t i = 0; i < problem.q(); ++i) {
        const auto& curve = problem.curves[i];
        std::int64_t m = cert.m[i];
        CertifiedReal mr = real(m);

        Integer lhs = Integer(m) * curve.beta;
        for (const auto& alpha : curve.alphas) lhs += ceil_E(mr * alpha, budget);
        Integer rhs = Integer(cert.rho[i]) * cert.N + cert.Delta[i];
        report.add({"rounding-sum", curve.name, lhs == rhs,
                    "m*beta + sum E(m*alpha) = " + str(lhs) + ", rho*N + Delta = " + str(rhs)});

        ClauseTally closeness("fraction-closeness", curve.name);
        ClauseTally integrality("rational-integrality", curve.name);
        for (const auto& alpha : curve.alphas) {
            CertifiedReal x = mr * alpha;
            if (!near_integer(x, cert.delta, budget))
                closeness.fail("{m*alpha} = " + frac(x, budget).to_string() + " for alpha = " + alpha.to_string());
            if (is_rational_angle(alpha) && !(is_integer(x) && x.exact() > 0))
                integrality.fail("m*alpha = " + x.to_string() + " for alpha = " + alpha.to_string());
        }
        report.add(closeness.done(std::to_string(curve.alphas.size()) + " angle(s) within delta"));
        report.add(integrality.done("rational angles land on integers"));

        int recount = count_delta(curve, m, cert.delta, budget);
        report.add({"delta-count", curve.name, recount == cert.Delta[i],
                    "recount " + std::to_string(recount) + ", recorded " + std::to_string(cert.Delta[i])});
        report.add({"mean-sign", curve.name, cert.rho[i] == curve.rho,
                    "rho " + std::to_string(cert.rho[i]) + ", mean " + curve.mean.to_string()});
    }
    ClauseTally vertex("vertex-closeness", "");
    CertifiedReal Nr = real(cert.N);
    for (std::size_t j = 0; j < problem.l(); ++j) {
        auto fit = fit_vertex(Nr * problem.v[j], cert.epsilon, budget);
        if (!fit)
            vertex.fail("coordinate " + std::to_string(j) + " not within epsilon of an integer");
        else if (fit->side_certified && fit->chi != cert.chi[j])
            vertex.fail("coordinate " + std::to_string(j) + " sits at vertex " + std::to_string(fit->chi) +
                        ", certificate says " + std::to_string(cert.chi[j]));
    }
    report.add(vertex.done("|{N v} - chi| < epsilon on " + std::to_string(problem.l()) + " coordinate(s)"));
    return report;
}

VerificationReport verify_index_jump(const JumpProblem& problem, const JumpCertificate& cert) {
    require_shape(problem, cert);
    const auto& budget = problem.budget;
    VerificationReport report;
    report.add({"N-multiple", "", cert.N % problem.M0 == 0 && cert.N > 0,
                "N = " + std::to_string(cert.N) + ", M0 = " + std::to_string(problem.M0)});
    CertifiedReal Nr = real(cert.N);
    for (std::size_t i = 0; i < problem.q(); ++i) {
        const auto& curve = problem.curves[i];
        const auto& germ = problem.germs[i];
        std::int64_t mi = cert.m[i];
        std::int64_t two_rho_N = 2 * cert.rho[i] * cert.N;
        IndexEvaluator eval(germ, budget);

        // m_i = ([N v_i] + chi_i) M
        {
            CertifiedReal x = Nr * problem.v[i];
            Check c{"iterate-formula", curve.name, true, ""};
            try {
                Integer fl = floor_of(x, budget);
                Integer expected = (fl + cert.chi[i]) * problem.M;
                c.pass = expected == mi;
                c.witness = "([N v] + chi) M = (" + str(fl) + " + " + std::to_string(cert.chi[i]) + ")*" +
                            std::to_string(problem.M) + " = " + str(expected) + ", m = " + std::to_string(mi);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::PrecisionInsufficient) throw;
                auto fit = fit_vertex(x, cert.epsilon, budget);
                c.pass = fit && fit->nearest * problem.M == mi;
                c.witness = "N v within epsilon of an integer on an undecided side; nearest*M = " +
                            (fit ? str(fit->nearest * problem.M) : std::string("none")) +
                            ", m = " + std::to_string(mi);
            }
            report.add(c);
        }

        ClauseTally nullity("nullity-jump", curve.name);
        ClauseTally above("index-above", curve.name);
        ClauseTally below("index-below", curve.name);
        for (std::int64_t m = 1; m <= problem.m_bar; ++m) {
            std::string at = "m = " + std::to_string(m) + ": ";
            if (2 * mi - m < 1) {
                nullity.fail(at + "2m_i - m < 1");
                below.fail(at + "2m_i - m < 1");
                continue;
            }
            int n_minus = eval.nullity(2 * mi - m), n_plus = eval.nullity(2 * mi + m), n_m = eval.nullity(m);
            if (n_minus != n_m || n_plus != n_m)
                nullity.fail(at + "nu(2m_i-m) = " + std::to_string(n_minus) + ", nu(2m_i+m) = " +
                             std::to_string(n_plus) + ", nu(m) = " + std::to_string(n_m));
            std::int64_t i_m = eval.index(m);
            std::int64_t i_plus = eval.index(2 * mi + m);
            if (i_plus != two_rho_N + i_m)
                above.fail(at + "i(2m_i+m) = " + std::to_string(i_plus) + ", 2 rho N + i(m) = " +
                           std::to_string(two_rho_N + i_m));
            int Q = 0;
            for (const auto& alpha : curve.alphas)
                if (is_rational_angle(alpha) && is_integer(real(mi) * alpha) &&
                    is_integer(alpha * real(Rational(m, 2))))
                    Q += 1;
            std::int64_t i_minus = eval.index(2 * mi - m);
            std::int64_t expected = two_rho_N - i_m - 2 * (curve.s_plus + Q);
            if (i_minus != expected)
                below.fail(at + "i(2m_i-m) = " + std::to_string(i_minus) + ", expected " + std::to_string(expected) +
                           " (Q = " + std::to_string(Q) + ")");
        }
        std::string range = "1 <= m <= " + std::to_string(problem.m_bar);
        report.add(nullity.done(range));
        report.add(above.done(range));
        report.add(below.done(range));

        std::int64_t i_mid = eval.index(2 * mi);
        std::int64_t mid_expected = two_rho_N - (curve.s_plus + curve.c - 2 * cert.Delta[i]);
        report.add({"index-middle", curve.name, i_mid == mid_expected,
                    "i(2m_i) = " + std::to_string(i_mid) + ", 2 rho N - (S+ + C - 2 Delta) = " +
                        std::to_string(mid_expected)});

        ClauseTally angles("angle-closeness", curve.name);
        ClauseTally denominators("common-denominator", curve.name);
        int count = 0;
        for (const auto& block : germ.blocks)
            for (const auto& point : spectral_points(block)) {
                const CertifiedReal& a = point.angle_over_pi;
                if (a.is_exact() && a.exact() == 0) continue;
                ++count;
                if (!near_integer(real(mi) * a, cert.delta, budget))
                    angles.fail("{m_i theta/pi} = " + frac(real(mi) * a, budget).to_string() +
                                " for theta/pi = " + a.to_string());
                if (is_rational_angle(a) && !is_integer(real(problem.M) * a))
                    denominators.fail("M theta/pi = " + (real(problem.M) * a).to_string());
            }
        report.add(angles.done(std::to_string(count) + " unit-circle eigenvalue(s) within delta"));
        report.add(denominators.done("M clears every rational angle"));
    }
    return report;
}

SearchResult search_with_stats(const JumpProblem& problem, std::int64_t n_min, std::int64_t n_max,
                               const SearchOptions& options) {
    if (n_min < 1 || n_max < n_min) throw Error(ErrorCode::InvalidArgument, "search range must satisfy 1 <= n_min <= n_max");
    const std::int64_t step = problem.M0;
    const std::int64_t first = (n_min + step - 1) / step * step;
    const std::int64_t chunk_len = std::max<std::int64_t>(1, options.chunk);

    struct Coord {
        double value;
        double error;
    };
    std::vector<Coord> coords;
    for (const auto& vj : problem.v) coords.push_back({vj.approx(), vj.approx_error()});
    const double eps = problem.epsilon.convert_to<double>() * (1 + 0x1p-40);

    // Angle-closeness is checked on every unit-circle angle, including ones v
    // does not steer; dropping hits that clearly miss it saves the certified pass.
    std::vector<std::vector<Coord>> angles(problem.q());
    for (std::size_t i = 0; i < problem.q(); ++i)
        for (const auto& block : problem.germs[i].blocks)
            for (const auto& point : spectral_points(block)) {
                const CertifiedReal& a = point.angle_over_pi;
                if (a.is_exact() && a.exact() == 0) continue;
                angles[i].push_back({a.approx(), a.approx_error()});
            }
    const double delta = problem.delta.convert_to<double>();
    auto clearly_far = [&](const JumpCertificate& cert) {
        for (std::size_t i = 0; i < angles.size(); ++i) {
            double m = static_cast<double>(cert.m[i]);
            for (const auto& a : angles[i]) {
                double x = m * a.value;
                if (!(std::abs(x) < 0x1p50)) continue;
                double r = std::abs(x - std::nearbyint(x));
                if (r > delta + m * a.error + std::abs(x) * 0x1p-48 + 0x1p-60) return true;
            }
        }
        return false;
    };

    auto prefilter = [&](std::int64_t N) {
        double n = static_cast<double>(N);
        for (const auto& c : coords) {
            double x = n * c.value;
            if (!(std::abs(x) < 0x1p50)) continue;
            double r = std::abs(x - std::nearbyint(x));
            double tol = n * c.error + std::abs(x) * 0x1p-50 + 0x1p-60;
            if (r > eps + tol) return false;
        }
        return true;
    };

    std::atomic<std::int64_t> next_chunk{0};
    std::atomic<std::int64_t> best{std::numeric_limits<std::int64_t>::max()};
    std::atomic<std::int64_t> scanned{0}, hits{0}, rejected{0}, undecided{0};
    std::mutex lock;
    std::optional<JumpCertificate> found;
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            for (;;) {
                std::int64_t c = next_chunk.fetch_add(1);
                if (c > (n_max - first) / (chunk_len * step)) return;
                std::int64_t start = first + c * chunk_len * step;
                if (start > n_max || start >= best.load()) return;
                std::int64_t end = std::min(n_max, start + (chunk_len - 1) * step);
                std::int64_t local = 0;
                for (std::int64_t N = start; N <= end && N < best.load(std::memory_order_relaxed); N += step) {
                    ++local;
                    if (!prefilter(N)) continue;
                    std::optional<JumpCertificate> cert;
                    try {
                        cert = candidate_at(problem, N);
                        if (!cert) continue;
                        hits.fetch_add(1);
                        if (clearly_far(*cert) || !verify_diophantine(problem, *cert).passed() ||
                            !verify_index_jump(problem, *cert).passed()) {
                            rejected.fetch_add(1);
                            continue;
                        }
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::PrecisionInsufficient) throw;
                        undecided.fetch_add(1);
                        continue;
                    }
                    std::lock_guard guard(lock);
                    if (N < best.load()) {
                        best.store(N);
                        found = std::move(cert);
                    }
                    break;
                }
                scanned.fetch_add(local);
            }
        } catch (...) {
            std::lock_guard guard(lock);
            if (!failure) failure = std::current_exception();
            best.store(std::numeric_limits<std::int64_t>::min());
        }
    };

    int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, workers);
    if (first > n_max) workers = 0;
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    if (workers > 0) worker();
    for (auto& t : pool) t.join();

    if (failure) std::rethrow_exception(failure);
    SearchStats stats{scanned.load(), hits.load(), rejected.load(), undecided.load()};
    if (!found) {
        std::ostringstream msg;
        msg << "no certificate for N in [" << n_min << ", " << n_max << "] (multiples of " << step << "; "
            << stats.vertex_hits << " vertex hits, " << stats.rejected << " rejected, " << stats.undecided
            << " undecided)";
        throw Error(ErrorCode::NotFound, msg.str());
    }
    return {*found, stats};
}

JumpCertificate search(const JumpProblem& problem, std::int64_t n_min, std::int64_t n_max,
                       const SearchOptions& options) {
    return search_with_stats(problem, n_min, n_max, options).certificate;
}

JumpProblem rescaled_problem(const JumpProblem& problem, std::int64_t p_hat) {
    JumpProblem scaled = problem;
    scaled.delta = problem.delta * p_hat;
    scaled.epsilon = problem.epsilon * p_hat;
    return scaled;
}

JumpCertificate ScaledCertificate::as_certificate() const {
    JumpCertificate c = base;
    c.N = N_hat;
    c.delta = delta_hat;
    c.epsilon = epsilon_hat;
    c.chi = chi_hat;
    c.m = m_hat;
    c.Delta = Delta_hat;
    return c;
}

ScaledCertificate scale(const JumpProblem& problem, const JumpCertificate& cert, std::int64_t p_hat) {
    require_shape(problem, cert);
    if (p_hat < 1) throw Error(ErrorCode::InvalidArgument, "p_hat must be positive");
    const auto& budget = problem.budget;
    ScaledCertificate s;
    s.base = cert;
    s.p_hat = p_hat;
    s.N_hat = p_hat * cert.N;
    s.delta_hat = cert.delta * p_hat;
    s.epsilon_hat = cert.epsilon * p_hat;
    check_delta_hypothesis(s.delta_hat, problem.max_mu(), "scaled delta");
    if (s.epsilon_hat >= Rational(1, 2))
        throw Error(ErrorCode::Precondition, "scaled epsilon " + to_string(s.epsilon_hat) + " is not below 1/2");

    JumpProblem scaled = problem;
    scaled.delta = s.delta_hat;
    scaled.epsilon = s.epsilon_hat;

    CertifiedReal Nr = real(cert.N);
    CertifiedReal Nhat = real(s.N_hat);
    std::vector<Integer> nearest;
    std::string mismatch;
    for (std::size_t j = 0; j < problem.l(); ++j) {
        auto fit = fit_vertex(Nhat * problem.v[j], s.epsilon_hat, budget);
        if (!fit) {
            mismatch = "coordinate " + std::to_string(j) + " of N_hat v is not within epsilon_hat of an integer";
            break;
        }
        s.chi_hat.push_back(fit->chi);
        nearest.push_back(fit->nearest);
    }
    if (!mismatch.empty()) throw Error(ErrorCode::ScaleMismatch, mismatch);
    for (std::size_t i = 0; i < problem.q(); ++i) {
        s.m_hat.push_back(to_int64(nearest[i] * problem.M));
        s.Delta_hat.push_back(count_delta(problem.curves[i], s.m_hat[i], s.delta_hat, budget));
    }

    for (std::size_t i = 0; i < problem.q(); ++i) {
        const std::string& name = problem.curves[i].name;
        Check chi{"chi-preserved", name, s.chi_hat[i] == cert.chi[i],
                  "chi_hat " + std::to_string(s.chi_hat[i]) + ", chi " + std::to_string(cert.chi[i])};
        Check m{"m-scaled", name, s.m_hat[i] == p_hat * cert.m[i],
                "m_hat " + std::to_string(s.m_hat[i]) + ", p_hat m " + std::to_string(p_hat * cert.m[i])};
        Check d{"delta-preserved", name, s.Delta_hat[i] == cert.Delta[i],
                "Delta_hat " + std::to_string(s.Delta_hat[i]) + ", Delta " + std::to_string(cert.Delta[i])};
        for (const Check* c : {&chi, &m, &d})
            if (!c->pass && mismatch.empty()) mismatch = c->clause + " fails for '" + name + "': " + c->witness;
        s.ledger.add(chi);
        s.ledger.add(m);
        s.ledger.add(d);
    }

    // [p x] = p [x] + [p {x}], i.e. {p x} = {p {x}}, on every coordinate of N v
    ClauseTally fractions("fraction-scaling", "");
    for (std::size_t j = 0; j < problem.l(); ++j) {
        CertifiedReal x = Nr * problem.v[j];
        try {
            Integer whole = floor_of(x, budget);
            CertifiedReal f = x - real(Rational(whole));
            Integer lhs = floor_of(real(p_hat) * x, budget);
            Integer rhs = Integer(p_hat) * whole + floor_of(real(p_hat) * f, budget);
            if (lhs != rhs)
                fractions.fail("coordinate " + std::to_string(j) + ": [p x] = " + str(lhs) + ", p[x] + [p{x}] = " +
                               str(rhs));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionInsufficient) throw;
            fractions.fail("coordinate " + std::to_string(j) + ": floor undecidable at this precision");
        }
    }
    s.ledger.add(fractions.done("holds on " + std::to_string(problem.l()) + " coordinate(s)"));

    if (!mismatch.empty()) throw Error(ErrorCode::ScaleMismatch, mismatch);

    JumpCertificate scaled_cert = s.as_certificate();
    for (auto report : {verify_diophantine(scaled, scaled_cert), verify_index_jump(scaled, scaled_cert)}) {
        for (auto& c : report.checks) c.clause = "scaled " + c.clause;
        s.ledger.append(report);
    }
    return s;
}

bool delta_invariance(const JumpProblem& problem, const JumpCertificate& cert, const Rational& delta1,
                      const Rational& delta2) {
    require_shape(problem, cert);
    check_delta_hypothesis(delta1, problem.max_mu(), "delta1");
    check_delta_hypothesis(delta2, problem.max_mu(), "delta2");
    for (std::size_t i = 0; i < problem.q(); ++i)
        if (count_delta(problem.curves[i], cert.m[i], delta1, problem.budget) !=
            count_delta(problem.curves[i], cert.m[i], delta2, problem.budget))
            return false;
    return true;
}

}  // namespace geoindex

#include <doctest.h>

#include <cmath>

#include "geoindex/jump.hpp"
#include "../jump_oracle.hpp"

using namespace geoindex;

namespace {

CertifiedReal q(std::int64_t p, std::int64_t d) { return CertifiedReal(Rational(p, d)); }

oracle::Germ oracle_b() {
    oracle::Germ g;
    g.name = "B";
    g.i1 = 2;
    oracle::Block r1, r2;
    r1.kind = r2.kind = oracle::Kind::R;
    r1.angle = oracle::QNum{Rational(1, 3)};
    r2.angle = oracle::QNum{Rational(1, 2)};
    g.blocks = {r1, r2};
    return g;
}

oracle::Germ oracle_h() {
    oracle::Germ g;
    g.name = "H";
    g.i1 = 1;
    oracle::Block d1, d2;
    d2.lambda = Rational(3);
    g.blocks = {d1, d2};
    return g;
}

// Germs without eigenvalue-one blocks. An irrational germ carries a single
// irrational angle and no rational one, so that the search stays short.
oracle::Germ jump_germ(oracle::Rng& rng, const std::string& name, bool allow_irrational) {
    for (;;) {
        oracle::Germ g = oracle::random_germ(rng, 0, 5, false, name);
        int irrational = 0, rational = 0;
        bool n1 = false;
        for (const auto& b : g.blocks) {
            n1 = n1 || b.kind == oracle::Kind::N1;
            if (b.kind == oracle::Kind::R || b.kind == oracle::Kind::N2) ++(b.angle.rational() ? rational : irrational);
        }
        if (n1 || std::abs(oracle::mean_index(g)) < 0.05) continue;
        if (irrational > 0 && (!allow_irrational || irrational > 1 || rational > 0)) continue;
        return g;
    }
}

bool irrational(const oracle::Germ& g) {
    for (const auto& b : g.blocks)
        if ((b.kind == oracle::Kind::R || b.kind == oracle::Kind::N2) && !b.angle.rational()) return true;
    return false;
}

oracle::JumpClaim claim(const JumpCertificate& c, std::size_t i) {
    return oracle::JumpClaim{c.N, c.m[i], c.Delta[i], c.rho[i]};
}

}  // namespace

TEST_CASE("jump problem for the double rotation germ") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000));
    CHECK(p.M == 6);
    CHECK(p.m_bar == 6);
    REQUIRE(p.l() == 3);
    CHECK(p.v[0].exact() == Rational(1, 5));
    CHECK(p.v[1].exact() == Rational(2, 5));
    CHECK(p.v[2].exact() == Rational(3, 5));
    CHECK(p.max_mu() == 2);
}

TEST_CASE("default epsilon") {
    IndexGerm B = oracle::to_library(oracle_b());
    // M|D| = 5
    CHECK(build_problem({B}, Rational(1, 64)).epsilon == Rational(1, 640));
}

TEST_CASE("search certifies the double rotation germ at N = 5") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000));
    SearchResult r = search_with_stats(p, 1, 1000);
    const JumpCertificate& c = r.certificate;
    CHECK(c.N == 5);
    CHECK(c.m == std::vector<std::int64_t>{6});
    CHECK(c.Delta == std::vector<int>{0});
    CHECK(c.chi == std::vector<int>{0, 0, 0});
    CHECK(verify_diophantine(p, c).passed());
    CHECK(verify_index_jump(p, c).passed());
    CHECK(oracle::check_jump(oracle_b(), claim(c, 0), p.m_bar) == "");
    CHECK(r.stats.scanned >= 5);
}

TEST_CASE("candidate_at rejects far points") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000));
    CHECK_FALSE(candidate_at(p, 3).has_value());
    CHECK(candidate_at(p, 10).has_value());
}

TEST_CASE("hyperbolic germ admits every N") {
    IndexGerm H = oracle::to_library(oracle_h());
    JumpProblem p = build_problem({H}, Rational(1, 64));
    // 2m - m_bar >= 1 needs m >= 3 once m_bar = 4
    CHECK(p.m_bar == 4);
    CHECK(search(p, 1, 20).N == 3);
    for (std::int64_t n = 3; n <= 20; ++n) {
        JumpCertificate c = search(p, n, n);
        CHECK(c.N == n);
        CHECK(c.m[0] == n);
        CHECK(oracle::check_jump(oracle_h(), claim(c, 0), p.m_bar) == "");
    }
}

TEST_CASE("M0 divides N") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000), 7);
    JumpCertificate c = search(p, 1, 10000);
    CHECK(c.N % 7 == 0);
    CHECK(c.N % 5 == 0);
}

TEST_CASE("tampered certificates fail verification") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000));
    JumpCertificate good = search(p, 1, 1000);

    JumpCertificate bad = good;
    bad.m[0] += 6;
    CHECK_FALSE((verify_diophantine(p, bad).passed() && verify_index_jump(p, bad).passed()));

    bad = good;
    bad.N = 6;
    CHECK_FALSE((verify_diophantine(p, bad).passed() && verify_index_jump(p, bad).passed()));

    bad = good;
    bad.Delta[0] = 1;
    CHECK_FALSE((verify_diophantine(p, bad).passed() && verify_index_jump(p, bad).passed()));

    bad = good;
    bad.chi[1] = 1;
    CHECK_FALSE(verify_diophantine(p, bad).passed());
}

TEST_CASE("scaling by p_hat") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 256), Rational(1, 4000));
    JumpCertificate c = search(p, 1, 1000);
    ScaledCertificate s = scale(p, c, 4);
    CHECK(s.N_hat == 4 * c.N);
    CHECK(s.m_hat[0] == 4 * c.m[0]);
    CHECK(s.Delta_hat == c.Delta);
    CHECK(s.delta_hat == Rational(1, 64));
    CHECK(s.ledger.passed());
    JumpCertificate as = s.as_certificate();
    CHECK(oracle::check_jump(oracle_b(), claim(as, 0), p.m_bar) == "");
    CHECK(verify_index_jump(rescaled_problem(p, 4), as).passed());
}

TEST_CASE("delta threshold") {
    IndexGerm B = oracle::to_library(oracle_b());
    JumpProblem p = build_problem({B}, Rational(1, 64), Rational(1, 1000));
    JumpCertificate c = search(p, 1, 1000);
    CHECK(delta_invariance(p, c, Rational(1, 64), Rational(1, 8)));
    CHECK(count_delta(p.curves[0], 1, Rational(1, 3), p.budget) == 0);
    CHECK(count_delta(p.curves[0], 1, Rational(2, 5), p.budget) == 1);
    CHECK_THROWS_AS(build_problem({B}, Rational(1, 4)), Error);  // delta * mu = 1/2
}

TEST_CASE("search is deterministic across worker counts") {
    oracle::Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        oracle::Germ a0 = jump_germ(rng, "a", true);
        std::vector<IndexGerm> germs{oracle::to_library(a0), oracle::to_library(jump_germ(rng, "b", !irrational(a0)))};
        JumpProblem p = build_problem(germs, Rational(1, 16));
        SearchOptions one, many;
        one.workers = 1;
        many.workers = 4;
        many.chunk = 97;
        std::optional<JumpCertificate> a, b;
        try {
            a = search(p, 1, 200000, one);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotFound);
        }
        try {
            b = search(p, 1, 200000, many);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotFound);
        }
        CHECK(a == b);
    }
}

TEST_CASE("property: certificates satisfy the jump identities by an independent route") {
    oracle::Rng rng(314159);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<oracle::Germ> og{jump_germ(rng, "a", true)};
        if (trial % 2) og.push_back(jump_germ(rng, "b", !irrational(og[0])));
        std::vector<IndexGerm> germs;
        for (const auto& g : og) germs.push_back(oracle::to_library(g));
        JumpProblem p = build_problem(germs, Rational(1, 8));
        JumpCertificate c = search(p, 1, 2'000'000);
        ++certified;
        INFO("trial " << trial << " N " << c.N);
        for (std::size_t i = 0; i < og.size(); ++i) {
            REQUIRE(oracle::check_jump(og[i], claim(c, i), p.m_bar) == "");
            double mean = oracle::mean_index(og[i]);
            CHECK(c.rho[i] == (mean > 0 ? 1 : -1));
            // m = ([N / (M |mean|)] + chi) M
            double x = static_cast<double>(c.N) / (static_cast<double>(p.M) * std::abs(mean));
            if (std::abs(x - std::round(x)) > 1e-6) {
                auto expected = (static_cast<std::int64_t>(std::floor(x)) + c.chi[i]) * p.M;
                CHECK(c.m[i] == expected);
            }
            // every angle is within delta of an integer multiple after m iterations
            for (const auto& b : og[i].blocks)
                for (const auto& pt : oracle::points(b)) {
                    double y = static_cast<double>(c.m[i]) * pt.where.approx();
                    CHECK(std::abs(y - std::round(y)) < 1.0 / 8 + 1e-9);
                }
        }
    }
    CHECK(certified == 40);
}

#include "geoindex/iteration.hpp"

#include <cmath>
#include <limits>

namespace geoindex {

void check_dimension(const IndexGerm& germ, int n) {
    int expected = 2 * n - 2;
    int dim = total_dimension(germ.blocks);
    if (dim != expected)
        throw Error(ErrorCode::Range, "curve '" + germ.name + "': blocks have dimension " + std::to_string(dim) +
                                          ", expected " + std::to_string(expected));
}

SpectralSummary summarize(const IndexGerm& germ) {
    SpectralSummary s;
    s.s_plus = s_plus_at_one(germ.blocks);
    s.c = big_C(germ.blocks);
    s.beta = germ.initial_index + s.s_plus - s.c;
    s.terms = elliptic_terms(germ.blocks);
    return s;
}

std::int64_t index_at(const IndexGerm& germ, std::int64_t m, const PrecisionBudget& budget) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 1");
    SpectralSummary s = summarize(germ);
    Integer total = Integer(m) * s.beta - (s.s_plus + s.c);
    CertifiedReal half_m{Rational(m, 2)};
    for (const auto& term : s.terms) total += 2 * term.weight * ceil_E(term.alpha * half_m, budget);
    return to_int64(total);
}

int nullity_at(const IndexGerm& germ, std::int64_t m, const PrecisionBudget& budget) {
    int total = 0;
    for (const auto& block : germ.blocks) total += nullity_contribution(block, m, budget);
    return total;
}

CertifiedReal mean_index(const IndexGerm& germ) {
    SpectralSummary s = summarize(germ);
    CertifiedReal total{Rational(s.beta)};
    for (const auto& block : germ.blocks) {
        // a nontrivial N2 block sits at θ and its conjugate, so the pair sums to
        // exactly 2; adding the two intervals could never settle E(·) at an integer
        if (const auto* n = std::get_if<N2Block>(&block)) {
            if (n->kind == N2Kind::nontrivial) total = total + CertifiedReal(Rational(2));
            continue;
        }
        for (const auto& term : elliptic_terms({block}))
            total = total + term.alpha * CertifiedReal(Rational(term.weight));
    }
    return total;
}

std::pair<int, int> deviation_bounds(const IndexGerm& germ) {
    SpectralSummary s = summarize(germ);
    return {s.s_plus + s.c, s.c - s.s_plus};
}

Rational gamma_invariant(std::int64_t i1, std::int64_t i2) {
    auto even = [](std::int64_t v) { return v % 2 == 0; };
    Rational magnitude = even(i2 - i1) ? Rational(1) : Rational(1, 2);
    return even(i1) ? magnitude : Rational(-magnitude);
}

bool is_bumpy(const IndexGerm& germ) {
    for (const auto& block : germ.blocks) {
        if (std::holds_alternative<N1Block>(block)) return false;
        if (const auto* r = std::get_if<RBlock>(&block); r && !r->theta.over_pi().declared_irrational()) return false;
        if (const auto* n = std::get_if<N2Block>(&block); n && !n->theta.over_pi().declared_irrational())
            return false;
    }
    return true;
}

namespace {

// Least n such that n·î - (S^+ + C) >= target, i.e. the linear lower bound
// certifies i(γ, n') >= target for every n' >= n.
std::int64_t linear_horizon(const IndexGerm& germ, const CertifiedReal& mean, std::int64_t target,
                            const PrecisionBudget& budget) {
    auto [lower_slack, upper_slack] = deviation_bounds(germ);
    (void)upper_slack;
    CertifiedReal needed{Rational(target + lower_slack)};
    Integer n = ceil_E(needed / mean, budget);
    if (n < 1) n = 1;
    return to_int64(n);
}

void require_positive_mean(const IndexGerm& germ, const CertifiedReal& mean, const PrecisionBudget& budget) {
    if (sign(mean, budget) <= 0)
        throw Error(ErrorCode::Unbounded, "curve '" + germ.name + "' has mean index " + mean.to_string() +
                                              " <= 0; its iterates never grow by 4");
}

}  // namespace

std::int64_t mbar_single(const IndexGerm& germ, const PrecisionBudget& budget) {
    CertifiedReal mean = mean_index(germ);
    require_positive_mean(germ, mean, budget);
    std::int64_t target = germ.initial_index + 4;
    std::int64_t horizon = linear_horizon(germ, mean, target, budget);
    IndexEvaluator eval(germ, budget);
    std::int64_t last_bad = 0;
    for (std::int64_t n = 1; n < horizon; ++n)
        if (eval.index(n) < target) last_bad = n;
    return std::max<std::int64_t>(1, last_bad);
}

std::int64_t mbar(const std::vector<IndexGerm>& system, const PrecisionBudget& budget) {
    std::int64_t result = 1;
    for (const auto& germ : system) result = std::max(result, mbar_single(germ, budget));
    return result;
}

BottPositivity bott_positivity(const IndexGerm& germ, const PrecisionBudget& budget) {
    CertifiedReal mean = mean_index(germ);
    require_positive_mean(germ, mean, budget);
    BottPositivity result;
    result.horizon = linear_horizon(germ, mean, germ.initial_index, budget);
    IndexEvaluator eval(germ, budget);
    for (std::int64_t m = 1; m < result.horizon; ++m)
        if (eval.index(m) < germ.initial_index) {
            result.holds = false;
            result.first_violation = m;
            break;
        }
    return result;
}

IndexProfile index_profile(const IndexGerm& germ, std::int64_t m_min, std::int64_t m_max,
                           const PrecisionBudget& budget) {
    if (m_min < 1 || m_max < m_min) throw Error(ErrorCode::InvalidArgument, "bad iteration range");
    IndexEvaluator eval(germ, budget);
    IndexProfile profile;
    profile.germ_name = germ.name;
    profile.m_min = m_min;
    auto count = static_cast<std::size_t>(m_max - m_min + 1);
    profile.index.reserve(count);
    profile.nullity.reserve(count);
    for (std::int64_t m = m_min; m <= m_max; ++m) {
        profile.index.push_back(eval.index(m));
        profile.nullity.push_back(eval.nullity(m));
    }
    return profile;
}

// --- IndexEvaluator -----------------------------------------------------------

IndexEvaluator::IndexEvaluator(const IndexGerm& germ, PrecisionBudget budget)
    : germ_(germ), summary_(summarize(germ)), budget_(budget) {
    constexpr std::int64_t kSmall = std::int64_t{1} << 40;
    for (const auto& t : summary_.terms) {
        Term term;
        term.weight = t.weight;
        term.alpha = t.alpha;
        if (t.alpha.is_exact()) {
            const Integer& p = boost::multiprecision::numerator(t.alpha.exact());
            const Integer& q = boost::multiprecision::denominator(t.alpha.exact());
            if (p < kSmall && q < kSmall) {
                term.rational = true;
                term.num = p.convert_to<std::int64_t>();
                term.den = q.convert_to<std::int64_t>();
            }
        }
        term.approx = t.alpha.approx();
        term.error = t.alpha.approx_error();
        terms_.push_back(std::move(term));
    }
}

std::int64_t IndexEvaluator::ceil_half_multiple(const Term& term, std::int64_t m) const {
    if (term.rational) {
        __int128 numerator = static_cast<__int128>(m) * term.num;
        __int128 denominator = static_cast<__int128>(2) * term.den;
        __int128 q = numerator / denominator;
        if (numerator % denominator != 0 && numerator > 0) ++q;
        return static_cast<std::int64_t>(q);
    }
    {
        double y = static_cast<double>(m) * term.approx * 0.5;
        double err = static_cast<double>(m) * term.error * 0.5 + std::abs(y) * 0x1p-50 + 0x1p-60;
        err *= 2.0;
        double k = std::floor(y + err);
        if (y - err > k && std::abs(y) < 0x1p52) return static_cast<std::int64_t>(k) + 1;
    }
    return to_int64(ceil_E(term.alpha * CertifiedReal(Rational(m, 2)), budget_));
}

std::int64_t IndexEvaluator::index(std::int64_t m) const {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 1");
    std::int64_t total = m * summary_.beta - (summary_.s_plus + summary_.c);
    for (const auto& term : terms_) total += 2 * term.weight * ceil_half_multiple(term, m);
    return total;
}

int IndexEvaluator::nullity(std::int64_t m) const {
    int total = 0;
    for (const auto& block : germ_.blocks) {
        if (const auto* r = std::get_if<RBlock>(&block); r && r->theta.over_pi().declared_irrational()) continue;
        if (const auto* n = std::get_if<N2Block>(&block); n && n->theta.over_pi().declared_irrational()) continue;
        total += nullity_contribution(block, m, budget_);
    }
    return total;
}

}  // namespace geoindex

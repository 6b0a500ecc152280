#include "geoindex/normal_forms.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace geoindex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const CertifiedReal kZero{Rational(0)};
const CertifiedReal kOne{Rational(1)};
const CertifiedReal kTwo{Rational(2)};

// nullopt when integrality cannot be decided at the current precision.
std::optional<bool> try_is_integer(const CertifiedReal& x) {
    if (x.is_exact()) return boost::multiprecision::denominator(x.exact()) == 1;
    if (x.declared_irrational()) return false;
    Integer k = floor_of(x.lower());
    if (Rational(k) < x.lower() && x.upper() < Rational(k + 1)) return false;
    return std::nullopt;
}

bool is_integer(const CertifiedReal& x, const PrecisionBudget& budget) {
    try {
        return decide_refining(x, budget, "integrality", try_is_integer);
    } catch (const Error& e) {
        throw Error(ErrorCode::UnresolvedSpectrum, e.what());
    }
}

bool points_coincide(const CertifiedReal& a, const CertifiedReal& b, const PrecisionBudget& budget) {
    if (a.same_as(b)) return true;
    try {
        return compare(a, b, budget) == 0;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PrecisionInsufficient) throw;
        throw Error(ErrorCode::UnresolvedSpectrum,
                    "cannot separate spectrum points " + a.to_string() + " and " + b.to_string());
    }
}

}  // namespace

Angle::Angle(CertifiedReal over_pi, const PrecisionBudget& budget) : over_pi_(std::move(over_pi)) {
    if (sign(over_pi_, budget) <= 0 || compare(over_pi_, kTwo, budget) >= 0 ||
        compare(over_pi_, kOne, budget) == 0)
        throw Error(ErrorCode::Range, "theta/pi must lie in (0,1) or (1,2), got " + over_pi_.to_string());
}

N1Block make_n1(int eigenvalue, BClass b) {
    if (eigenvalue != 1 && eigenvalue != -1)
        throw Error(ErrorCode::Range, "N1 eigenvalue must be +1 or -1");
    return N1Block{eigenvalue, b};
}

DBlock make_d(CertifiedReal lambda, const PrecisionBudget& budget) {
    if (sign(lambda, budget) == 0 || compare(abs(lambda, budget), kOne, budget) == 0)
        throw Error(ErrorCode::Range, "D(lambda) needs lambda outside {0, 1, -1}, got " + lambda.to_string());
    return DBlock{std::move(lambda)};
}

std::vector<SpectralPoint> spectral_points(const BasicBlock& block) {
    return std::visit(
        overloaded{
            [](const N1Block& n) -> std::vector<SpectralPoint> {
                if (n.eigenvalue == 1) {
                    bool counted = n.b != BClass::negative;
                    return {{kZero, counted ? SplittingPair{1, 1} : SplittingPair{0, 0}}};
                }
                bool counted = n.b != BClass::positive;
                return {{kOne, counted ? SplittingPair{1, 1} : SplittingPair{0, 0}}};
            },
            [](const DBlock&) -> std::vector<SpectralPoint> { return {}; },
            [](const RBlock& r) -> std::vector<SpectralPoint> {
                const CertifiedReal& x = r.theta.over_pi();
                return {{x, SplittingPair{0, 1}}, {kTwo - x, SplittingPair{1, 0}}};
            },
            [](const N2Block& n) -> std::vector<SpectralPoint> {
                const CertifiedReal& x = n.theta.over_pi();
                SplittingPair at_theta = n.kind == N2Kind::nontrivial ? SplittingPair{1, 1} : SplittingPair{0, 0};
                // S+(conj w) = S-(w) and S-(conj w) = S+(w)
                return {{x, at_theta}, {kTwo - x, SplittingPair{at_theta.s_minus, at_theta.s_plus}}};
            },
        },
        block);
}

int block_dimension(const BasicBlock& block) { return std::holds_alternative<N2Block>(block) ? 4 : 2; }

int total_dimension(const BlockList& blocks) {
    int dim = 0;
    for (const auto& b : blocks) dim += block_dimension(b);
    return dim;
}

SplittingPair splitting_at(const BasicBlock& block, const CertifiedReal& omega_over_pi,
                           const PrecisionBudget& budget) {
    SplittingPair result;
    for (const auto& point : spectral_points(block))
        if (points_coincide(point.angle_over_pi, omega_over_pi, budget)) result += point.splitting;
    return result;
}

SplittingPair splitting_sum(const BlockList& blocks, const CertifiedReal& omega_over_pi,
                            const PrecisionBudget& budget) {
    SplittingPair total;
    for (const auto& b : blocks) total += splitting_at(b, omega_over_pi, budget);
    return total;
}

int s_plus_at_one(const BlockList& blocks) {
    int total = 0;
    for (const auto& b : blocks)
        for (const auto& point : spectral_points(b))
            if (point.angle_over_pi.is_exact() && point.angle_over_pi.exact() == 0) total += point.splitting.s_plus;
    return total;
}

int big_C(const BlockList& blocks) {
    int total = 0;
    for (const auto& b : blocks)
        for (const auto& point : spectral_points(b))
            if (!(point.angle_over_pi.is_exact() && point.angle_over_pi.exact() == 0))
                total += point.splitting.s_minus;
    return total;
}

std::vector<EllipticTerm> elliptic_terms(const BlockList& blocks) {
    std::vector<EllipticTerm> terms;
    for (const auto& b : blocks)
        for (const auto& point : spectral_points(b)) {
            bool at_one = point.angle_over_pi.is_exact() && point.angle_over_pi.exact() == 0;
            if (!at_one && point.splitting.s_minus > 0)
                terms.push_back({point.angle_over_pi, point.splitting.s_minus});
        }
    return terms;
}

int nullity_contribution(const BasicBlock& block, std::int64_t m, const PrecisionBudget& budget) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 1");
    auto closes_up = [&](const Angle& theta) {
        return is_integer(theta.over_pi() * CertifiedReal(Rational(m, 2)), budget);
    };
    return std::visit(overloaded{
                          [&](const N1Block& n) {
                              int kernel = n.b == BClass::zero ? 2 : 1;
                              if (n.eigenvalue == 1) return kernel;
                              return m % 2 == 0 ? kernel : 0;
                          },
                          [](const DBlock&) { return 0; },
                          [&](const RBlock& r) { return closes_up(r.theta) ? 2 : 0; },
                          [&](const N2Block& n) { return closes_up(n.theta) ? 2 : 0; },
                      },
                      block);
}

int elliptic_height(const BlockList& blocks) {
    int height = 0;
    for (const auto& b : blocks)
        height += std::visit(overloaded{
                                 [](const N1Block&) { return 2; },
                                 [](const DBlock&) { return 0; },
                                 [](const RBlock&) { return 2; },
                                 [](const N2Block&) { return 4; },
                             },
                             b);
    return height;
}

namespace {

using BigFloat = boost::multiprecision::cpp_dec_float_100;

BigFloat to_big_float(const Rational& x) {
    return BigFloat(boost::multiprecision::numerator(x)) / BigFloat(boost::multiprecision::denominator(x));
}

Rational to_rational(const BigFloat& x, int places) {
    BigFloat scaled = x * boost::multiprecision::pow(BigFloat(10), places);
    Integer rounded{BigFloat(boost::multiprecision::round(scaled)).str(0, std::ios_base::fixed)};
    return Rational(rounded) * pow10(-places);
}

// θ/π = arccos(half_trace)/π in (0,1).
CertifiedReal arccos_over_pi(const CertifiedReal& half_trace) {
    if (half_trace.is_exact()) {
        const Rational& h = half_trace.exact();
        if (h == 0) return CertifiedReal(Rational(1, 2));
        if (h == Rational(1, 2)) return CertifiedReal(Rational(1, 3));
        if (h == Rational(-1, 2)) return CertifiedReal(Rational(2, 3));
    }
    constexpr int kPlaces = 80;
    const Rational slack = pow10(-(kPlaces - 5));
    const BigFloat pi = boost::math::constants::pi<BigFloat>();
    // arccos is decreasing: the upper half-trace gives the lower angle.
    Rational lo = to_rational(boost::multiprecision::acos(to_big_float(half_trace.upper())) / pi, kPlaces) - slack;
    Rational hi = to_rational(boost::multiprecision::acos(to_big_float(half_trace.lower())) / pi, kPlaces) + slack;
    // A rational cosine outside {0, ±1/2} has an irrational angle/π (Niven).
    return CertifiedReal::interval(lo, hi, half_trace.is_exact(), kPlaces - 5);
}

}  // namespace

BasicBlock classify_2x2(const std::array<CertifiedReal, 4>& m, const PrecisionBudget& budget) {
    const auto& [a, b, c, d] = m;
    CertifiedReal det = a * d - b * c;
    if (det.is_exact() ? det.exact() != 1 : (det.lower() > 1 || det.upper() < 1))
        throw Error(ErrorCode::Precondition, "matrix is not symplectic: det = " + det.to_string());
    CertifiedReal trace = a + d;
    int regime = 0;
    try {
        regime = compare(abs(trace, budget), kTwo, budget);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PrecisionInsufficient) throw;
        throw Error(ErrorCode::UnresolvedSpectrum, "cannot compare |trace| with 2 for trace " + trace.to_string());
    }
    if (regime > 0) {
        CertifiedReal root = sqrt(trace * trace - CertifiedReal(Rational(4)), budget);
        CertifiedReal lambda = sign(trace, budget) > 0 ? (trace + root) / kTwo : (trace - root) / kTwo;
        return DBlock{lambda};
    }
    if (regime < 0) {
        CertifiedReal x = arccos_over_pi(trace / kTwo);
        int orientation = 0;
        try {
            orientation = sign(c, budget);
        } catch (const Error&) {
            throw Error(ErrorCode::UnresolvedSpectrum, "cannot certify the sign of the lower-left entry");
        }
        return RBlock{Angle(orientation > 0 ? x : kTwo - x, budget)};
    }
    int lambda = sign(trace, budget) > 0 ? 1 : -1;
    CertifiedReal lam{Rational(lambda)};
    CertifiedReal upper = b / lam;
    CertifiedReal lower = c / lam;
    CertifiedReal diag = a / lam - kOne;
    auto is_zero = [&](const CertifiedReal& v) { return v.is_exact() && v.exact() == 0; };
    if (is_zero(upper) && is_zero(lower) && is_zero(diag)) return N1Block{lambda, BClass::zero};
    int s = 0;
    try {
        s = !is_zero(upper) ? lambda * sign(upper, budget) : -lambda * sign(lower, budget);
    } catch (const Error&) {
        throw Error(ErrorCode::UnresolvedSpectrum, "cannot certify the nilpotent part's sign");
    }
    return N1Block{lambda, s > 0 ? BClass::positive : BClass::negative};
}

std::string describe(const BasicBlock& block) {
    auto b_name = [](BClass b) {
        switch (b) {
        case BClass::positive: return "positive";
        case BClass::zero: return "zero";
        case BClass::negative: return "negative";
        }
        return "?";
    };
    return std::visit(overloaded{
                          [&](const N1Block& n) {
                              return "N1(" + std::to_string(n.eigenvalue) + ", " + b_name(n.b) + ")";
                          },
                          [](const DBlock& dblock) { return "D(" + dblock.lambda.to_string() + ")"; },
                          [](const RBlock& r) { return "R(pi*" + r.theta.over_pi().to_string() + ")"; },
                          [](const N2Block& n) {
                              return "N2(pi*" + n.theta.over_pi().to_string() + ", " +
                                     (n.kind == N2Kind::trivial ? "trivial" : "nontrivial") + ")";
                          },
                      },
                      block);
}

}  // namespace geoindex

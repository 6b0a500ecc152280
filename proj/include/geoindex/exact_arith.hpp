#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "geoindex/error.hpp"

namespace geoindex {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// --- plain rational helpers -------------------------------------------------

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
Rational pow10(int exponent);

// Accepts "p", "p/q" and terminating decimals "d.ddd" (all exact).
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& x);

// Narrowing with an overflow check; throws Error(Range).
std::int64_t to_int64(const Integer& x);

// --- precision budget -------------------------------------------------------

struct PrecisionBudget {
    int max_digits = 200;
    int refine_step = 50;

    // Default budget, with max_digits overridden by GEOINDEX_PRECISION when set.
    static PrecisionBudget from_env();
};

// --- certified reals ------------------------------------------------------

/// A real number known either exactly (a rational) or through a closed
/// interval with rational endpoints.
///
/// Interval values may carry a refiner that recomputes the enclosure at a
/// higher decimal precision. Values parsed from text have no refiner: their
/// precision is whatever the input supplied. `declared_irrational` is a
/// promise made by the producer of the value; it is never inferred.
class CertifiedReal {
public:
    using Refiner = std::function<CertifiedReal(int digits)>;

    CertifiedReal() = default;
    CertifiedReal(const Rational& value);  // NOLINT: implicit on purpose
    CertifiedReal(long long value) : CertifiedReal(Rational(value)) {}  // NOLINT

    static CertifiedReal rational(const Integer& p, const Integer& q);

    /// Interval [lo, hi]. `digits` is the precision level the interval
    /// represents (radius roughly 10^-digits).
    static CertifiedReal interval(Rational lo, Rational hi, bool irrational, int digits,
                                  std::shared_ptr<const Refiner> refiner = nullptr);

    /// Decimal `digits` ± radius. Radius must be < 1/2.
    static CertifiedReal decimal(std::string_view digits, const Rational& radius,
                                 bool irrational);

    /// Parses "p/q", "p", "d.ddd" (exact), "d.ddd~k" (radius 10^-k) or
    /// "a+b*sqrt(c)" (refinable, see quadratic).
    /// With `irrational` set and no "~k", the radius is one unit in the
    /// last written digit.
    static CertifiedReal parse(std::string_view text, bool irrational = false);

    /// a + b*sqrt(c) for rationals with c >= 0, refinable to any precision.
    /// Declared irrational when b != 0 and c is not a rational square.
    /// Prints back as "a+b*sqrt(c)".
    static CertifiedReal quadratic(const Rational& a, const Rational& b, const Rational& c);

    bool is_exact() const noexcept { return exact_; }
    const Rational& exact() const;
    const Rational& lower() const noexcept { return lo_; }
    const Rational& upper() const noexcept { return hi_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    Rational radius() const { return (hi_ - lo_) / 2; }
    bool declared_irrational() const noexcept { return irrational_; }
    int digits() const noexcept { return digits_; }
    bool refinable() const noexcept { return exact_ || refiner_ != nullptr; }

    /// Same number at (at least) `digits` decimal digits. Exact values and
    /// values without a refiner are returned unchanged.
    CertifiedReal refined(int digits) const;

    double approx() const;
    /// Upper bound on |approx() - true value|, including double rounding.
    double approx_error() const;

    /// True if both represent the same declared number: equal exact
    /// rationals, or interval values with identical endpoints and flags.
    bool same_as(const CertifiedReal& other) const;

    /// Exact rationals as "p/q"; parsed decimals echo their input form;
    /// derived intervals as an enclosing "d.ddd~k".
    std::string to_string() const;

    CertifiedReal operator-() const;
    friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
    friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);

private:
    bool exact_ = true;
    Rational lo_{0};
    Rational hi_{0};
    bool irrational_ = false;
    int digits_ = 0;
    std::string text_;
    std::shared_ptr<const Refiner> refiner_;
};

CertifiedReal abs(const CertifiedReal& x, const PrecisionBudget& budget = {});
CertifiedReal sqrt(const CertifiedReal& x, const PrecisionBudget& budget = {});

/// Runs `decide` on x, refining x until it returns a value or the budget is
/// spent; then throws Error(PrecisionInsufficient) naming `what`.
template <class Decide>
auto decide_refining(const CertifiedReal& x, const PrecisionBudget& budget, const char* what,
                     Decide decide) -> typename std::invoke_result_t<Decide, const CertifiedReal&>::value_type;

/// Sign of x in {-1, 0, 1}; 0 only for certified zero.
int sign(const CertifiedReal& x, const PrecisionBudget& budget = {});
/// Sign of a - b.
int compare(const CertifiedReal& a, const CertifiedReal& b, const PrecisionBudget& budget = {});

Integer ceil_E(const CertifiedReal& x, const PrecisionBudget& budget = {});
Integer floor_of(const CertifiedReal& x, const PrecisionBudget& budget = {});
int phi(const CertifiedReal& x, const PrecisionBudget& budget = {});
CertifiedReal frac(const CertifiedReal& x, const PrecisionBudget& budget = {});

/// 0 if {x} < eps, 1 if 1 - {x} < eps, nullopt if neither (all certified).
std::optional<int> near_vertex(const CertifiedReal& x, const Rational& eps,
                               const PrecisionBudget& budget = {});

// --- template implementation ------------------------------------------------

template <class Decide>
auto decide_refining(const CertifiedReal& x, const PrecisionBudget& budget, const char* what,
                     Decide decide) -> typename std::invoke_result_t<Decide, const CertifiedReal&>::value_type {
    CertifiedReal current = x;
    for (;;) {
        if (auto result = decide(current)) return *result;
        if (current.is_exact() || !current.refinable() || current.digits() >= budget.max_digits)
            break;
        int next = current.digits() + budget.refine_step;
        if (next > budget.max_digits) next = budget.max_digits;
        current = current.refined(next);
    }
    throw Error(ErrorCode::PrecisionInsufficient,
                std::string(what) + ": undecidable for " + x.to_string() + " within " +
                    std::to_string(budget.max_digits) + " digits");
}

}  // namespace geoindex

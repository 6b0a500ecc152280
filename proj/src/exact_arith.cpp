#include "geoindex/exact_arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace geoindex {

namespace mp = boost::multiprecision;

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorCode::UnresolvedSpectrum: return "UnresolvedSpectrum";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Range: return "Range";
    case ErrorCode::ZeroMeanIndex: return "ZeroMeanIndex";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::ScaleMismatch: return "ScaleMismatch";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::TruncationUnsound: return "TruncationUnsound";
    case ErrorCode::JumpBoundsViolation: return "JumpBoundsViolation";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Admissibility: return "Admissibility";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

// --- plain rational helpers -------------------------------------------------

Integer floor_of(const Rational& x) {
    const Integer& p = mp::numerator(x);
    const Integer& q = mp::denominator(x);
    Integer quotient = p / q;  // truncates toward zero
    if (p < 0 && quotient * q != p) quotient -= 1;
    return quotient;
}

Integer ceil_of(const Rational& x) { return -floor_of(Rational(-x)); }

Rational pow10(int exponent) {
    Integer ten_pow = mp::pow(Integer(10), static_cast<unsigned>(std::abs(exponent)));
    return exponent >= 0 ? Rational(ten_pow) : Rational(Integer(1), ten_pow);
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// cpp_int reads a leading 0 as an octal prefix
Integer decimal_digits(std::string_view s) {
    auto first = s.find_first_not_of('0');
    return first == std::string_view::npos ? Integer(0) : Integer(std::string(s.substr(first)));
}

Integer parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw Error(ErrorCode::InvalidArgument, "not an integer: '" + std::string(s) + "'");
    Integer value = decimal_digits(s);
    return negative ? Integer(-value) : value;
}

struct DecimalParts {
    Rational value;
    int fraction_digits = 0;
};

DecimalParts parse_decimal(std::string_view s) {
    std::string_view body = s;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    auto dot = body.find('.');
    std::string_view whole = body.substr(0, dot);
    std::string_view fraction = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (whole.empty() || !all_digits(whole) || (dot != std::string_view::npos && !all_digits(fraction)))
        throw Error(ErrorCode::InvalidArgument, "malformed decimal: '" + std::string(s) + "'");
    Integer mantissa = decimal_digits(std::string(whole) + std::string(fraction));
    DecimalParts parts;
    parts.fraction_digits = static_cast<int>(fraction.size());
    parts.value = Rational(mantissa) * pow10(-parts.fraction_digits);
    if (negative) parts.value = -parts.value;
    return parts;
}

// sqrt(c) lies in [lo, hi], both with denominator q*10^digits.
std::pair<Rational, Rational> sqrt_enclosure(const Rational& c, int digits) {
    const Integer& p = mp::numerator(c);
    const Integer& q = mp::denominator(c);
    Integer scale = mp::pow(Integer(10), static_cast<unsigned>(digits));
    Integer radicand = p * q * scale * scale;
    Integer root = mp::sqrt(radicand);
    Rational denom = Rational(q * scale);
    if (root * root == radicand) {
        Rational exact = Rational(root) / denom;
        return {exact, exact};
    }
    return {Rational(root) / denom, Rational(root + 1) / denom};
}

std::optional<Rational> exact_sqrt(const Rational& c) {
    if (c < 0) return std::nullopt;
    Integer p = mp::numerator(c);
    Integer q = mp::denominator(c);
    Integer rp = mp::sqrt(p);
    Integer rq = mp::sqrt(q);
    if (rp * rp == p && rq * rq == q) return Rational(rp, rq);
    return std::nullopt;
}

double to_double(const Rational& r) {
    Integer p = mp::numerator(r);
    if (p == 0) return 0.0;
    const Integer& q = mp::denominator(r);
    Integer magnitude = mp::abs(p);
    long shift = 64 + static_cast<long>(mp::msb(q)) - static_cast<long>(mp::msb(magnitude));
    Integer quotient = shift >= 0 ? Integer((magnitude << shift) / q) : Integer(magnitude / (q << -shift));
    double value = std::ldexp(quotient.convert_to<double>(), static_cast<int>(-shift));
    return p < 0 ? -value : value;
}

// "d.ddd" with exactly `places` fractional digits, rounded to nearest.
std::string format_decimal(const Rational& x, int places) {
    Rational scaled = x * pow10(places);
    Integer rounded = floor_of(Rational(scaled + Rational(1, 2)));
    bool negative = rounded < 0;
    std::string digits = Integer(mp::abs(rounded)).str();
    if (places > 0) {
        if (static_cast<int>(digits.size()) <= places)
            digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return negative ? "-" + digits : digits;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        Integer p = parse_integer(text.substr(0, slash));
        Integer q = parse_integer(text.substr(slash + 1));
        if (q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
        return Rational(p, q);
    }
    return parse_decimal(text).value;
}

std::string to_string(const Rational& x) {
    if (mp::denominator(x) == 1) return mp::numerator(x).str();
    return mp::numerator(x).str() + "/" + mp::denominator(x).str();
}

std::int64_t to_int64(const Integer& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorCode::Range, "integer out of 64-bit range: " + x.str());
    return x.convert_to<std::int64_t>();
}

PrecisionBudget PrecisionBudget::from_env() {
    PrecisionBudget budget;
    if (const char* env = std::getenv("GEOINDEX_PRECISION")) {
        char* end = nullptr;
        long digits = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || digits <= 0 || digits > 100000)
            throw Error(ErrorCode::InvalidArgument, std::string("bad GEOINDEX_PRECISION: ") + env);
        budget.max_digits = static_cast<int>(digits);
    }
    return budget;
}

// --- CertifiedReal ----------------------------------------------------------

CertifiedReal::CertifiedReal(const Rational& value) : exact_(true), lo_(value), hi_(value) {}

CertifiedReal CertifiedReal::rational(const Integer& p, const Integer& q) {
    if (q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    return CertifiedReal(Rational(p, q));
}

CertifiedReal CertifiedReal::interval(Rational lo, Rational hi, bool irrational, int digits,
                                      std::shared_ptr<const Refiner> refiner) {
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
    if (lo == hi && !irrational) return CertifiedReal(lo);
    CertifiedReal x;
    x.exact_ = false;
    x.lo_ = std::move(lo);
    x.hi_ = std::move(hi);
    x.irrational_ = irrational;
    x.digits_ = digits;
    x.refiner_ = std::move(refiner);
    return x;
}

namespace {

// "a+b*sqrt(c)" or "a-b*sqrt(c)" with rationals a, b, c (no spaces).
CertifiedReal parse_quadratic(std::string_view text) {
    auto bad = [&]() {
        return Error(ErrorCode::InvalidArgument, "malformed quadratic '" + std::string(text) + "', expected a+b*sqrt(c)");
    };
    auto open = text.find("*sqrt(");
    if (open == std::string_view::npos || text.back() != ')') throw bad();
    std::string_view head = text.substr(0, open);
    std::string_view radicand = text.substr(open + 6, text.size() - open - 7);
    auto split = head.find_last_of("+-");
    if (split == std::string_view::npos || split == 0) throw bad();
    Rational a = parse_rational(head.substr(0, split));
    Rational b = parse_rational(head.substr(split + 1));
    if (head[split] == '-') b = -b;
    return CertifiedReal::quadratic(a, b, parse_rational(radicand));
}

}  // namespace

CertifiedReal CertifiedReal::decimal(std::string_view digits, const Rational& radius, bool irrational) {
    if (radius < 0 || radius >= Rational(1, 2))
        throw Error(ErrorCode::Range, "decimal radius must lie in [0, 1/2)");
    DecimalParts parts = parse_decimal(digits);
    if (radius == 0) {
        if (irrational) throw Error(ErrorCode::InvalidArgument, "an exact decimal cannot be irrational");
        return CertifiedReal(parts.value);
    }
    int level = 0;
    while (level < 10000 && pow10(-(level + 1)) >= radius) ++level;
    CertifiedReal x = interval(parts.value - radius, parts.value + radius, irrational, level);
    x.text_ = std::string(digits);
    return x;
}

CertifiedReal CertifiedReal::parse(std::string_view text, bool irrational) {
    if (text.find("sqrt(") != std::string_view::npos) {
        CertifiedReal x = parse_quadratic(text);
        if (irrational && !x.declared_irrational())
            throw Error(ErrorCode::InvalidArgument, "'" + std::string(text) + "' is rational, not irrational");
        return x;
    }
    if (text.find('/') != std::string_view::npos) {
        if (irrational) throw Error(ErrorCode::InvalidArgument, "'" + std::string(text) + "' is a rational, not irrational");
        return CertifiedReal(parse_rational(text));
    }
    auto tilde = text.find('~');
    if (tilde != std::string_view::npos) {
        std::string_view body = text.substr(0, tilde);
        std::string_view places = text.substr(tilde + 1);
        if (!all_digits(places)) throw Error(ErrorCode::InvalidArgument, "malformed digit count in '" + std::string(text) + "'");
        int k = std::stoi(std::string(places));
        if (k < 1) throw Error(ErrorCode::Range, "digit count must be >= 1 in '" + std::string(text) + "'");
        CertifiedReal x = decimal(body, pow10(-k), irrational);
        x.text_ = std::string(text);
        x.digits_ = k;
        return x;
    }
    DecimalParts parts = parse_decimal(text);
    if (!irrational) return CertifiedReal(parts.value);
    if (parts.fraction_digits == 0)
        throw Error(ErrorCode::InvalidArgument, "an integer cannot be irrational: '" + std::string(text) + "'");
    CertifiedReal x = decimal(text, pow10(-parts.fraction_digits), true);
    x.text_ = std::string(text);
    x.digits_ = parts.fraction_digits;
    return x;
}

CertifiedReal CertifiedReal::quadratic(const Rational& a, const Rational& b, const Rational& c) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "quadratic: negative radicand");
    if (b == 0) return CertifiedReal(a);
    if (auto root = exact_sqrt(c)) return CertifiedReal(Rational(a + b * *root));
    auto make = std::make_shared<Refiner>();
    *make = [a, b, c, self = std::weak_ptr<Refiner>(make)](int digits) {
        auto [s_lo, s_hi] = sqrt_enclosure(c, digits + 2);
        Rational lo = a + b * (b > 0 ? s_lo : s_hi);
        Rational hi = a + b * (b > 0 ? s_hi : s_lo);
        return CertifiedReal::interval(lo, hi, true, digits, self.lock());
    };
    std::shared_ptr<const Refiner> refiner = make;
    CertifiedReal x = (*refiner)(40);
    // weak_ptr avoids a cycle; keep the closure alive through the value.
    x.refiner_ = refiner;
    x.text_ = geoindex::to_string(a) + (b < 0 ? "-" : "+") + geoindex::to_string(b < 0 ? Rational(-b) : b) + "*sqrt(" +
              geoindex::to_string(c) + ")";
    return x;
}

const Rational& CertifiedReal::exact() const {
    if (!exact_) throw Error(ErrorCode::InvalidArgument, "value is not an exact rational: " + to_string());
    return lo_;
}

CertifiedReal CertifiedReal::refined(int digits) const {
    if (exact_ || !refiner_ || digits <= digits_) return *this;
    CertifiedReal result = (*refiner_)(digits);
    if (!result.refiner_) result.refiner_ = refiner_;
    if (result.text_.empty()) result.text_ = text_;
    return result;
}

double CertifiedReal::approx() const { return to_double(exact_ ? lo_ : midpoint()); }

double CertifiedReal::approx_error() const {
    double value = approx();
    double rounding = std::abs(value) * 0x1p-50 + std::numeric_limits<double>::denorm_min();
    if (exact_) return rounding;
    return to_double(radius()) * (1.0 + 0x1p-50) + rounding;
}

bool CertifiedReal::same_as(const CertifiedReal& other) const {
    return exact_ == other.exact_ && lo_ == other.lo_ && hi_ == other.hi_ &&
           irrational_ == other.irrational_;
}

std::string CertifiedReal::to_string() const {
    if (exact_) return geoindex::to_string(lo_);
    if (!text_.empty()) return text_;
    Rational r = radius();
    Rational slack(995, 1000);
    if (r > slack) return "[" + geoindex::to_string(lo_) + ", " + geoindex::to_string(hi_) + "]";
    int k = 0;
    while (k < 10000 && r <= slack * pow10(-(k + 1))) ++k;
    return format_decimal(midpoint(), k + 2) + "~" + std::to_string(k);
}

namespace {

using RefinerPtr = std::shared_ptr<const CertifiedReal::Refiner>;

int combined_digits(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.is_exact()) return b.digits();
    if (b.is_exact()) return a.digits();
    return std::min(a.digits(), b.digits());
}

template <class Op>
RefinerPtr compose(const CertifiedReal& a, const CertifiedReal& b, Op op) {
    if (!a.refinable() || !b.refinable()) return nullptr;
    return std::make_shared<const CertifiedReal::Refiner>(
        [a, b, op](int digits) { return op(a.refined(digits + 5), b.refined(digits + 5)); });
}

// Irrationality survives adding a rational or scaling by a nonzero rational;
// anything involving two non-exact operands is left undeclared.
bool sum_irrational(const CertifiedReal& a, const CertifiedReal& b) {
    return (a.is_exact() && b.declared_irrational()) || (b.is_exact() && a.declared_irrational());
}

bool product_irrational(const CertifiedReal& a, const CertifiedReal& b) {
    return (a.is_exact() && a.exact() != 0 && b.declared_irrational()) ||
           (b.is_exact() && b.exact() != 0 && a.declared_irrational());
}

}  // namespace

CertifiedReal CertifiedReal::operator-() const {
    if (exact_) return CertifiedReal(Rational(-lo_));
    RefinerPtr refiner;
    if (refiner_) {
        CertifiedReal self = *this;
        refiner = std::make_shared<const Refiner>([self](int d) { return -self.refined(d); });
    }
    CertifiedReal x = interval(-hi_, -lo_, irrational_, digits_, refiner);
    return x;
}

CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.is_exact() && b.is_exact()) return CertifiedReal(Rational(a.lo_ + b.lo_));
    auto refiner = compose(a, b, [](const CertifiedReal& x, const CertifiedReal& y) { return x + y; });
    return CertifiedReal::interval(a.lo_ + b.lo_, a.hi_ + b.hi_, sum_irrational(a, b),
                                   combined_digits(a, b), refiner);
}

CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) { return a + (-b); }

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    if (a.is_exact() && b.is_exact()) return CertifiedReal(Rational(a.lo_ * b.lo_));
    if (a.is_exact() && a.lo_ == 0) return CertifiedReal(Rational(0));
    if (b.is_exact() && b.lo_ == 0) return CertifiedReal(Rational(0));
    Rational products[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    auto [lo, hi] = std::minmax_element(std::begin(products), std::end(products));
    auto refiner = compose(a, b, [](const CertifiedReal& x, const CertifiedReal& y) { return x * y; });
    return CertifiedReal::interval(*lo, *hi, product_irrational(a, b), combined_digits(a, b), refiner);
}

CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
    int divisor_sign = sign(b);
    if (divisor_sign == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
    CertifiedReal d = b;
    if (!d.is_exact() && (d.lo_.sign() != d.hi_.sign() || d.lo_ == 0 || d.hi_ == 0)) {
        // sign() certified through refinement; use the refined enclosure.
        d = decide_refining(b, PrecisionBudget{}, "division",
                            [](const CertifiedReal& x) -> std::optional<CertifiedReal> {
                                if (x.is_exact() || (x.lower() > 0) || (x.upper() < 0)) return x;
                                return std::nullopt;
                            });
    }
    if (d.is_exact()) {
        Rational inv = Rational(1) / d.lo_;
        return a * CertifiedReal(inv);
    }
    CertifiedReal reciprocal = CertifiedReal::interval(
        Rational(1) / d.hi_, Rational(1) / d.lo_, d.irrational_, d.digits_,
        d.refiner_ ? std::make_shared<const CertifiedReal::Refiner>(
                         [d](int digits) { return CertifiedReal(Rational(1)) / d.refined(digits + 5); })
                   : nullptr);
    return a * reciprocal;
}

CertifiedReal abs(const CertifiedReal& x, const PrecisionBudget& budget) {
    return sign(x, budget) < 0 ? -x : x;
}

CertifiedReal sqrt(const CertifiedReal& x, const PrecisionBudget& budget) {
    int s = sign(x, budget);
    if (s < 0) throw Error(ErrorCode::InvalidArgument, "sqrt of a negative value");
    if (x.is_exact()) return CertifiedReal::quadratic(0, 1, x.exact());
    auto make = std::make_shared<CertifiedReal::Refiner>();
    *make = [x, self = std::weak_ptr<CertifiedReal::Refiner>(make)](int digits) {
        CertifiedReal base = x.refined(digits + 5);
        Rational lo = base.lower() > 0 ? sqrt_enclosure(base.lower(), digits + 2).first : Rational(0);
        Rational hi = sqrt_enclosure(base.upper(), digits + 2).second;
        return CertifiedReal::interval(lo, hi, false, std::max(digits, base.digits()),
                                       x.refinable() ? self.lock() : nullptr);
    };
    std::shared_ptr<const CertifiedReal::Refiner> refiner = make;
    CertifiedReal result = (*refiner)(std::max(x.digits(), 20));
    return x.refinable() ? CertifiedReal::interval(result.lower(), result.upper(), false, result.digits(), refiner)
                         : result;
}

// --- certified decisions ------------------------------------------------

namespace {

std::optional<Integer> try_floor(const CertifiedReal& x) {
    if (x.is_exact()) return floor_of(x.exact());
    Integer k = floor_of(x.lower());
    Rational next = Rational(k + 1);
    if (x.upper() < next || (x.declared_irrational() && x.upper() == next)) return k;
    return std::nullopt;
}

std::optional<Integer> try_ceil(const CertifiedReal& x) {
    if (x.is_exact()) return ceil_of(x.exact());
    Integer k = ceil_of(x.upper());
    Rational prev = Rational(k - 1);
    if (x.lower() > prev || (x.declared_irrational() && x.lower() == prev)) return k;
    return std::nullopt;
}

std::optional<int> try_sign(const CertifiedReal& x) {
    if (x.is_exact()) return x.exact().sign();
    if (x.lower() > 0 || (x.declared_irrational() && x.lower() == 0)) return 1;
    if (x.upper() < 0 || (x.declared_irrational() && x.upper() == 0)) return -1;
    return std::nullopt;
}

}  // namespace

int sign(const CertifiedReal& x, const PrecisionBudget& budget) {
    return decide_refining(x, budget, "sign", try_sign);
}

int compare(const CertifiedReal& a, const CertifiedReal& b, const PrecisionBudget& budget) {
    if (a.same_as(b)) return 0;
    return sign(a - b, budget);
}

Integer ceil_E(const CertifiedReal& x, const PrecisionBudget& budget) {
    return decide_refining(x, budget, "E", try_ceil);
}

Integer floor_of(const CertifiedReal& x, const PrecisionBudget& budget) {
    return decide_refining(x, budget, "floor", try_floor);
}

int phi(const CertifiedReal& x, const PrecisionBudget& budget) {
    return decide_refining(x, budget, "phi", [](const CertifiedReal& cur) -> std::optional<int> {
        auto f = try_floor(cur);
        auto c = try_ceil(cur);
        if (!f || !c) return std::nullopt;
        return static_cast<int>(*c - *f);
    });
}

CertifiedReal frac(const CertifiedReal& x, const PrecisionBudget& budget) {
    Integer k = floor_of(x, budget);
    return x - CertifiedReal(Rational(k));
}

std::optional<int> near_vertex(const CertifiedReal& x, const Rational& eps, const PrecisionBudget& budget) {
    constexpr int kNone = -1;
    int code = decide_refining(x, budget, "near_vertex", [&eps](const CertifiedReal& cur) -> std::optional<int> {
        auto k = try_floor(cur);
        if (!k) return std::nullopt;
        Rational f_lo = cur.lower() - Rational(*k);
        Rational f_hi = cur.upper() - Rational(*k);
        bool strict = !cur.declared_irrational() || cur.is_exact();
        auto below = [strict](const Rational& a, const Rational& b) { return strict ? a < b : a <= b; };
        if (below(f_hi, eps)) return 0;
        if (below(Rational(1) - f_lo, eps)) return 1;
        if (f_lo >= eps && Rational(1) - f_hi >= eps) return kNone;
        return std::nullopt;
    });
    if (code == kNone) return std::nullopt;
    return code;
}

}  // namespace geoindex

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace multgame {

/// Raised for malformed inputs anywhere in the library (bad domains, bad
/// strategy specs, out-of-range numbers). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Absolute tolerance for interval endpoint comparisons and merging.
inline constexpr double kTolerance = 1e-12;

enum class Domain {
    Mantissa,  // [1,10)
    Log,       // [0,1)
};

enum class MeasureKind {
    Benford,
    Lebesgue,
};

const char* to_string(Domain d);
Domain domain_from_string(const std::string& s);

double domain_lo(Domain d);
double domain_hi(Domain d);

/// Half-open interval [lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x < hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of disjoint half-open intervals on one of the two game
/// domains. Parts are sorted, pairwise disjoint, and separated by gaps larger
/// than kTolerance. The empty set is valid.
class IntervalUnion {
public:
    explicit IntervalUnion(Domain domain = Domain::Mantissa) : domain_(domain) {}

    Domain domain() const { return domain_; }
    std::span<const Interval> parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    bool contains(double x) const;

    /// True when both sets have the same number of parts and every endpoint
    /// agrees within `tol`.
    bool approx_equal(const IntervalUnion& other, double tol = 1e-9) const;

    friend IntervalUnion canonicalize(std::vector<Interval> intervals, Domain domain);

private:
    Domain domain_;
    std::vector<Interval> parts_;
};

IntervalUnion canonicalize(std::vector<Interval> intervals, Domain domain);

IntervalUnion full_domain(Domain d);

/// Digit shorthand: {1,2,3} -> [1,4); {2,3,5,7} -> [2,4) u [5,6) u [7,8).
IntervalUnion from_leading_digits(std::span<const int> digits);

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion complement(const IntervalUnion& a);

double benford_measure(const IntervalUnion& s);
double lebesgue_measure(const IntervalUnion& s);
double measure(const IntervalUnion& s, MeasureKind kind);

IntervalUnion to_log(const IntervalUnion& s);
IntervalUnion to_mantissa(const IntervalUnion& s);

/// {(z + shift) mod 1 : z in s}; shift in [0,1).
IntervalUnion translate_mod1(const IntervalUnion& s, double shift);

/// {x in [1,10) : mantissa(x*y) in s}; y in [1,10). Preserves Benford measure.
IntervalUnion scale_mod_group(const IntervalUnion& s, double y);

/// Mantissa of a positive real: the representative in [1,10).
double mantissa_of(double x);

nlohmann::json to_json(const IntervalUnion& s);

/// Accepts {"domain":..., "parts":[[lo,hi],...]} or {"digits":[...]}.
IntervalUnion interval_union_from_json(const nlohmann::json& j);

/// Parses "1:4,5:6" into a mantissa-domain set.
IntervalUnion parse_intervals(const std::string& text);

/// Parses "1,2,3" into the digit shorthand set.
IntervalUnion parse_digits(const std::string& text);

std::string describe(const IntervalUnion& s);

}  // namespace multgame

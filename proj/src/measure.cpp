#include "multgame/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace multgame {

namespace {

// Sort, merge and drop slivers. Assumes endpoints are already inside the domain.
std::vector<Interval> normalize(std::vector<Interval> v, Domain d) {
    const double dlo = domain_lo(d);
    const double dhi = domain_hi(d);
    for (auto& iv : v) {
        iv.lo = std::clamp(iv.lo, dlo, dhi);
        iv.hi = std::clamp(iv.hi, dlo, dhi);
        if (std::abs(iv.lo - dlo) <= kTolerance) iv.lo = dlo;
        if (std::abs(iv.hi - dhi) <= kTolerance) iv.hi = dhi;
    }
    std::erase_if(v, [](const Interval& iv) { return iv.hi - iv.lo <= kTolerance; });
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    out.reserve(v.size());
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + kTolerance) {
            out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

IntervalUnion make(std::vector<Interval> v, Domain d) {
    // Internal results may contain slivers from floating-point noise; bypass
    // the strict lo < hi validation by normalizing first.
    return canonicalize(normalize(std::move(v), d), d);
}

void require_domain(const IntervalUnion& s, Domain d, const char* op) {
    if (s.domain() != d) {
        throw ValidationError(std::string(op) + ": expected " + to_string(d) +
                              " domain, got " + to_string(s.domain()));
    }
}

}  // namespace

const char* to_string(Domain d) {
    return d == Domain::Mantissa ? "mantissa" : "log";
}

Domain domain_from_string(const std::string& s) {
    if (s == "mantissa") return Domain::Mantissa;
    if (s == "log") return Domain::Log;
    throw ValidationError("unknown domain '" + s + "'");
}

double domain_lo(Domain d) { return d == Domain::Mantissa ? 1.0 : 0.0; }
double domain_hi(Domain d) { return d == Domain::Mantissa ? 10.0 : 1.0; }

bool IntervalUnion::contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
}

bool IntervalUnion::approx_equal(const IntervalUnion& other, double tol) const {
    if (domain_ != other.domain_ || parts_.size() != other.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (std::abs(parts_[i].lo - other.parts_[i].lo) > tol ||
            std::abs(parts_[i].hi - other.parts_[i].hi) > tol) {
            return false;
        }
    }
    return true;
}

IntervalUnion canonicalize(std::vector<Interval> intervals, Domain domain) {
    const double dlo = domain_lo(domain);
    const double dhi = domain_hi(domain);
    for (const auto& iv : intervals) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
            std::ostringstream os;
            os << "interval [" << iv.lo << "," << iv.hi << ") must satisfy lo < hi";
            throw ValidationError(os.str());
        }
        if (iv.lo < dlo - kTolerance || iv.hi > dhi + kTolerance) {
            std::ostringstream os;
            os << "interval [" << iv.lo << "," << iv.hi << ") lies outside the "
               << to_string(domain) << " domain [" << dlo << "," << dhi << ")";
            throw ValidationError(os.str());
        }
    }
    IntervalUnion out(domain);
    out.parts_ = normalize(std::move(intervals), domain);
    return out;
}

IntervalUnion full_domain(Domain d) {
    return canonicalize({{domain_lo(d), domain_hi(d)}}, d);
}

IntervalUnion from_leading_digits(std::span<const int> digits) {
    std::vector<Interval> parts;
    for (int d : digits) {
        if (d < 1 || d > 9) {
            throw ValidationError("leading digit " + std::to_string(d) + " outside 1..9");
        }
        parts.push_back({static_cast<double>(d), static_cast<double>(d + 1)});
    }
    return canonicalize(std::move(parts), Domain::Mantissa);
}

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
    require_domain(b, a.domain(), "union");
    std::vector<Interval> v(a.parts().begin(), a.parts().end());
    v.insert(v.end(), b.parts().begin(), b.parts().end());
    return make(std::move(v), a.domain());
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
    require_domain(b, a.domain(), "intersect");
    std::vector<Interval> v;
    auto pa = a.parts();
    auto pb = b.parts();
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        const double lo = std::max(pa[i].lo, pb[j].lo);
        const double hi = std::min(pa[i].hi, pb[j].hi);
        if (lo < hi) v.push_back({lo, hi});
        if (pa[i].hi < pb[j].hi) ++i; else ++j;
    }
    return make(std::move(v), a.domain());
}

IntervalUnion complement(const IntervalUnion& a) {
    std::vector<Interval> v;
    double cursor = domain_lo(a.domain());
    for (const auto& iv : a.parts()) {
        if (iv.lo > cursor) v.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < domain_hi(a.domain())) v.push_back({cursor, domain_hi(a.domain())});
    return make(std::move(v), a.domain());
}

double benford_measure(const IntervalUnion& s) {
    require_domain(s, Domain::Mantissa, "benford_measure");
    double total = 0.0;
    for (const auto& iv : s.parts()) total += std::log10(iv.hi) - std::log10(iv.lo);
    return std::clamp(total, 0.0, 1.0);
}

double lebesgue_measure(const IntervalUnion& s) {
    require_domain(s, Domain::Log, "lebesgue_measure");
    double total = 0.0;
    for (const auto& iv : s.parts()) total += iv.hi - iv.lo;
    return std::clamp(total, 0.0, 1.0);
}

double measure(const IntervalUnion& s, MeasureKind kind) {
    return kind == MeasureKind::Benford ? benford_measure(s) : lebesgue_measure(s);
}

IntervalUnion to_log(const IntervalUnion& s) {
    require_domain(s, Domain::Mantissa, "to_log");
    std::vector<Interval> v;
    for (const auto& iv : s.parts()) {
        v.push_back({std::log10(iv.lo), iv.hi == 10.0 ? 1.0 : std::log10(iv.hi)});
    }
    return make(std::move(v), Domain::Log);
}

IntervalUnion to_mantissa(const IntervalUnion& s) {
    require_domain(s, Domain::Log, "to_mantissa");
    std::vector<Interval> v;
    for (const auto& iv : s.parts()) {
        v.push_back({std::pow(10.0, iv.lo), iv.hi == 1.0 ? 10.0 : std::pow(10.0, iv.hi)});
    }
    return make(std::move(v), Domain::Mantissa);
}

IntervalUnion translate_mod1(const IntervalUnion& s, double shift) {
    require_domain(s, Domain::Log, "translate_mod1");
    if (!(shift >= 0.0 && shift < 1.0)) {
        throw ValidationError("translate_mod1: shift must lie in [0,1)");
    }
    std::vector<Interval> v;
    for (const auto& iv : s.parts()) {
        double lo = iv.lo + shift;
        double hi = iv.hi + shift;
        if (lo >= 1.0 - kTolerance) {
            v.push_back({lo - 1.0, hi - 1.0});
        } else if (hi > 1.0 + kTolerance) {
            v.push_back({lo, 1.0});
            v.push_back({0.0, hi - 1.0});
        } else {
            v.push_back({lo, std::min(hi, 1.0)});
        }
    }
    return make(std::move(v), Domain::Log);
}

IntervalUnion scale_mod_group(const IntervalUnion& s, double y) {
    require_domain(s, Domain::Mantissa, "scale_mod_group");
    if (!(y >= 1.0 && y < 10.0)) {
        throw ValidationError("scale_mod_group: y must lie in [1,10)");
    }
    // x*y ranges over [1,100); the mantissa lands in [a,b) iff x*y is in
    // [a,b) or [10a,10b).
    std::vector<Interval> v;
    for (const auto& iv : s.parts()) {
        for (double k : {1.0, 10.0}) {
            const double lo = std::max(1.0, k * iv.lo / y);
            const double hi = std::min(10.0, k * iv.hi / y);
            if (lo < hi) v.push_back({lo, hi});
        }
    }
    return make(std::move(v), Domain::Mantissa);
}

double mantissa_of(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError("mantissa_of: argument must be positive and finite");
    }
    double m = x / std::pow(10.0, std::floor(std::log10(x)));
    while (m >= 10.0) m /= 10.0;
    while (m < 1.0) m *= 10.0;
    return m;
}

nlohmann::json to_json(const IntervalUnion& s) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& iv : s.parts()) parts.push_back({iv.lo, iv.hi});
    return {{"domain", to_string(s.domain())}, {"parts", parts}};
}

IntervalUnion interval_union_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("winning set must be a JSON object");
    try {
        if (j.contains("digits")) {
            auto digits = j.at("digits").get<std::vector<int>>();
            return from_leading_digits(digits);
        }
        const Domain d = domain_from_string(j.value("domain", std::string("mantissa")));
        std::vector<Interval> parts;
        for (const auto& p : j.at("parts")) {
            if (!p.is_array() || p.size() != 2) {
                throw ValidationError("each part must be a [lo, hi] pair");
            }
            parts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return canonicalize(std::move(parts), d);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed winning set: ") + e.what());
    }
}

namespace {

double parse_double(const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ValidationError("not a number: '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace

IntervalUnion parse_intervals(const std::string& text) {
    std::vector<Interval> parts;
    for (const auto& tok : split(text, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw ValidationError("interval '" + tok + "' must look like lo:hi");
        }
        parts.push_back({parse_double(tok.substr(0, colon)), parse_double(tok.substr(colon + 1))});
    }
    if (parts.empty()) throw ValidationError("no intervals given");
    return canonicalize(std::move(parts), Domain::Mantissa);
}

IntervalUnion parse_digits(const std::string& text) {
    std::vector<int> digits;
    for (const auto& tok : split(text, ',')) {
        if (tok.size() != 1 || tok[0] < '1' || tok[0] > '9') {
            throw ValidationError("digit '" + tok + "' must be one of 1..9");
        }
        digits.push_back(tok[0] - '0');
    }
    if (digits.empty()) throw ValidationError("no digits given");
    return from_leading_digits(digits);
}

std::string describe(const IntervalUnion& s) {
    if (s.empty()) return "{}";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& iv : s.parts()) {
        if (!first) os << " u ";
        os << '[' << iv.lo << ',' << iv.hi << ')';
        first = false;
    }
    return os.str();
}

}  // namespace multgame

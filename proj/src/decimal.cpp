#include "multgame/decimal.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace multgame {

namespace {

constexpr std::array<u128, 39> make_pow10() {
    std::array<u128, 39> t{};
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 10;
    return t;
}

constexpr auto kPow10 = make_pow10();

int count_digits(u128 v) {
    int d = 1;
    while (d < 39 && v >= kPow10[d]) ++d;
    return d;
}

}  // namespace

u128 pow10_u128(int k) {
    if (k < 0 || k > 38) throw std::out_of_range("pow10_u128: exponent out of range");
    return kPow10[k];
}

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

Decimal Decimal::from_scaled(u128 significand, int digits) {
    if (digits < 1 || digits > 38) throw ValidationError("decimal digit count must be in 1..38");
    if (significand < kPow10[digits - 1] || significand >= kPow10[digits]) {
        throw ValidationError("significand " + to_string_u128(significand) +
                              " does not have " + std::to_string(digits) + " digits");
    }
    return Decimal(significand, digits);
}

Decimal Decimal::parse(std::string_view text) {
    const auto bad = [&] {
        return ValidationError("'" + std::string(text) +
                               "' is not a decimal number in [1,10)");
    };
    if (text.empty() || text[0] < '1' || text[0] > '9') throw bad();
    u128 sig = static_cast<u128>(text[0] - '0');
    int digits = 1;
    if (text.size() > 1) {
        if (text[1] != '.' || text.size() == 2) throw bad();
        for (char c : text.substr(2)) {
            if (c < '0' || c > '9') throw bad();
            if (++digits > kMaxInputDigits) {
                throw ValidationError("'" + std::string(text) + "' has more than " +
                                      std::to_string(kMaxInputDigits) + " significant digits");
            }
            sig = sig * 10 + static_cast<u128>(c - '0');
        }
    }
    return Decimal(sig, digits);
}

Decimal Decimal::parse_normalized(std::string_view text) {
    const auto bad = [&] {
        return ValidationError("'" + std::string(text) + "' is not a positive decimal number");
    };
    if (text.empty()) throw bad();
    std::string sig;
    bool seen_point = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_point) throw bad();
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            if (!(sig.empty() && c == '0')) sig.push_back(c);
        } else {
            throw bad();
        }
    }
    if (sig.empty()) throw bad();
    if (static_cast<int>(sig.size()) > kMaxInputDigits) {
        throw ValidationError("'" + std::string(text) + "' has more than " +
                              std::to_string(kMaxInputDigits) + " significant digits");
    }
    u128 v = 0;
    for (char c : sig) v = v * 10 + static_cast<u128>(c - '0');
    return Decimal(v, static_cast<int>(sig.size())).canonical();
}

Decimal Decimal::from_double(double x, int digits) {
    if (digits < 1 || digits > kMaxInputDigits) {
        throw ValidationError("digit count must be in 1.." + std::to_string(kMaxInputDigits));
    }
    if (!(x >= 1.0 && x < 10.0)) throw ValidationError("number must lie in [1,10)");
    const long double scaled = std::round(static_cast<long double>(x) *
                                          std::pow(10.0L, digits - 1));
    const auto sig = static_cast<u128>(scaled);
    if (std::abs(static_cast<long double>(x) - scaled / std::pow(10.0L, digits - 1)) > 1e-9L ||
        sig < kPow10[digits - 1] || sig >= kPow10[digits]) {
        throw ValidationError("number is not a " + std::to_string(digits) + "-digit decimal");
    }
    return Decimal(sig, digits);
}

Decimal Decimal::truncate(double x, int digits) {
    if (digits < 1 || digits > kMaxInputDigits) {
        throw ValidationError("digit count must be in 1.." + std::to_string(kMaxInputDigits));
    }
    if (!(x >= 1.0 && x < 10.0)) throw ValidationError("number must lie in [1,10)");
    auto sig = static_cast<u128>(static_cast<long double>(x) * std::pow(10.0L, digits - 1));
    sig = std::clamp(sig, kPow10[digits - 1], kPow10[digits] - 1);
    return Decimal(sig, digits);
}

Decimal Decimal::shortest(double x) {
    if (!(x >= 1.0 && x < 10.0)) throw ValidationError("number must lie in [1,10)");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
    return parse_normalized(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

int Decimal::leading_digit() const {
    return static_cast<int>(significand_ / kPow10[digits_ - 1]);
}

Decimal Decimal::canonical() const {
    u128 s = significand_;
    int d = digits_;
    while (d > 1 && s % 10 == 0) {
        s /= 10;
        --d;
    }
    return Decimal(s, d);
}

std::string Decimal::to_string() const {
    const Decimal c = canonical();
    std::string digits = to_string_u128(c.significand_);
    if (digits.size() == 1) return digits;
    return digits.substr(0, 1) + "." + digits.substr(1);
}

double Decimal::to_double() const {
    // Round-trips through the decimal string for correct rounding.
    return std::stod(to_string());
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    if (a.digits_ == b.digits_) return a.significand_ <=> b.significand_;
    if (a.digits_ < b.digits_) {
        return a.significand_ * kPow10[b.digits_ - a.digits_] <=> b.significand_;
    }
    return a.significand_ <=> b.significand_ * kPow10[a.digits_ - b.digits_];
}

Decimal multiply_mantissa(const Decimal& a, const Decimal& b) {
    const int total = a.digits() + b.digits();
    if (total > 38) throw ValidationError("product exceeds 38 significant digits");
    const u128 p = a.significand() * b.significand();
    return Decimal::from_scaled(p, count_digits(p));
}

ExactWinningSet::ExactWinningSet(const IntervalUnion& w) : source_(w) {
    if (w.domain() != Domain::Mantissa) {
        throw ValidationError("winning set must be in the mantissa domain");
    }
    for (const auto& iv : w.parts()) {
        Part p{Decimal::shortest(iv.lo), Decimal{}, iv.hi >= 10.0};
        if (!p.hi_is_ten) p.hi = Decimal::shortest(iv.hi);
        parts_.push_back(p);
    }
}

bool ExactWinningSet::contains(const Decimal& m) const {
    for (const auto& p : parts_) {
        if (m < p.lo) return false;  // parts are sorted
        if (p.hi_is_ten || m < p.hi) return true;
    }
    return false;
}

}  // namespace multgame

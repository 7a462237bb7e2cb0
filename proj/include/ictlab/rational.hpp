#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ictlab {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Exact rational scalar. Always stored reduced with positive denominator,
/// so equality is structural. Dyadic values (denominator a power of two)
/// round-trip through the canonical "n/2^k" text form; other denominators
/// use plain "n/d". Arithmetic never rounds; overflow past 64 bits throws.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}

    static Rational fraction(long long num, long long den) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        return Rational(normalize(static_cast<__int128>(num), static_cast<__int128>(den)));
    }

    /// num / 2^exp
    static Rational dyadic(long long num, int exp) {
        if (exp < 0 || exp > 62) throw std::invalid_argument("rational: dyadic exponent out of range");
        return fraction(num, 1LL << exp);
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_dyadic() const { return std::has_single_bit(static_cast<unsigned long long>(den_)); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(normalize(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(normalize(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(normalize(i128(a.num_) * b.num_, i128(a.den_) * b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("rational: division by zero");
        return Rational(normalize(i128(a.num_) * b.den_, i128(a.den_) * b.num_));
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// Largest integer <= num/den.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    /// Canonical text: "n/2^k" when the denominator is a power of two
    /// (including integers as "n/2^0"), otherwise reduced "n/d".
    std::string to_string() const {
        if (is_dyadic()) {
            int k = std::countr_zero(static_cast<unsigned long long>(den_));
            return std::to_string(num_) + "/2^" + std::to_string(k);
        }
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses the canonical text form; rejects non-canonical spellings and
    /// names the expected spelling in the error.
    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size())
            throw ParseError("malformed rational \"" + text + "\": expected \"n/2^k\" or \"n/d\"");
        long long num = parse_int(text.substr(0, slash), text);
        std::string denom = text.substr(slash + 1);
        if (denom.rfind("2^", 0) == 0) {
            long long k = parse_int(denom.substr(2), text);
            if (k < 0 || k > 62) throw ParseError("dyadic exponent out of range in \"" + text + "\"");
            Rational value = dyadic(num, static_cast<int>(k));
            if (value.to_string() != text)
                throw ParseError("non-canonical dyadic \"" + text + "\": expected \"" + value.to_string() + "\"");
            return value;
        }
        long long den = parse_int(denom, text);
        if (den <= 0) throw ParseError("non-positive denominator in \"" + text + "\"");
        Rational value = fraction(num, den);
        if (value.to_string() != text)
            throw ParseError("non-canonical rational \"" + text + "\": expected \"" + value.to_string() + "\"");
        return value;
    }

private:
    using i128 = __int128;
    struct Reduced {
        long long num, den;
    };

    explicit Rational(Reduced r) : num_(r.num), den_(r.den) {}

    static Reduced normalize(i128 num, i128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) return {0, 1};
        if (num >= INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
            long long n = static_cast<long long>(num), d = static_cast<long long>(den);
            long long g = std::gcd(n < 0 ? -n : n, d);
            return {n / g, d / g};
        }
        i128 a = num < 0 ? -num : num;
        i128 g = gcd128(a, den);
        num /= g;
        den /= g;
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw std::overflow_error("rational: 64-bit overflow");
        return {static_cast<long long>(num), static_cast<long long>(den)};
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static long long parse_int(const std::string& s, const std::string& whole) {
        if (s.empty()) throw ParseError("malformed rational \"" + whole + "\"");
        std::size_t i = s[0] == '-' ? 1 : 0;
        if (i == s.size()) throw ParseError("malformed rational \"" + whole + "\"");
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw ParseError("malformed rational \"" + whole + "\"");
        try {
            return std::stoll(s);
        } catch (const std::exception&) {
            throw ParseError("integer out of range in \"" + whole + "\"");
        }
    }

    long long num_;
    long long den_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ictlab

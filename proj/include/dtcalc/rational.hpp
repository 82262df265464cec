#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dtcalc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Base class for every arithmetic failure raised by the exact layer.
struct arithmetic_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised for forms without a defined value (inf - inf, 0 * inf, inf / inf).
struct indeterminate_form : arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

/// Raised by operator/ when the divisor is zero. The convention 1/0 = inf
/// lives exclusively in ExtRat::reciprocal().
struct division_by_zero : arithmetic_error {
    using arithmetic_error::arithmetic_error;
};

struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

/// Exact rational number extended with +inf / -inf.
///
/// Finite values are kept in lowest terms with a positive denominator
/// (delegated to boost cpp_rational). The order is total: -inf < q < +inf
/// for every finite q. Arithmetic with infinities is defined only where the
/// result is unambiguous; indeterminate forms throw instead of adopting a
/// convention. The two conventions the engine does use, 1/inf = 0 and
/// 1/0 = inf, are available only through reciprocal().
class ExtRat {
public:
    ExtRat() : kind_(Kind::finite), v_(0) {}
    ExtRat(long long n) : kind_(Kind::finite), v_(n) {}
    ExtRat(int n) : kind_(Kind::finite), v_(n) {}
    explicit ExtRat(BigRational v) : kind_(Kind::finite), v_(std::move(v)) {}

    ExtRat(BigInt num, BigInt den) : kind_(Kind::finite) {
        if (den == 0) throw division_by_zero("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        v_ = BigRational(num, den);
    }
    ExtRat(long long num, long long den) : ExtRat(BigInt(num), BigInt(den)) {}

    static ExtRat pos_inf() { return ExtRat(Kind::pos_inf); }
    static ExtRat neg_inf() { return ExtRat(Kind::neg_inf); }

    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
    bool is_infinite() const { return kind_ != Kind::finite; }

    /// -1, 0 or +1; infinities carry their sign.
    int sign() const {
        switch (kind_) {
            case Kind::pos_inf: return 1;
            case Kind::neg_inf: return -1;
            default: return v_.sign();
        }
    }

    bool is_zero() const { return kind_ == Kind::finite && v_.is_zero(); }
    bool is_integer() const { return kind_ == Kind::finite && denominator() == 1; }

    const BigRational& value() const {
        require_finite("value()");
        return v_;
    }
    BigInt numerator() const {
        require_finite("numerator()");
        return boost::multiprecision::numerator(v_);
    }
    BigInt denominator() const {
        require_finite("denominator()");
        return boost::multiprecision::denominator(v_);
    }

    ExtRat operator-() const {
        switch (kind_) {
            case Kind::pos_inf: return neg_inf();
            case Kind::neg_inf: return pos_inf();
            default: return ExtRat(BigRational(-v_));
        }
    }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.is_finite() && b.is_finite()) return ExtRat(BigRational(a.v_ + b.v_));
        if (a.is_finite()) return b;
        if (b.is_finite()) return a;
        if (a.kind_ == b.kind_) return a;
        throw indeterminate_form("inf - inf");
    }
    friend ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }

    friend ExtRat operator*(const ExtRat& a, const ExtRat& b) {
        if (a.is_finite() && b.is_finite()) return ExtRat(BigRational(a.v_ * b.v_));
        if (a.sign() == 0 || b.sign() == 0) throw indeterminate_form("0 * inf");
        return a.sign() * b.sign() > 0 ? pos_inf() : neg_inf();
    }

    friend ExtRat operator/(const ExtRat& a, const ExtRat& b) {
        if (b.is_infinite())
            throw indeterminate_form("division by an infinite value; use reciprocal()");
        if (b.is_zero()) throw division_by_zero("division by zero; use reciprocal()");
        if (a.is_finite()) return ExtRat(BigRational(a.v_ / b.v_));
        return a.sign() * b.sign() > 0 ? pos_inf() : neg_inf();
    }

    ExtRat& operator+=(const ExtRat& o) { return *this = *this + o; }
    ExtRat& operator-=(const ExtRat& o) { return *this = *this - o; }
    ExtRat& operator*=(const ExtRat& o) { return *this = *this * o; }
    ExtRat& operator/=(const ExtRat& o) { return *this = *this / o; }

    /// 1/x with the diagram conventions 1/inf = 0 and 1/0 = +inf.
    ExtRat reciprocal() const {
        if (is_pos_inf()) return ExtRat(0);
        if (is_neg_inf())
            throw indeterminate_form("reciprocal of -inf has no convention");
        if (v_.is_zero()) return pos_inf();
        return ExtRat(BigRational(1 / v_));
    }

    ExtRat abs() const { return sign() < 0 ? -*this : *this; }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.v_ == b.v_);
    }
    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
        int ra = a.rank(), rb = b.rank();
        if (ra != rb) return ra <=> rb;
        if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "a/b" in lowest terms, "a" for integers, "inf" / "-inf" at the ends.
    std::string str() const {
        switch (kind_) {
            case Kind::pos_inf: return "inf";
            case Kind::neg_inf: return "-inf";
            default: break;
        }
        std::string s = numerator().str();
        if (denominator() != 1) s += "/" + denominator().str();
        return s;
    }

    /// Parses "a/b", an integer literal, or an "inf" token. The denominator
    /// must be a positive integer literal; the value is reduced on input.
    static ExtRat parse(std::string_view text) {
        std::size_t i = 0;
        auto fail = [&](const std::string& msg) -> ExtRat { throw parse_error(msg, i); };
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t begin = i;
        bool negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            negative = text[i] == '-';
            ++i;
        }
        if (text.compare(i, 3, "inf") == 0) {
            i += 3;
            skip_spaces(text, i);
            if (i != text.size()) return fail("trailing characters after 'inf'");
            return negative ? neg_inf() : pos_inf();
        }
        std::size_t num_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == num_start) return fail("expected digits");
        BigInt num(std::string(text.substr(num_start, i - num_start)));
        if (negative) num = -num;
        BigInt den(1);
        if (i < text.size() && text[i] == '/') {
            ++i;
            std::size_t den_start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == den_start) return fail("expected digits after '/'");
            den = BigInt(std::string(text.substr(den_start, i - den_start)));
            if (den == 0) {
                i = den_start;
                return fail("zero denominator");
            }
        }
        skip_spaces(text, i);
        if (i != text.size()) return fail("trailing characters in rational");
        (void)begin;
        return ExtRat(num, den);
    }

private:
    enum class Kind : unsigned char { neg_inf, finite, pos_inf };

    explicit ExtRat(Kind k) : kind_(k), v_(0) {}

    int rank() const {
        switch (kind_) {
            case Kind::neg_inf: return -1;
            case Kind::pos_inf: return 1;
            default: return 0;
        }
    }
    void require_finite(const char* what) const {
        if (!is_finite())
            throw arithmetic_error(std::string(what) + " requires a finite value");
    }
    static void skip_spaces(std::string_view text, std::size_t& i) {
        while (i < text.size() && text[i] == ' ') ++i;
    }

    Kind kind_;
    BigRational v_;
};

inline const ExtRat& min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
inline const ExtRat& max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

/// Greatest common divisor of |num| and den, used by the reduction tests.
inline BigInt gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

}  // namespace dtcalc

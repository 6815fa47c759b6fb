#ifndef CFHM_RATIONAL_HPP
#define CFHM_RATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfhm {

// Arbitrary-precision unsigned integer, base 2^32 limbs, little-endian.
// Small on purpose: only what exact unavoidability arithmetic needs
// (add, sub, mul, small division for printing, binary gcd).
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v) {  // NOLINT: implicit by design
        if (v) limbs_.push_back(static_cast<std::uint32_t>(v));
        if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1u); }

    static int cmp(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (std::size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }
    bool operator==(const BigUint& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const BigUint& o) const { return cmp(*this, o) != 0; }
    bool operator<(const BigUint& o) const { return cmp(*this, o) < 0; }
    bool operator<=(const BigUint& o) const { return cmp(*this, o) <= 0; }

    BigUint operator+(const BigUint& o) const {
        BigUint r;
        const std::size_t n = std::max(limbs_.size(), o.limbs_.size());
        r.limbs_.reserve(n + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry;
            if (i < limbs_.size()) s += limbs_[i];
            if (i < o.limbs_.size()) s += o.limbs_[i];
            r.limbs_.push_back(static_cast<std::uint32_t>(s));
            carry = s >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // Requires *this >= o.
    BigUint operator-(const BigUint& o) const {
        BigUint r;
        r.limbs_.reserve(limbs_.size());
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t s = static_cast<std::int64_t>(limbs_[i]) - borrow -
                             (i < o.limbs_.size() ? o.limbs_[i] : 0);
            borrow = 0;
            if (s < 0) { s += (std::int64_t{1} << 32); borrow = 1; }
            r.limbs_.push_back(static_cast<std::uint32_t>(s));
        }
        if (borrow) throw std::underflow_error("BigUint subtraction underflow");
        r.trim();
        return r;
    }

    BigUint operator*(const BigUint& o) const {
        if (is_zero() || o.is_zero()) return BigUint();
        BigUint r;
        r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
                std::uint64_t cur = r.limbs_[i + j] +
                    static_cast<std::uint64_t>(limbs_[i]) * o.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + o.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    // Divides in place by a small divisor, returns the remainder.
    std::uint32_t divmod_small(std::uint32_t div) {
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / div);
            rem = cur % div;
        }
        trim();
        return static_cast<std::uint32_t>(rem);
    }

    void shr1() {
        std::uint32_t carry = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint32_t next = limbs_[i] & 1u;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
    }

    void shl_bits(unsigned bits) {
        if (is_zero()) return;
        const unsigned words = bits / 32, rem = bits % 32;
        if (rem) {
            std::uint32_t carry = 0;
            for (std::size_t i = 0; i < limbs_.size(); ++i) {
                std::uint32_t next = limbs_[i] >> (32 - rem);
                limbs_[i] = (limbs_[i] << rem) | carry;
                carry = next;
            }
            if (carry) limbs_.push_back(carry);
        }
        limbs_.insert(limbs_.begin(), words, 0u);
    }

    static BigUint gcd(BigUint a, BigUint b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        unsigned shift = 0;
        while (!a.is_odd() && !b.is_odd()) { a.shr1(); b.shr1(); ++shift; }
        while (!a.is_odd()) a.shr1();
        for (;;) {
            while (!b.is_odd()) b.shr1();
            if (cmp(a, b) > 0) std::swap(a, b);
            b = b - a;
            if (b.is_zero()) break;
        }
        a.shl_bits(shift);
        return a;
    }

    // Mantissa-exponent view: value == returned double * 2^exp2, with the
    // double carrying the top ~96 bits. Safe for values of any bit length.
    double to_double_scaled(int* exp2) const {
        if (is_zero()) { *exp2 = 0; return 0.0; }
        double m = 0.0;
        const std::size_t n = limbs_.size();
        const std::size_t take = std::min<std::size_t>(3, n);
        for (std::size_t i = 0; i < take; ++i)
            m = m * 4294967296.0 + static_cast<double>(limbs_[n - 1 - i]);
        *exp2 = static_cast<int>(32 * (n - take));
        return m;
    }

    double to_double() const {
        int e = 0;
        double m = to_double_scaled(&e);
        return std::ldexp(m, e);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        BigUint t = *this;
        std::string out;
        while (!t.is_zero()) {
            std::uint32_t chunk = t.divmod_small(1000000000u);
            std::string part = std::to_string(chunk);
            if (!t.is_zero()) part = std::string(9 - part.size(), '0') + part;
            out = part + out;
        }
        return out;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }
    std::vector<std::uint32_t> limbs_;
};

// Non-negative exact rational, always kept in lowest terms.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::uint64_t v) : num_(v), den_(1) {}  // NOLINT
    Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }
    Rational(BigUint num, BigUint den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    static Rational reciprocal(std::uint64_t v) { return Rational(1, v); }

    bool is_zero() const { return num_.is_zero(); }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    bool operator==(const Rational& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return num_ * o.den_ < o.num_ * den_;
    }
    bool operator<=(const Rational& o) const {
        return num_ * o.den_ <= o.num_ * den_;
    }

    double to_double() const {
        if (num_.is_zero()) return 0.0;
        int en = 0, ed = 0;
        double mn = num_.to_double_scaled(&en);
        double md = den_.to_double_scaled(&ed);
        return std::ldexp(mn / md, en - ed);
    }

    std::string to_string() const {
        return num_.to_string() + "/" + den_.to_string();
    }

    const BigUint& num() const { return num_; }
    const BigUint& den() const { return den_; }

private:
    void normalize() {
        if (num_.is_zero()) { den_ = BigUint(1); return; }
        BigUint g = BigUint::gcd(num_, den_);
        if (BigUint::cmp(g, BigUint(1)) > 0) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }

    // Exact division by a known divisor via schoolbook long division in
    // base 2 (divisor divides the value exactly; used only for gcd reduction).
    static BigUint divide_exact(const BigUint& value, const BigUint& div) {
        // Binary long division, most significant bit first.
        BigUint rem, quot;
        std::vector<bool> bits;
        {
            BigUint t = value;
            while (!t.is_zero()) { bits.push_back(t.is_odd()); t.shr1(); }
        }
        for (std::size_t i = bits.size(); i-- > 0;) {
            rem.shl_bits(1);
            if (bits[i]) rem = rem + BigUint(1);
            quot.shl_bits(1);
            if (BigUint::cmp(div, rem) <= 0) {
                rem = rem - div;
                quot = quot + BigUint(1);
            }
        }
        return quot;
    }

    BigUint num_;
    BigUint den_;
};

}  // namespace cfhm

#endif  // CFHM_RATIONAL_HPP

#pragma once

// Closed real intervals with MPFR endpoints and outward rounding.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "pgt/errors.hpp"
#include "pgt/numeric/integer.hpp"

namespace pgt {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;
inline constexpr Precision kMaxPrecision = 4096;

/// Owning wrapper around an mpfr_t.
class BigFloat {
public:
    explicit BigFloat(Precision prec = kDefaultPrecision) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    Precision prec() const { return mpfr_get_prec(v_); }
    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

private:
    mpfr_t v_;
};

/// A closed interval [lo, hi]. Every operation returns an enclosure of the
/// exact result over all points of the operands.
class Interval {
public:
    explicit Interval(Precision prec = kDefaultPrecision) : lo_(prec), hi_(prec) {}

    static Interval from_mpz(const mpz_class& z, Precision prec) {
        Interval r(prec);
        mpfr_set_z(r.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(r.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
        return r;
    }
    static Interval from_mpq(const mpq_class& q, Precision prec) {
        Interval r(prec);
        mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    static Interval from_long(long v, Precision prec) { return from_mpz(mpz_class(v), prec); }
    static Interval from_double(double d, Precision prec) {
        Interval r(prec);
        mpfr_set_d(r.lo_.get(), d, MPFR_RNDD);
        mpfr_set_d(r.hi_.get(), d, MPFR_RNDU);
        return r;
    }
    static Interval hull(const BigFloat& a, const BigFloat& b, Precision prec) {
        Interval r(prec);
        if (mpfr_cmp(a.get(), b.get()) <= 0) {
            mpfr_set(r.lo_.get(), a.get(), MPFR_RNDD);
            mpfr_set(r.hi_.get(), b.get(), MPFR_RNDU);
        } else {
            mpfr_set(r.lo_.get(), b.get(), MPFR_RNDD);
            mpfr_set(r.hi_.get(), a.get(), MPFR_RNDU);
        }
        return r;
    }
    /// Enclosure of the exact rational value of a decimal string.
    static Interval from_string(const std::string& s, Precision prec) {
        Interval r(prec);
        mpfr_set_str(r.lo_.get(), s.c_str(), 10, MPFR_RNDD);
        mpfr_set_str(r.hi_.get(), s.c_str(), 10, MPFR_RNDU);
        return r;
    }

    const BigFloat& lo() const { return lo_; }
    const BigFloat& hi() const { return hi_; }
    BigFloat& lo() { return lo_; }
    BigFloat& hi() { return hi_; }
    Precision prec() const { return std::max(lo_.prec(), hi_.prec()); }

    double lo_double() const { return lo_.to_double(MPFR_RNDD); }
    double hi_double() const { return hi_.to_double(MPFR_RNDU); }
    double mid_double() const {
        BigFloat m(prec() + 1);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m.to_double();
    }
    BigFloat mid() const {
        BigFloat m(prec() + 1);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m;
    }
    /// Upper bound on hi - lo.
    BigFloat width() const {
        BigFloat w(prec());
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }
    /// Width is below 2^-bits.
    bool narrower_than_bits(long bits) const {
        BigFloat w = width();
        if (mpfr_zero_p(w.get())) return true;
        return mpfr_get_exp(w.get()) <= -bits;
    }

    bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
    bool contains_zero() const { return !certainly_positive() && !certainly_negative(); }
    bool certainly_lt(const Interval& o) const { return mpfr_cmp(hi_.get(), o.lo_.get()) < 0; }
    bool certainly_gt(const Interval& o) const { return o.certainly_lt(*this); }
    bool certainly_le(const Interval& o) const { return mpfr_cmp(hi_.get(), o.lo_.get()) <= 0; }
    bool overlaps(const Interval& o) const { return !certainly_lt(o) && !o.certainly_lt(*this); }
    bool contains(const mpq_class& q) const {
        return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
    }
    bool contains(const Interval& o) const {
        return mpfr_cmp(lo_.get(), o.lo_.get()) <= 0 && mpfr_cmp(hi_.get(), o.hi_.get()) >= 0;
    }
    /// -1 / +1 if the sign is certain, 0 otherwise.
    int sign() const {
        if (certainly_positive()) return 1;
        if (certainly_negative()) return -1;
        return 0;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec(), b.prec()));
        mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a) {
        Interval r(a.prec());
        mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
        mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        const Precision p = std::max(a.prec(), b.prec());
        Interval r(p);
        BigFloat t(p);
        bool first = true;
        for (const BigFloat* x : {&a.lo_, &a.hi_}) {
            for (const BigFloat* y : {&b.lo_, &b.hi_}) {
                mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        }
        return r;
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero()) throw DivisionByZero("interval division by an interval containing zero");
        const Precision p = std::max(a.prec(), b.prec());
        Interval r(p);
        BigFloat t(p);
        bool first = true;
        for (const BigFloat* x : {&a.lo_, &a.hi_}) {
            for (const BigFloat* y : {&b.lo_, &b.hi_}) {
                mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
                mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        }
        return r;
    }
    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    friend Interval abs(const Interval& a) {
        if (a.certainly_positive() || mpfr_sgn(a.lo_.get()) == 0) return a;
        if (a.certainly_negative() || mpfr_sgn(a.hi_.get()) == 0) return -a;
        Interval r(a.prec());
        mpfr_set_zero(r.lo_.get(), 1);
        if (mpfr_cmpabs(a.lo_.get(), a.hi_.get()) > 0)
            mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
        else
            mpfr_set(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval sqr(const Interval& a) {
        Interval m = abs(a);
        Interval r(a.prec());
        mpfr_sqr(r.lo_.get(), m.lo_.get(), MPFR_RNDD);
        mpfr_sqr(r.hi_.get(), m.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval log(const Interval& a) {
        if (!a.certainly_positive()) throw DomainError("log of a non-positive interval");
        Interval r(a.prec());
        mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
        mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval exp(const Interval& a) {
        Interval r(a.prec());
        mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
        mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Interval sqrt(const Interval& a) {
        if (a.certainly_negative()) throw DomainError("sqrt of a negative interval");
        Interval r(a.prec());
        if (mpfr_sgn(a.lo_.get()) < 0)
            mpfr_set_zero(r.lo_.get(), 1);
        else
            mpfr_sqrt(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
        mpfr_sqrt(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
        return r;
    }
    /// x^(num/den) for x > 0.
    friend Interval pow_rational(const Interval& a, long num, long den) {
        Interval e = Interval::from_mpq(rational(num, den), a.prec());
        return exp(e * log(a));
    }
    friend Interval intersect(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec(), b.prec()));
        if (mpfr_cmp(a.lo_.get(), b.lo_.get()) >= 0) mpfr_set(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
        else mpfr_set(r.lo_.get(), b.lo_.get(), MPFR_RNDD);
        if (mpfr_cmp(a.hi_.get(), b.hi_.get()) <= 0) mpfr_set(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
        else mpfr_set(r.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }
    bool empty() const { return mpfr_cmp(lo_.get(), hi_.get()) > 0; }

    /// Midpoint rendered with `digits` significant decimal digits.
    std::string to_string(int digits = 30) const {
        BigFloat m = mid();
        return format_bigfloat(m, digits);
    }

    static std::string format_bigfloat(const BigFloat& v, int digits) {
        if (mpfr_zero_p(v.get())) return "0";
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v.get(), MPFR_RNDN);
        std::string mant(s);
        mpfr_free_str(s);
        bool neg = false;
        if (!mant.empty() && mant[0] == '-') {
            neg = true;
            mant.erase(0, 1);
        }
        // Scientific form d.ddddde<exp>.
        std::string out = neg ? "-" : "";
        out += mant.substr(0, 1);
        if (mant.size() > 1) out += "." + mant.substr(1);
        out += "e" + std::to_string(static_cast<long>(e) - 1);
        return out;
    }

private:
    BigFloat lo_, hi_;
};

/// A real carried as 30 significant digits; `value` is parsed back from the
/// text so that a value read from disk equals the freshly computed one.
struct HiReal {
    std::string text = "0";
    double value = 0.0;

    static HiReal parse(const std::string& t) {
        HiReal r;
        r.text = t;
        r.value = std::strtod(t.c_str(), nullptr);
        return r;
    }
    static HiReal from(const Interval& x, int digits = 30) { return parse(x.to_string(digits)); }

    /// Exact rational value of the decimal text.
    mpq_class exact() const {
        std::string m = text;
        long e = 0;
        if (auto k = m.find_first_of("eE"); k != std::string::npos) {
            e = std::stol(m.substr(k + 1));
            m = m.substr(0, k);
        }
        if (auto k = m.find('.'); k != std::string::npos) {
            e -= static_cast<long>(m.size() - k - 1);
            m.erase(k, 1);
        }
        mpz_class num(m, 10), p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
        mpq_class r = e < 0 ? mpq_class(num, p10) : mpq_class(num * p10);
        r.canonicalize();
        return r;
    }

    friend bool operator==(const HiReal& a, const HiReal& b) { return a.text == b.text; }
};

}  // namespace pgt

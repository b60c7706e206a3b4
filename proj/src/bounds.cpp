#include "hatcheck/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "hatcheck/errors.hpp"

namespace hatcheck {

namespace {

constexpr mpfr_prec_t kPrec = 256;
// log2(10), rounded up: bit counts above this times the guard exceed it.
constexpr double kBitsPerDigit = 3.3219280948873626;

// Bounds reach exponents well past MPFR's default range.
void widen_exponent_range() {
    static const bool done = [] {
        mpfr_set_emax(mpfr_get_emax_max());
        mpfr_set_emin(mpfr_get_emin_min());
        return true;
    }();
    (void)done;
}

bool too_many_digits(std::size_t bits) {
    return static_cast<double>(bits) > static_cast<double>(kDigitGuard) * kBitsPerDigit;
}

Interval log2_of(const mpq_class& q, mpfr_prec_t prec) {
    if (sgn(q) <= 0) throw PreconditionError("log2 of a non-positive value");
    Interval iv{Real(prec), Real(prec)};
    mpfr_set_q(iv.lo.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_log2(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
    mpfr_set_q(iv.hi.get(), q.get_mpq_t(), MPFR_RNDU);
    mpfr_log2(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
    return iv;
}

void check_finite(const Interval& iv) {
    if (!mpfr_number_p(iv.lo.get()) || !mpfr_number_p(iv.hi.get()))
        throw std::overflow_error("bound exceeds the representable log range");
}

// log2 of s^2 - s + 1 given an enclosure L of log2 s, s >= 2.
Interval square_step(const Interval& L) {
    Interval out{Real(kPrec), Real(kPrec)};
    // Upper: s^2 - s + 1 <= s^2.
    mpfr_mul_2ui(out.hi.get(), L.hi.get(), 1, MPFR_RNDU);
    // Lower: s^2 - s + 1 > s^2 (1 - 1/s).
    Real t(kPrec);
    mpfr_neg(t.get(), L.lo.get(), MPFR_RNDU);
    mpfr_exp2(t.get(), t.get(), MPFR_RNDU);
    mpfr_ui_sub(t.get(), 1, t.get(), MPFR_RNDD);
    mpfr_log2(t.get(), t.get(), MPFR_RNDD);
    mpfr_mul_2ui(out.lo.get(), L.lo.get(), 1, MPFR_RNDD);
    mpfr_add(out.lo.get(), out.lo.get(), t.get(), MPFR_RNDD);
    check_finite(out);
    return out;
}

// Shared driver for x_{n+1} = 1 + m * prod(x_0..x_n), x_0 = 1.
BigBound product_sequence(int n, unsigned long m) {
    widen_exponent_range();
    if (n < 0 || n > 64) throw PreconditionError("sequence index must be in [0, 64]");
    mpz_class x = 1;
    mpz_class prod = 1;
    for (int i = 0; i < n; ++i) {
        if (i >= 1 && too_many_digits(2 * mpz_sizeinbase(x.get_mpz_t(), 2))) {
            // For i >= 1 both sequences satisfy x_{i+1} = x_i^2 - x_i + 1.
            Interval L = log2_of(mpq_class(x), kPrec);
            for (int j = i; j < n; ++j) L = square_step(L);
            return BigBound::log2(std::move(L));
        }
        prod *= x;
        x = 1 + m * prod;
    }
    return BigBound::exact(mpq_class(x));
}

void pow_ui_rounded(Real& out, unsigned long base, const Real& exponent, mpfr_rnd_t rnd) {
    Real b(out.precision());
    mpfr_set_ui(b.get(), base, rnd);
    mpfr_pow(out.get(), b.get(), exponent.get(), rnd);
}

}  // namespace

Real::Real(mpfr_prec_t precision) {
    mpfr_init2(v_, precision);
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& other) {
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
    char* buf = nullptr;
    const int len = mpfr_asprintf(&buf, "%.*R*g", digits, rnd, v_);
    if (len < 0) throw std::runtime_error("mpfr_asprintf failed");
    std::string s(buf, static_cast<std::size_t>(len));
    mpfr_free_str(buf);
    return s;
}

bool Interval::contains(const mpq_class& x) const {
    return mpfr_cmp_q(lo.get(), x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi.get(), x.get_mpq_t()) >= 0;
}

Real Interval::width() const {
    Real w(std::max(lo.precision(), hi.precision()));
    mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
    return w;
}

std::string to_text(const Interval& iv, int digits) {
    return "[" + iv.lo.to_string(digits, MPFR_RNDD) + ", " + iv.hi.to_string(digits, MPFR_RNDU) + "]";
}

BigBound BigBound::exact(mpq_class value) {
    value.canonicalize();
    if (sgn(value) < 0) throw PreconditionError("bounds are non-negative");
    BigBound b;
    b.exact_ = std::move(value);
    return b;
}

BigBound BigBound::log2(Interval enclosure) {
    BigBound b;
    b.log2_ = std::move(enclosure);
    return b;
}

const mpq_class& BigBound::value() const {
    if (!exact_) throw std::logic_error("bound is only known in log2 form");
    return *exact_;
}

Interval BigBound::log2_enclosure(mpfr_prec_t precision) const {
    widen_exponent_range();
    if (exact_) return log2_of(*exact_, precision);
    return *log2_;
}

std::optional<std::uint64_t> BigBound::to_u64() const {
    if (!exact_ || exact_->get_den() != 1) return std::nullopt;
    const mpz_class& z = exact_->get_num();
    if (mpz_sizeinbase(z.get_mpz_t(), 2) > 64) return std::nullopt;
    mpz_class hi = z >> 32;
    mpz_class lo = z - (hi << 32);
    return (static_cast<std::uint64_t>(hi.get_ui()) << 32) | lo.get_ui();
}

bool certainly_le(const BigBound& a, const BigBound& b) {
    if (a.is_exact() && b.is_exact()) return a.value() <= b.value();
    if (a.is_exact() && sgn(a.value()) == 0) return true;
    if (b.is_exact() && sgn(b.value()) == 0) return false;
    return mpfr_lessequal_p(a.log2_enclosure().hi.get(), b.log2_enclosure().lo.get()) != 0;
}

bool certainly_lt(const BigBound& a, const BigBound& b) {
    if (a.is_exact() && b.is_exact()) return a.value() < b.value();
    if (b.is_exact() && sgn(b.value()) == 0) return false;
    if (a.is_exact() && sgn(a.value()) == 0) return true;
    return mpfr_less_p(a.log2_enclosure().hi.get(), b.log2_enclosure().lo.get()) != 0;
}

std::string to_text(const BigBound& b) {
    if (b.is_exact()) return b.value().get_str();
    const Interval iv = b.log2_enclosure();
    Real mid(kPrec);
    mpfr_add(mid.get(), iv.lo.get(), iv.hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    return "2^" + mid.to_string(12);
}

std::string approx_text(const BigBound& b) {
    widen_exponent_range();
    if (b.is_exact()) {
        Real r(kPrec);
        mpfr_set_q(r.get(), b.value().get_mpq_t(), MPFR_RNDN);
        return r.to_string(6);
    }
    return "2^" + b.log2_enclosure().lo.to_string(6);
}

BigBound sylvester(int n) { return product_sequence(n, 1); }
BigBound two_guess_seq(int n) { return product_sequence(n, 2); }

Interval theta_estimate(int precision_bits) {
    widen_exponent_range();
    if (precision_bits < 8 || precision_bits > 256) throw PreconditionError("precision_bits must be in [8, 256]");
    const mpfr_prec_t prec = precision_bits + 64;

    // b_N = x_N^(1/2^(N-1)) with x_N = a_N - 1/2 increases to theta, and
    // ln theta - ln b_N <= 1 / (2^(N+1) x_N^2).
    const int target = precision_bits / 2 + 2;
    int N = 2;
    mpq_class x;
    for (;; ++N) {
        x = two_guess_seq(N).value() - mpq_class(1, 2);
        // log2 of the tail bound: -(N+1) - 2 log2 x_N.
        const double log2_tail = -(N + 1) - 2.0 * std::log2(x.get_d());
        if (log2_tail <= -target) break;
    }
    const unsigned long root = 1ul << (N - 1);

    Interval out{Real(prec), Real(prec)};
    Real xr(prec);
    mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_rootn_ui(out.lo.get(), xr.get(), root, MPFR_RNDD);

    mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(out.hi.get(), xr.get(), root, MPFR_RNDU);
    Real tail(prec);
    mpfr_set_q(tail.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_sqr(tail.get(), tail.get(), MPFR_RNDD);
    mpfr_mul_2ui(tail.get(), tail.get(), static_cast<unsigned long>(N + 1), MPFR_RNDD);
    mpfr_ui_div(tail.get(), 1, tail.get(), MPFR_RNDU);
    mpfr_exp(tail.get(), tail.get(), MPFR_RNDU);
    mpfr_mul(out.hi.get(), out.hi.get(), tail.get(), MPFR_RNDU);
    return out;
}

bool growth_bound_holds(int n, const Real& theta_hi) {
    widen_exponent_range();
    if (n < 1 || n > 64) throw PreconditionError("growth check index must be in [1, 64]");
    const BigBound a = two_guess_seq(n);
    if (!a.is_exact()) throw GuardExceeded("digits", "a_" + std::to_string(n) + " exceeds the digit guard");
    const mpq_class lhs = a.value() - mpq_class(1, 2);
    for (mpfr_prec_t prec : {512, 4096, 32768}) {
        Real p(prec);
        mpfr_set(p.get(), theta_hi.get(), MPFR_RNDD);
        for (int i = 1; i < n; ++i) mpfr_sqr(p.get(), p.get(), MPFR_RNDD);
        if (mpfr_cmp_q(p.get(), lhs.get_mpq_t()) >= 0) return true;
    }
    return false;
}

std::uint64_t circ_depth(int c) {
    if (c < 0) throw PreconditionError("circumference is non-negative");
    return static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c) / 2;
}

BigBound circ_bound(int c) {
    widen_exponent_range();
    if (c < 3 || c > 65536) throw PreconditionError("circ_bound needs 3 <= c <= 65536");
    const std::uint64_t d = circ_depth(c);
    // (64/25)^e has about 1.81 e digits in its numerator.
    if (d - 1 < 63 && static_cast<double>(1ull << (d - 1)) * 1.81 <= static_cast<double>(kDigitGuard)) {
        const unsigned long e = 1ul << (d - 1);
        mpz_class num, den;
        mpz_ui_pow_ui(num.get_mpz_t(), 64, e);
        mpz_ui_pow_ui(den.get_mpz_t(), 25, e);
        return BigBound::exact(mpq_class(num, den) + mpq_class(1, 2));
    }
    // log2 V = 2^(d-1) log2(64/25); the +1/2 adds less than 2^(-log2 V).
    Interval L{Real(kPrec), Real(kPrec)};
    Real base(kPrec);
    mpfr_set_ui(base.get(), 64, MPFR_RNDN);
    mpfr_div_ui(base.get(), base.get(), 25, MPFR_RNDD);
    mpfr_log2(L.lo.get(), base.get(), MPFR_RNDD);
    mpfr_mul_2ui(L.lo.get(), L.lo.get(), static_cast<unsigned long>(d - 1), MPFR_RNDD);
    mpfr_set_ui(base.get(), 64, MPFR_RNDN);
    mpfr_div_ui(base.get(), base.get(), 25, MPFR_RNDU);
    mpfr_log2(L.hi.get(), base.get(), MPFR_RNDU);
    mpfr_mul_2ui(L.hi.get(), L.hi.get(), static_cast<unsigned long>(d - 1), MPFR_RNDU);
    Real eps(kPrec);
    mpfr_neg(eps.get(), L.lo.get(), MPFR_RNDU);
    mpfr_exp2(eps.get(), eps.get(), MPFR_RNDU);
    mpfr_add(L.hi.get(), L.hi.get(), eps.get(), MPFR_RNDU);
    check_finite(L);
    return BigBound::log2(std::move(L));
}

Interval lll_degree_bound(int t) {
    widen_exponent_range();
    if (t < 1) throw PreconditionError("lll_degree_bound needs t >= 1");
    Interval iv{Real(kPrec), Real(kPrec)};
    mpfr_set_ui(iv.lo.get(), 1, MPFR_RNDN);
    mpfr_exp(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
    mpfr_mul_ui(iv.lo.get(), iv.lo.get(), static_cast<unsigned long>(t), MPFR_RNDD);
    mpfr_set_ui(iv.hi.get(), 1, MPFR_RNDN);
    mpfr_exp(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
    mpfr_mul_ui(iv.hi.get(), iv.hi.get(), static_cast<unsigned long>(t), MPFR_RNDU);
    return iv;
}

std::uint64_t lll_degree_ceiling(int t) {
    const Interval iv = lll_degree_bound(t);
    const unsigned long lo = mpfr_get_ui(iv.lo.get(), MPFR_RNDD);
    const unsigned long hi = mpfr_get_ui(iv.hi.get(), MPFR_RNDD);
    // e t is irrational, so a narrow enclosure never straddles an integer.
    if (lo != hi) throw std::runtime_error("enclosure of e*t too wide to round");
    return lo + 1;
}

BigBound n_h_t_recursive(int h, int t) {
    widen_exponent_range();
    if (h < 1 || t < 2) throw PreconditionError("n_h_t needs h >= 1 and t >= 2");
    BigBound cur = BigBound::exact(mpq_class(static_cast<unsigned long>(lll_degree_ceiling(t))));
    for (int level = 2; level <= h; ++level) {
        // k = 2 t^level, and f^k(x) = x^(k^k).
        Real k(kPrec);
        mpfr_ui_pow_ui(k.get(), static_cast<unsigned long>(t), static_cast<unsigned long>(level), MPFR_RNDN);
        mpfr_mul_2ui(k.get(), k.get(), 1, MPFR_RNDN);
        if (!mpfr_integer_p(k.get()) || mpfr_cmp_ui(k.get(), std::numeric_limits<unsigned long>::max() / 2) > 0)
            throw std::overflow_error("k = 2 t^h is out of range");
        const unsigned long kk = mpfr_get_ui(k.get(), MPFR_RNDN);

        Real e_lo(kPrec), e_hi(kPrec);
        mpfr_ui_pow_ui(e_lo.get(), kk, kk, MPFR_RNDD);
        mpfr_ui_pow_ui(e_hi.get(), kk, kk, MPFR_RNDU);

        if (cur.is_exact()) {
            const mpz_class& base = cur.value().get_num();
            const double digits =
                mpfr_get_d(e_hi.get(), MPFR_RNDU) * static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2)) /
                kBitsPerDigit;
            if (mpfr_equal_p(e_lo.get(), e_hi.get()) && digits <= static_cast<double>(kDigitGuard)) {
                mpz_class v;
                mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), mpfr_get_ui(e_lo.get(), MPFR_RNDN));
                cur = BigBound::exact(mpq_class(v));
                continue;
            }
        }
        const Interval L = cur.log2_enclosure();
        Interval next{Real(kPrec), Real(kPrec)};
        mpfr_mul(next.lo.get(), L.lo.get(), e_lo.get(), MPFR_RNDD);
        mpfr_mul(next.hi.get(), L.hi.get(), e_hi.get(), MPFR_RNDU);
        check_finite(next);
        cur = BigBound::log2(std::move(next));
    }
    return cur;
}

BigBound n_h_t_closed(int h, int t) {
    widen_exponent_range();
    if (h < 1 || t < 2) throw PreconditionError("n_h_t needs h >= 1 and t >= 2");
    // log2 value = 2^(4 t^h) * t^(4 h t^h) * log2(e t).
    Interval out{Real(kPrec), Real(kPrec)};
    const Interval et = lll_degree_bound(t);
    const std::pair<mpfr_rnd_t, Real*> sides[] = {{MPFR_RNDD, &out.lo}, {MPFR_RNDU, &out.hi}};
    for (const auto& [rnd, dst] : sides) {
        Real th(kPrec), a(kPrec), b(kPrec), tmp(kPrec);
        mpfr_ui_pow_ui(th.get(), static_cast<unsigned long>(t), static_cast<unsigned long>(h), rnd);
        mpfr_mul_ui(a.get(), th.get(), 4, rnd);
        mpfr_exp2(a.get(), a.get(), rnd);
        mpfr_mul_ui(b.get(), th.get(), 4ul * static_cast<unsigned long>(h), rnd);
        pow_ui_rounded(tmp, static_cast<unsigned long>(t), b, rnd);
        mpfr_mul(a.get(), a.get(), tmp.get(), rnd);
        mpfr_log2(tmp.get(), (rnd == MPFR_RNDD ? et.lo : et.hi).get(), rnd);
        mpfr_mul(dst->get(), a.get(), tmp.get(), rnd);
    }
    check_finite(out);
    return BigBound::log2(std::move(out));
}

}  // namespace hatcheck

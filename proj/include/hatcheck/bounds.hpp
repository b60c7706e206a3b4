#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <string>

namespace hatcheck {

/// RAII wrapper over an mpfr_t. Copies keep the source precision.
class Real {
public:
    explicit Real(mpfr_prec_t precision = 256);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }

    /// Decimal rendering with `digits` significant digits, rounded in `rnd`.
    std::string to_string(int digits = 12, mpfr_rnd_t rnd = MPFR_RNDN) const;
    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

private:
    mpfr_t v_;
};

/// Closed interval with directed-rounded endpoints.
struct Interval {
    Real lo;
    Real hi;

    bool contains(const mpq_class& x) const;
    /// hi - lo, rounded up.
    Real width() const;
};

std::string to_text(const Interval& iv, int digits = 12);

/// Either an exact non-negative rational or an enclosure of its base-2
/// logarithm, used once the exact value passes the digit guard.
class BigBound {
public:
    static BigBound exact(mpq_class value);
    static BigBound log2(Interval enclosure);

    bool is_exact() const noexcept { return exact_.has_value(); }
    /// Throws std::logic_error for log-form bounds.
    const mpq_class& value() const;
    /// Enclosure of log2 of the value; exact values are lifted with directed
    /// rounding. Requires a positive value.
    Interval log2_enclosure(mpfr_prec_t precision = 256) const;
    /// Exact integer value when it fits.
    std::optional<std::uint64_t> to_u64() const;

private:
    std::optional<mpq_class> exact_;
    std::optional<Interval> log2_;
};

/// Exact integers carry at most this many decimal digits.
inline constexpr std::size_t kDigitGuard = 1'000'000;

/// True only when a <= b is certain; an undecided comparison is false.
bool certainly_le(const BigBound& a, const BigBound& b);
bool certainly_lt(const BigBound& a, const BigBound& b);

/// Integers in decimal, other rationals as "p/q", log forms as "2^<float>".
std::string to_text(const BigBound& b);
/// Short decimal approximation ("1845.17", "3.2e+7", or "2^4.3e+7").
std::string approx_text(const BigBound& b);

/// s_0 = 1, s_{n+1} = 1 + s_0 s_1 ... s_n. Requires n <= 64.
BigBound sylvester(int n);
/// a_0 = 1, a_{n+1} = 1 + 2 a_0 a_1 ... a_n. Requires n <= 64.
BigBound two_guess_seq(int n);

/// Enclosure of theta = lim (a_n - 1/2)^(1/2^(n-1)) with width at most
/// 2^(-precision_bits/2). Requires 8 <= precision_bits <= 256.
Interval theta_estimate(int precision_bits);

/// Checks a_n <= theta_hi^(2^(n-1)) + 1/2 with the exact integer a_n and a
/// downward-rounded lower bound of the power, so true is always sound.
bool growth_bound_holds(int n, const Real& theta_hi);

/// floor(c^2 / 2).
std::uint64_t circ_depth(int c);
/// (64/25)^(2^(d-1)) + 1/2 with d = circ_depth(c). Requires 3 <= c <= 65536.
BigBound circ_bound(int c);

/// N(1,t) = ceil(e t); N(h,t) = N(h-1,t)^(k^k) with k = 2 t^h.
BigBound n_h_t_recursive(int h, int t);
/// (e t)^(2^(4 t^h) t^(4 h t^h)), always in log form.
BigBound n_h_t_closed(int h, int t);

/// Enclosure of e t.
Interval lll_degree_bound(int t);
/// ceil(e t), exact.
std::uint64_t lll_degree_ceiling(int t);

}  // namespace hatcheck

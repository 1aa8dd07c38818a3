#pragma once

// Wigner 3-j symbols and Clebsch-Gordan coefficients via the Racah formula.
//
// The Racah sum is evaluated in exact integer arithmetic and every coefficient
// is carried as sign * sqrt(num/den). Dynamical zeros (such as the vanishing
// F=2,m=0 -> F'=2,m=0 pi amplitude) and rational ratios between coefficients
// within one transition block are then exact rather than rounded.

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mdsr {

namespace wig {

using Int = __int128;

// Largest j1+j2+j3 the exact integer path accepts without overflow headroom
// concerns. Hyperfine work on alkali lines stays far below this.
inline constexpr int kMaxJSum = 10;

inline Int abs128(Int a) { return a < 0 ? -a : a; }

inline Int gcd128(Int a, Int b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int factorial128(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

struct Rational {
    Int num = 0;
    Int den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) {
            den = 1;
            return;
        }
        Int g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    Rational& operator+=(const Rational& o) {
        Int g = gcd128(den, o.den);
        Int scale = o.den / g;
        num = num * scale + o.num * (den / g);
        den = den * scale;
        reduce();
        return *this;
    }

    Rational operator*(const Rational& o) const {
        // Cross-reduce before multiplying to keep intermediates small.
        Rational a{num, o.den};
        a.reduce();
        Rational b{o.num, den};
        b.reduce();
        Rational r{a.num * b.num, a.den * b.den};
        r.reduce();
        return r;
    }
};

// Exact representation sign * sqrt(num/den), num/den reduced and nonnegative.
struct SqrtRational {
    int sign = 0;
    Int num = 0;
    Int den = 1;

    double value() const {
        if (sign == 0 || num == 0) return 0.0;
        return sign * std::sqrt(static_cast<double>(num) / static_cast<double>(den));
    }
};

// 3-j symbol over doubled arguments (tj1 = 2*j1, ...). Anything outside the
// selection rules is an exact zero.
inline SqrtRational wigner3j_exact(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    const SqrtRational zero{};
    if (tj1 < 0 || tj2 < 0 || tj3 < 0) return zero;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return zero;
    if (tm1 + tm2 + tm3 != 0) return zero;
    // j and m must have equal parity (j+m integral), and j1+j2+j3 integral.
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0) return zero;
    if ((tj1 + tj2 + tj3) % 2 != 0) return zero;

    const int t1 = (tj1 + tj2 - tj3) / 2;
    const int t2 = (tj1 - tj2 + tj3) / 2;
    const int t3 = (-tj1 + tj2 + tj3) / 2;
    if (t1 < 0 || t2 < 0 || t3 < 0) return zero;

    const int jsum = (tj1 + tj2 + tj3) / 2;
    if (jsum > kMaxJSum)
        throw std::invalid_argument("wigner3j: j1+j2+j3 too large for exact evaluation");

    const int j1p = (tj1 + tm1) / 2, j1m = (tj1 - tm1) / 2;
    const int j2p = (tj2 + tm2) / 2, j2m = (tj2 - tm2) / 2;
    const int j3p = (tj3 + tm3) / 2, j3m = (tj3 - tm3) / 2;

    const int kmin = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int kmax = std::min({t1, j1m, j2p});
    if (kmin > kmax) return zero;

    Rational sum;
    for (int k = kmin; k <= kmax; ++k) {
        Int d = factorial128(k) * factorial128(t1 - k) * factorial128(j1m - k) *
                factorial128(j2p - k) * factorial128((tj3 - tj2 + tm1) / 2 + k) *
                factorial128((tj3 - tj1 - tm2) / 2 + k);
        Rational term{(k % 2 != 0) ? Int(-1) : Int(1), d};
        sum += term;
    }
    if (sum.num == 0) return zero;

    Rational sq{factorial128(t1) * factorial128(t2) * factorial128(t3),
                factorial128(jsum + 1)};
    sq.reduce();
    sq = sq * Rational{factorial128(j1p) * factorial128(j1m), 1};
    sq = sq * Rational{factorial128(j2p) * factorial128(j2m), 1};
    sq = sq * Rational{factorial128(j3p) * factorial128(j3m), 1};
    sq = sq * Rational{sum.num, sum.den};
    sq = sq * Rational{sum.num, sum.den};

    int sign = (sum.num > 0) ? 1 : -1;
    if ((tj1 - tj2 - tm3) / 2 % 2 != 0) sign = -sign;  // phase (-1)^(j1-j2-m3)
    return SqrtRational{sign, abs128(sq.num), sq.den};
}

// <j1 m1; j2 m2 | J M> from the 3-j symbol, exact form.
inline SqrtRational clebsch_gordan_exact(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
    SqrtRational w = wigner3j_exact(tj1, tj2, tJ, tm1, tm2, -tM);
    if (w.sign == 0) return w;
    Rational sq{w.num * (tJ + 1), w.den};
    sq.reduce();
    int sign = w.sign;
    if ((tj1 - tj2 + tM) / 2 % 2 != 0) sign = -sign;  // phase (-1)^(j1-j2+M)
    return SqrtRational{sign, sq.num, sq.den};
}

// value = e / |ref| evaluated exactly; perfect-square ratios (the cases the
// block normalization actually produces) come out as exact doubles.
inline double normalized_value(const SqrtRational& e, const SqrtRational& ref) {
    if (e.sign == 0 || e.num == 0) return 0.0;
    if (ref.num == 0) return 0.0;
    Rational r{e.num * ref.den, e.den * ref.num};
    r.reduce();
    auto isqrt = [](Int v) {
        Int r0 = static_cast<Int>(std::sqrt(static_cast<double>(v)));
        while (r0 > 0 && r0 * r0 > v) --r0;
        while ((r0 + 1) * (r0 + 1) <= v) ++r0;
        return r0;
    };
    Int sn = isqrt(r.num), sd = isqrt(r.den);
    if (sn * sn == r.num && sd * sd == r.den)
        return e.sign * static_cast<double>(sn) / static_cast<double>(sd);
    return e.sign * std::sqrt(static_cast<double>(r.num) / static_cast<double>(r.den));
}

// -1 if |a| < |b|, 0 if equal, +1 if greater.
inline int compare_magnitude(const SqrtRational& a, const SqrtRational& b) {
    Int lhs = a.num * b.den;
    Int rhs = b.num * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

inline bool to_twice(double x, int& out) {
    double t = 2.0 * x;
    double r = std::nearbyint(t);
    if (std::abs(t - r) > 1e-9 || std::abs(r) > 1e6) return false;
    out = static_cast<int>(r);
    return true;
}

}  // namespace wig

// Wigner 3-j symbol for integer or half-integer arguments. Selection-rule
// failures and non-half-integer arguments evaluate to zero.
inline double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    int tj1, tj2, tj3, tm1, tm2, tm3;
    if (!wig::to_twice(j1, tj1) || !wig::to_twice(j2, tj2) || !wig::to_twice(j3, tj3) ||
        !wig::to_twice(m1, tm1) || !wig::to_twice(m2, tm2) || !wig::to_twice(m3, tm3))
        return 0.0;
    return wig::wigner3j_exact(tj1, tj2, tj3, tm1, tm2, tm3).value();
}

// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    int tj1, tm1, tj2, tm2, tJ, tM;
    if (!wig::to_twice(j1, tj1) || !wig::to_twice(m1, tm1) || !wig::to_twice(j2, tj2) ||
        !wig::to_twice(m2, tm2) || !wig::to_twice(J, tJ) || !wig::to_twice(M, tM))
        return 0.0;
    return wig::clebsch_gordan_exact(tj1, tm1, tj2, tm2, tJ, tM).value();
}

}  // namespace mdsr

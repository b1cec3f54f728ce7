#include "lindkit/special.hpp"

#include <cmath>

namespace lindkit {

double bessel_i(int q, double x) {
    const int aq = std::abs(q);  // I_{-q} = I_q for integer order
    if (x < 0) {
        // I_q(-x) = (-1)^q I_q(x) for integer q
        const double v = std::cyl_bessel_i(double(aq), -x);
        return aq % 2 == 0 ? v : -v;
    }
    return std::cyl_bessel_i(double(aq), x);
}

cxd bessel_i(int q, cxd z) {
    const int aq = std::abs(q);
    if (z.imag() == 0.0 && z.real() >= 0.0) return bessel_i(aq, z.real());
    // ascending series sum_m (z/2)^{2m+q} / (m! (m+q)!)
    const cxd half = 0.5 * z;
    cxd term = std::pow(half, aq) * std::exp(-std::lgamma(double(aq) + 1.0));
    cxd sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= half * half / (double(m) * double(m + aq));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && m > 4) break;
    }
    return sum;
}

double log_double_factorial(long long k) {
    // k!! with (-1)!! = 0!! = 1
    if (k <= 0) return 0.0;
    if (k % 2 == 0) {
        const double half = double(k) / 2.0;
        return half * std::log(2.0) + std::lgamma(half + 1.0);
    }
    // (2m+1)!! = (2m+1)! / (2^m m!)
    const double m = double((k - 1) / 2);
    return std::lgamma(double(k) + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
}

namespace {

cxd simpson(const std::function<cxd(double)>& f, double a, double b, cxd fa, cxd fm, cxd fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

cxd adaptive(const std::function<cxd(double)>& f, double a, double b, cxd fa, cxd fm, cxd fb,
             cxd whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cxd flm = f(lm), frm = f(rm);
    const cxd left = simpson(f, a, m, fa, flm, fm);
    const cxd right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

cxd integrate(const std::function<cxd(double)>& f, double a, double b, double abs_tol,
              int max_depth) {
    const cxd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const cxd whole = simpson(f, a, b, fa, fm, fb);
    return adaptive(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace lindkit

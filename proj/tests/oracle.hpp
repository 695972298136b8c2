#pragma once

// Independent 50-digit evaluations of the closed-form constants, written from the
// formulas directly (no shared code with the library).

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

inline big C_lambda(big l) {
    return pow(big(2), (6 * l - 16) / (l - 1)) * pow(l - 1, -(2 * l - 6) / l) * pow(big(4) / (l - 3), big(2) / (l - 1));
}

inline big C1(big a, big b, big I) {
    const big e = a - b * (1 - a);
    return pow(I, e) * (1 + 2 * pow(I, b / a) * pow(a / (1 - a), b) * (a / e));
}

inline big C2(big a, big I) {
    const big inner = 2 * pow(I, 2 / a) * (2 * a * a / ((3 * a - 2) * (1 - a)));
    return pow(big(2), (16 * a - 10) / a) * pow(I, (6 * a - 4) / a) * pow(inner, 2 * (1 - a) / a);
}

inline big C3(big a, big I) {
    return 2 * pow(2 * I, (2 * a - 1) / a) * pow(2 * pow(I, 1 / a) * (a / (2 * a - 1)), (1 - a) / a);
}

inline big c1(big a, big b, big g, big I) {
    return 1 + pow(I, b / a) * pow(a / (1 - a), b) * (a / (a - b * (1 - a))) * pow(big(2), g - (g - 1) * b * (1 - a) / a);
}

inline big c2(big a, big g, big I) {
    return pow(I, g / a) * pow(a / (1 - a), g) * (g * (1 - a) / (a + g * a - g));
}

inline big c3(big a, big g, big I) { return pow(2 * c2(a, g, I), -a / (a + g * a - g)); }

inline big c4(big a, big b, big g, big I) { return pow(c3(a, g, I), b - 1) / 2; }

// Extremal law scale a = ((1-alpha)/alpha) I^(-1/alpha) 2^((alpha-1)/alpha).
inline big extremal_a(big a, big I) { return ((1 - a) / a) * pow(I, -1 / a) * pow(big(2), (a - 1) / a); }

inline double d(const big& x) { return x.convert_to<double>(); }

inline double rel_err(double got, const big& want) {
    return d(abs((big(got) - want) / want));
}

}  // namespace oracle

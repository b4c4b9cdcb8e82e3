#pragma once

#include <cmath>

#include "rapcert/matrix.hpp"

namespace rapcert {

namespace detail {

// (m,m) Pade numerator/denominator split: after the call, the approximant to
// exp(A) is (V - U)^{-1} (V + U).
inline void expm_pade(const Matrix& a, int degree, Matrix& u, Matrix& v) {
    const int n = a.rows();
    const Matrix id = Matrix::identity(n);
    switch (degree) {
        case 3: {
            static const double b[] = {120, 60, 12, 1};
            const Matrix a2 = a * a;
            u = a * (b[3] * a2 + b[1] * id);
            v = b[2] * a2 + b[0] * id;
            return;
        }
        case 5: {
            static const double b[] = {30240, 15120, 3360, 420, 30, 1};
            const Matrix a2 = a * a;
            const Matrix a4 = a2 * a2;
            u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
            v = b[4] * a4 + b[2] * a2 + b[0] * id;
            return;
        }
        case 7: {
            static const double b[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
            const Matrix a2 = a * a;
            const Matrix a4 = a2 * a2;
            const Matrix a6 = a4 * a2;
            u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
            v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
            return;
        }
        case 9: {
            static const double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                       30270240.0,    2162160.0,    110880.0,     3960.0,
                                       90.0,          1.0};
            const Matrix a2 = a * a;
            const Matrix a4 = a2 * a2;
            const Matrix a6 = a4 * a2;
            const Matrix a8 = a6 * a2;
            u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
            v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
            return;
        }
        default: {  // 13
            static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                       1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                       670442572800.0,      33522128640.0,       1323241920.0,
                                       40840800.0,          960960.0,            16380.0,
                                       182.0,               1.0};
            const Matrix a2 = a * a;
            const Matrix a4 = a2 * a2;
            const Matrix a6 = a4 * a2;
            u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * id);
            v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                b[0] * id;
            return;
        }
    }
}

}  // namespace detail

// exp(a*t) by scaling and squaring with a degree-selected Pade approximant.
// Diagonal matrices take the exact elementwise fast path.
inline Matrix expm(const Matrix& a, double t = 1.0) {
    if (!a.square()) throw StructuralError("expm: matrix not square");
    if (a.rows() > 64) throw DomainError("expm: order exceeds supported n <= 64");
    if (!a.all_finite() || !std::isfinite(t)) throw DomainError("expm: non-finite input");
    if (t < 0.0) throw DomainError("expm: negative time");

    const int n = a.rows();
    if (a.is_diagonal()) {
        Matrix r(n, n);
        for (int i = 0; i < n; ++i) r(i, i) = std::exp(a(i, i) * t);
        return r;
    }

    Matrix b = a * t;
    const double norm = b.one_norm();
    Matrix u, v;
    int squarings = 0;
    if (norm < 1.495585217958292e-2) {
        detail::expm_pade(b, 3, u, v);
    } else if (norm < 2.539398330063230e-1) {
        detail::expm_pade(b, 5, u, v);
    } else if (norm < 9.504178996162932e-1) {
        detail::expm_pade(b, 7, u, v);
    } else if (norm < 2.097847961257068e0) {
        detail::expm_pade(b, 9, u, v);
    } else {
        const double theta13 = 5.371920351148152;
        std::frexp(norm / theta13, &squarings);
        if (squarings < 0) squarings = 0;
        if (squarings > 0) b *= std::ldexp(1.0, -squarings);
        detail::expm_pade(b, 13, u, v);
    }
    Matrix numer = v + u;
    Matrix denom = v - u;
    Matrix r = Lu::factor(std::move(denom)).solve(numer);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

}  // namespace rapcert

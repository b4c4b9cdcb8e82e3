#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "rapcert/matrix.hpp"

namespace rapcert {

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;  // with multiplicity, dimension-many
    double spectral_radius = 0.0;
};

struct EigenConvergenceError : NumericError {
    Spectrum partial;  // eigenvalues deflated before the failure
    EigenConvergenceError(const std::string& what, Spectrum got)
        : NumericError(what), partial(std::move(got)) {}
};

namespace detail {

// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg_in_place(Matrix& a) {
    const int n = a.rows();
    std::vector<double> vv(static_cast<std::size_t>(n));
    for (int k = 0; k + 2 < n; ++k) {
        double sigma = 0;
        for (int i = k + 1; i < n; ++i) sigma += a(i, k) * a(i, k);
        sigma = std::sqrt(sigma);
        if (sigma == 0.0) continue;
        const double x0 = a(k + 1, k);
        const double alpha = (x0 >= 0) ? -sigma : sigma;
        // v = x - alpha*e1
        vv[static_cast<std::size_t>(k + 1)] = x0 - alpha;
        for (int i = k + 2; i < n; ++i) vv[static_cast<std::size_t>(i)] = a(i, k);
        const double vtv = 2.0 * sigma * (sigma + std::abs(x0));
        const double beta = 2.0 / vtv;
        // left: A(k+1:,k:) -= beta v (v^T A)
        for (int j = k; j < n; ++j) {
            double s = 0;
            for (int i = k + 1; i < n; ++i) s += vv[static_cast<std::size_t>(i)] * a(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) a(i, j) -= s * vv[static_cast<std::size_t>(i)];
        }
        // right: A(:,k+1:) -= beta (A v) v^T
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = k + 1; j < n; ++j) s += a(i, j) * vv[static_cast<std::size_t>(j)];
            s *= beta;
            for (int j = k + 1; j < n; ++j) a(i, j) -= s * vv[static_cast<std::size_t>(j)];
        }
        a(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

}  // namespace detail

// All eigenvalues of a real dense matrix via Hessenberg reduction followed by
// Francis double-shift QR with deflation. Eigenvalues only; order is the
// deflation order, callers sort as needed.
inline Spectrum eigenvalues(const Matrix& a_in) {
    if (!a_in.square()) throw StructuralError("eigenvalues: matrix not square");
    if (a_in.rows() > 64) throw DomainError("eigenvalues: order exceeds supported n <= 64");
    if (!a_in.all_finite()) throw DomainError("eigenvalues: non-finite entries");

    const int n = a_in.rows();
    Spectrum out;
    if (n == 0) return out;

    Matrix h = a_in;
    detail::hessenberg_in_place(h);

    std::vector<double> wr(static_cast<std::size_t>(n), 0.0), wi(static_cast<std::size_t>(n), 0.0);
    const double eps = std::numeric_limits<double>::epsilon();

    double anorm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 1); j < n; ++j) anorm += std::abs(h(i, j));

    int en = n - 1;
    double shift_accum = 0;
    const int max_total = 30 * n;
    int total_its = 0;

    while (en >= 0) {
        int its = 0;
        for (;;) {
            // look for a single small subdiagonal element
            int l;
            for (l = en; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 1) l = 0;

            double x = h(en, en);
            if (l == en) {  // one real root
                wr[static_cast<std::size_t>(en)] = x + shift_accum;
                wi[static_cast<std::size_t>(en)] = 0.0;
                --en;
                break;
            }
            double y = h(en - 1, en - 1);
            double w = h(en, en - 1) * h(en - 1, en);
            if (l == en - 1) {  // a 2x2 block: real pair or complex conjugates
                double p = 0.5 * (y - x);
                double q = p * p + w;
                double z = std::sqrt(std::abs(q));
                x += shift_accum;
                if (q >= 0.0) {
                    z = p + (p >= 0 ? z : -z);
                    wr[static_cast<std::size_t>(en - 1)] = x + z;
                    wr[static_cast<std::size_t>(en)] = (z != 0.0) ? x - w / z : x + z;
                    wi[static_cast<std::size_t>(en - 1)] = 0.0;
                    wi[static_cast<std::size_t>(en)] = 0.0;
                } else {
                    wr[static_cast<std::size_t>(en - 1)] = x + p;
                    wr[static_cast<std::size_t>(en)] = x + p;
                    wi[static_cast<std::size_t>(en - 1)] = z;
                    wi[static_cast<std::size_t>(en)] = -z;
                }
                en -= 2;
                break;
            }

            if (its >= 30 || total_its >= max_total) {
                Spectrum partial;
                for (int i = en + 1; i < n; ++i)
                    partial.eigenvalues.emplace_back(wr[static_cast<std::size_t>(i)],
                                                     wi[static_cast<std::size_t>(i)]);
                for (const auto& ev : partial.eigenvalues)
                    partial.spectral_radius = std::max(partial.spectral_radius, std::abs(ev));
                throw EigenConvergenceError("eigenvalues: QR iteration did not converge", partial);
            }
            if (its == 10 || its == 20) {  // exceptional shift
                shift_accum += x;
                for (int i = 0; i <= en; ++i) h(i, i) -= x;
                double s = std::abs(h(en, en - 1)) + std::abs(h(en - 1, en - 2));
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            ++its;
            ++total_its;

            // look for two consecutive small subdiagonal elements
            int m;
            double p = 0, q = 0, r = 0, z = 0;
            for (m = en - 2; m >= l; --m) {
                z = h(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - rr - ss;
                r = h(m + 2, m + 1);
                const double sc = std::abs(p) + std::abs(q) + std::abs(r);
                p /= sc;
                q /= sc;
                r /= sc;
                if (m == l) break;
                const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                                std::abs(h(m + 1, m + 1)));
                if (u <= eps * v) break;
            }
            for (int i = m + 2; i <= en; ++i) h(i, i - 2) = 0.0;
            for (int i = m + 3; i <= en; ++i) h(i, i - 3) = 0.0;

            // double QR sweep on rows l..en, columns m..en
            for (int k = m; k <= en - 1; ++k) {
                const bool notlast = (k != en - 1);
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = notlast ? h(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                double s = std::sqrt(p * p + q * q + r * r);
                if (p < 0) s = -s;
                if (k != m) {
                    h(k, k - 1) = -s * x;
                } else if (l != m) {
                    h(k, k - 1) = -h(k, k - 1);
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= en; ++j) {  // row modification
                    double pp = h(k, j) + q * h(k + 1, j);
                    if (notlast) {
                        pp += r * h(k + 2, j);
                        h(k + 2, j) -= pp * z;
                    }
                    h(k + 1, j) -= pp * y;
                    h(k, j) -= pp * x;
                }
                const int mmin = std::min(en, k + 3);
                for (int i = l; i <= mmin; ++i) {  // column modification
                    double pp = x * h(i, k) + y * h(i, k + 1);
                    if (notlast) {
                        pp += z * h(i, k + 2);
                        h(i, k + 2) -= pp * r;
                    }
                    h(i, k + 1) -= pp * q;
                    h(i, k) -= pp;
                }
            }
        }
    }

    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.eigenvalues.emplace_back(wr[static_cast<std::size_t>(i)], wi[static_cast<std::size_t>(i)]);
        out.spectral_radius = std::max(out.spectral_radius, std::abs(out.eigenvalues.back()));
    }
    return out;
}

struct DominantRealCheck {
    bool dominant = false;
    double top_real_part = 0;     // witness: largest real part
    double second_real_part = 0;  // witness: runner-up real part
    double gap = 0;
    std::complex<double> top_eigenvalue{0, 0};
};

// True iff the eigenvalue of maximal real part is real, simple, and exceeds
// every other real part by more than gap_tol.
inline DominantRealCheck dominant_real_check(const Matrix& a, double gap_tol = tol::spec_gap) {
    const Spectrum spec = eigenvalues(a);
    DominantRealCheck r;
    if (spec.eigenvalues.empty()) return r;
    std::size_t top = 0;
    for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i)
        if (spec.eigenvalues[i].real() > spec.eigenvalues[top].real()) top = i;
    r.top_eigenvalue = spec.eigenvalues[top];
    r.top_real_part = spec.eigenvalues[top].real();
    r.second_real_part = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        if (i == top) continue;
        r.second_real_part = std::max(r.second_real_part, spec.eigenvalues[i].real());
    }
    r.gap = r.top_real_part - r.second_real_part;
    const double im_scale = std::max(1.0, std::abs(r.top_real_part));
    const bool is_real = std::abs(r.top_eigenvalue.imag()) <= 1e-12 * im_scale;
    r.dominant = is_real && spec.eigenvalues.size() >= 1 &&
                 (spec.eigenvalues.size() == 1 || r.gap > gap_tol);
    return r;
}

struct PeripheralSpectrum {
    std::vector<std::complex<double>> values;
    bool nilpotent = false;  // spectral radius zero: no peripheral question arises
};

// Eigenvalues whose modulus is within rel_tol * spectral_radius of the radius.
inline PeripheralSpectrum peripheral_eigenvalues(const Spectrum& spec,
                                                 double rel_tol = tol::peripheral) {
    PeripheralSpectrum out;
    if (spec.spectral_radius == 0.0) {
        out.nilpotent = true;
        return out;
    }
    for (const auto& ev : spec.eigenvalues)
        if (std::abs(std::abs(ev) - spec.spectral_radius) <= rel_tol * spec.spectral_radius)
            out.values.push_back(ev);
    return out;
}

}  // namespace rapcert

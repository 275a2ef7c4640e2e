#include "jass/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jass {

namespace {

// Accumulates sum_k a[k] * conj(b[k]) with explicit real/imag arithmetic;
// this is the inner loop of every kernel below.
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) noexcept {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ar = a[k].real(), ai = a[k].imag();
        const double br = b[k].real(), bi = b[k].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
    }
    return {re, im};
}

cplx dot_plain(const cplx* a, const cplx* b, std::size_t n) noexcept {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ar = a[k].real(), ai = a[k].imag();
        const double br = b[k].real(), bi = b[k].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double hermitian_deviation_sq(const ComplexMatrix& x) noexcept {
    double dev = 0.0;
    for (std::size_t p = 0; p < x.rows(); ++p) {
        dev += x(p, p).imag() * x(p, p).imag();
        for (std::size_t q = p + 1; q < x.cols(); ++q) {
            const cplx d = x(p, q) - std::conj(x(q, p));
            dev += 0.5 * std::norm(d);
        }
    }
    return dev;
}

} // namespace

double norm_sq(const ComplexVector& v) noexcept {
    double s = 0.0;
    for (const cplx& z : v) s += z.real() * z.real() + z.imag() * z.imag();
    return s;
}

double frob_norm_sq(const ComplexMatrix& m) noexcept {
    double s = 0.0;
    for (const cplx& z : m.data()) s += z.real() * z.real() + z.imag() * z.imag();
    return s;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double ar = a(i, k).real(), ai = a(i, k).imag();
            if (ar == 0.0 && ai == 0.0) continue;
            const cplx* bk = b.row(k);
            for (std::size_t j = 0; j < n; ++j) {
                const double br = bk[j].real(), bi = bk[j].imag();
                ci[j] += cplx{ar * br - ai * bi, ar * bi + ai * br};
            }
        }
    }
    return c;
}

ComplexMatrix matmul_adjoint_rhs(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.cols(), "matmul_adjoint_rhs: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j)
            c(i, j) = dot_conj(a.row(i), b.row(j), a.cols());
    return c;
}

ComplexMatrix self_outer(const ComplexMatrix& a) {
    ComplexMatrix c(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const cplx v = dot_conj(a.row(i), a.row(j), a.cols());
            c(i, j) = v;
            c(j, i) = std::conj(v);
        }
        c(i, i) = {c(i, i).real(), 0.0};
    }
    return c;
}

ComplexMatrix gram(const ComplexMatrix& a) {
    ComplexMatrix g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const cplx* ai = a.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double cr = ai[p].real(), ci = -ai[p].imag();
            if (cr == 0.0 && ci == 0.0) continue;
            cplx* gp = g.row(p);
            for (std::size_t q = 0; q < a.cols(); ++q) {
                const double br = ai[q].real(), bi = ai[q].imag();
                gp[q] += cplx{cr * br - ci * bi, cr * bi + ci * br};
            }
        }
    }
    for (std::size_t p = 0; p < a.cols(); ++p) g(p, p) = {g(p, p).real(), 0.0};
    return g;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot_plain(a.row(i), x.data(), a.cols());
    return y;
}

ComplexVector matvec_conj(const ComplexMatrix& a, const ComplexVector& x) {
    require(a.cols() == x.size(), "matvec_conj: dimension mismatch");
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot_conj(a.row(i), x.data(), a.cols());
    return y;
}

ComplexMatrix principal_subspace(const ComplexMatrix& x, std::size_t num_vecs,
                                 std::size_t t_max, RandomStream& rng) {
    const std::size_t b = x.rows();
    require(x.cols() == b, "principal_subspace: matrix not square");
    require(num_vecs >= 1 && num_vecs < b, "principal_subspace: need 1 <= num_vecs < dim");
    require(t_max >= 1, "principal_subspace: t_max must be >= 1");
    const double scale = std::sqrt(frob_norm_sq(x));
    require(hermitian_deviation_sq(x) <= std::pow(linalg_tol::hermitian_check * scale, 2.0) ||
                scale == 0.0,
            "principal_subspace: input not Hermitian within tolerance");

    ComplexMatrix deflated = x;
    ComplexMatrix out(b, num_vecs);
    ComplexVector q(b), z(b);
    for (std::size_t i = 0; i < num_vecs; ++i) {
        RandomStream col_rng = rng.fork(i);
        for (std::size_t r = 0; r < b; ++r) q[r] = col_rng.next_cn();
        double n = std::sqrt(norm_sq(q));
        for (std::size_t r = 0; r < b; ++r) q[r] /= n;

        for (std::size_t t = 0; t < t_max; ++t) {
            z = matvec(deflated, q);
            n = std::sqrt(norm_sq(z));
            // When the deflated matrix annihilates the iterate, keep the
            // current unit vector instead of dividing by ~0.
            if (n < linalg_tol::power_norm_floor) break;
            for (std::size_t r = 0; r < b; ++r) q[r] = z[r] / n;
        }

        z = matvec(deflated, q);
        double lambda = 0.0;
        for (std::size_t r = 0; r < b; ++r)
            lambda += q[r].real() * z[r].real() + q[r].imag() * z[r].imag();

        for (std::size_t r = 0; r < b; ++r) {
            const cplx qr = q[r];
            out(r, i) = qr;
            cplx* row = deflated.row(r);
            for (std::size_t c = 0; c < b; ++c) row[c] -= lambda * qr * std::conj(q[c]);
        }
    }
    return out;
}

EigenDecomposition exact_hermitian_evd(const ComplexMatrix& x) {
    const std::size_t n = x.rows();
    require(x.cols() == n, "exact_hermitian_evd: matrix not square");
    const double scale = std::sqrt(frob_norm_sq(x));
    require(hermitian_deviation_sq(x) <= std::pow(linalg_tol::hermitian_check * scale, 2.0) ||
                scale == 0.0,
            "exact_hermitian_evd: input not Hermitian within tolerance");

    // Work on the symmetrized copy so round-off asymmetry cannot accumulate.
    ComplexMatrix a(n, n);
    for (std::size_t p = 0; p < n; ++p) {
        a(p, p) = {x(p, p).real(), 0.0};
        for (std::size_t q = p + 1; q < n; ++q) {
            const cplx v = 0.5 * (x(p, q) + std::conj(x(q, p)));
            a(p, q) = v;
            a(q, p) = std::conj(v);
        }
    }
    ComplexMatrix qmat = ComplexMatrix::identity(n);

    const double off_target_sq = std::pow(linalg_tol::jacobi_offdiag * scale, 2.0);
    for (int sweep = 0; sweep < linalg_tol::jacobi_max_sweeps; ++sweep) {
        double off_sq = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off_sq += 2.0 * std::norm(a(p, q));
        if (off_sq <= off_target_sq) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double m = std::abs(apq);
                if (m == 0.0) continue;
                const cplx phase = apq / m; // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0.
                const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;             // s e^{i phi}
                const cplx spc = std::conj(sp);        // s e^{-i phi}

                // Rows/columns p and q of a <- U^H a U.
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cplx arp = a(r, p);
                    const cplx arq = a(r, q);
                    a(r, p) = c * arp + spc * arq;
                    a(r, q) = -sp * arp + c * arq;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                const double new_pp = app * c * c + 2.0 * m * s * c + aqq * s * s;
                const double new_qq = app * s * s - 2.0 * m * s * c + aqq * c * c;
                a(p, p) = {new_pp, 0.0};
                a(q, q) = {new_qq, 0.0};
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t r = 0; r < n; ++r) {
                    const cplx qrp = qmat(r, p);
                    const cplx qrq = qmat(r, q);
                    qmat(r, p) = c * qrp + spc * qrq;
                    qmat(r, q) = -sp * qrp + c * qrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition ed;
    ed.eigenvalues.resize(n);
    ed.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        ed.eigenvalues[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) ed.eigenvectors(r, c) = qmat(r, order[c]);
    }
    return ed;
}

ComplexMatrix pseudoinverse_tall(const ComplexMatrix& a) {
    require(a.rows() >= a.cols() && a.cols() >= 1, "pseudoinverse_tall: need rows >= cols >= 1");
    const std::size_t k = a.cols();
    const EigenDecomposition ed = exact_hermitian_evd(gram(a));
    const double cutoff = linalg_tol::pinv_cutoff * std::max(ed.eigenvalues[0], 0.0);

    // pinv(a) = pinv(a^H a) a^H, with small Gram eigenvalues zeroed
    // (Moore-Penrose convention for rank deficiency).
    ComplexMatrix ginv(k, k);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q <= p; ++q) {
            double re = 0.0, im = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double ev = ed.eigenvalues[j];
                if (!(ev > cutoff) || ev <= 0.0) continue;
                const cplx u = ed.eigenvectors(p, j) * std::conj(ed.eigenvectors(q, j));
                re += u.real() / ev;
                im += u.imag() / ev;
            }
            ginv(p, q) = {re, im};
            ginv(q, p) = {re, -im};
        }
    }
    return matmul_adjoint_rhs(ginv, a);
}

ComplexMatrix residual_project(const ComplexMatrix& a, const ComplexMatrix& a_pinv,
                               const ComplexMatrix& v) {
    require(a.rows() == v.rows() && a_pinv.rows() == a.cols() && a_pinv.cols() == a.rows(),
            "residual_project: dimension mismatch");
    const ComplexMatrix w = matmul(a_pinv, v);
    ComplexMatrix out = v;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* oi = out.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double ar = a(i, p).real(), ai = a(i, p).imag();
            if (ar == 0.0 && ai == 0.0) continue;
            const cplx* wp = w.row(p);
            for (std::size_t j = 0; j < v.cols(); ++j) {
                const double br = wp[j].real(), bi = wp[j].imag();
                oi[j] -= cplx{ar * br - ai * bi, ar * bi + ai * br};
            }
        }
    }
    return out;
}

ComplexVector residual_project(const ComplexMatrix& a, const ComplexMatrix& a_pinv,
                               const ComplexVector& v) {
    require(a.rows() == v.size() && a_pinv.rows() == a.cols() && a_pinv.cols() == a.rows(),
            "residual_project: dimension mismatch");
    const ComplexVector w = matvec(a_pinv, v);
    ComplexVector out = v;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc = dot_plain(a.row(i), w.data(), a.cols());
        out[i] -= acc;
    }
    return out;
}

} // namespace jass

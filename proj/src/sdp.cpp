#include "qsl/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl {

ContractionMatrix::ContractionMatrix(const ComplexMatrix& w) : w_(w) {
    if (!all_finite(w)) throw std::invalid_argument("ContractionMatrix: non-finite entries");
    if (operator_norm(w) > 1.0 + kNormSlack)
        throw std::invalid_argument("ContractionMatrix: operator norm exceeds 1");
}

double SdpSolution::residual(const std::string& name) const {
    for (const auto& [k, v] : residuals)
        if (k == name) return v;
    throw std::invalid_argument("SdpSolution: unknown residual " + name);
}

double SdpSolution::max_residual() const {
    double m = 0.0;
    for (const auto& [k, v] : residuals) m = std::max(m, v);
    return m;
}

ComplexMatrix build_kw(const std::vector<ComplexMatrix>& kraus1,
                       const std::vector<ComplexMatrix>& kraus2,
                       const ComplexMatrix& w) {
    if (kraus1.empty() || kraus2.empty())
        throw std::invalid_argument("build_kw: empty Kraus list");
    const std::size_t n = kraus1.front().rows();
    for (const auto& f : kraus1)
        if (f.rows() != n || f.cols() != n) throw std::invalid_argument("build_kw: dimension mismatch");
    for (const auto& f : kraus2)
        if (f.rows() != n || f.cols() != n) throw std::invalid_argument("build_kw: dimension mismatch");
    if (w.rows() != kraus1.size() || w.cols() != kraus2.size())
        throw std::invalid_argument("build_kw: W shape must be (D1, D2)");

    ComplexMatrix k(n, n);
    for (std::size_t i = 0; i < kraus1.size(); ++i)
        for (std::size_t j = 0; j < kraus2.size(); ++j) {
            const cplx wij = w(i, j);
            if (wij == cplx(0.0, 0.0)) continue;
            k += wij * (adjoint(kraus1[i]) * kraus2[j]);
        }
    return k;
}

namespace {

// ---------------------------------------------------------------------------
// Interior-point core on the realified blocks.
// ---------------------------------------------------------------------------

struct PairTerm {
    std::size_t p, q;
    double c;
};

struct Ipm {
    // Problem data
    std::size_t d1 = 0, d2 = 0, n = 0;  // W is d1 x d2; spectral block dim n (0 = absent)
    bool spectral = false;
    std::vector<ComplexMatrix> g;       // d1*d2 entries, may be empty matrices
    std::vector<char> has_g;
    std::vector<RealMatrix> rg;         // realify(G) for present entries
    ComplexMatrix mobj;                 // nuclear mode objective

    // Derived
    std::size_t m = 0;                  // number of real dual variables
    std::size_t b1 = 0, b2 = 0;         // realified block dims
    std::vector<double> bvec;
    std::vector<std::array<PairTerm, 2>> a1_pairs;  // per u/v variable

    // Iterates
    std::vector<double> y;
    RealMatrix x1, x2;

    SdpOptions opt;
    SdpSolution sol;

    std::size_t gi(std::size_t i, std::size_t j) const { return i * d2 + j; }
    std::size_t var_base() const { return spectral ? 1 : 0; }
    std::size_t var_u(std::size_t i, std::size_t j) const { return var_base() + 2 * gi(i, j); }
    std::size_t var_v(std::size_t i, std::size_t j) const { return var_u(i, j) + 1; }

    void setup_channel(const std::vector<ComplexMatrix>& k1, const std::vector<ComplexMatrix>& k2);
    void setup_nuclear(const ComplexMatrix& mfix);
    void init_point();
    ComplexMatrix w_from_y() const;
    void dual_blocks(RealMatrix& s1, RealMatrix& s2) const;
    std::vector<double> primal_residuals() const;
    void run();
    void finalize(bool channel_mode);
};

void Ipm::setup_channel(const std::vector<ComplexMatrix>& k1, const std::vector<ComplexMatrix>& k2) {
    d1 = k1.size();
    d2 = k2.size();
    n = k1.front().rows();
    spectral = true;
    g.resize(d1 * d2);
    has_g.assign(d1 * d2, 0);
    rg.resize(d1 * d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            ComplexMatrix gij = adjoint(k1[i]) * k2[j];
            if (max_abs(gij) > 0.0) {
                has_g[gi(i, j)] = 1;
                rg[gi(i, j)] = realify(gij);
                g[gi(i, j)] = std::move(gij);
            }
        }

    m = 1 + 2 * d1 * d2;
    b1 = 2 * (d1 + d2);
    b2 = 2 * n;
    bvec.assign(m, 0.0);
    bvec[0] = 0.5;
}

void Ipm::setup_nuclear(const ComplexMatrix& mfix) {
    d1 = mfix.rows();
    d2 = mfix.cols();
    n = 0;
    spectral = false;
    mobj = mfix;
    m = 2 * d1 * d2;
    b1 = 2 * (d1 + d2);
    b2 = 0;
    bvec.assign(m, 0.0);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            bvec[var_u(i, j)] = mfix(i, j).real();
            bvec[var_v(i, j)] = mfix(i, j).imag();
        }
}

// Realified sparse patterns of A1_k = -realify(H_k) as symmetric pair terms
// T = sum c (e_p e_q^T + e_q e_p^T); h is the realification shift.
void build_a1_pairs(Ipm& ip) {
    const std::size_t h = ip.d1 + ip.d2;
    ip.a1_pairs.resize(ip.m);
    for (std::size_t i = 0; i < ip.d1; ++i)
        for (std::size_t j = 0; j < ip.d2; ++j) {
            const std::size_t col = ip.d1 + j;
            ip.a1_pairs[ip.var_u(i, j)] = {PairTerm{i, col, -1.0}, PairTerm{i + h, col + h, -1.0}};
            ip.a1_pairs[ip.var_v(i, j)] = {PairTerm{i, col + h, 1.0}, PairTerm{col, i + h, -1.0}};
        }
}

ComplexMatrix Ipm::w_from_y() const {
    ComplexMatrix w(d1, d2);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            w(i, j) = cplx(y[var_u(i, j)], y[var_v(i, j)]);
    return w;
}

// S1 = realify([[I, W],[W†, I]]); S2 = realify(K_W + K_W†) - t I.
void Ipm::dual_blocks(RealMatrix& s1, RealMatrix& s2) const {
    const ComplexMatrix w = w_from_y();
    ComplexMatrix blk(d1 + d2, d1 + d2);
    for (std::size_t i = 0; i < d1 + d2; ++i) blk(i, i) = 1.0;
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            blk(i, d1 + j) = w(i, j);
            blk(d1 + j, i) = std::conj(w(i, j));
        }
    s1 = realify(blk);

    if (!spectral) return;
    ComplexMatrix kw(n, n);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            if (!has_g[gi(i, j)]) continue;
            kw += w(i, j) * g[gi(i, j)];
        }
    ComplexMatrix sym = kw + adjoint(kw);
    for (std::size_t i = 0; i < n; ++i) sym(i, i) -= y[0];
    s2 = realify(sym);
}

std::vector<double> Ipm::primal_residuals() const {
    std::vector<double> pres(m, 0.0);
    if (spectral) pres[0] = rtrace(x2) - bvec[0];
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            const std::size_t ku = var_u(i, j), kv = var_v(i, j);
            double au = 0.0, av = 0.0;
            for (const auto& t : a1_pairs[ku]) au += 2.0 * t.c * x1(t.p, t.q);
            for (const auto& t : a1_pairs[kv]) av += 2.0 * t.c * x1(t.p, t.q);
            if (spectral && has_g[gi(i, j)]) {
                // <A2_u, X2> = -2 <rg, X2>; <A2_v, X2> = -2 <J rg, X2>.
                const RealMatrix& rgij = rg[gi(i, j)];
                double dot = 0.0, jdot = 0.0;
                for (std::size_t r = 0; r < b2; ++r)
                    for (std::size_t c = 0; c < b2; ++c) dot += rgij(r, c) * x2(r, c);
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < b2; ++c)
                        jdot += -rgij(r + n, c) * x2(r, c) + rgij(r, c) * x2(r + n, c);
                au += -2.0 * dot;
                av += -2.0 * jdot;
            }
            pres[ku] = au - bvec[ku];
            pres[kv] = av - bvec[kv];
        }
    return pres;
}

void Ipm::init_point() {
    y.assign(m, 0.0);
    ComplexMatrix xc2;
    if (spectral) {
        double kappa = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (has_g[k]) kappa += frobenius_norm(g[k]);
        y[0] = -(2.0 * kappa + 1.0);
        xc2 = ComplexMatrix::identity(n);
        xc2 *= cplx(1.0 / (4.0 * static_cast<double>(n)), 0.0);
        x2 = realify(xc2);
    }

    ComplexMatrix yc(d1, d2);
    if (spectral) {
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j)
                if (has_g[gi(i, j)]) yc(i, j) = -std::conj(trace(g[gi(i, j)] * xc2));
    } else {
        yc = mobj;
        yc *= cplx(-0.25, 0.0);
    }
    const double eta = operator_norm(yc) + 0.5;
    ComplexMatrix xc1(d1 + d2, d1 + d2);
    for (std::size_t i = 0; i < d1 + d2; ++i) xc1(i, i) = eta;
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) {
            xc1(i, d1 + j) = yc(i, j);
            xc1(d1 + j, i) = std::conj(yc(i, j));
        }
    x1 = realify(xc1);
}

struct NtBlock {
    RealMatrix r, rinv;
    std::vector<double> lam;
    bool ok = false;
};

NtBlock nt_scaling(const RealMatrix& x, const RealMatrix& s) {
    NtBlock nt;
    const std::size_t n = x.rows();
    RealMatrix lx, ls;
    if (!cholesky(x, lx) || !cholesky(s, ls)) return nt;

    const RealMatrix b = rtranspose(ls) * lx;
    const RealEig eg = sym_eig(rtranspose(b) * b);  // eigenvalues ascending
    nt.lam.resize(n);
    RealMatrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = n - 1 - j;  // descending
        const double l = std::max(eg.eigenvalues[src], 0.0);
        nt.lam[j] = std::sqrt(l);
        if (!(nt.lam[j] > 0.0)) return nt;
        for (std::size_t i = 0; i < n; ++i) v(i, j) = eg.vectors(i, src);
    }

    // R = Lx V diag(lam)^{-1/2}; Rinv = diag(lam)^{1/2} V^T Lx^{-1}.
    nt.r = lx * v;
    for (std::size_t j = 0; j < n; ++j) {
        const double f = 1.0 / std::sqrt(nt.lam[j]);
        for (std::size_t i = 0; i < n; ++i) nt.r(i, j) *= f;
    }
    RealMatrix lxinv = RealMatrix::identity(n);
    tri_solve_lower(lx, lxinv);
    nt.rinv = rtranspose(v) * lxinv;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std::sqrt(nt.lam[i]);
        for (std::size_t j = 0; j < n; ++j) nt.rinv(i, j) *= f;
    }
    nt.ok = true;
    return nt;
}

// Largest alpha with diag(lam) + alpha * delta >= 0 (delta symmetric).
double max_step(const std::vector<double>& lam, const RealMatrix& delta) {
    const std::size_t n = lam.size();
    RealMatrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            scaled(i, j) = delta(i, j) / std::sqrt(lam[i] * lam[j]);
    const double emin = sym_eig_min(scaled);
    if (emin >= -1e-14) return 1e30;
    return -1.0 / emin;
}

bool chol_solve_with_jitter(RealMatrix omega, const std::vector<double>& rhs,
                            std::vector<double>& out, RealMatrix& factor) {
    const std::size_t mm = omega.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < mm; ++i) scale = std::max(scale, std::abs(omega(i, i)));
    const double jitters[] = {0.0, 1e-14, 1e-12, 1e-10};
    for (double j : jitters) {
        RealMatrix trial = omega;
        for (std::size_t i = 0; i < mm; ++i) trial(i, i) += j * scale;
        if (!cholesky(trial, factor)) continue;
        RealMatrix b(mm, 1);
        for (std::size_t i = 0; i < mm; ++i) b(i, 0) = rhs[i];
        tri_solve_lower(factor, b);
        // L^T x = z backward solve
        for (std::size_t ii = mm; ii-- > 0;) {
            double s = b(ii, 0);
            for (std::size_t k = ii + 1; k < mm; ++k) s -= factor(k, ii) * b(k, 0);
            b(ii, 0) = s / factor(ii, ii);
        }
        out.resize(mm);
        for (std::size_t i = 0; i < mm; ++i) out[i] = b(i, 0);
        return true;
    }
    return false;
}

void solve_factored(const RealMatrix& factor, const std::vector<double>& rhs,
                    std::vector<double>& out) {
    const std::size_t mm = factor.rows();
    RealMatrix b(mm, 1);
    for (std::size_t i = 0; i < mm; ++i) b(i, 0) = rhs[i];
    tri_solve_lower(factor, b);
    for (std::size_t ii = mm; ii-- > 0;) {
        double s = b(ii, 0);
        for (std::size_t k = ii + 1; k < mm; ++k) s -= factor(k, ii) * b(k, 0);
        b(ii, 0) = s / factor(ii, ii);
    }
    out.resize(mm);
    for (std::size_t i = 0; i < mm; ++i) out[i] = b(i, 0);
}

void Ipm::run() {
    build_a1_pairs(*this);
    init_point();

    sol.converged = false;
    sol.message = "iteration cap reached";
    int stall = 0;

    for (int iter = 0; iter <= opt.max_iter; ++iter) {
        RealMatrix s1, s2;
        dual_blocks(s1, s2);

        const double gap = rdot(x1, s1) + (spectral ? rdot(x2, s2) : 0.0);
        const auto pres = primal_residuals();
        double pmax = 0.0;
        for (double p : pres) pmax = std::max(pmax, std::abs(p));

        double pobj = 0.0;
        for (std::size_t k = 0; k < m; ++k) pobj += bvec[k] * y[k];
        const double dobj = rtrace(x1);
        sol.objective_trace.push_back({pobj, dobj});
        sol.iterations = iter;

        if (gap <= opt.tol && pmax <= opt.tol) {
            sol.converged = true;
            sol.message = "converged";
            break;
        }
        if (iter == opt.max_iter) break;

        // Nesterov-Todd scaling per block.
        const NtBlock nt1 = nt_scaling(x1, s1);
        NtBlock nt2;
        if (spectral) nt2 = nt_scaling(x2, s2);
        if (!nt1.ok || (spectral && !nt2.ok)) {
            sol.message = "scaling breakdown";
            break;
        }

        const std::size_t ntot = b1 + b2;
        const double mu = gap / static_cast<double>(ntot);

        // Gram matrix of R1 rows drives the rank-structured block-1 terms.
        const RealMatrix gram1 = nt1.r * rtranspose(nt1.r);

        // Scaled constraint matrices for the spectral block.
        std::vector<RealMatrix> t2;
        if (spectral) {
            t2.assign(m, RealMatrix());
            t2[0] = rtranspose(nt2.r) * nt2.r;
            // Parallel only when the per-entry matmuls are big enough to pay
            // for a team; small solves stay serial so sweep-level parallelism
            // above them is not taxed.
            const bool par = d1 * d2 * b2 * b2 * b2 >= (std::size_t{1} << 22);
#pragma omp parallel for schedule(dynamic) if (par)
            for (long long ijv = 0; ijv < static_cast<long long>(d1 * d2); ++ijv) {
                const std::size_t ij = static_cast<std::size_t>(ijv);
                if (!has_g[ij]) continue;
                const RealMatrix yb = rg[ij] * nt2.r;
                const RealMatrix su = rtranspose(nt2.r) * yb;
                RealMatrix jy(b2, b2);
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < b2; ++c) {
                        jy(r, c) = -yb(r + n, c);
                        jy(r + n, c) = yb(r, c);
                    }
                const RealMatrix sv = rtranspose(nt2.r) * jy;
                RealMatrix tu(b2, b2), tv(b2, b2);
                for (std::size_t r = 0; r < b2; ++r)
                    for (std::size_t c = 0; c < b2; ++c) {
                        tu(r, c) = -(su(r, c) + su(c, r));
                        tv(r, c) = -(sv(r, c) + sv(c, r));
                    }
                const std::size_t i = ij / d2, j = ij % d2;
                t2[var_u(i, j)] = std::move(tu);
                t2[var_v(i, j)] = std::move(tv);
            }
        }

        // Schur complement.
        RealMatrix omega(m, m);
        const bool par_schur = m * m * (b1 * b1 + b2 * b2) >= (std::size_t{1} << 27);
#pragma omp parallel for schedule(dynamic) if (par_schur)
        for (long long kk = 0; kk < static_cast<long long>(m); ++kk) {
            const std::size_t k = static_cast<std::size_t>(kk);
            for (std::size_t l = k; l < m; ++l) {
                double acc = 0.0;
                if (!(spectral && k == 0)) {
                    if (!(spectral && l == 0)) {
                        const auto& pk = a1_pairs[k];
                        const auto& pl = a1_pairs[l];
                        for (const auto& a : pk)
                            for (const auto& bterm : pl)
                                acc += 2.0 * a.c * bterm.c *
                                       (gram1(a.q, bterm.p) * gram1(bterm.q, a.p) +
                                        gram1(a.q, bterm.q) * gram1(a.p, bterm.p));
                    }
                }
                if (spectral) {
                    const RealMatrix& tk = t2[k];
                    const RealMatrix& tl = t2[l];
                    if (tk.rows() && tl.rows()) acc += rdot(tk, tl);
                }
                omega(k, l) = acc;
                omega(l, k) = acc;
            }
        }

        auto rhs_for = [&](const RealMatrix& gm1, const RealMatrix& gm2,
                           const std::vector<double>& presv) {
            std::vector<double> rhs(m, 0.0);
            const RealMatrix z1 = nt1.r * gm1 * rtranspose(nt1.r);
            for (std::size_t k = 0; k < m; ++k) {
                double tg = 0.0;
                if (!(spectral && k == 0)) {
                    for (const auto& a : a1_pairs[k]) tg += 2.0 * a.c * z1(a.p, a.q);
                }
                if (spectral && t2[k].rows()) tg += rdot(t2[k], gm2);
                rhs[k] = -presv[k] - tg;
            }
            return rhs;
        };

        auto delta_s_hat = [&](const std::vector<double>& dy, RealMatrix& ds1h, RealMatrix& ds2h) {
            // Complex increments, then scale.
            ComplexMatrix dw(d1, d2);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    dw(i, j) = cplx(dy[var_u(i, j)], dy[var_v(i, j)]);
            ComplexMatrix blk(d1 + d2, d1 + d2);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j) {
                    blk(i, d1 + j) = dw(i, j);
                    blk(d1 + j, i) = std::conj(dw(i, j));
                }
            const RealMatrix ds1 = realify(blk);
            ds1h = rtranspose(nt1.r) * ds1 * nt1.r;
            if (spectral) {
                ComplexMatrix kdw(n, n);
                for (std::size_t i = 0; i < d1; ++i)
                    for (std::size_t j = 0; j < d2; ++j)
                        if (has_g[gi(i, j)]) kdw += dw(i, j) * g[gi(i, j)];
                ComplexMatrix sym = kdw + adjoint(kdw);
                for (std::size_t i = 0; i < n; ++i) sym(i, i) -= dy[0];
                const RealMatrix ds2 = realify(sym);
                ds2h = rtranspose(nt2.r) * ds2 * nt2.r;
            }
        };

        // Predictor: D = -Lambda^2, so the scaled RHS is -Lambda.
        RealMatrix gm1(b1, b1), gm2;
        for (std::size_t i = 0; i < b1; ++i) gm1(i, i) = -nt1.lam[i];
        if (spectral) {
            gm2 = RealMatrix(b2, b2);
            for (std::size_t i = 0; i < b2; ++i) gm2(i, i) = -nt2.lam[i];
        }

        std::vector<double> dy_aff;
        RealMatrix chol_factor;
        {
            const auto rhs = rhs_for(gm1, gm2, pres);
            if (!chol_solve_with_jitter(omega, rhs, dy_aff, chol_factor)) {
                sol.message = "schur factorization failed";
                break;
            }
            // One round of iterative refinement.
            std::vector<double> resid(m, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                double s = rhs[k];
                for (std::size_t l = 0; l < m; ++l) s -= omega(k, l) * dy_aff[l];
                resid[k] = s;
            }
            std::vector<double> corr;
            solve_factored(chol_factor, resid, corr);
            for (std::size_t k = 0; k < m; ++k) dy_aff[k] += corr[k];
        }

        RealMatrix ds1h_aff, ds2h_aff;
        delta_s_hat(dy_aff, ds1h_aff, ds2h_aff);
        RealMatrix dx1h_aff = gm1 - ds1h_aff;
        RealMatrix dx2h_aff;
        if (spectral) dx2h_aff = gm2 - ds2h_aff;

        double ap = max_step(nt1.lam, dx1h_aff);
        double ad = max_step(nt1.lam, ds1h_aff);
        if (spectral) {
            ap = std::min(ap, max_step(nt2.lam, dx2h_aff));
            ad = std::min(ad, max_step(nt2.lam, ds2h_aff));
        }
        const double ap_aff = std::min(1.0, ap);
        const double ad_aff = std::min(1.0, ad);

        auto gap_after = [&](const RealMatrix& dxh, const RealMatrix& dsh,
                             const std::vector<double>& lam, double a_p, double a_d) {
            const std::size_t nn = lam.size();
            double acc = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                acc += lam[i] * lam[i];
                acc += a_p * dxh(i, i) * lam[i];
                acc += a_d * dsh(i, i) * lam[i];
            }
            acc += a_p * a_d * rdot(dxh, dsh);
            return acc;
        };
        double gap_aff = gap_after(dx1h_aff, ds1h_aff, nt1.lam, ap_aff, ad_aff);
        if (spectral) gap_aff += gap_after(dx2h_aff, ds2h_aff, nt2.lam, ap_aff, ad_aff);
        gap_aff = std::max(gap_aff, 0.0);

        double sigma = std::pow(gap_aff / std::max(gap, 1e-300), 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        // Corrector with Mehrotra second-order term.
        auto corrector_gm = [&](const std::vector<double>& lam, const RealMatrix& dxh,
                                const RealMatrix& dsh) {
            const std::size_t nn = lam.size();
            const RealMatrix f = dxh * dsh;
            RealMatrix gm(nn, nn);
            for (std::size_t i = 0; i < nn; ++i)
                for (std::size_t j = 0; j < nn; ++j) {
                    double dij = -0.5 * (f(i, j) + f(j, i));
                    if (i == j) dij += sigma * mu - lam[i] * lam[i];
                    gm(i, j) = 2.0 * dij / (lam[i] + lam[j]);
                }
            return gm;
        };
        gm1 = corrector_gm(nt1.lam, dx1h_aff, ds1h_aff);
        if (spectral) gm2 = corrector_gm(nt2.lam, dx2h_aff, ds2h_aff);

        std::vector<double> dy;
        {
            const auto rhs = rhs_for(gm1, gm2, pres);
            solve_factored(chol_factor, rhs, dy);
            std::vector<double> resid(m, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                double s = rhs[k];
                for (std::size_t l = 0; l < m; ++l) s -= omega(k, l) * dy[l];
                resid[k] = s;
            }
            std::vector<double> corr;
            solve_factored(chol_factor, resid, corr);
            for (std::size_t k = 0; k < m; ++k) dy[k] += corr[k];
        }

        RealMatrix ds1h, ds2h;
        delta_s_hat(dy, ds1h, ds2h);
        RealMatrix dx1h = gm1 - ds1h;
        RealMatrix dx2h;
        if (spectral) dx2h = gm2 - ds2h;

        double apc = max_step(nt1.lam, dx1h);
        double adc = max_step(nt1.lam, ds1h);
        if (spectral) {
            apc = std::min(apc, max_step(nt2.lam, dx2h));
            adc = std::min(adc, max_step(nt2.lam, ds2h));
        }
        const double alpha_p = std::min(1.0, 0.98 * apc);
        const double alpha_d = std::min(1.0, 0.98 * adc);

        x1 += alpha_p * (nt1.r * dx1h * rtranspose(nt1.r));
        rsymmetrize(x1);
        x1 = jproject(x1);
        if (spectral) {
            x2 += alpha_p * (nt2.r * dx2h * rtranspose(nt2.r));
            rsymmetrize(x2);
            x2 = jproject(x2);
        }
        for (std::size_t k = 0; k < m; ++k) y[k] += alpha_d * dy[k];

        if (alpha_p < 1e-4 && alpha_d < 1e-4) {
            if (++stall >= 3) {
                sol.message = "step lengths collapsed";
                break;
            }
        } else {
            stall = 0;
        }
    }
}

void Ipm::finalize(bool channel_mode) {
    RealMatrix s1, s2;
    dual_blocks(s1, s2);

    double pobj = 0.0;
    for (std::size_t k = 0; k < m; ++k) pobj += bvec[k] * y[k];
    sol.primal_value = pobj;
    sol.dual_value = rtrace(x1);
    sol.gap = std::abs(sol.dual_value - sol.primal_value);

    sol.w_opt = w_from_y();

    const auto pres = primal_residuals();
    double pmax = 0.0;
    for (double p : pres) pmax = std::max(pmax, std::abs(p));

    // S is rebuilt from y each iteration, so C - A†y - S vanishes identically;
    // report the deviation of S from the realified structure instead.
    double dres = rmax_abs(s1 - jproject(s1));
    if (spectral) dres = std::max(dres, rmax_abs(s2 - jproject(s2)));

    sol.residuals.emplace_back("primal_feasibility", pmax);
    sol.residuals.emplace_back("dual_feasibility", dres);
    sol.residuals.emplace_back("gap", sol.gap);

    const double wnorm = operator_norm(sol.w_opt);
    sol.residuals.emplace_back("w_contraction_excess", std::max(0.0, wnorm - 1.0));

    if (channel_mode) {
        ComplexMatrix rho = derealify(x2);
        rho *= cplx(4.0, 0.0);
        rho = hermitize(rho);
        const double tr = std::real(trace(rho));
        sol.residuals.emplace_back("rho_trace_deviation", std::abs(tr - 1.0));
        rho *= cplx(1.0 / tr, 0.0);
        sol.rho_opt = rho;

        const ComplexMatrix x1c = derealify(x1);
        ComplexMatrix x11(d1, d1), x22(d2, d2);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d1; ++j) x11(i, j) = x1c(i, j);
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d2; ++j) x22(i, j) = x1c(d1 + i, d1 + j);
        sol.p_opt = hermitize(cplx(4.0, 0.0) * conjugate(x22));
        sol.q_opt = hermitize(cplx(4.0, 0.0) * conjugate(x11));

        // Certify the Eq.3 block with M built from the returned state.
        ComplexMatrix mrho(d1, d2);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j)
                if (has_g[gi(i, j)]) mrho(i, j) = trace(rho * g[gi(i, j)]);

        // Assembled as [[Q, M],[M†, P]], the block-permuted form of the
        // [[P, M†],[M, Q]] constraint.
        ComplexMatrix blk(d1 + d2, d1 + d2);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d1; ++j) blk(i, j) = sol.q_opt(i, j);
        for (std::size_t i = 0; i < d2; ++i)
            for (std::size_t j = 0; j < d2; ++j) blk(d1 + i, d1 + j) = sol.p_opt(i, j);
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j) {
                blk(i, d1 + j) = mrho(i, j);
                blk(d1 + j, i) = std::conj(mrho(i, j));
            }
        const auto eg = eig_hermitian(HermitianMatrix(hermitize(blk)));
        sol.residuals.emplace_back("dual_block_min_eig_neg", std::max(0.0, -eg.eigenvalues.front()));

        const auto egr = eig_hermitian(HermitianMatrix(rho));
        sol.residuals.emplace_back("rho_min_eig_neg", std::max(0.0, -egr.eigenvalues.front()));
        sol.residuals.emplace_back("dual_tracenorm_deviation",
                                   std::abs(sol.dual_value - trace_norm(mrho)));
    }
}

}  // namespace

namespace {

void check_channel_inputs(const std::vector<ComplexMatrix>& k1,
                          const std::vector<ComplexMatrix>& k2) {
    if (k1.empty() || k2.empty()) throw std::invalid_argument("sdp: empty Kraus list");
    const std::size_t n = k1.front().rows();
    for (const auto& f : k1)
        if (!f.is_square() || f.rows() != n)
            throw std::invalid_argument("sdp: Kraus dimensions disagree");
    for (const auto& f : k2)
        if (!f.is_square() || f.rows() != n)
            throw std::invalid_argument("sdp: Kraus dimensions disagree");
    if (k1.size() > 64 || k2.size() > 64)
        throw std::invalid_argument("sdp: Kraus count above budget (64)");
}

SdpSolution solve_channel(const std::vector<ComplexMatrix>& k1,
                          const std::vector<ComplexMatrix>& k2, const SdpOptions& options) {
    check_channel_inputs(k1, k2);
    Ipm ip;
    ip.opt = options;
    ip.setup_channel(k1, k2);
    ip.run();
    ip.finalize(true);
    return ip.sol;
}

}  // namespace

SdpSolution solve_primal(const std::vector<ComplexMatrix>& kraus1,
                         const std::vector<ComplexMatrix>& kraus2, const SdpOptions& options) {
    return solve_channel(kraus1, kraus2, options);
}

SdpSolution solve_dual(const std::vector<ComplexMatrix>& kraus1,
                       const std::vector<ComplexMatrix>& kraus2, const SdpOptions& options) {
    return solve_channel(kraus1, kraus2, options);
}

SdpSolution nuclear_norm_sdp(const ComplexMatrix& m, const SdpOptions& options) {
    if (!all_finite(m)) throw std::invalid_argument("nuclear_norm_sdp: non-finite entries");
    Ipm ip;
    ip.opt = options;
    ip.setup_nuclear(m);
    ip.run();
    ip.finalize(false);
    return ip.sol;
}

}  // namespace qsl

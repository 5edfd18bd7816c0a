#include "fdlink/epic_detector.hpp"

#include <cmath>
#include <stdexcept>

#include "fdlink/kernels.hpp"

namespace fdlink {

EpSchedule EpSchedule::defaults(int j) {
    switch (j) {
        case 4: return {2, 0.7, 0.9};
        case 16: return {5, 0.85, 0.85};
        case 64: return {6, 1.0, 0.85};
    }
    throw std::invalid_argument("ep schedule: order must be 4, 16 or 64");
}

double EpSchedule::beta(int tau, int s) const {
    return beta_scale * std::pow(beta_decay, tau + s);
}

namespace {

/// Per-level prior exponents of one rail: e[g] = sum_b label_bit(g,b)*L_b,
/// so the prior weight of level g is exp(-e[g]).
void rail_prior_exponents(const Constellation& c, const double* la_bits, double* e) {
    const int m = c.pam_levels();
    const int bp = c.bits_per_pam();
    for (int g = 0; g < m; ++g) {
        double s = 0.0;
        for (int b = 0; b < bp; ++b)
            if (c.label_bit(g, b)) s += la_bits[b];
        e[g] = s;
    }
}

}  // namespace

std::vector<double> prior_pmf(const Constellation& c, const LlrBlock& la_sym) {
    const int m = c.pam_levels();
    const int bp = c.bits_per_pam();
    if (la_sym.size() != static_cast<std::size_t>(2 * bp))
        throw std::invalid_argument("prior_pmf: LLR length mismatch");
    std::vector<double> ei(m), eq(m);
    rail_prior_exponents(c, la_sym.data(), ei.data());
    rail_prior_exponents(c, la_sym.data() + bp, eq.data());
    std::vector<double> p(static_cast<std::size_t>(c.order()));
    double sum = 0.0;
    for (int gi = 0; gi < m; ++gi)
        for (int gq = 0; gq < m; ++gq) {
            const double w = std::exp(-(ei[gi] + eq[gq]));
            p[gi * m + gq] = w;
            sum += w;
        }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> posterior_pmf(const Constellation& c, cplx d_e, double v_e,
                                  const LlrBlock& la_sym) {
    const int m = c.pam_levels();
    const int bp = c.bits_per_pam();
    if (la_sym.size() != static_cast<std::size_t>(2 * bp))
        throw std::invalid_argument("posterior_pmf: LLR length mismatch");
    if (!(v_e > 0.0)) throw std::invalid_argument("posterior_pmf: v_e must be positive");
    std::vector<double> ei(m), eq(m);
    rail_prior_exponents(c, la_sym.data(), ei.data());
    rail_prior_exponents(c, la_sym.data() + bp, eq.data());
    std::vector<double> x(static_cast<std::size_t>(c.order()));
    double xmin = 1e300;
    for (int gi = 0; gi < m; ++gi)
        for (int gq = 0; gq < m; ++gq) {
            const cplx d{c.levels()[gi], c.levels()[gq]};
            const double v = std::norm(d - d_e) / v_e + ei[gi] + eq[gq];
            x[gi * m + gq] = v;
            if (v < xmin) xmin = v;
        }
    double sum = 0.0;
    for (double& v : x) {
        v = std::exp(xmin - v);
        sum += v;
    }
    for (double& v : x) v /= sum;
    return x;
}

SymbolMoments pmf_moments(const Constellation& c, const std::vector<double>& pmf) {
    const int m = c.pam_levels();
    if (pmf.size() != static_cast<std::size_t>(c.order()))
        throw std::invalid_argument("pmf_moments: length mismatch");
    cplx mean{0.0, 0.0};
    double e2 = 0.0;
    for (int gi = 0; gi < m; ++gi)
        for (int gq = 0; gq < m; ++gq) {
            const cplx d{c.levels()[gi], c.levels()[gq]};
            mean += pmf[gi * m + gq] * d;
            e2 += pmf[gi * m + gq] * std::norm(d);
        }
    return {mean, e2 - std::norm(mean)};
}

double average_variance(const std::vector<double>& vars) {
    if (vars.empty()) throw std::invalid_argument("average_variance: empty");
    double s = 0.0;
    for (double v : vars) s += v;
    return s / static_cast<double>(vars.size());
}

EpDivideResult ep_divide(cplx mu, double gamma_bar, cplx d_e, double v_e,
                         cplx prev_mean, double prev_var, double v_min) {
    const double denom = v_e - gamma_bar;
    if (!(denom > 0.0)) return {prev_mean, prev_var, true};
    double v = v_e * gamma_bar / denom;
    if (v < v_min) v = v_min;
    return {(mu * v_e - d_e * gamma_bar) / denom, v, false};
}

FdLmmseResult fd_lmmse(PrecoderKind kind, const Fft* fft, const ComplexBlock& y,
                       const ComplexBlock& lambda, const ComplexBlock& d_a,
                       double v_a, double sigma2, OpCounter* ops) {
    const std::size_t n = y.size();
    if (lambda.size() != n || d_a.size() != n)
        throw std::invalid_argument("fd_lmmse: length mismatch");
    if (!(sigma2 > 0.0) || !(v_a >= 0.0))
        throw std::invalid_argument("fd_lmmse: invalid variances");
    const bool walsh = kind == PrecoderKind::Swh;
    if (!walsh && (fft == nullptr || fft->size() != n))
        throw std::invalid_argument("fd_lmmse: transform size mismatch");
    const unsigned lg = ilog2(n);
    const uint64_t tcost = 2ull * n * lg;

    ComplexBlock x = d_a;
    if (walsh)
        fwht(x);
    else
        fft->forward(x);
    if (ops) {
        ops->add(tcost);
        if (!walsh) ops->mul(tcost);
    }

    double lam = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double h2 = std::norm(lambda[k]);
        const double inv_den = 1.0 / (h2 * v_a + sigma2);
        x[k] = std::conj(lambda[k]) * (y[k] - lambda[k] * x[k]) * inv_den;
        lam += h2 * inv_den;
    }
    lam /= static_cast<double>(n);
    if (!(lam > 0.0)) throw std::invalid_argument("fd_lmmse: all-zero channel");

    if (walsh)
        fwht(x);
    else
        fft->inverse(x);
    if (ops) {
        ops->add(tcost);
        if (!walsh) ops->mul(tcost);
    }

    FdLmmseResult r;
    r.d_e.resize(n);
    const double inv_lam = 1.0 / lam;
    for (std::size_t k = 0; k < n; ++k) r.d_e[k] = d_a[k] + inv_lam * x[k];
    r.v_e = inv_lam - v_a;
    return r;
}

LlrBlock dem_extrinsic_llrs(const Constellation& c, const std::vector<double>& w_i,
                            const std::vector<double>& w_q, const LlrBlock& la_sym) {
    const int m = c.pam_levels();
    const int bp = c.bits_per_pam();
    if (w_i.size() != static_cast<std::size_t>(m) || w_q.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("dem_extrinsic_llrs: weight length mismatch");
    if (la_sym.size() != static_cast<std::size_t>(2 * bp))
        throw std::invalid_argument("dem_extrinsic_llrs: LLR length mismatch");
    LlrBlock le(2 * bp);
    for (int rail = 0; rail < 2; ++rail) {
        const std::vector<double>& w = rail == 0 ? w_i : w_q;
        for (int b = 0; b < bp; ++b) {
            double num = 0.0, den = 0.0;
            for (int g = 0; g < m; ++g) {
                if (c.label_bit(g, b))
                    den += w[g];
                else
                    num += w[g];
            }
            const int pos = rail * bp + b;
            le[pos] = clip_llr(std::log(num / den) - la_sym[pos]);
        }
    }
    return le;
}

LlrBlock detect_frame_epic(EpicVariant variant, const PrecoderSpec& spec,
                           const ChannelState& st, const ComplexBlock& y,
                           const LlrBlock& la, const Constellation& c,
                           const EpSchedule& sched, int tau, OpCounter* ops) {
    const std::size_t n = spec.n;
    const std::size_t q = spec.q;
    const std::size_t np = spec.p;
    const int m = c.pam_levels();
    const int bp = c.bits_per_pam();
    const int j = c.order();
    const std::size_t nc = n * static_cast<std::size_t>(2 * bp);
    if (y.size() != n || st.lambda.size() != n)
        throw std::invalid_argument("epic: observation length mismatch");
    if (la.size() != nc) throw std::invalid_argument("epic: prior length mismatch");
    if (tau < 0 || sched.n_self < 0) throw std::invalid_argument("epic: bad schedule");
    const std::size_t half = nc / 2;

    // Prior exponents per symbol and rail; constant over self-iterations.
    std::vector<double> pe_i(n * m), pe_q(n * m);
    for (std::size_t sym = 0; sym < n; ++sym) {
        rail_prior_exponents(c, la.data() + sym * bp, pe_i.data() + sym * m);
        rail_prior_exponents(c, la.data() + half + sym * bp, pe_q.data() + sym * m);
    }

    const auto groups = split_groups(spec, y, st.lambda);
    const Fft* fft = nullptr;
    Fft fft_store(1);
    if (spec.kind != PrecoderKind::Swh) {
        fft_store = Fft(q);
        fft = &fft_store;
    }

    ComplexBlock d_a(n, cplx{0.0, 0.0}), d_prev = d_a, d_e(n), mu(n), mu_prev(n);
    std::vector<double> v_a(np, 1.0), v_prev = v_a, v_e(np, 0.0), ve_prev(np, 0.0);
    std::vector<double> gamma_n(n), w_i(n * m), w_q(n * m);
    ComplexBlock yg(q), lg(q), dg(q);

    const auto& kern = kernels::api();
    for (int s = 0; s <= sched.n_self; ++s) {
        const double beta = sched.beta(tau, s);
        // Equalizer pass, one group at a time.
        for (std::size_t p = 0; p < np; ++p) {
            const GroupView& g = groups[p];
            for (std::size_t i = 0; i < q; ++i) dg[i] = d_a[g.idx[i]];
            FdLmmseResult r =
                fd_lmmse(spec.kind, fft, g.y, g.lambda, dg, v_a[p], st.sigma2, ops);
            if (variant == EpicVariant::Vamp && s > 0)
                r.v_e = damp(r.v_e, ve_prev[p], beta);
            ve_prev[p] = r.v_e;
            v_e[p] = r.v_e;
            for (std::size_t i = 0; i < q; ++i) d_e[g.idx[i]] = r.d_e[i];
        }
        // Symbol posteriors.
        for (std::size_t p = 0; p < np; ++p) {
            const GroupView& g = groups[p];
            const double inv_ve = 1.0 / v_e[p];
            for (std::size_t i = 0; i < q; ++i) {
                const std::size_t sym = g.idx[i];
                kernels::RailArgs ra{};
                ra.inv_ve = inv_ve;
                ra.levels = c.levels().data();
                ra.m = m;
                ra.obs = d_e[sym].real();
                ra.prior_e = pe_i.data() + sym * m;
                ra.w = w_i.data() + sym * m;
                kern.rail_posterior(ra);
                const double mi = ra.s1 / ra.s0;
                double vi = ra.s2 / ra.s0 - mi * mi;
                ra.obs = d_e[sym].imag();
                ra.prior_e = pe_q.data() + sym * m;
                ra.w = w_q.data() + sym * m;
                kern.rail_posterior(ra);
                const double mq = ra.s1 / ra.s0;
                double vq = ra.s2 / ra.s0 - mq * mq;
                if (vi < 0.0) vi = 0.0;
                if (vq < 0.0) vq = 0.0;
                mu[sym] = {mi, mq};
                if (variant == EpicVariant::Vamp && s > 0)
                    mu[sym] = damp(mu[sym], mu_prev[sym], beta);
                mu_prev[sym] = mu[sym];
                gamma_n[sym] = vi + vq;
                if (ops) {
                    ops->add(static_cast<uint64_t>(2 * bp + 3 * j));  // posterior pmf
                    ops->mul(static_cast<uint64_t>(4 * j));
                    ops->add(static_cast<uint64_t>(2 * j));  // mean
                    ops->mul(static_cast<uint64_t>(2 * j));
                    ops->add(static_cast<uint64_t>(2 * j + 1));  // variance
                    ops->mul(static_cast<uint64_t>(2 * j + 1));
                    ops->add(1);  // variance averaging
                }
            }
        }
        // Gaussian division and damping, per group.
        for (std::size_t p = 0; p < np; ++p) {
            const GroupView& g = groups[p];
            double gbar = 0.0;
            for (std::size_t i = 0; i < q; ++i) gbar += gamma_n[g.idx[i]];
            gbar /= static_cast<double>(q);
            const double denom = v_e[p] - gbar;
            double vs;
            bool fell_back = false;
            if (denom > 0.0) {
                vs = v_e[p] * gbar / denom;
                if (vs < 1e-10) vs = 1e-10;
            } else {
                vs = v_prev[p];
                fell_back = true;
            }
            for (std::size_t i = 0; i < q; ++i) {
                const std::size_t sym = g.idx[i];
                const cplx ds = fell_back
                                    ? d_prev[sym]
                                    : (mu[sym] * v_e[p] - d_e[sym] * gbar) / denom;
                d_a[sym] = variant == EpicVariant::Epic ? damp(ds, d_prev[sym], beta) : ds;
                d_prev[sym] = d_a[sym];
                if (ops) {
                    ops->add(2);  // extrinsic division, mean and variance
                    ops->mul(6);
                    ops->add(2);  // damping update
                    ops->mul(4);
                }
            }
            v_a[p] = variant == EpicVariant::Epic ? damp(vs, v_prev[p], beta) : vs;
            v_prev[p] = v_a[p];
        }
    }

    // Extrinsic LLRs from the final self-iteration's rail weights.
    LlrBlock le(nc);
    for (std::size_t sym = 0; sym < n; ++sym) {
        for (int rail = 0; rail < 2; ++rail) {
            const double* w = rail == 0 ? w_i.data() + sym * m : w_q.data() + sym * m;
            const std::size_t base = rail == 0 ? 0 : half;
            for (int b = 0; b < bp; ++b) {
                double num = 0.0, den = 0.0;
                for (int g = 0; g < m; ++g) {
                    if (c.label_bit(g, b))
                        den += w[g];
                    else
                        num += w[g];
                }
                const std::size_t pos = base + sym * bp + b;
                le[pos] = clip_llr(std::log(num / den) - la[pos]);
            }
        }
    }
    return le;
}

}  // namespace fdlink

#include "vekua/varcoef.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>

namespace vekua {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_spec_shape(const VarOperatorSpec& spec) {
    if (spec.n < 1 || spec.Nt < 4) throw std::domain_error("need n >= 1 and Nt >= 4");
    if (int(spec.q.size()) != spec.Nt || int(spec.s.size()) != spec.Nt)
        throw std::domain_error("q and s need Nt samples");
    if (int(spec.p.size()) != spec.n || int(spec.lambda.size()) != spec.n)
        throw std::domain_error("p and lambda need n entries");
    for (const auto& row : spec.p)
        if (int(row.size()) != spec.Nt) throw std::domain_error("p_j needs Nt samples");
    if (spec.alpha == cx(0.0, 0.0))
        throw std::domain_error("alpha = 0 is outside this operator class");
}

double dot(const Freq& xi, const std::vector<double>& v) {
    double acc = 0.0;
    for (size_t j = 0; j < xi.size(); ++j) acc += double(xi[j]) * v[j];
    return acc;
}

// trapezoid primitive of Nt periodic samples; Nt+1 values, endpoint closed
std::vector<double> cumtrapz(const std::vector<double>& f) {
    int Nt = int(f.size());
    double dt = kTwoPi / Nt;
    std::vector<double> F(size_t(Nt) + 1, 0.0);
    for (int k = 0; k < Nt; ++k) {
        double next = f[size_t((k + 1) % Nt)];
        F[size_t(k) + 1] = F[size_t(k)] + 0.5 * dt * (f[size_t(k)] + next);
    }
    return F;
}

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("TORUS_VEKUA_THREADS"))
        hw = unsigned(std::max(1, atoi(env)));
    size_t workers = std::min<size_t>(std::max(1u, hw), count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next++; i < count; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

// naive DFT of one t-line; sign -1 analyzes, +1 synthesizes (no 1/Nt)
std::vector<cx> dft_line(const std::vector<cx>& in, int sign) {
    int Nt = int(in.size());
    std::vector<cx> tw(static_cast<size_t>(Nt));
    for (int k = 0; k < Nt; ++k) {
        double ang = sign * kTwoPi * k / Nt;
        tw[size_t(k)] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<cx> out(static_cast<size_t>(Nt));
    for (int k = 0; k < Nt; ++k) {
        cx acc(0.0, 0.0);
        for (int j = 0; j < Nt; ++j)
            acc += in[size_t(j)] * tw[size_t((long long)(k) * j % Nt)];
        out[size_t(k)] = acc;
    }
    return out;
}

// spectral d/dt of periodic samples (Nyquist derivative dropped)
std::vector<cx> spectral_ddt(const std::vector<cx>& u) {
    int Nt = int(u.size());
    std::vector<cx> c = dft_line(u, -1);
    for (int k = 0; k < Nt; ++k) {
        int freq = k <= Nt / 2 ? k : k - Nt;
        if (2 * k == Nt) freq = 0;
        c[size_t(k)] *= cx(0.0, double(freq)) / double(Nt);
    }
    return dft_line(c, +1);
}

}  // namespace

ConditionPReport validate_condition_p(const VarOperatorSpec& spec) {
    check_spec_shape(spec);
    ConditionPReport rep;
    double mx = 0.0;
    for (double v : spec.q) mx = std::max(mx, std::abs(v));
    double tol = 1e-12 * mx;
    int first_sign = 0;
    for (int k = 0; k < spec.Nt; ++k) {
        double v = spec.q[size_t(k)];
        int sgn = v > tol ? 1 : (v < -tol ? -1 : 0);
        if (sgn == 0) continue;
        if (first_sign == 0) first_sign = sgn;
        else if (sgn != first_sign) {
            rep.ok = false;
            rep.crossing_index = k;
            rep.detail = "q changes sign near t = " +
                         std::to_string(kTwoPi * k / spec.Nt);
            return rep;
        }
    }
    rep.ok = true;
    rep.flipped = first_sign < 0;
    rep.detail = first_sign == 0 ? "q vanishes identically"
                                 : (rep.flipped ? "q <= 0; solver negates q, lambda, "
                                                  "delta, alpha to reach q >= 0"
                                                : "q >= 0");
    return rep;
}

ReducedData reduce(const VarOperatorSpec& spec) {
    ConditionPReport pr = validate_condition_p(spec);
    if (!pr.ok) throw std::domain_error("condition (P) fails: " + pr.detail);

    ReducedData red;
    red.Nt = spec.Nt;
    red.lambda = spec.lambda;
    red.alpha = spec.alpha;
    red.delta = spec.delta;
    std::vector<double> q = spec.q;
    if (pr.flipped) {  // q -> -q, lambda -> -lambda, delta -> -delta,
                       // alpha -> -alpha leaves the operator unchanged
        for (double& v : q) v = -v;
        for (double& v : red.lambda) v = -v;
        red.delta = -red.delta;
        red.alpha = -red.alpha;
    }

    double mx = 0.0;
    for (double v : q) mx = std::max(mx, std::abs(v));
    double qmean = 0.0, smean = 0.0;
    for (int k = 0; k < spec.Nt; ++k) {
        qmean += q[size_t(k)];
        smean += spec.s[size_t(k)];
    }
    red.q0 = kTwoPi * qmean / spec.Nt;
    red.s0 = kTwoPi * smean / spec.Nt;
    if (red.q0 <= 1e-12 * std::max(mx, 1.0))
        throw std::domain_error("degenerate q: q0 vanishes");

    red.p0.resize(size_t(spec.n));
    red.m.resize(size_t(spec.n));
    for (int j = 0; j < spec.n; ++j) {
        double mean = 0.0;
        for (double v : spec.p[size_t(j)]) mean += v;
        mean /= spec.Nt;
        red.p0[size_t(j)] = mean;
        std::vector<double> centered = spec.p[size_t(j)];
        for (double& v : centered) v -= mean;
        red.m[size_t(j)] = cumtrapz(centered);
    }
    red.q_samples = q;
    red.s_samples = spec.s;
    red.Q = cumtrapz(q);
    red.Qtilde = red.Q;
    for (double& v : red.Qtilde) v -= red.q0;
    red.S = cumtrapz(spec.s);

    red.A0 = cx(red.s0, red.delta * red.q0);
    red.B0 = red.alpha * red.q0;
    red.C0.resize(size_t(spec.n));
    for (int j = 0; j < spec.n; ++j)
        red.C0[size_t(j)] = cx(kTwoPi * red.p0[size_t(j)],
                               red.lambda[size_t(j)] * red.q0);
    return red;
}

PartialSpectrum apply_T(const PartialSpectrum& S,
                        const std::vector<std::vector<double>>& m, bool forward) {
    if (int(m.size()) != S.q) throw std::domain_error("m needs one row per x axis");
    PartialSpectrum out;
    out.q = S.q;
    out.Nt = S.Nt;
    double sign = forward ? -1.0 : 1.0;
    for (const auto& [xi, samples] : S.modes) {
        std::vector<cx> mod(samples.size());
        for (size_t k = 0; k < samples.size(); ++k) {
            double phase = 0.0;
            for (size_t j = 0; j < m.size(); ++j) phase += m[j][k] * double(xi[j]);
            mod[k] = samples[k] * std::polar(1.0, sign * phase);
        }
        out.modes.emplace(xi, std::move(mod));
    }
    return out;
}

cx rho(const Freq& xi, const std::vector<double>& lambda, double delta, cx alpha) {
    cx w(dot(xi, lambda), -delta);
    cx r = std::sqrt(w * w + std::norm(alpha));
    if (r.real() < 0.0) r = -r;
    if (std::abs(r.real()) <= 1e-14 * (1.0 + std::abs(r)) && r.imag() < 0.0) r = -r;
    return r;
}

void g_vector(const Freq& xi, const std::vector<cx>& fplus,
              const std::vector<cx>& fminus_conj, cx rho_xi,
              const std::vector<double>& lambda, double delta, cx alpha,
              std::vector<cx>& G1, std::vector<cx>& G2) {
    if (fplus.size() != fminus_conj.size())
        throw std::domain_error("mismatched t-grids");
    cx w(dot(xi, lambda), -delta);
    cx pref = -1.0 / (2.0 * alpha * rho_xi);
    G1.resize(fplus.size());
    G2.resize(fplus.size());
    for (size_t k = 0; k < fplus.size(); ++k) {
        G1[k] = pref * ((w - rho_xi) * fplus[k] - alpha * fminus_conj[k]);
        G2[k] = pref * (-(w + rho_xi) * fplus[k] + alpha * fminus_conj[k]);
    }
}

std::vector<cx> mode_solve(const Freq& xi, const ReducedData& red,
                           const std::vector<cx>& G1, const std::vector<cx>& G2) {
    int Nt = red.Nt;
    if (int(G1.size()) != Nt || int(G2.size()) != Nt)
        throw std::domain_error("G needs Nt samples");
    double xp0 = dot(xi, red.p0);
    cx r = rho(xi, red.lambda, red.delta, red.alpha);

    cx D1 = std::exp(-r * red.q0) - std::exp(cx(red.s0, kTwoPi * xp0));
    cx D2 = 1.0 - std::exp(-r * red.q0 + cx(red.s0, kTwoPi * xp0));
    double dtol = 1e-12 * (1.0 + std::exp(red.s0));
    if (std::min(std::abs(D1), std::abs(D2)) < dtol)
        throw small_divisor_error(
            xi, "mode denominator collapses; the small-divisor condition fails here");

    // h(sigma) = e^{-i(xi.p0) sigma - S(sigma)} G(sigma), closed at sigma = 2 pi
    double dt = kTwoPi / Nt;
    std::vector<cx> h1(size_t(Nt) + 1), h2(size_t(Nt) + 1);
    for (int j = 0; j <= Nt; ++j) {
        double sigma = dt * j;
        cx ph = std::exp(cx(-red.S[size_t(j)], -xp0 * sigma));
        h1[size_t(j)] = ph * G1[size_t(j % Nt)];
        h2[size_t(j)] = ph * G2[size_t(j % Nt)];
    }

    std::vector<cx> u(static_cast<size_t>(Nt));
    for (int k = 0; k < Nt; ++k) {
        double Qk = red.Q[size_t(k)];
        double Qtk = red.Qtilde[size_t(k)];
        cx t1(0.0, 0.0), t2(0.0, 0.0), t3(0.0, 0.0), t4(0.0, 0.0);
        for (int j = 0; j <= Nt; ++j) {
            double wfull = (j == 0 || j == Nt) ? 0.5 * dt : dt;
            // all exponents have nonpositive real part: Qtilde <= 0 <= Q
            t2 += wfull * std::exp(r * (Qtk - red.Q[size_t(j)])) * h1[size_t(j)];
            t4 += wfull * std::exp(r * (red.Q[size_t(j)] - red.q0 - Qk) +
                                   cx(red.s0, kTwoPi * xp0)) *
                  h2[size_t(j)];
            if (j >= k) {
                double w1 = (j == k || j == Nt) ? 0.5 * dt : dt;
                t1 += w1 * std::exp(r * (Qtk - red.Qtilde[size_t(j)])) * h1[size_t(j)];
            }
            if (j <= k && k > 0) {  // k = 0: empty interval, no contribution
                double w3 = (j == 0 || j == k) ? 0.5 * dt : dt;
                t3 += w3 * std::exp(r * (red.Q[size_t(j)] - Qk)) * h2[size_t(j)];
            }
        }
        cx z1 = -t1 + t2 / D1;
        cx z2 = t3 + t4 / D2;
        u[size_t(k)] = red.alpha * std::exp(cx(red.S[size_t(k)], xp0 * dt * k)) *
                       (z1 + z2);
    }

    // leading Euler-Maclaurin term of the four trapezoid sums: the 0 and 2 pi
    // boundary contributions telescope through D1 and D2 and leave
    // (dt^2/12) (f' + (q w - s - i xi.p0) f - alpha q conj f(-xi)) at t_k;
    // subtract it (f recovered from G via f+ = alpha (G1+G2),
    // alpha conj f- = w f+ - alpha rho (G2-G1))
    cx w(dot(xi, red.lambda), -red.delta);
    std::vector<cx> fp(static_cast<size_t>(Nt)), afm(static_cast<size_t>(Nt));
    for (int k = 0; k < Nt; ++k) {
        cx sum = G1[size_t(k)] + G2[size_t(k)];
        cx diff = G2[size_t(k)] - G1[size_t(k)];
        fp[size_t(k)] = red.alpha * sum;
        afm[size_t(k)] = red.alpha * (w * sum - r * diff);
    }
    std::vector<cx> dfp = spectral_ddt(fp);
    for (int k = 0; k < Nt; ++k) {
        double qk = red.q_samples[size_t(k)];
        double sk = red.s_samples[size_t(k)];
        u[size_t(k)] -= dt * dt / 12.0 *
                        (dfp[size_t(k)] + (qk * w - cx(sk, xp0)) * fp[size_t(k)] -
                         qk * afm[size_t(k)]);
    }
    return u;
}

namespace {

cx dot_c(const Freq& xi, const std::vector<cx>& v, bool conj) {
    cx acc(0.0, 0.0);
    for (size_t j = 0; j < xi.size(); ++j)
        acc += double(xi[j]) * (conj ? std::conj(v[j]) : v[j]);
    return acc;
}

// scan the (xi, tau) lattice for a near-solution of re_expr = 0,
// |mod_expr|^2 = rhs; returns the first witness found
std::optional<std::pair<Freq, int>> lattice_witness(
    int dim, double xi_max, int tau_max,
    const std::function<std::pair<double, double>(const Freq&, int)>& residuals) {
    std::optional<std::pair<Freq, int>> found;
    for_each_lattice_point(dim, 0.0, xi_max, [&](const Freq& xi) {
        if (found) return;
        for (int tau = -tau_max; tau <= tau_max; ++tau) {
            auto [r1, r2] = residuals(xi, tau);
            if (std::abs(r1) <= 1e-8 && std::abs(r2) <= 1e-8) {
                found = std::make_pair(xi, tau);
                return;
            }
        }
    });
    return found;
}

}  // namespace

ConditionReport check_conditions(const VarOperatorSpec& spec, const WeightSequence& ws,
                                 const std::vector<double>& eps_list, double xi_max,
                                 int tau_max) {
    ReducedData red = reduce(spec);
    ConditionReport rep;
    double aa = std::abs(red.alpha), dd = std::abs(red.delta);
    rep.cond_i = std::abs(aa - dd) > 1e-12 * (aa + dd + 1.0);

    double rhs = std::norm(red.A0) - std::norm(red.B0);
    double scale = std::abs(red.A0) + std::abs(red.B0) + 1.0;
    rep.witness_ii = lattice_witness(
        spec.n, xi_max, tau_max, [&](const Freq& xi, int tau) {
            cx w = kTwoPi * double(tau) + dot_c(xi, red.C0, false);
            cx wbar = kTwoPi * double(tau) + dot_c(xi, red.C0, true);
            double r1 = (red.A0 * wbar).real() / (scale * scale);
            double r2 = (std::norm(w) - rhs) / (scale * scale);
            return std::make_pair(r1, r2);
        });
    rep.cond_ii = !rep.witness_ii.has_value();

    auto logq = [&](const Freq& xi) {
        cx r = rho(xi, red.lambda, red.delta, red.alpha);
        cx e = std::exp(cx(red.s0, kTwoPi * dot(xi, red.p0)));
        double d = std::min(std::abs(std::exp(-r * red.q0) - e),
                            std::abs(1.0 - std::exp(-r * red.q0) * e));
        return d <= 1e-12 ? -kInf : std::log(d);
    };
    rep.cond_iii = scan_margins(spec.n, 1.0, xi_max, logq, ws, eps_list);

    rep.verdict = rep.cond_iii.verdict;
    if (!rep.cond_i || !rep.cond_ii) rep.verdict = ScanVerdict::fail_witness;
    rep.detail = std::string("(I) ") + (rep.cond_i ? "pass" : "fail") + ", (II) " +
                 (rep.cond_ii ? "pass" : "fail") + ", (III) " +
                 to_string(rep.cond_iii.verdict);
    return rep;
}

ConditionReport check_thm2(const VarOperatorSpec& spec, const WeightSequence& ws,
                           const std::vector<double>& eps_list, double xi_max,
                           int tau_max) {
    for (double l : spec.lambda)
        if (std::abs(l) > 1e-14)
            throw std::domain_error("this classification needs lambda = 0");
    ReducedData red = reduce(spec);
    ConditionReport rep;
    double aa = std::abs(red.alpha), dd = std::abs(red.delta);
    double nA = std::abs(red.A0), nB = std::abs(red.B0);
    const double tol = 1e-12;

    auto no_lattice_solution = [&]() {
        double rhs = nA * nA - nB * nB;
        double scale = nA + nB + 1.0;
        rep.witness_ii = lattice_witness(
            spec.n, xi_max, tau_max, [&](const Freq& xi, int tau) {
                double w = double(tau) + dot(xi, red.p0);
                double r1 = (red.A0 * w).real() / scale;
                double r2 = (4.0 * std::numbers::pi * std::numbers::pi * w * w - rhs) /
                            (scale * scale);
                return std::make_pair(r1, r2);
            });
        return !rep.witness_ii.has_value();
    };

    if (nB > nA + tol * (nA + nB + 1.0)) {
        rep.matched_case = 1;
        rep.detail = "|B0| > |A0|";
    } else if (aa > dd + tol * (aa + dd + 1.0)) {
        if (no_lattice_solution()) {
            rep.matched_case = 2;
            rep.detail = "|B0| <= |A0|, |alpha| > |delta|, no lattice resonance";
        } else {
            rep.detail = "lattice resonance witness found";
        }
    } else if (aa < dd - tol * (aa + dd + 1.0)) {
        if (std::abs(red.s0) > 1e-12) {
            rep.matched_case = 3;
            rep.detail = "|alpha| < |delta| and s0 != 0";
        } else if (!no_lattice_solution()) {
            rep.detail = "lattice resonance witness found";
        } else {
            double r = red.q0 * std::sqrt(dd * dd - aa * aa);
            auto logq = [&](const Freq& xi) {
                double theta = kTwoPi * dot(xi, red.p0) - r;
                double dist = std::abs(theta - kTwoPi * std::round(theta / kTwoPi));
                return dist <= 1e-12 ? -kInf : std::log(dist);
            };
            rep.cond_iii = scan_margins(spec.n, 1.0, xi_max, logq, ws, eps_list);
            if (rep.cond_iii.verdict == ScanVerdict::pass_on_range) {
                rep.matched_case = 4;
                rep.detail = "|alpha| < |delta|, s0 = 0, small-divisor scan passes";
            } else {
                rep.detail = "small-divisor scan " + to_string(rep.cond_iii.verdict);
            }
        }
    } else {
        rep.detail = "|alpha| = |delta|: outside all four cases";
    }
    rep.cond_i = std::abs(aa - dd) > tol * (aa + dd + 1.0);
    rep.cond_ii = !rep.witness_ii.has_value();
    rep.verdict = rep.matched_case != 0 ? ScanVerdict::pass_on_range
                                        : ScanVerdict::fail_witness;
    return rep;
}

DcEquivReport dc_equivalence_check(const std::vector<double>& p0, double q0,
                                   double delta, cx alpha, const WeightSequence& ws,
                                   const std::vector<double>& eps_list,
                                   double xi_max) {
    double aa = std::abs(alpha), dd = std::abs(delta);
    if (aa >= dd) throw std::domain_error("equivalence lemma needs |alpha| < |delta|");
    double r = q0 * std::sqrt(dd * dd - aa * aa);
    int dim = int(p0.size());
    auto theta = [&](const Freq& xi) { return kTwoPi * dot(xi, p0) - r; };

    DcEquivReport rep;
    rep.prime = scan_margins(dim, 1.0, xi_max, [&](const Freq& xi) {
        double th = theta(xi);
        double dist = std::abs(th - kTwoPi * std::round(th / kTwoPi));
        return dist <= 1e-12 ? -kInf : std::log(dist);
    }, ws, eps_list);
    rep.second = scan_margins(dim, 1.0, xi_max, [&](const Freq& xi) {
        double d = 2.0 * std::abs(std::sin(0.5 * theta(xi)));
        return d <= 1e-12 ? -kInf : std::log(d);
    }, ws, eps_list);
    rep.agree = rep.prime.verdict == rep.second.verdict;
    return rep;
}

std::pair<GridFunction, VarSolveDiagnostics> solve(const VarOperatorSpec& spec,
                                                   const GridFunction& f) {
    if (f.n != spec.n + 1) throw std::domain_error("f must live on T^{n+1}");
    if (f.N != spec.Nt) throw std::domain_error("f grid must match Nt");
    ReducedData red = reduce(spec);
    double aa = std::abs(red.alpha), dd = std::abs(red.delta);
    if (std::abs(aa - dd) <= 1e-12 * (aa + dd + 1.0))
        throw std::domain_error("|alpha| = |delta| breaks the mode formulas");

    PartialSpectrum F = partial_analyze(f);
    PartialSpectrum Fred = apply_T(F, red.m, true);

    std::set<Freq> support;
    for (const auto& [xi, samples] : Fred.modes) {
        support.insert(xi);
        support.insert(negate(xi));
    }
    std::vector<Freq> order(support.begin(), support.end());
    std::vector<std::vector<cx>> solved(order.size());
    std::vector<double> dmin(order.size(), kInf);
    std::exception_ptr first_error;
    std::mutex err_mtx;

    const std::vector<cx> zeros(size_t(spec.Nt), cx(0.0, 0.0));
    parallel_for(order.size(), [&](size_t i) {
        try {
            const Freq& xi = order[i];
            const std::vector<cx>* fp = Fred.mode(xi);
            const std::vector<cx>* fm = Fred.mode(negate(xi));
            const std::vector<cx>& fplus = fp ? *fp : zeros;
            std::vector<cx> fminus_conj(size_t(spec.Nt));
            for (int k = 0; k < spec.Nt; ++k)
                fminus_conj[size_t(k)] = fm ? std::conj((*fm)[size_t(k)]) : cx(0, 0);
            cx r = rho(xi, red.lambda, red.delta, red.alpha);
            std::vector<cx> G1, G2;
            g_vector(xi, fplus, fminus_conj, r, red.lambda, red.delta, red.alpha,
                     G1, G2);
            double xp0 = dot(xi, red.p0);
            cx e = std::exp(cx(red.s0, kTwoPi * xp0));
            dmin[i] = std::min(std::abs(std::exp(-r * red.q0) - e),
                               std::abs(1.0 - std::exp(-r * red.q0) * e));
            solved[i] = mode_solve(xi, red, G1, G2);
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mtx);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);

    PartialSpectrum Ured;
    Ured.q = spec.n;
    Ured.Nt = spec.Nt;
    VarSolveDiagnostics diag;
    diag.min_denominator = kInf;
    for (size_t i = 0; i < order.size(); ++i) {
        diag.modes_solved.push_back(order[i]);
        diag.min_denominator = std::min(diag.min_denominator, dmin[i]);
        Ured.modes.emplace(order[i], std::move(solved[i]));
    }
    PartialSpectrum U = apply_T(Ured, red.m, false);
    return {partial_synthesize(U), std::move(diag)};
}

GridFunction apply_operator(const VarOperatorSpec& spec, const GridFunction& u) {
    if (u.n != spec.n + 1) throw std::domain_error("u must live on T^{n+1}");
    if (u.N != spec.Nt) throw std::domain_error("u grid must match Nt");
    PartialSpectrum U = partial_analyze(u);
    std::set<Freq> support;
    for (const auto& [xi, samples] : U.modes) {
        support.insert(xi);
        support.insert(negate(xi));
    }
    const std::vector<cx> zeros(size_t(spec.Nt), cx(0.0, 0.0));
    PartialSpectrum out;
    out.q = spec.n;
    out.Nt = spec.Nt;
    for (const auto& xi : support) {
        const std::vector<cx>* up = U.mode(xi);
        const std::vector<cx>* um = U.mode(negate(xi));
        const std::vector<cx>& uv = up ? *up : zeros;
        std::vector<cx> du = spectral_ddt(uv);
        double lx = dot(xi, spec.lambda);
        std::vector<cx> row(size_t(spec.Nt));
        for (int k = 0; k < spec.Nt; ++k) {
            double px = 0.0;
            for (int j = 0; j < spec.n; ++j)
                px += spec.p[size_t(j)][size_t(k)] * double(xi[size_t(j)]);
            double qk = spec.q[size_t(k)];
            cx conj_m = um ? std::conj((*um)[size_t(k)]) : cx(0.0, 0.0);
            row[size_t(k)] = du[size_t(k)] +
                             (cx(lx * qk, -px) - cx(spec.s[size_t(k)],
                                                    spec.delta * qk)) * uv[size_t(k)] -
                             spec.alpha * qk * conj_m;
        }
        out.modes.emplace(xi, std::move(row));
    }
    return partial_synthesize(out);
}

}  // namespace vekua

#include "vekua/constcoef.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace vekua {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kInf = std::numeric_limits<double>::infinity();

cx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double int_pow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double log_cpp_int(const cpp_int& v) {
    if (v <= 1) return 0.0;
    // bit length gives log2 to within one part in 2^52 after refinement
    size_t bits = boost::multiprecision::msb(v);
    if (bits < 900) return std::log(v.convert_to<double>());
    cpp_int top = v >> (bits - 52);
    return std::log(top.convert_to<double>()) + double(bits - 52) * std::numbers::ln2;
}

}  // namespace

int ConstOperatorSpec::order() const {
    int m = 0;
    for (const auto& [alpha, c] : terms) {
        int s = 0;
        for (int a : alpha) s += a;
        m = std::max(m, s);
    }
    return m;
}

void ConstOperatorSpec::add_term(std::vector<int> alpha, cx c) {
    if (int(alpha.size()) != n) throw std::domain_error("multi-index dimension mismatch");
    int s = 0;
    for (int a : alpha) {
        if (a < 0) throw std::domain_error("negative multi-index entry");
        s += a;
    }
    if (s == 0) throw std::domain_error("alpha = 0 term not allowed; fold it into A");
    terms[std::move(alpha)] = c;
}

cx symbol(const ConstOperatorSpec& spec, const Freq& xi) {
    if (int(xi.size()) != spec.n) throw std::domain_error("frequency dimension mismatch");
    cx acc(0.0, 0.0);
    for (const auto& [alpha, c] : spec.terms) {
        int total = 0;
        double mono = 1.0;
        for (int a = 0; a < spec.n; ++a) {
            total += alpha[size_t(a)];
            mono *= int_pow(double(xi[size_t(a)]), alpha[size_t(a)]);
        }
        acc += i_pow(total) * c * mono;
    }
    return acc;
}

cx discriminant(const ConstOperatorSpec& spec, const Freq& xi) {
    cx a = symbol(spec, xi) - spec.A;
    cx d = std::conj(symbol(spec, negate(xi))) - std::conj(spec.A);
    return a * d - std::norm(spec.B);
}

namespace {

// minimal-norm / incompatibility handling for a rank-deficient 2x2 system
std::variant<ModeSolution, Incompatibility> degenerate_complex_solve(
    const Freq& xi, cx a, cx B, cx d, cx b1, cx b2, double scale) {
    const cx r1[2] = {a, -B};
    const cx r2[2] = {-std::conj(B), d};
    double n1 = std::sqrt(std::norm(r1[0]) + std::norm(r1[1]));
    double n2 = std::sqrt(std::norm(r2[0]) + std::norm(r2[1]));
    double rhs_scale = std::abs(b1) + std::abs(b2);
    const double tiny = 1e-12 * (scale + 1.0);

    if (std::max(n1, n2) <= tiny) {  // zero operator row-pair
        if (rhs_scale <= 1e-12 * (rhs_scale + 1.0) || rhs_scale == 0.0)
            return ModeSolution{cx(0, 0), cx(0, 0), false};
        return Incompatibility{xi};
    }
    const cx* r = n1 >= n2 ? r1 : r2;
    const cx* other = n1 >= n2 ? r2 : r1;
    cx beta = n1 >= n2 ? b1 : b2;
    cx beta_other = n1 >= n2 ? b2 : b1;
    double nr2 = std::norm(r[0]) + std::norm(r[1]);
    cx c = (other[0] * std::conj(r[0]) + other[1] * std::conj(r[1])) / nr2;
    if (std::abs(beta_other - c * beta) > 1e-8 * (rhs_scale + 1.0))
        return Incompatibility{xi};
    // minimal-norm solution of the single surviving equation
    cx x0 = std::conj(r[0]) * beta / nr2;
    cx x1 = std::conj(r[1]) * beta / nr2;
    return ModeSolution{x0, std::conj(x1), false};
}

std::variant<ModeSolution, Incompatibility> solve_zero_mode(
    const ConstOperatorSpec& spec, cx f0, double tol_zero) {
    // a u - B conj(u) = f as a real 2x2 system in (Re u, Im u)
    cx a = -spec.A;
    cx B = spec.B;
    double m[2][2] = {{a.real() - B.real(), -a.imag() - B.imag()},
                      {a.imag() - B.imag(), a.real() + B.real()}};
    double rhs[2] = {f0.real(), f0.imag()};
    double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) > tol_zero) {
        double x = (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det;
        double y = (rhs[1] * m[0][0] - rhs[0] * m[1][0]) / det;
        return ModeSolution{cx(x, y), cx(x, y), true};
    }
    double n0 = std::hypot(m[0][0], m[0][1]);
    double n1 = std::hypot(m[1][0], m[1][1]);
    double rhs_scale = std::abs(f0);
    if (std::max(n0, n1) <= 1e-12) {
        if (rhs_scale == 0.0) return ModeSolution{cx(0, 0), cx(0, 0), false};
        return Incompatibility{Freq(size_t(spec.n), 0)};
    }
    int k = n0 >= n1 ? 0 : 1;
    int o = 1 - k;
    double nr2 = m[k][0] * m[k][0] + m[k][1] * m[k][1];
    double c = (m[o][0] * m[k][0] + m[o][1] * m[k][1]) / nr2;
    if (std::abs(rhs[o] - c * rhs[k]) > 1e-8 * (rhs_scale + 1.0))
        return Incompatibility{Freq(size_t(spec.n), 0)};
    double x = m[k][0] * rhs[k] / nr2;
    double y = m[k][1] * rhs[k] / nr2;
    return ModeSolution{cx(x, y), cx(x, y), false};
}

}  // namespace

std::variant<ModeSolution, Incompatibility> solve_mode(
    const ConstOperatorSpec& spec, const Freq& xi, cx fplus, cx fminus,
    double tol_zero) {
    bool zero_mode = std::all_of(xi.begin(), xi.end(), [](int c) { return c == 0; });
    if (zero_mode) return solve_zero_mode(spec, fplus, tol_zero);

    cx a = symbol(spec, xi) - spec.A;
    cx d = std::conj(symbol(spec, negate(xi))) - std::conj(spec.A);
    cx delta = a * d - std::norm(spec.B);
    cx b1 = fplus, b2 = std::conj(fminus);
    double growth = std::pow(1.0 + freq_norm(xi), 2 * spec.order());

    if (std::abs(delta) > tol_zero * growth) {
        cx uplus = (d * b1 + spec.B * b2) / delta;
        cx v = (std::conj(spec.B) * b1 + a * b2) / delta;
        return ModeSolution{uplus, std::conj(v), true};
    }
    return degenerate_complex_solve(xi, a, spec.B, d, b1, b2, growth);
}

std::pair<Spectrum, SolveDiagnostics> solve(const ConstOperatorSpec& spec,
                                            const Spectrum& F, double tol_zero) {
    std::set<Freq> reps;
    for (const auto& [xi, amp] : F.entries) {
        Freq m = negate(xi);
        reps.insert(std::min(xi, m));
    }
    Spectrum U;
    U.n = F.n;
    SolveDiagnostics diag;
    for (const auto& rep : reps) {
        cx fplus = F.entry(rep);
        cx fminus = F.entry(negate(rep));
        auto res = solve_mode(spec, rep, fplus, fminus, tol_zero);
        if (auto* inc = std::get_if<Incompatibility>(&res)) {
            diag.incompatible_modes.push_back(inc->xi);
            continue;
        }
        const auto& sol = std::get<ModeSolution>(res);
        if (!sol.unique) diag.non_unique_modes.push_back(rep);
        if (sol.uplus != cx(0, 0)) U.set(rep, sol.uplus);
        Freq neg = negate(rep);
        if (neg != rep && sol.uminus != cx(0, 0)) U.set(neg, sol.uminus);
    }
    return {std::move(U), std::move(diag)};
}

Spectrum apply(const ConstOperatorSpec& spec, const Spectrum& U) {
    std::set<Freq> support;
    for (const auto& [xi, amp] : U.entries) {
        support.insert(xi);
        support.insert(negate(xi));
    }
    Spectrum out;
    out.n = U.n;
    for (const auto& xi : support) {
        cx v = (symbol(spec, xi) - spec.A) * U.entry(xi) -
               spec.B * std::conj(U.entry(negate(xi)));
        out.set(xi, v);
    }
    return out;
}

SolvabilityReport check_dc_m(const ConstOperatorSpec& spec, const WeightSequence& ws,
                             const std::vector<double>& eps_list, double xi_max,
                             double gamma_floor, double tol_zero) {
    if (gamma_floor < 1.0 || xi_max < gamma_floor)
        throw std::domain_error("check_dc_m: need xi_max >= gamma_floor >= 1");
    const int two_m = 2 * spec.order();
    auto logq = [&](const Freq& xi) {
        double mag = std::abs(discriminant(spec, xi));
        double threshold = tol_zero * std::pow(1.0 + freq_norm(xi), two_m);
        return mag <= threshold ? -kInf : std::log(mag);
    };
    MarginScanResult scan = scan_margins(spec.n, gamma_floor, xi_max, logq, ws, eps_list);
    SolvabilityReport rep;
    rep.xi_max = xi_max;
    rep.gamma_floor = gamma_floor;
    rep.zero_modes = std::move(scan.zero_modes);
    rep.curves = std::move(scan.curves);
    rep.verdict = scan.verdict;
    return rep;
}

bool SmoothReport::any_pass() const {
    return std::any_of(rows.begin(), rows.end(), [](const Row& r) {
        return r.verdict == ScanVerdict::pass_on_range;
    });
}

SmoothReport check_smooth_dc(const ConstOperatorSpec& spec,
                             const std::vector<double>& gamma_list, double xi_max,
                             double tol_zero) {
    const int two_m = 2 * spec.order();
    SmoothReport rep;
    for (double gamma : gamma_list) {
        SmoothReport::Row row;
        row.gamma = gamma;
        row.min_margin = kInf;
        double floor = std::max(gamma, 1.0);
        for_each_lattice_point(spec.n, floor, xi_max, [&](const Freq& xi) {
            if (row.verdict == ScanVerdict::degenerate) return;
            double r = freq_norm(xi);
            double mag = std::abs(discriminant(spec, xi));
            if (mag <= tol_zero * std::pow(1.0 + r, two_m)) {
                row.verdict = ScanVerdict::degenerate;
                row.witness = xi;
                return;
            }
            double margin = std::log(mag) + gamma * std::log1p(r);
            if (margin < row.min_margin) {
                row.min_margin = margin;
                if (margin < -1e-9) row.witness = xi;
            }
        });
        if (row.verdict != ScanVerdict::degenerate)
            row.verdict = row.min_margin >= -1e-9 ? ScanVerdict::pass_on_range
                                                  : ScanVerdict::fail_witness;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

bool smooth_implies_m_check(const WeightSequence& ws, int gamma, double eps,
                            double xi_max) {
    if (gamma < 0) throw std::domain_error("gamma must be a nonnegative integer");
    double log_c_eps = gamma * std::log(eps) - ws.log_m(gamma) -
                       std::lgamma(double(gamma) + 1.0);
    for (int r = 1; r <= int(xi_max); ++r) {
        double lhs = -double(gamma) * std::log1p(double(r));
        double rhs = log_c_eps + log_assoc_inf(ws, eps, 1.0 + double(r));
        if (lhs < rhs - 1e-9) return false;
    }
    return true;
}

std::vector<Freq> zero_set(const ConstOperatorSpec& spec, double xi_max,
                           double tol_zero) {
    const int two_m = 2 * spec.order();
    std::vector<Freq> out;
    for_each_lattice_point(spec.n, 0.0, xi_max, [&](const Freq& xi) {
        double mag = std::abs(discriminant(spec, xi));
        if (mag <= tol_zero * std::pow(1.0 + freq_norm(xi), two_m)) out.push_back(xi);
    });
    std::sort(out.begin(), out.end());
    return out;
}

Spectrum build_obstruction(const ConstOperatorSpec& spec,
                           const std::vector<Freq>& omega0,
                           ObstructionVariant variant) {
    if (omega0.empty()) throw std::domain_error("build_obstruction: empty witness set");
    Spectrum S;
    S.n = spec.n;
    for (const auto& xi : omega0) {
        cx amp = variant == ObstructionVariant::delta ? discriminant(spec, xi)
                                                      : symbol(spec, xi) - spec.A;
        if (amp != cx(0, 0)) S.set(xi, amp);
    }
    return S;
}

ConstOperatorSpec preset_laplace(int n) {
    ConstOperatorSpec spec;
    spec.n = n;
    for (int j = 0; j < n; ++j) {
        std::vector<int> alpha(size_t(n), 0);
        alpha[size_t(j)] = 2;
        spec.add_term(std::move(alpha), cx(1.0, 0.0));
    }
    return spec;
}

ConstOperatorSpec preset_heat(int n, double eta) {
    if (eta <= 0.0) throw std::domain_error("heat preset needs eta > 0");
    ConstOperatorSpec spec;
    spec.n = n + 1;
    std::vector<int> dt(size_t(n + 1), 0);
    dt[0] = 1;
    spec.add_term(std::move(dt), cx(1.0, 0.0));
    for (int j = 1; j <= n; ++j) {
        std::vector<int> alpha(size_t(n + 1), 0);
        alpha[size_t(j)] = 2;
        spec.add_term(std::move(alpha), cx(-eta * eta, 0.0));
    }
    return spec;
}

ConstOperatorSpec preset_wave(int n, double eta) {
    if (eta <= 0.0) throw std::domain_error("wave preset needs eta > 0");
    ConstOperatorSpec spec;
    spec.n = n + 1;
    std::vector<int> dtt(size_t(n + 1), 0);
    dtt[0] = 2;
    spec.add_term(std::move(dtt), cx(1.0, 0.0));
    for (int j = 1; j <= n; ++j) {
        std::vector<int> alpha(size_t(n + 1), 0);
        alpha[size_t(j)] = 2;
        spec.add_term(std::move(alpha), cx(-eta * eta, 0.0));
    }
    return spec;
}

ConstOperatorSpec preset_vector_field(const std::vector<cx>& C) {
    ConstOperatorSpec spec;
    spec.n = int(C.size()) + 1;
    std::vector<int> dt(size_t(spec.n), 0);
    dt[0] = 1;
    spec.add_term(std::move(dt), cx(1.0, 0.0));
    for (size_t j = 0; j < C.size(); ++j) {
        std::vector<int> alpha(size_t(spec.n), 0);
        alpha[j + 1] = 1;
        spec.add_term(std::move(alpha), C[j]);
    }
    return spec;
}

namespace {

DiophantineNumber finish_cf(std::vector<cpp_int> quotients, std::string label) {
    DiophantineNumber d;
    d.quotients = std::move(quotients);
    d.label = std::move(label);
    cpp_int p_prev = 1, q_prev = 0, p = d.quotients.at(0), q = 1;
    d.convergents.emplace_back(p, q);
    for (size_t k = 1; k < d.quotients.size(); ++k) {
        cpp_int pn = d.quotients[k] * p + p_prev;
        cpp_int qn = d.quotients[k] * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        d.convergents.emplace_back(p, q);
    }
    // backward evaluation avoids forming the huge numerator/denominator
    double x = 0.0;
    for (size_t k = d.quotients.size(); k-- > 0;) {
        double a = log_cpp_int(d.quotients[k]) > 600.0
                       ? 1e260
                       : d.quotients[k].convert_to<double>();
        x = k + 1 < d.quotients.size() ? a + 1.0 / x : a;
        if (k == 0) break;
    }
    d.value = x;
    return d;
}

}  // namespace

std::vector<double> DiophantineNumber::small_denominators(double bound) const {
    std::vector<double> out;
    for (const auto& [p, q] : convergents) {
        if (log_cpp_int(q) > 700.0) break;
        double qd = q.convert_to<double>();
        if (qd <= bound) out.push_back(qd);
    }
    return out;
}

DiophantineNumber cf_sqrt2(int depth) {
    std::vector<cpp_int> a{1};
    for (int k = 1; k <= depth; ++k) a.emplace_back(2);
    return finish_cf(std::move(a), "sqrt2");
}

DiophantineNumber cf_golden(int depth) {
    std::vector<cpp_int> a(size_t(depth) + 1, cpp_int(1));
    return finish_cf(std::move(a), "golden");
}

DiophantineNumber cf_liouville_like(int b, int depth) {
    if (b < 2) throw std::domain_error("liouville_like needs b >= 2");
    if (depth > 30) throw std::domain_error("liouville_like depth capped at 30");
    const double bit_budget = 5e4;
    std::vector<cpp_int> a{0};
    double log2b = std::log2(double(b));
    double fact = 1.0;
    for (int k = 1; k <= depth; ++k) {
        fact *= double(k);
        if (fact * log2b > bit_budget)
            throw resource_error("liouville_like: quotient b^" + std::to_string(k) +
                                 "! exceeds the extended-precision budget");
        cpp_int q = boost::multiprecision::pow(cpp_int(b), (unsigned)llround(fact));
        a.push_back(std::move(q));
    }
    return finish_cf(std::move(a), "liouville_like(" + std::to_string(b) + "," +
                                       std::to_string(depth) + ")");
}

DiophantineNumber cf_from_value(double x, int depth) {
    if (!std::isfinite(x)) throw std::domain_error("cf_from_value: non-finite input");
    std::vector<cpp_int> a;
    double y = x;
    for (int k = 0; k <= depth; ++k) {
        double fl = std::floor(y);
        if (k > 0 && fl < 1.0) break;
        a.emplace_back((long long)(fl));
        double frac = y - fl;
        if (frac < 1e-12) break;
        y = 1.0 / frac;
        if (y > 1e12) break;  // double precision exhausted
    }
    return finish_cf(std::move(a), "cf(" + std::to_string(x) + ")");
}

double irrationality_estimate(const DiophantineNumber& d) {
    double worst = 0.0;
    for (size_t k = 1; k + 1 < d.convergents.size(); ++k) {
        const cpp_int& q = d.convergents[k].second;
        // tiny denominators make log a / log q meaningless; the estimate is a
        // tail statement, so only sufficiently grown convergents count
        if (q < 10) continue;
        worst = std::max(worst, log_cpp_int(d.quotients[k + 1]) / log_cpp_int(q));
    }
    return 2.0 + worst;
}

WaveVerdict classify_wave(cx A, cx B, const DiophantineNumber& eta,
                          const WeightSequence& ws, double xi_max) {
    WaveVerdict v;
    const double tol = 1e-12;
    if (std::abs(B) < std::abs(A.imag()) - tol) {
        v.matched_condition = 1;
        v.solvable_on_range = true;
        v.detail = "|B| < |Im A|";
        return v;
    }
    bool algebra2 = std::abs(std::abs(A) - std::abs(B)) <=
                        tol * (std::abs(A) + std::abs(B) + 1.0) &&
                    std::abs(A.real()) <= tol;
    if (algebra2) {
        v.mu_estimate = irrationality_estimate(eta);
        if (v.mu_estimate <= 2.5) {
            v.matched_condition = 2;
            v.solvable_on_range = true;
            v.detail = "|A| = |B|, Re A = 0, bounded-quotient eta (mu ~ " +
                       std::to_string(v.mu_estimate) + ", epistemic)";
            return v;
        }
        v.detail = "condition 2 algebra holds but eta looks Liouville-like (mu ~ " +
                   std::to_string(v.mu_estimate) + "); ";
    }
    ConstOperatorSpec spec = preset_wave(1, eta.value);
    spec.A = A;
    spec.B = B;
    v.scan = check_dc_m(spec, ws, {0.5, 1.0}, xi_max);
    if (v.scan->verdict == ScanVerdict::pass_on_range) {
        v.matched_condition = 3;
        v.solvable_on_range = true;
        v.detail += "(DC_M) scan pass-on-range";
    } else {
        v.matched_condition = 0;
        v.detail += "(DC_M) scan " + to_string(v.scan->verdict);
    }
    return v;
}

cx vector_field_discriminant(const std::vector<cx>& C, cx A, cx B,
                             const Freq& tau_xi) {
    if (tau_xi.size() != C.size() + 1)
        throw std::domain_error("frequency must be (tau, xi_1..xi_n)");
    double tau = double(tau_xi[0]);
    cx dot(0.0, 0.0), dot_conj(0.0, 0.0);
    for (size_t j = 0; j < C.size(); ++j) {
        dot += double(tau_xi[j + 1]) * C[j];
        dot_conj += double(tau_xi[j + 1]) * std::conj(C[j]);
    }
    cx w = tau + dot;
    return -std::norm(w) + std::norm(A) - std::norm(B) -
           cx(0.0, 2.0) * (A * (tau + dot_conj)).real();
}

VectorFieldVerdict classify_vector_field(const std::vector<cx>& C, cx A, cx B,
                                         const WeightSequence& ws, double xi_max) {
    VectorFieldVerdict v;
    ConstOperatorSpec spec = preset_vector_field(C);
    spec.A = A;
    spec.B = B;

    // dual-route guard: closed form vs. the polynomial-symbol route
    double cross_box = std::min(xi_max, 30.0);
    for_each_lattice_point(spec.n, 0.0, cross_box, [&](const Freq& zeta) {
        cx lhs = vector_field_discriminant(C, A, B, zeta);
        cx rhs = discriminant(spec, zeta);
        double rel = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
        v.closed_form_max_mismatch = std::max(v.closed_form_max_mismatch, rel);
    });

    double max_im = 0.0;
    for (cx c : C) max_im = std::max(max_im, std::abs(c.imag()));
    const double tol = 1e-12;
    if (max_im <= tol) {
        if (std::abs(B) > std::abs(A) + tol) {
            v.matched_condition = 1;
            v.solvable_on_range = true;
            v.detail = "|B| > |A|";
            return v;
        }
        if (std::abs(B) < std::abs(A) - tol && std::abs(A.real()) > tol) {
            v.matched_condition = 2;
            v.solvable_on_range = true;
            v.detail = "|B| < |A| and Re A != 0";
            return v;
        }
    }
    v.scan = check_dc_m(spec, ws, {0.5, 1.0}, xi_max);
    if (v.scan->verdict == ScanVerdict::pass_on_range) {
        v.matched_condition = 3;
        v.solvable_on_range = true;
        v.detail = "(DC_M) scan pass-on-range";
    } else {
        v.matched_condition = 0;
        v.detail = "(DC_M) scan " + to_string(v.scan->verdict);
    }
    return v;
}

}  // namespace vekua

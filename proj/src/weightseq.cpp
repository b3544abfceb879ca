#include "vekua/weightseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vekua {

namespace {

// sup over 0 <= j,k <= cap, j+k >= 1 of exp((lm(j+k) - lm(j) - lm(k))/(j+k))
double stability_sup(const std::function<double(int)>& lm, int cap) {
    double sup = 1.0;
    for (int j = 0; j <= cap; ++j) {
        for (int k = j; k <= cap; ++k) {
            if (j + k == 0 || j + k > cap) continue;
            double r = std::exp((lm(j + k) - lm(j) - lm(k)) / (j + k));
            sup = std::max(sup, r);
        }
    }
    return sup;
}

}  // namespace

WeightSequence make_gevrey(double s) {
    if (s < 1.0) throw std::domain_error("gevrey order must satisfy s >= 1");
    auto lm = [s](int j) { return (s - 1.0) * std::lgamma(double(j) + 1.0); };
    double sup = stability_sup(lm, 64);
    double h = 1.0;
    while (h < sup * (1.0 - 1e-12)) h *= 2.0;
    WeightSequence ws;
    ws.log_m = lm;
    ws.H = h;
    ws.label = "gevrey(" + std::to_string(s) + ")";
    return ws;
}

WeightSequence make_table(std::vector<double> log_m, double H, std::string label) {
    if (log_m.size() < 2) throw std::domain_error("table needs at least m_0, m_1");
    WeightSequence ws;
    ws.log_m = [tab = std::move(log_m)](int j) {
        if (j < 0) throw std::domain_error("negative weight index");
        int last = int(tab.size()) - 1;
        if (j <= last) return tab[size_t(j)];
        // continue with the last increment; keeps 2*lm(j) <= lm(j-1)+lm(j+1)
        double step = last >= 1 ? tab[size_t(last)] - tab[size_t(last) - 1] : 0.0;
        return tab[size_t(last)] + step * (j - last);
    };
    ws.H = H;
    ws.label = std::move(label);
    return ws;
}

ValidationReport validate(const WeightSequence& ws, int j_max) {
    if (j_max < 2) throw std::domain_error("validate needs j_max >= 2");
    const double tol = 1e-12;
    ValidationReport rep;

    rep.normalization_ok =
        std::abs(ws.log_m(0)) <= tol && std::abs(ws.log_m(1)) <= tol;
    if (!rep.normalization_ok)
        rep.failures.push_back("property i: m_0 = m_1 = 1 violated");

    rep.log_convex_ok = true;
    for (int j = 1; j < j_max; ++j) {
        if (2.0 * ws.log_m(j) > ws.log_m(j - 1) + ws.log_m(j + 1) + tol) {
            rep.log_convex_ok = false;
            rep.failures.push_back("property ii: log-convexity fails at j=" +
                                   std::to_string(j));
            break;
        }
    }

    rep.h_estimate = stability_sup(ws.log_m, j_max);
    rep.stability_ok = rep.h_estimate <= ws.H * (1.0 + 1e-9);
    if (!rep.stability_ok)
        rep.failures.push_back("property iii: observed sup " +
                               std::to_string(rep.h_estimate) + " exceeds H");
    return rep;
}

double log_assoc_inf(const WeightSequence& ws, double eps, double t) {
    if (eps <= 0.0) throw std::domain_error("log_assoc_inf: eps must be > 0");
    if (t < 1.0) throw std::domain_error("log_assoc_inf: t must be >= 1");
    const double log_scale = std::log(eps) + std::log(t);
    double best = 0.0;  // j = 0 term: log(m_0 0!) = 0
    double prev = 0.0;
    int increases = 0;
    double log_fact = 0.0;
    for (int j = 1; j <= 100000; ++j) {
        log_fact += std::log(double(j));
        double term = ws.log_m(j) + log_fact - double(j) * log_scale;
        if (term < best) best = term;
        increases = term > prev ? increases + 1 : 0;
        prev = term;
        if (increases >= 3) return best;
    }
    throw resource_error("log_assoc_inf: scan cap exceeded at eps=" +
                         std::to_string(eps) + ", t=" + std::to_string(t));
}

int DeltaIndex::order() const {
    int s = 0;
    for (int g : gamma) s += g;
    return s;
}

double DeltaIndex::log_multinomial() const {
    double v = std::lgamma(double(order()) + 1.0);
    for (int g : gamma) v -= std::lgamma(double(g) + 1.0);
    return v;
}

namespace {

void delta_rec(int k, int pos, int remaining, std::vector<int>& gamma,
               std::vector<DeltaIndex>& out) {
    if (pos > k) {
        if (remaining == 0) out.push_back(DeltaIndex{gamma});
        return;
    }
    for (int g = 0; g * pos <= remaining; ++g) {
        gamma[size_t(pos) - 1] = g;
        delta_rec(k, pos + 1, remaining - g * pos, gamma, out);
    }
    gamma[size_t(pos) - 1] = 0;
}

}  // namespace

std::vector<DeltaIndex> enumerate_delta(int k) {
    if (k < 0) throw std::domain_error("enumerate_delta: k must be >= 0");
    if (k > 40) throw resource_error("enumerate_delta: k > 40");
    if (k == 0) return {DeltaIndex{{}}};
    std::vector<DeltaIndex> out;
    std::vector<int> gamma(size_t(k), 0);
    delta_rec(k, 1, k, gamma, out);
    return out;
}

std::pair<double, double> delta_sum_identity(int k, double R) {
    if (k < 1 || k > 20) throw std::domain_error("delta_sum_identity: need 1 <= k <= 20");
    if (R <= 0.0) throw std::domain_error("delta_sum_identity: R must be > 0");
    double lhs = 0.0;
    for (const auto& idx : enumerate_delta(k))
        lhs += std::exp(idx.log_multinomial() + idx.order() * std::log(R));
    double rhs = R * std::pow(1.0 + R, k - 1);
    return {lhs, rhs};
}

GevreySandwich gevrey_bounds(double s, double t) {
    if (s <= 1.0) throw std::domain_error("gevrey_bounds: s must be > 1");
    if (t < 1.0) throw std::domain_error("gevrey_bounds: t must be >= 1");
    const double log_t = std::log(t);
    double mid = 0.0, prev = 0.0, log_fact = 0.0;
    int increases = 0;
    for (int j = 1; j <= 100000 && increases < 3; ++j) {
        log_fact += std::log(double(j));
        double term = double(j) * log_t - s * log_fact;
        if (term > mid) mid = term;
        increases = term < prev ? increases + 1 : 0;
        prev = term;
    }
    GevreySandwich out;
    out.mid = mid;
    out.lower = std::pow(t, 1.0 / s) - s * std::log(1.0 / (1.0 - 1.0 / s));
    out.upper = s * std::pow(t, 1.0 / s);
    return out;
}

}  // namespace vekua

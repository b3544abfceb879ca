#ifndef VEKUA_WEIGHTSEQ_HPP
#define VEKUA_WEIGHTSEQ_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vekua {

/// Thrown when a scan or enumeration exceeds its desk-scale cap.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A weight sequence given through the logs of its terms, log m_j, together
/// with the moderate-growth constant H.  All derived quantities stay in log
/// domain; the raw m_j are never materialized.
struct WeightSequence {
    std::function<double(int)> log_m;
    double H = 1.0;
    std::string label;
};

/// Gevrey sequence of order s >= 1: log m_j = (s-1) log j!.
/// H is the smallest power of two passing the stability bound on j,k <= 64.
WeightSequence make_gevrey(double s);

/// Tabulated sequence.  Indices past the table are continued with the last
/// log-increment, which preserves log-convexity.
WeightSequence make_table(std::vector<double> log_m, double H,
                          std::string label = "table");

struct ValidationReport {
    bool normalization_ok = false;  // m_0 = m_1 = 1
    bool log_convex_ok = false;     // m_j^2 <= m_{j-1} m_{j+1}
    bool stability_ok = false;      // (m_{j+k}/(m_j m_k))^{1/(j+k)} <= H
    double h_estimate = 1.0;        // supremum actually observed
    std::vector<std::string> failures;
    bool pass() const { return normalization_ok && log_convex_ok && stability_ok; }
};

ValidationReport validate(const WeightSequence& ws, int j_max);

/// log inf_j [ m_j j! / (eps t)^j ].  The term sequence is log-convex in j,
/// so the scan walks up from j = 0 and stops after three consecutive strict
/// increases (one suffices in exact arithmetic; three absorb round-off
/// plateaus).  Throws resource_error past j = 1e5.
double log_assoc_inf(const WeightSequence& ws, double eps, double t);

/// Multi-index gamma = (gamma_1, ..., gamma_k) with sum_l l*gamma_l = k.
struct DeltaIndex {
    std::vector<int> gamma;
    int order() const;            // |gamma| = sum gamma_l
    double log_multinomial() const;  // log(|gamma|! / gamma!)
};

/// All elements of Delta(k), lexicographic in gamma, one empty index for k=0.
/// Cardinality equals the partition number p(k).  Capped at k = 40.
std::vector<DeltaIndex> enumerate_delta(int k);

/// lhs = sum_{gamma in Delta(k)} (|gamma|!/gamma!) R^{|gamma|} by enumeration,
/// rhs = R (1+R)^{k-1}.  The two agree identically; callers assert it.
std::pair<double, double> delta_sum_identity(int k, double R);

struct GevreySandwich {
    double lower, mid, upper;
};

/// mid = sup_j log(t^j / (j!)^s) by unimodal scan, sandwiched between
/// t^{1/s} - s log(1/(1-1/s)) and s t^{1/s}.  Requires s > 1.
GevreySandwich gevrey_bounds(double s, double t);

}  // namespace vekua

#endif

#ifndef VEKUA_CONSTCOEF_HPP
#define VEKUA_CONSTCOEF_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "vekua/margin.hpp"
#include "vekua/spectral.hpp"
#include "vekua/weightseq.hpp"

namespace vekua {

/// Constant-coefficient operator P u = L u - A u - B conj(u) on T^n, with
/// L = sum_{0 < |alpha| <= m} c_alpha d^alpha.  The alpha = 0 term is
/// excluded; fold constants into A.
struct ConstOperatorSpec {
    int n = 1;
    std::map<std::vector<int>, cx> terms;  // multi-index -> c_alpha
    cx A{0.0, 0.0};
    cx B{0.0, 0.0};

    int order() const;
    void add_term(std::vector<int> alpha, cx c);
};

/// sigma_L(xi) = sum i^{|alpha|} c_alpha xi^alpha
cx symbol(const ConstOperatorSpec& spec, const Freq& xi);

/// Delta_xi = (sigma(xi) - A)(conj sigma(-xi) - conj A) - |B|^2; the
/// determinant of the 2x2 per-frequency system.  conj(Delta_xi) = Delta_{-xi}.
cx discriminant(const ConstOperatorSpec& spec, const Freq& xi);

struct ModeSolution {
    cx uplus;   // u_hat(xi)
    cx uminus;  // u_hat(-xi)
    bool unique = true;  // false: minimal-norm pick of a rank-deficient system
};

/// No solution exists with these right-hand modes: the rank-deficient
/// 2x2 system's compatibility condition fails at xi.
struct Incompatibility {
    Freq xi;
};

/// Solves the coupled pair {xi, -xi} of P u = f given fplus = f_hat(xi),
/// fminus = f_hat(-xi).  xi = 0 degenerates to a real-linear 2x2 system in
/// (Re u_hat(0), Im u_hat(0)).  The zero threshold is relative to the
/// symbol's growth: |Delta| <= tol_zero (1+|xi|)^{2m}.
std::variant<ModeSolution, Incompatibility> solve_mode(
    const ConstOperatorSpec& spec, const Freq& xi, cx fplus, cx fminus,
    double tol_zero = 1e-10);

struct SolveDiagnostics {
    std::vector<Freq> non_unique_modes;
    std::vector<Freq> incompatible_modes;
    bool ok() const { return incompatible_modes.empty(); }
};

/// Mode-by-mode solve over the support of F (each {xi,-xi} pair visited once,
/// smallest representative first).
std::pair<Spectrum, SolveDiagnostics> solve(const ConstOperatorSpec& spec,
                                            const Spectrum& F,
                                            double tol_zero = 1e-10);

/// Applies P in the spectral domain: (Pu)^(xi) = (sigma-A) u_hat(xi)
/// - B conj(u_hat(-xi)).
Spectrum apply(const ConstOperatorSpec& spec, const Spectrum& U);

struct SolvabilityReport {
    double xi_max = 0.0;
    double gamma_floor = 1.0;
    std::vector<Freq> zero_modes;  // Omega within the scan range
    std::vector<MarginCurve> curves;
    ScanVerdict verdict = ScanVerdict::pass_on_range;
};

/// Finite-range check of |Delta_xi| >= C_eps inf_j m_j j!/(eps^j (1+|xi|)^j)
/// over gamma_floor <= |xi| <= xi_max.
SolvabilityReport check_dc_m(const ConstOperatorSpec& spec, const WeightSequence& ws,
                             const std::vector<double>& eps_list, double xi_max,
                             double gamma_floor = 1.0, double tol_zero = 1e-10);

struct SmoothReport {
    struct Row {
        double gamma = 0.0;
        double min_margin = 0.0;  // min of log|Delta| + gamma log(1+|xi|)
        ScanVerdict verdict = ScanVerdict::pass_on_range;
        std::optional<Freq> witness;
    };
    std::vector<Row> rows;
    bool any_pass() const;
};

/// Power-law analogue: |Delta_xi| >= (1+|xi|)^{-gamma} for |xi| >= max(gamma,1).
SmoothReport check_smooth_dc(const ConstOperatorSpec& spec,
                             const std::vector<double>& gamma_list, double xi_max,
                             double tol_zero = 1e-10);

/// Pointwise check that the power-law bound dominates the associated-function
/// bound with C_eps = eps^gamma/(m_gamma gamma!); true on the whole range by
/// construction, scanned anyway as a consistency guard.
bool smooth_implies_m_check(const WeightSequence& ws, int gamma, double eps,
                            double xi_max);

/// All |xi| <= xi_max with |Delta_xi| below the relative zero threshold;
/// closed under negation.
std::vector<Freq> zero_set(const ConstOperatorSpec& spec, double xi_max,
                           double tol_zero = 1e-10);

enum class ObstructionVariant { delta, sigma };

/// Right-hand sides from the non-solvability construction:
/// sum Delta_xi e^{i xi.x} (delta) or sum (sigma(xi)-A) e^{i xi.x} (sigma).
Spectrum build_obstruction(const ConstOperatorSpec& spec,
                           const std::vector<Freq>& omega0,
                           ObstructionVariant variant);

// classical operators on T^n (laplace) and T^{n+1} with t first (heat, wave,
// vector_field)
ConstOperatorSpec preset_laplace(int n);
ConstOperatorSpec preset_heat(int n, double eta);
ConstOperatorSpec preset_wave(int n, double eta);
ConstOperatorSpec preset_vector_field(const std::vector<cx>& C);

/// Finite continued fraction [a0; a1, a2, ...], the desk-scale surrogate for
/// an irrational number.  Convergents p_k/q_k are exact integers.
struct DiophantineNumber {
    std::vector<boost::multiprecision::cpp_int> quotients;
    std::vector<std::pair<boost::multiprecision::cpp_int,
                          boost::multiprecision::cpp_int>> convergents;
    double value = 0.0;
    std::string label;

    /// Convergent denominators that fit below the given bound, as doubles.
    std::vector<double> small_denominators(double bound) const;
};

DiophantineNumber cf_sqrt2(int depth = 25);
DiophantineNumber cf_golden(int depth = 25);
/// Quotients a_k = b^{k!}; throws resource_error when a quotient would
/// exceed the extended-precision budget (b=2 supports depth <= 8).
DiophantineNumber cf_liouville_like(int b, int depth);
/// CF expansion of an arbitrary value by the floor/reciprocal algorithm.
DiophantineNumber cf_from_value(double x, int depth = 20);

/// mu ~ 2 + max_k log a_{k+1} / log q_k; > ~2.5 flags Liouville-like
/// approximability on the available depth.
double irrationality_estimate(const DiophantineNumber& d);

struct WaveVerdict {
    int matched_condition = 0;  // 1, 2, 3; 0 = none
    bool solvable_on_range = false;
    double mu_estimate = 0.0;   // filled when condition 2's algebra holds
    std::optional<SolvabilityReport> scan;
    std::string detail;
};

/// Wave operator trichotomy: (1) |B| < |Im A|; (2) |A| = |B|, Re A = 0 and
/// eta non-Liouville (epistemic, from the convergents); (3) the (DC_M) scan.
WaveVerdict classify_wave(cx A, cx B, const DiophantineNumber& eta,
                          const WeightSequence& ws, double xi_max);

/// Closed-form discriminant of d/dt + sum C_j d/dx_j minus A, B coupling;
/// frequency order (tau, xi_1, ..., xi_n).
cx vector_field_discriminant(const std::vector<cx>& C, cx A, cx B,
                             const Freq& tau_xi);

struct VectorFieldVerdict {
    int matched_condition = 0;  // Im C = 0 trichotomy; 0 = scan path
    bool solvable_on_range = false;
    double closed_form_max_mismatch = 0.0;  // vs. preset discriminant
    std::optional<SolvabilityReport> scan;
    std::string detail;
};

VectorFieldVerdict classify_vector_field(const std::vector<cx>& C, cx A, cx B,
                                         const WeightSequence& ws, double xi_max);

}  // namespace vekua

#endif

#ifndef VEKUA_MARGIN_HPP
#define VEKUA_MARGIN_HPP

#include <functional>
#include <string>
#include <vector>

#include "vekua/spectral.hpp"
#include "vekua/weightseq.hpp"

namespace vekua {

/// Finite-range verdicts are epistemic: the Diophantine conditions quantify
/// over all of Z^n, which no scan decides.
enum class ScanVerdict { pass_on_range, fail_witness, degenerate };

std::string to_string(ScanVerdict v);

struct MarginCurve {
    double eps = 1.0;
    std::vector<double> shell_radius;  // lower bound of each nonempty shell
    std::vector<double> min_margin;    // min over the shell of log q - log inf-term
    double log_c_eps = 0.0;            // global minimum; C_eps candidate = exp of it
    ScanVerdict verdict = ScanVerdict::pass_on_range;
    std::vector<Freq> witnesses;       // frequencies where the margin collapses
};

struct MarginScanResult {
    std::vector<MarginCurve> curves;   // one per eps
    std::vector<Freq> zero_modes;      // exact zeros of the scanned quantity
    ScanVerdict verdict = ScanVerdict::pass_on_range;
};

/// Scans r_min <= |xi| <= r_max in Z^dim and compares log_quantity(xi) with
/// the associated-function lower bound per eps.  A margin is
/// log_quantity - log inf_j m_j j!/(eps^j (1+|xi|)^j); -inf marks an exact
/// zero and yields a degenerate verdict.  fail_witness fires when a shell's
/// minimum undercuts the running minimum at half its radius by more than
/// drop_threshold: a single finite dip admits some C, a deepening dip train
/// does not.
MarginScanResult scan_margins(int dim, double r_min, double r_max,
                              const std::function<double(const Freq&)>& log_quantity,
                              const WeightSequence& ws,
                              const std::vector<double>& eps_list,
                              double drop_threshold = 2.0);

/// Calls fn for every lattice point with r_min <= |xi| <= r_max.
void for_each_lattice_point(int dim, double r_min, double r_max,
                            const std::function<void(const Freq&)>& fn);

}  // namespace vekua

#endif

#ifndef VEKUA_SPECTRAL_HPP
#define VEKUA_SPECTRAL_HPP

#include <complex>
#include <map>
#include <vector>

#include "vekua/weightseq.hpp"

namespace vekua {

using cx = std::complex<double>;
using Freq = std::vector<int>;  // one integer frequency per axis

/// Finitely supported Fourier data on Z^n, support inside [-K, K]^n.
struct Spectrum {
    int n = 1;
    int box_radius = 0;
    bool real_valued = false;
    std::map<Freq, cx> entries;

    cx entry(const Freq& xi) const {
        auto it = entries.find(xi);
        return it == entries.end() ? cx(0.0, 0.0) : it->second;
    }
    void set(Freq xi, cx value);
    double max_abs() const;
};

/// Samples on the uniform grid (2*pi*j/N)_{j=0..N-1} per axis, row-major,
/// last axis fastest.
struct GridFunction {
    int n = 1;
    int N = 2;
    std::vector<cx> samples;

    static GridFunction zeros(int n, int N);
    size_t size() const { return samples.size(); }
};

/// f_hat(xi) = (2 pi)^{-n} integral of f e^{-i xi.x}, trapezoidal rule
/// (exact for trigonometric polynomials of degree < N/2).  Support box
/// K = floor(N/2); near-zero bins are kept as computed.
Spectrum analyze(const GridFunction& f);

/// Pointwise sum of S over the grid; requires support strictly inside the
/// resolvable band (max |xi_i| < N/2).
GridFunction synthesize(const Spectrum& S, int N);

/// Per-frequency functions of t on a shared uniform t-grid; the split is
/// t in T^1 (first axis) times x in T^q.
struct PartialSpectrum {
    int q = 1;   // number of x axes
    int Nt = 2;  // t-grid points
    std::map<Freq, std::vector<cx>> modes;  // xi -> samples over t

    const std::vector<cx>* mode(const Freq& xi) const {
        auto it = modes.find(xi);
        return it == modes.end() ? nullptr : &it->second;
    }
};

/// Transform in the x axes only, one DFT per t slice.
PartialSpectrum partial_analyze(const GridFunction& f);

/// Inverse of partial_analyze onto an N = Nt grid.
GridFunction partial_synthesize(const PartialSpectrum& S);

struct DecayReport {
    struct Row {
        double delta = 0.0;
        double log_c = 0.0;        // minimal log C over the whole support
        double edge_slope = 0.0;   // shell-max margin trend toward the box edge
        bool consistent = false;
    };
    std::vector<Row> rows;
    bool consistent = false;  // some delta admits a stable C
    std::string verdict;      // epistemic: "on observed range" only
};

/// Minimal C per delta for |f_hat(xi)| <= C inf_j m_j j!/(delta^j (1+|xi|)^j),
/// with a slope test on the shell-max margins: membership in the class cannot
/// be decided from finite data, so the verdict is "consistent on observed
/// range" at best.
DecayReport classify_decay(const Spectrum& S, const WeightSequence& ws,
                           const std::vector<double>& delta_grid);

double freq_norm(const Freq& xi);
Freq negate(const Freq& xi);

}  // namespace vekua

#endif

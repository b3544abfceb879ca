#include "vekua/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vekua {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// In-place DFT along every axis of a row-major N^n block.
// sign = -1 analysis, +1 synthesis; no normalization here.
void dft_all_axes(std::vector<cx>& data, int n, int N, int sign) {
    std::vector<cx> twiddle(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m) {
        double ang = sign * kTwoPi * double(m) / double(N);
        twiddle[size_t(m)] = cx(std::cos(ang), std::sin(ang));
    }
    std::vector<cx> line(static_cast<size_t>(N)), out(static_cast<size_t>(N));
    size_t total = data.size();
    size_t inner = total / size_t(N);  // stride of the axis being transformed
    for (int axis = 0; axis < n; ++axis) {
        size_t outer = total / (inner * size_t(N));
        for (size_t o = 0; o < outer; ++o) {
            for (size_t i = 0; i < inner; ++i) {
                size_t base = o * inner * size_t(N) + i;
                for (int j = 0; j < N; ++j) line[size_t(j)] = data[base + size_t(j) * inner];
                for (int k = 0; k < N; ++k) {
                    cx acc(0.0, 0.0);
                    for (int j = 0; j < N; ++j)
                        acc += line[size_t(j)] * twiddle[size_t((long(k) * j) % N)];
                    out[size_t(k)] = acc;
                }
                for (int k = 0; k < N; ++k) data[base + size_t(k) * inner] = out[size_t(k)];
            }
        }
        inner /= size_t(N);
    }
}

int bin_to_freq(int k, int N) { return k <= N / 2 ? k : k - N; }

}  // namespace

void Spectrum::set(Freq xi, cx value) {
    if (int(xi.size()) != n) throw std::domain_error("frequency dimension mismatch");
    for (int c : xi) box_radius = std::max(box_radius, std::abs(c));
    entries[std::move(xi)] = value;
}

double Spectrum::max_abs() const {
    double m = 0.0;
    for (const auto& [xi, a] : entries) m = std::max(m, std::abs(a));
    return m;
}

GridFunction GridFunction::zeros(int n, int N) {
    if (n < 1 || N < 2) throw std::domain_error("grid needs n >= 1, N >= 2");
    GridFunction g;
    g.n = n;
    g.N = N;
    size_t total = 1;
    for (int a = 0; a < n; ++a) total *= size_t(N);
    g.samples.assign(total, cx(0.0, 0.0));
    return g;
}

double freq_norm(const Freq& xi) {
    double s = 0.0;
    for (int c : xi) s += double(c) * double(c);
    return std::sqrt(s);
}

Freq negate(const Freq& xi) {
    Freq m(xi.size());
    for (size_t i = 0; i < xi.size(); ++i) m[i] = -xi[i];
    return m;
}

Spectrum analyze(const GridFunction& f) {
    size_t total = 1;
    for (int a = 0; a < f.n; ++a) total *= size_t(f.N);
    if (f.samples.size() != total) throw std::domain_error("sample count != N^n");

    std::vector<cx> work = f.samples;
    dft_all_axes(work, f.n, f.N, -1);
    double scale = 1.0 / double(total);

    Spectrum S;
    S.n = f.n;
    S.box_radius = f.N / 2;
    std::vector<int> bin(size_t(f.n), 0);
    for (size_t idx = 0; idx < total; ++idx) {
        Freq xi(size_t(f.n));
        for (int a = 0; a < f.n; ++a) xi[size_t(a)] = bin_to_freq(bin[size_t(a)], f.N);
        S.entries[xi] = work[idx] * scale;
        for (int a = f.n - 1; a >= 0; --a) {
            if (++bin[size_t(a)] < f.N) break;
            bin[size_t(a)] = 0;
        }
    }
    return S;
}

GridFunction synthesize(const Spectrum& S, int N) {
    const double alias_tol = 1e-12 * S.max_abs();
    for (const auto& [xi, a] : S.entries) {
        int maxc = 0;
        for (int c : xi) maxc = std::max(maxc, std::abs(c));
        if (2 * maxc >= N && std::abs(a) > alias_tol)
            throw std::domain_error("synthesize: support would alias on an N=" +
                                    std::to_string(N) + " grid");
    }
    GridFunction g = GridFunction::zeros(S.n, N);
    std::vector<cx> twiddle(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m) {
        double ang = kTwoPi * double(m) / double(N);
        twiddle[size_t(m)] = cx(std::cos(ang), std::sin(ang));
    }
    std::vector<int> pt(size_t(S.n), 0);
    for (size_t idx = 0; idx < g.size(); ++idx) {
        cx acc(0.0, 0.0);
        for (const auto& [xi, a] : S.entries) {
            long phase = 0;
            for (int ax = 0; ax < S.n; ++ax)
                phase += long(((xi[size_t(ax)] % N) + N) % N) * pt[size_t(ax)];
            acc += a * twiddle[size_t(phase % N)];
        }
        g.samples[idx] = acc;
        for (int ax = S.n - 1; ax >= 0; --ax) {
            if (++pt[size_t(ax)] < N) break;
            pt[size_t(ax)] = 0;
        }
    }
    return g;
}

PartialSpectrum partial_analyze(const GridFunction& f) {
    if (f.n < 2) throw std::domain_error("partial_analyze needs n >= 2 (t plus x)");
    int q = f.n - 1;
    size_t slice = 1;
    for (int a = 0; a < q; ++a) slice *= size_t(f.N);

    PartialSpectrum P;
    P.q = q;
    P.Nt = f.N;
    std::vector<cx> work(slice);
    for (int jt = 0; jt < f.N; ++jt) {
        std::copy_n(f.samples.begin() + long(jt) * long(slice), slice, work.begin());
        dft_all_axes(work, q, f.N, -1);
        double scale = 1.0 / double(slice);
        std::vector<int> bin(size_t(q), 0);
        for (size_t idx = 0; idx < slice; ++idx) {
            Freq xi(static_cast<size_t>(q));
            for (int a = 0; a < q; ++a) xi[size_t(a)] = bin_to_freq(bin[size_t(a)], f.N);
            auto& mode = P.modes[xi];
            if (mode.empty()) mode.assign(size_t(f.N), cx(0.0, 0.0));
            mode[size_t(jt)] = work[idx] * scale;
            for (int a = q - 1; a >= 0; --a) {
                if (++bin[size_t(a)] < f.N) break;
                bin[size_t(a)] = 0;
            }
        }
    }
    return P;
}

GridFunction partial_synthesize(const PartialSpectrum& S) {
    int N = S.Nt;
    GridFunction g = GridFunction::zeros(S.q + 1, N);
    size_t slice = g.size() / size_t(N);
    std::vector<cx> twiddle(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m) {
        double ang = kTwoPi * double(m) / double(N);
        twiddle[size_t(m)] = cx(std::cos(ang), std::sin(ang));
    }
    for (const auto& [xi, mode] : S.modes) {
        if (int(mode.size()) != N) throw std::domain_error("t-grid mismatch");
        for (int jt = 0; jt < N; ++jt) {
            std::vector<int> pt(size_t(S.q), 0);
            size_t base = size_t(jt) * slice;
            for (size_t idx = 0; idx < slice; ++idx) {
                long phase = 0;
                for (int ax = 0; ax < S.q; ++ax)
                    phase += long(((xi[size_t(ax)] % N) + N) % N) * pt[size_t(ax)];
                g.samples[base + idx] += mode[size_t(jt)] * twiddle[size_t(phase % N)];
                for (int ax = S.q - 1; ax >= 0; --ax) {
                    if (++pt[size_t(ax)] < N) break;
                    pt[size_t(ax)] = 0;
                }
            }
        }
    }
    return g;
}

DecayReport classify_decay(const Spectrum& S, const WeightSequence& ws,
                           const std::vector<double>& delta_grid) {
    if (S.entries.empty()) throw std::domain_error("classify_decay: empty spectrum");
    DecayReport rep;
    const double amp_floor = 1e-13 * S.max_abs();
    const double rise_threshold = 0.75;

    for (double delta : delta_grid) {
        // shell-max margins: margin = log|a| - log inf-term
        std::map<int, double> shell_max;
        for (const auto& [xi, a] : S.entries) {
            if (std::abs(a) <= amp_floor) continue;
            double r = freq_norm(xi);
            double margin = std::log(std::abs(a)) - log_assoc_inf(ws, delta, 1.0 + r);
            int shell = int(std::floor(r));
            auto [it, fresh] = shell_max.try_emplace(shell, margin);
            if (!fresh) it->second = std::max(it->second, margin);
        }
        DecayReport::Row row;
        row.delta = delta;
        if (shell_max.empty()) {
            row.log_c = -std::numeric_limits<double>::infinity();
            row.consistent = true;
        } else {
            double global_min = std::numeric_limits<double>::infinity();
            double global_max = -std::numeric_limits<double>::infinity();
            int last_shell = shell_max.rbegin()->first;
            for (const auto& [s, m] : shell_max) {
                global_min = std::min(global_min, m);
                global_max = std::max(global_max, m);
            }
            // tail rise: does the needed C keep growing toward the box edge?
            // compare the outer-quarter maximum against the outer-half minimum
            // and require the maximum to sit beyond the minimum, so a margin
            // that merely decreases fast is not mistaken for a climb
            double out_min = std::numeric_limits<double>::infinity();
            double tail = -std::numeric_limits<double>::infinity();
            int out_min_shell = 0, tail_shell = 0;
            for (const auto& [s, m] : shell_max) {
                if (s * 2 >= last_shell && m < out_min) {
                    out_min = m;
                    out_min_shell = s;
                }
                if (s * 4 >= last_shell * 3 && m > tail) {
                    tail = m;
                    tail_shell = s;
                }
            }
            row.log_c = global_max;
            row.edge_slope = (std::isfinite(tail) && std::isfinite(out_min) &&
                              tail_shell > out_min_shell)
                                 ? tail - out_min
                                 : 0.0;
            // a handful of shells cannot support a trend estimate; finite
            // support is trivially inside every class
            bool enough_range = shell_max.size() >= 8 && last_shell >= 8;
            row.consistent = std::isfinite(row.log_c) &&
                             (!enough_range || row.edge_slope < rise_threshold);
        }
        rep.rows.push_back(row);
        rep.consistent = rep.consistent || row.consistent;
    }
    rep.verdict = rep.consistent ? "consistent with the class on observed range"
                                 : "not consistent on observed range";
    return rep;
}

}  // namespace vekua

#include "vekua/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace vekua {

std::string to_string(ScanVerdict v) {
    switch (v) {
        case ScanVerdict::pass_on_range: return "pass-on-range";
        case ScanVerdict::fail_witness: return "fail-witness";
        case ScanVerdict::degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

void lattice_rec(int dim, int axis, long long r2_max, double r_min, double r_max,
                 Freq& xi, long long partial_sq,
                 const std::function<void(const Freq&)>& fn) {
    if (axis == dim) {
        double r = std::sqrt(double(partial_sq));
        if (r >= r_min - 1e-12 && r <= r_max + 1e-12) fn(xi);
        return;
    }
    int cap = int(std::floor(std::sqrt(double(r2_max - partial_sq)) + 1e-9));
    for (int c = -cap; c <= cap; ++c) {
        xi[size_t(axis)] = c;
        lattice_rec(dim, axis + 1, r2_max, r_min, r_max, xi,
                    partial_sq + (long long)(c) * c, fn);
    }
}

}  // namespace

void for_each_lattice_point(int dim, double r_min, double r_max,
                            const std::function<void(const Freq&)>& fn) {
    Freq xi(size_t(dim), 0);
    long long r2_max = (long long)(std::floor(r_max * r_max + 1e-9));
    lattice_rec(dim, 0, r2_max, r_min, r_max, xi, 0, fn);
}

MarginScanResult scan_margins(int dim, double r_min, double r_max,
                              const std::function<double(const Freq&)>& log_quantity,
                              const WeightSequence& ws,
                              const std::vector<double>& eps_list,
                              double drop_threshold) {
    struct ShellCell {
        double min_margin = std::numeric_limits<double>::infinity();
        Freq argmin;
    };
    MarginScanResult res;
    const double inf = std::numeric_limits<double>::infinity();

    // inf-term values repeat across lattice points of equal norm; cache per eps
    std::vector<std::unordered_map<long long, double>> inf_cache(eps_list.size());
    std::vector<std::map<int, ShellCell>> shells(eps_list.size());

    for_each_lattice_point(dim, r_min, r_max, [&](const Freq& xi) {
        long long nsq = 0;
        for (int c : xi) nsq += (long long)(c) * c;
        double r = std::sqrt(double(nsq));
        double lq = log_quantity(xi);
        if (lq == -inf) {
            res.zero_modes.push_back(xi);
            return;
        }
        int shell = int(std::floor(r));
        for (size_t e = 0; e < eps_list.size(); ++e) {
            auto it = inf_cache[e].find(nsq);
            if (it == inf_cache[e].end())
                it = inf_cache[e].emplace(nsq, log_assoc_inf(ws, eps_list[e], 1.0 + r)).first;
            double margin = lq - it->second;
            auto& cell = shells[e][shell];
            if (margin < cell.min_margin) {
                cell.min_margin = margin;
                cell.argmin = xi;
            }
        }
    });

    for (size_t e = 0; e < eps_list.size(); ++e) {
        MarginCurve curve;
        curve.eps = eps_list[e];
        curve.log_c_eps = inf;
        std::map<int, double> running_min;  // shell -> min margin over shells <= key
        double run = inf;
        for (const auto& [shell, cell] : shells[e]) {
            curve.shell_radius.push_back(double(shell));
            curve.min_margin.push_back(cell.min_margin);
            curve.log_c_eps = std::min(curve.log_c_eps, cell.min_margin);

            // compare against the record at half this radius before updating
            int half = shell / 2;
            auto it = running_min.upper_bound(half);
            if (it != running_min.begin()) {
                double record = std::prev(it)->second;
                if (cell.min_margin < record - drop_threshold) {
                    curve.verdict = ScanVerdict::fail_witness;
                    curve.witnesses.push_back(cell.argmin);
                }
            }
            run = std::min(run, cell.min_margin);
            running_min[shell] = run;
        }
        res.curves.push_back(std::move(curve));
    }

    res.verdict = ScanVerdict::pass_on_range;
    if (!res.zero_modes.empty()) res.verdict = ScanVerdict::degenerate;
    else
        for (const auto& c : res.curves)
            if (c.verdict == ScanVerdict::fail_witness) res.verdict = ScanVerdict::fail_witness;
    return res;
}

}  // namespace vekua

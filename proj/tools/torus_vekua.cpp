#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>

#include "vekua/json_io.hpp"

namespace {

using namespace vekua;

constexpr int kExitPass = 0;
constexpr int kExitInput = 1;
constexpr int kExitFail = 2;

struct CommonOpts {
    std::string spec_path;
    std::string weights = "gevrey:2";
    int xi_max = 50;
    std::string eps = "0.5,1";
    int grid = 64;
    int tgrid = 256;
    double tol = 1e-8;
    std::string out = ".";
    unsigned seed = 1;
};

std::vector<double> parse_eps(const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stod(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("--eps needs at least one value");
    for (double e : out)
        if (e <= 0.0) throw std::invalid_argument("--eps values must be positive");
    return out;
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    std::filesystem::create_directories(o.out);
    return (std::filesystem::path(o.out) / name).string();
}

int verdict_exit(ScanVerdict v) {
    return v == ScanVerdict::pass_on_range ? kExitPass : kExitFail;
}

// Hermitian random band-limited spectrum: real-valued synthesis
Spectrum random_band_spectrum(int n, int band, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Spectrum S;
    S.n = n;
    for_each_lattice_point(n, 0.0, double(band), [&](const Freq& xi) {
        Freq neg = negate(xi);
        if (neg < xi) return;
        cx a(amp(rng), amp(rng));
        if (xi == neg) a = cx(a.real(), 0.0);
        S.set(xi, a);
        S.set(neg, std::conj(a));
    });
    return S;
}

int cmd_analyze(const CommonOpts& o) {
    json spec_json = load_json_file(o.spec_path);
    WeightSequence ws = weights_from_arg(o.weights);
    std::vector<double> eps = parse_eps(o.eps);
    json report;
    ScanVerdict verdict;
    std::vector<MarginCurve> curves;

    if (spec_json.contains("Nt")) {
        VarOperatorSpec spec = var_spec_from_json(spec_json);
        bool lambda_zero = true;
        for (double l : spec.lambda) lambda_zero = lambda_zero && std::abs(l) < 1e-14;
        ConditionReport rep = lambda_zero
                                  ? check_thm2(spec, ws, eps, o.xi_max, o.xi_max)
                                  : check_conditions(spec, ws, eps, o.xi_max, o.xi_max);
        report = condition_report_to_json(rep);
        verdict = rep.verdict;
        curves = rep.cond_iii.curves;
    } else {
        ConstOperatorSpec spec = const_spec_from_json(spec_json);
        SolvabilityReport rep = check_dc_m(spec, ws, eps, o.xi_max);
        report = solvability_to_json(rep);
        verdict = rep.verdict;
        curves = rep.curves;
    }
    write_json_file(out_path(o, "report.json"), report);
    write_margins_csv(out_path(o, "margins.csv"), curves);
    return verdict_exit(verdict);
}

int cmd_solve(const CommonOpts& o, const std::string& rhs_path) {
    json spec_json = load_json_file(o.spec_path);
    json residual_report;
    int code = kExitPass;

    if (spec_json.contains("Nt")) {
        VarOperatorSpec spec = var_spec_from_json(spec_json);
        GridFunction f = rhs_path.empty()
                             ? synthesize(random_band_spectrum(
                                   spec.n + 1, std::min(o.xi_max, spec.Nt / 4), o.seed),
                                          spec.Nt)
                             : read_grid_csv(rhs_path);
        auto [u, diag] = solve(spec, f);
        GridFunction r = apply_operator(spec, u);
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k < f.samples.size(); ++k) {
            num = std::max(num, std::abs(r.samples[k] - f.samples[k]));
            den = std::max(den, std::abs(f.samples[k]));
        }
        double rel = den > 0.0 ? num / den : num;
        write_grid_csv(out_path(o, "u.csv"), u);
        write_json_file(out_path(o, "u.json"), spectrum_to_json(analyze(u)));
        residual_report = {{"rel_residual", rel},
                           {"min_denominator", diag.min_denominator},
                           {"modes", diag.modes_solved.size()}};
        if (rel > o.tol) code = kExitFail;
    } else {
        ConstOperatorSpec spec = const_spec_from_json(spec_json);
        Spectrum F = rhs_path.empty()
                         ? random_band_spectrum(spec.n, std::min(o.xi_max, 8), o.seed)
                         : spectrum_from_json(load_json_file(rhs_path));
        auto [U, diag] = solve(spec, F);
        if (!diag.ok()) {
            json bad = json::array();
            for (const auto& xi : diag.incompatible_modes) bad.push_back(json(xi));
            write_json_file(out_path(o, "residual.json"),
                            {{"incompatible_modes", std::move(bad)}});
            return kExitFail;
        }
        Spectrum R = apply(spec, U);
        double num = 0.0, den = std::max(F.max_abs(), 1e-300);
        std::set<Freq> keys;
        for (const auto& [xi, a] : R.entries) keys.insert(xi);
        for (const auto& [xi, a] : F.entries) keys.insert(xi);
        for (const auto& xi : keys)
            num = std::max(num, std::abs(R.entry(xi) - F.entry(xi)));
        double rel = num / den;
        write_json_file(out_path(o, "u.json"), spectrum_to_json(U));
        write_grid_csv(out_path(o, "u.csv"), synthesize(U, o.grid));
        residual_report = {{"rel_residual", rel},
                           {"non_unique_modes", diag.non_unique_modes.size()}};
        if (rel > o.tol) code = kExitFail;
    }
    write_json_file(out_path(o, "residual.json"), residual_report);
    return code;
}

int cmd_lemma_check(const CommonOpts& o) {
    WeightSequence ws = weights_from_arg(o.weights);
    json checks = json::object();
    bool all_ok = true;

    ValidationReport val = validate(ws, 64);
    checks["sequence_axioms"] = {{"normalization", val.normalization_ok},
                                 {"log_convex", val.log_convex_ok},
                                 {"stability", val.stability_ok},
                                 {"h_estimate", val.h_estimate},
                                 {"failures", val.failures}};
    all_ok = all_ok && val.pass();

    // squared-sup bound: (sup_j rho^j/(m_j j!))^2 <= sup_j (2 rho H)^j/(m_j j!);
    // 2H bounds the stability constant of the product sequence m_j j!
    bool sup_ok = true;
    for (double rho : {1.0, 10.0, 1e3, 1e6}) {
        double lhs = -2.0 * log_assoc_inf(ws, 1.0, rho);
        double rhs = -log_assoc_inf(ws, 2.0 * ws.H, rho);
        sup_ok = sup_ok && lhs <= rhs + 1e-9;
    }
    checks["sup_square_bound"] = sup_ok;
    all_ok = all_ok && sup_ok;

    bool card_ok = true, sum_ok = true, prod_ok = true;
    // partition numbers by Euler's recurrence, the independent count
    std::vector<long long> part{1};
    for (int k = 1; k <= 20; ++k) {
        long long total = 0;
        for (int j = 1, sign = 1;; ++j, sign = -sign) {
            int g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
            if (g1 > k && g2 > k) break;
            if (g1 <= k) total += sign * part[size_t(k - g1)];
            if (g2 <= k) total += sign * part[size_t(k - g2)];
        }
        part.push_back(total);
        auto delta = enumerate_delta(k);
        card_ok = card_ok && (long long)(delta.size()) == total;
        if (k <= 12) {
            for (double R : {0.25, 1.0, 3.0}) {
                auto [lhs, rhs] = delta_sum_identity(k, R);
                sum_ok = sum_ok && std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs);
            }
            for (const auto& g : delta) {
                double lhs = ws.log_m(g.order());
                for (size_t l = 0; l < g.gamma.size(); ++l)
                    lhs += g.gamma[l] * ws.log_m(int(l) + 1);
                prod_ok = prod_ok && lhs <= ws.log_m(k) + 1e-9;
            }
        }
    }
    checks["partition_cardinality"] = card_ok;
    checks["sum_identity"] = sum_ok;
    checks["product_bound"] = prod_ok;
    all_ok = all_ok && card_ok && sum_ok && prod_ok;

    if (ws.label.rfind("gevrey", 0) == 0) {
        bool sandwich_ok = true;
        for (double s : {1.5, 2.0, 3.0})
            for (double t : {1.0, 10.0, 1e3, 1e6}) {
                GevreySandwich g = gevrey_bounds(s, t);
                sandwich_ok = sandwich_ok && g.lower <= g.mid + 1e-9 &&
                              g.mid <= g.upper + 1e-9;
            }
        checks["gevrey_sandwich"] = sandwich_ok;
        all_ok = all_ok && sandwich_ok;
    }

    checks["all_ok"] = all_ok;
    write_json_file(out_path(o, "report.json"), checks);
    return all_ok ? kExitPass : kExitFail;
}

DiophantineNumber eta_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "sqrt2") return cf_sqrt2();
    if (kind == "golden") return cf_golden();
    if (kind == "liouville_like")
        return cf_liouville_like(j.at("b").get<int>(), j.at("depth").get<int>());
    if (kind == "value") return cf_from_value(j.at("value").get<double>());
    throw std::invalid_argument("unknown eta kind \"" + kind + "\"");
}

int cmd_classify(const CommonOpts& o, bool wave) {
    json spec_json = load_json_file(o.spec_path);
    WeightSequence ws = weights_from_arg(o.weights);
    cx A = complex_from_json(spec_json.at("A"));
    cx B = complex_from_json(spec_json.at("B"));
    json report;
    bool solvable;
    if (wave) {
        WaveVerdict v = classify_wave(A, B, eta_from_json(spec_json.at("eta")), ws,
                                      o.xi_max);
        report = wave_verdict_to_json(v);
        solvable = v.solvable_on_range;
        if (v.scan) write_margins_csv(out_path(o, "margins.csv"), v.scan->curves);
    } else {
        std::vector<cx> C;
        for (const auto& e : spec_json.at("C")) C.push_back(complex_from_json(e));
        VectorFieldVerdict v = classify_vector_field(C, A, B, ws, o.xi_max);
        report = vector_field_verdict_to_json(v);
        solvable = v.solvable_on_range;
        if (v.scan) write_margins_csv(out_path(o, "margins.csv"), v.scan->curves);
    }
    write_json_file(out_path(o, "report.json"), report);
    return solvable ? kExitPass : kExitFail;
}

int cmd_dc_equiv(const CommonOpts& o) {
    json spec_json = load_json_file(o.spec_path);
    WeightSequence ws = weights_from_arg(o.weights);
    std::vector<double> p0;
    for (const auto& e : spec_json.at("p0")) p0.push_back(e.get<double>());
    DcEquivReport rep = dc_equivalence_check(
        p0, spec_json.at("q0").get<double>(), spec_json.at("delta").get<double>(),
        complex_from_json(spec_json.at("alpha")), ws, parse_eps(o.eps), o.xi_max);
    write_json_file(out_path(o, "report.json"), dc_equiv_to_json(rep));
    write_margins_csv(out_path(o, "margins.csv"), rep.prime.curves);
    if (!rep.agree) return kExitFail;
    return verdict_exit(rep.prime.verdict);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_spec) {
    if (needs_spec)
        cmd->add_option("--spec", o.spec_path, "operator spec JSON")->required();
    cmd->add_option("--weights", o.weights, "gevrey:S or weight JSON path");
    cmd->add_option("--xi-max", o.xi_max, "scan radius");
    cmd->add_option("--eps", o.eps, "comma-separated eps list");
    cmd->add_option("--grid", o.grid, "spatial grid size");
    cmd->add_option("--tgrid", o.tgrid, "t-grid size");
    cmd->add_option("--tol", o.tol, "residual tolerance");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "rng seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic Vekua-type operators: solvability scans and solvers"};
    app.require_subcommand(1);
    CommonOpts o;
    std::string rhs_path;
    std::string classify_kind;

    auto* analyze = app.add_subcommand("analyze", "small-divisor margin scan");
    add_common(analyze, o, true);
    auto* solve_cmd = app.add_subcommand("solve", "solve Pu = f and report residual");
    add_common(solve_cmd, o, true);
    solve_cmd->add_option("--rhs", rhs_path,
                          "right-hand side (spectrum JSON or grid CSV); "
                          "seeded random band-limited data when omitted");
    auto* lemma = app.add_subcommand("lemma-check", "weight-sequence identity suite");
    add_common(lemma, o, false);
    auto* classify = app.add_subcommand("classify", "wave / vector-field trichotomy");
    classify->add_option("kind", classify_kind, "wave or vector-field")->required();
    add_common(classify, o, true);
    auto* dc = app.add_subcommand("dc-equiv", "dual small-divisor margin comparison");
    add_common(dc, o, true);

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return cmd_analyze(o);
        if (solve_cmd->parsed()) return cmd_solve(o, rhs_path);
        if (lemma->parsed()) return cmd_lemma_check(o);
        if (classify->parsed()) {
            if (classify_kind != "wave" && classify_kind != "vector-field")
                throw std::invalid_argument("classify kind must be wave or vector-field");
            return cmd_classify(o, classify_kind == "wave");
        }
        if (dc->parsed()) return cmd_dc_equiv(o);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    } catch (const vekua::small_divisor_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

#include "vekua/json_io.hpp"

#include <fstream>
#include <sstream>

namespace vekua {

namespace {

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field \"") + field + "\"");
    return *it;
}

double require_number(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number())
        throw std::invalid_argument(std::string("field \"") + field +
                                    "\" must be a number");
    return v.get<double>();
}

std::vector<double> number_list(const json& v, const char* field) {
    if (!v.is_array())
        throw std::invalid_argument(std::string("field \"") + field +
                                    "\" must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw std::invalid_argument(std::string("field \"") + field +
                                        "\" must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

json freq_to_json(const Freq& xi) { return json(xi); }

Freq freq_from_json(const json& v) {
    if (!v.is_array()) throw std::invalid_argument("frequency must be an array");
    Freq xi;
    for (const auto& e : v) xi.push_back(e.get<int>());
    return xi;
}

}  // namespace

cx complex_from_json(const json& j) {
    if (j.is_number()) return cx(j.get<double>(), 0.0);
    if (j.is_object()) return cx(require_number(j, "re"), require_number(j, "im"));
    throw std::invalid_argument("complex value must be a number or {re, im}");
}

json complex_to_json(cx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

WeightSequence weights_from_json(const json& j) {
    std::string kind = require(j, "kind").get<std::string>();
    if (kind == "gevrey") return make_gevrey(require_number(j, "s"));
    if (kind == "table")
        return make_table(number_list(require(j, "log_m"), "log_m"),
                          require_number(j, "H"));
    throw std::invalid_argument("field \"kind\" must be \"gevrey\" or \"table\"");
}

WeightSequence weights_from_arg(const std::string& arg) {
    if (arg.rfind("gevrey:", 0) == 0) return make_gevrey(std::stod(arg.substr(7)));
    return weights_from_json(load_json_file(arg));
}

ConstOperatorSpec const_spec_from_json(const json& j) {
    ConstOperatorSpec spec;
    if (j.contains("preset")) {
        std::string preset = j["preset"].get<std::string>();
        if (preset == "laplace") spec = preset_laplace(int(require_number(j, "n")));
        else if (preset == "heat")
            spec = preset_heat(int(require_number(j, "n")), require_number(j, "eta"));
        else if (preset == "wave")
            spec = preset_wave(int(require_number(j, "n")), require_number(j, "eta"));
        else if (preset == "vector_field") {
            std::vector<cx> C;
            for (const auto& e : require(j, "C")) C.push_back(complex_from_json(e));
            spec = preset_vector_field(C);
        } else
            throw std::invalid_argument("unknown preset \"" + preset + "\"");
    } else {
        spec.n = int(require_number(j, "n"));
        if (spec.n < 1) throw std::invalid_argument("field \"n\" must be >= 1");
        for (const auto& term : require(j, "terms")) {
            Freq alpha = freq_from_json(require(term, "alpha"));
            if (int(alpha.size()) != spec.n)
                throw std::invalid_argument("term \"alpha\" length must equal n");
            spec.add_term(alpha, cx(require_number(term, "re"),
                                    require_number(term, "im")));
        }
    }
    if (j.contains("A")) spec.A = complex_from_json(j["A"]);
    if (j.contains("B")) spec.B = complex_from_json(j["B"]);
    return spec;
}

json const_spec_to_json(const ConstOperatorSpec& spec) {
    json terms = json::array();
    for (const auto& [alpha, c] : spec.terms)
        terms.push_back({{"alpha", freq_to_json(alpha)},
                         {"re", c.real()},
                         {"im", c.imag()}});
    return json{{"n", spec.n},
                {"terms", std::move(terms)},
                {"A", complex_to_json(spec.A)},
                {"B", complex_to_json(spec.B)}};
}

VarOperatorSpec var_spec_from_json(const json& j) {
    VarOperatorSpec spec;
    spec.n = int(require_number(j, "n"));
    spec.Nt = int(require_number(j, "Nt"));
    spec.q = number_list(require(j, "q"), "q");
    spec.s = number_list(require(j, "s"), "s");
    const json& p = require(j, "p");
    if (!p.is_array()) throw std::invalid_argument("field \"p\" must be an array");
    for (const auto& row : p) spec.p.push_back(number_list(row, "p"));
    spec.lambda = number_list(require(j, "lambda"), "lambda");
    spec.alpha = complex_from_json(require(j, "alpha"));
    spec.delta = require_number(j, "delta");
    return spec;
}

json var_spec_to_json(const VarOperatorSpec& spec) {
    return json{{"n", spec.n},         {"Nt", spec.Nt},
                {"q", spec.q},         {"s", spec.s},
                {"p", spec.p},         {"lambda", spec.lambda},
                {"alpha", complex_to_json(spec.alpha)},
                {"delta", spec.delta}};
}

json spectrum_to_json(const Spectrum& S) {
    json rows = json::array();
    for (const auto& [xi, a] : S.entries)
        rows.push_back({{"xi", freq_to_json(xi)},
                        {"re", a.real()},
                        {"im", a.imag()}});
    return json{{"n", S.n}, {"rows", std::move(rows)}};
}

Spectrum spectrum_from_json(const json& j) {
    Spectrum S;
    S.n = int(require_number(j, "n"));
    for (const auto& row : require(j, "rows")) {
        Freq xi = freq_from_json(require(row, "xi"));
        if (int(xi.size()) != S.n)
            throw std::invalid_argument("row \"xi\" length must equal n");
        S.set(std::move(xi),
              cx(require_number(row, "re"), require_number(row, "im")));
    }
    return S;
}

void write_grid_csv(const std::string& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    out << json{{"n", f.n}, {"N", f.N}}.dump() << "\n";
    out.precision(17);
    for (const cx& v : f.samples) out << v.real() << "," << v.imag() << "\n";
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string header;
    if (!std::getline(in, header))
        throw std::invalid_argument("empty grid file " + path);
    json h = json::parse(header);
    GridFunction f = GridFunction::zeros(int(require_number(h, "n")),
                                         int(require_number(h, "N")));
    std::string line;
    size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (k >= f.samples.size())
            throw std::invalid_argument("too many samples in " + path);
        std::istringstream ss(line);
        double re, im;
        char comma;
        if (!(ss >> re >> comma >> im) || comma != ',')
            throw std::invalid_argument("bad sample row in " + path);
        f.samples[k++] = cx(re, im);
    }
    if (k != f.samples.size())
        throw std::invalid_argument("sample count mismatch in " + path);
    return f;
}

json margin_curve_to_json(const MarginCurve& c) {
    json witnesses = json::array();
    for (const auto& xi : c.witnesses) witnesses.push_back(freq_to_json(xi));
    return json{{"eps", c.eps},
                {"shell_radius", c.shell_radius},
                {"min_margin", c.min_margin},
                {"log_c_eps", c.log_c_eps},
                {"verdict", to_string(c.verdict)},
                {"witnesses", std::move(witnesses)}};
}

json scan_result_to_json(const MarginScanResult& r) {
    json curves = json::array();
    for (const auto& c : r.curves) curves.push_back(margin_curve_to_json(c));
    json zeros = json::array();
    for (const auto& xi : r.zero_modes) zeros.push_back(freq_to_json(xi));
    return json{{"curves", std::move(curves)},
                {"zero_modes", std::move(zeros)},
                {"verdict", to_string(r.verdict)}};
}

json solvability_to_json(const SolvabilityReport& r) {
    json curves = json::array();
    for (const auto& c : r.curves) curves.push_back(margin_curve_to_json(c));
    json zeros = json::array();
    for (const auto& xi : r.zero_modes) zeros.push_back(freq_to_json(xi));
    return json{{"xi_max", r.xi_max},
                {"gamma_floor", r.gamma_floor},
                {"zero_modes", std::move(zeros)},
                {"curves", std::move(curves)},
                {"verdict", to_string(r.verdict)}};
}

json condition_report_to_json(const ConditionReport& r) {
    json out{{"cond_i", r.cond_i},
             {"cond_ii", r.cond_ii},
             {"cond_iii", scan_result_to_json(r.cond_iii)},
             {"verdict", to_string(r.verdict)},
             {"matched_case", r.matched_case},
             {"detail", r.detail}};
    if (r.witness_ii)
        out["witness_ii"] = json{{"xi", freq_to_json(r.witness_ii->first)},
                                 {"tau", r.witness_ii->second}};
    return out;
}

json dc_equiv_to_json(const DcEquivReport& r) {
    return json{{"prime", scan_result_to_json(r.prime)},
                {"second", scan_result_to_json(r.second)},
                {"agree", r.agree}};
}

json wave_verdict_to_json(const WaveVerdict& v) {
    json out{{"matched_condition", v.matched_condition},
             {"solvable_on_range", v.solvable_on_range},
             {"mu_estimate", v.mu_estimate},
             {"detail", v.detail}};
    if (v.scan) out["scan"] = solvability_to_json(*v.scan);
    return out;
}

json vector_field_verdict_to_json(const VectorFieldVerdict& v) {
    json out{{"matched_condition", v.matched_condition},
             {"solvable_on_range", v.solvable_on_range},
             {"closed_form_max_mismatch", v.closed_form_max_mismatch},
             {"detail", v.detail}};
    if (v.scan) out["scan"] = solvability_to_json(*v.scan);
    return out;
}

void write_margins_csv(const std::string& path,
                       const std::vector<MarginCurve>& curves) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    out.precision(17);
    out << "eps,shell_radius,min_log_margin\n";
    for (const auto& c : curves)
        for (size_t i = 0; i < c.shell_radius.size(); ++i)
            out << c.eps << "," << c.shell_radius[i] << "," << c.min_margin[i]
                << "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    out << j.dump(2) << "\n";
}

}  // namespace vekua

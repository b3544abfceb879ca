#ifndef VEKUA_JSON_IO_HPP
#define VEKUA_JSON_IO_HPP

#include <nlohmann/json.hpp>
#include <string>

#include "vekua/constcoef.hpp"
#include "vekua/spectral.hpp"
#include "vekua/varcoef.hpp"
#include "vekua/weightseq.hpp"

namespace vekua {

using json = nlohmann::json;

/// Throws std::invalid_argument naming the offending field on malformed input.

cx complex_from_json(const json& j);       // {"re":..,"im":..} or a bare number
json complex_to_json(cx z);

/// {"kind":"gevrey","s":2.0} or {"kind":"table","log_m":[...],"H":...}
WeightSequence weights_from_json(const json& j);
/// Accepts "gevrey:S" shorthand or a path to a JSON file.
WeightSequence weights_from_arg(const std::string& arg);

/// {"n":2,"terms":[{"alpha":[2,0],"re":1,"im":0},...],"A":...,"B":...} or the
/// preset form {"preset":"laplace"|"heat"|"wave"|"vector_field", ...}.
ConstOperatorSpec const_spec_from_json(const json& j);
json const_spec_to_json(const ConstOperatorSpec& spec);

VarOperatorSpec var_spec_from_json(const json& j);
json var_spec_to_json(const VarOperatorSpec& spec);

/// Rows [{"xi":[...],"re":...,"im":...}], sorted by frequency.
json spectrum_to_json(const Spectrum& S);
Spectrum spectrum_from_json(const json& j);

/// CSV with a JSON header line {"n":..,"N":..}; one "re,im" row per sample.
void write_grid_csv(const std::string& path, const GridFunction& f);
GridFunction read_grid_csv(const std::string& path);

json margin_curve_to_json(const MarginCurve& c);
json scan_result_to_json(const MarginScanResult& r);
json solvability_to_json(const SolvabilityReport& r);
json condition_report_to_json(const ConditionReport& r);
json dc_equiv_to_json(const DcEquivReport& r);
json wave_verdict_to_json(const WaveVerdict& v);
json vector_field_verdict_to_json(const VectorFieldVerdict& v);

/// One row per (eps, shell): eps,shell_radius,min_log_margin.
void write_margins_csv(const std::string& path, const std::vector<MarginCurve>& curves);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace vekua

#endif

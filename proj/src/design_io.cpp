#include "lofdesign/design_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lofd::io {

using nlohmann::json;

json weight_to_json(const WeightFunction& v) {
  switch (v.kind()) {
    case WeightFunction::Kind::uniform:
      return "uniform";
    case WeightFunction::Kind::arcsine:
      return "arcsine";
    case WeightFunction::Kind::user:
      break;
  }
  if (v.grid().empty())
    throw std::invalid_argument("weight '" + v.label() + "' is function-backed and has no document form");
  json samples = json::array();
  for (const auto& [x, value] : v.grid()) samples.push_back({x, value});
  return json{{"grid", samples}};
}

WeightFunction weight_from_json(const json& doc) {
  if (doc.is_string()) {
    const auto name = doc.get<std::string>();
    if (name == "uniform") return WeightFunction::uniform();
    if (name == "arcsine") return WeightFunction::arcsine();
    throw std::invalid_argument("unknown weight '" + name + "'");
  }
  if (doc.is_object() && doc.contains("grid")) {
    std::vector<GridSample> samples;
    for (const auto& row : doc.at("grid")) {
      if (!row.is_array() || row.size() != 2) throw std::invalid_argument("weight grid rows must be [x, v]");
      samples.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return WeightFunction::from_grid(std::move(samples));
  }
  throw std::invalid_argument("weight must be \"uniform\", \"arcsine\" or {\"grid\": [...]}");
}

json design_to_json(const DesignMeasure& xi, std::optional<int> k) {
  json doc;
  if (k) doc["k"] = *k;
  json atoms = json::array();
  for (const Atom& atom : xi.atoms()) atoms.push_back({{"t", atom.location}, {"p", atom.mass}});
  doc["atoms"] = atoms;
  if (xi.ac_scale() > 0.0)
    doc["ac"] = {{"scale", xi.ac_scale()}, {"weight", weight_to_json(*xi.ac_density())}};
  return doc;
}

DesignMeasure design_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("design document must be a JSON object");
  std::vector<Atom> atoms;
  if (doc.contains("atoms")) {
    for (const auto& entry : doc.at("atoms")) atoms.push_back({entry.at("t").get<double>(), entry.at("p").get<double>()});
  }
  double scale = 0.0;
  std::optional<WeightFunction> density;
  if (doc.contains("ac") && !doc.at("ac").is_null()) {
    const auto& ac = doc.at("ac");
    scale = ac.at("scale").get<double>();
    if (scale > 0.0) density = weight_from_json(ac.at("weight"));
  }
  double total = scale;
  for (const Atom& atom : atoms) total += atom.mass;
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design masses sum to " << total << ", expected 1 within 1e-9";
    throw std::invalid_argument(msg.str());
  }
  double atom_total = total - scale;
  if (atom_total > 0.0)
    for (Atom& atom : atoms) atom.mass *= (1.0 - scale) / atom_total;
  return DesignMeasure(std::move(atoms), scale, std::move(density));
}

json construction_to_json(const ConstructionReport& report) {
  json doc = design_to_json(report.design, report.k);
  doc["r"] = report.r;
  doc["alpha0"] = report.alpha0;
  doc["q"] = report.q;
  doc["p"] = report.p;
  return doc;
}

json report_to_json(const OptimalityReport& report) {
  json support = json::array();
  for (const auto& [location, value] : report.support_values) support.push_back({location, value});
  return json{{"optimal", report.optimal},
              {"margin", report.margin},
              {"argmax_location", report.argmax_location},
              {"grid_max", report.grid_max},
              {"support_values", support}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

WeightFunction read_weight_grid(const std::string& path, const std::function<void(const std::string&)>& warn) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight grid '" + path + "'");
  std::vector<GridSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream fields(line);
    double x = 0.0;
    double v = 0.0;
    if (!(fields >> x)) continue;
    if (!(fields >> v)) throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected two columns");
    samples.emplace_back(x, v);
  }
  WeightFunction weight = WeightFunction::from_grid(std::move(samples));
  if (warn && std::abs(weight.renormalization_factor() - 1.0) > 1e-3) {
    std::ostringstream msg;
    msg << "weight grid '" << path << "' renormalized by factor " << weight.renormalization_factor();
    warn(msg.str());
  }
  return weight;
}

WeightFunction parse_weight_spec(const std::string& spec, const std::function<void(const std::string&)>& warn) {
  if (spec == "uniform") return WeightFunction::uniform();
  if (spec == "arcsine") return WeightFunction::arcsine();
  if (spec.rfind("grid:", 0) == 0) return read_weight_grid(spec.substr(5), warn);
  throw std::invalid_argument("unknown weight '" + spec + "' (expected uniform, arcsine or grid:<path>)");
}

}  // namespace lofd::io

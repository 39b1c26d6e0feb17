#include "qlrs/molecule.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qlrs {

using nlohmann::ordered_json;

const VibrationalMode& MoleculeSpec::mode(const std::string& label) const {
  for (const auto& m : modes) {
    if (m.label == label) return m;
  }
  throw NotFoundError("molecule " + name + " has no mode '" + label + "'");
}

double MoleculeSpec::max_ir_intensity() const {
  double best = 0.0;
  for (const auto& m : modes) best = std::max(best, m.ir_intensity_km_mol);
  return best;
}

const MoleculeSpec& Catalog::molecule(const std::string& name) const {
  for (const auto& m : molecules) {
    if (m.name == name) return m;
  }
  throw NotFoundError("molecule '" + name + "' not found in catalog");
}

const LogicIon& Catalog::ion(const std::string& name) const {
  for (const auto& i : ions) {
    if (i.name == name) return i;
  }
  throw NotFoundError("ion '" + name + "' not found in catalog");
}

const LogicIon& Catalog::default_ion(const MoleculeSpec& mol) const {
  if (ions.empty()) throw NotFoundError("catalog has no ions");
  const LogicIon* best = &ions.front();
  for (const auto& i : ions) {
    if (std::abs(i.mass_da - mol.mass_da) < std::abs(best->mass_da - mol.mass_da)) {
      best = &i;
    }
  }
  return *best;
}

const Catalog& builtin_catalog() {
  static const Catalog catalog = [] {
    Catalog c;
    c.molecules = {
        {"NH3+", 17.0, {{"nu1", 3498.0, 0.0, ModeModel::harmonic, {}}}},
        {"C2H2+", 26.0, {{"nu2", 3363.0, 0.0, ModeModel::harmonic, {}}}},
        {"C3HN+",
         51.0,
         {{"nu1", 3259.0, 213.0, ModeModel::harmonic, {3196.5, 3123.0}},
          {"nu2", 2206.0, 2.0, ModeModel::harmonic, {2175.8, 2177.0}},
          {"nu3", 1890.0, 334.0, ModeModel::harmonic, {1852.8, 1855.0}},
          {"nu4", 911.0, 7.0, ModeModel::harmonic, {829.0}}}},
        {"C6H5NH2+", 93.0, {{"nu2", 3398.0, 0.0, ModeModel::harmonic, {}}}},
        {"C9H11NO2+", 165.0, {{"nu3", 3382.0, 0.0, ModeModel::harmonic, {}}}},
    };
    c.ions = {
        {"Ca40", 40.0, 729e-9},
        {"Sr88", 88.0, 674e-9},
        {"Ba138", 138.0, 1.7e-6},
    };
    return c;
  }();
  return catalog;
}

double IonCrystal::total_mass_kg() const {
  return (molecule.mass_da + ion.mass_da) * constants::dalton;
}

std::optional<std::string> mass_ratio_warning(const IonCrystal& crystal) {
  const double ratio = crystal.molecule.mass_da / crystal.ion.mass_da;
  if (ratio < 0.5 || ratio > 2.0) {
    std::ostringstream os;
    os << "molecule/ion mass ratio " << ratio
       << " is outside [0.5, 2]; sympathetic cooling and readout degrade";
    return os.str();
  }
  return std::nullopt;
}

double eta_probe(const IonCrystal& crystal, double probe_wavenumber_cm1, double theta) {
  return lamb_dicke(wavenumber_to_wavevector(probe_wavenumber_cm1),
                    crystal.total_mass_kg(), crystal.trap_frequency, theta);
}

double eta_control(const IonCrystal& crystal, double theta) {
  const double k = two_pi / crystal.ion.control_wavelength_m;
  return lamb_dicke(k, crystal.total_mass_kg(), crystal.trap_frequency, theta);
}

namespace {

void note_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                       const std::string& where, SchemaMode mode,
                       std::vector<std::string>* warnings) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* k : known) {
      if (it.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) {
      const std::string msg = "unknown key '" + it.key() + "' in " + where;
      if (mode == SchemaMode::strict) throw SchemaError(msg);
      if (warnings) warnings->push_back(msg);
    }
  }
}

double require_number(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw SchemaError("missing or non-numeric '" + std::string(key) + "' in " + where);
  }
  return obj[key].get<double>();
}

std::string require_string(const ordered_json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw SchemaError("missing or non-string '" + std::string(key) + "' in " + where);
  }
  return obj[key].get<std::string>();
}

}  // namespace

Catalog parse_catalog(const std::string& json_text, SchemaMode mode,
                      std::vector<std::string>* warnings) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("catalog root must be an object");
  note_unknown_keys(doc, {"molecules", "ions"}, "catalog root", mode, warnings);
  if (!doc.contains("molecules") || !doc["molecules"].is_array() ||
      !doc.contains("ions") || !doc["ions"].is_array()) {
    throw SchemaError("catalog needs 'molecules' and 'ions' arrays");
  }

  Catalog catalog;
  for (const auto& jm : doc["molecules"]) {
    const std::string where = "molecule entry";
    note_unknown_keys(jm, {"name", "mass_da", "modes"}, where, mode, warnings);
    MoleculeSpec m;
    m.name = require_string(jm, "name", where);
    m.mass_da = require_number(jm, "mass_da", where);
    if (!(m.mass_da > 0.0)) throw SchemaError("molecule mass must be > 0");
    if (!jm.contains("modes") || !jm["modes"].is_array()) {
      throw SchemaError("molecule '" + m.name + "' needs a 'modes' array");
    }
    for (const auto& jv : jm["modes"]) {
      const std::string mwhere = "mode of " + m.name;
      note_unknown_keys(jv, {"label", "freq_cm1", "ir_km_mol", "model", "freq_cm1_exp"},
                        mwhere, mode, warnings);
      VibrationalMode v;
      v.label = require_string(jv, "label", mwhere);
      for (const auto& other : m.modes) {
        if (other.label == v.label) {
          throw SchemaError("duplicate mode label '" + v.label + "' in " + m.name);
        }
      }
      v.frequency_cm1 = require_number(jv, "freq_cm1", mwhere);
      if (!(v.frequency_cm1 > 0.0)) throw SchemaError("mode frequency must be > 0");
      if (jv.contains("ir_km_mol")) {
        v.ir_intensity_km_mol = require_number(jv, "ir_km_mol", mwhere);
        if (v.ir_intensity_km_mol < 0.0) throw SchemaError("IR intensity must be >= 0");
      }
      if (jv.contains("model")) {
        const std::string s = require_string(jv, "model", mwhere);
        if (s == "two_level") {
          v.model = ModeModel::two_level;
        } else if (s == "harmonic") {
          v.model = ModeModel::harmonic;
        } else {
          throw SchemaError("mode model must be 'two_level' or 'harmonic'");
        }
      }
      if (jv.contains("freq_cm1_exp")) {
        if (!jv["freq_cm1_exp"].is_array()) {
          throw SchemaError("'freq_cm1_exp' must be an array of numbers");
        }
        for (const auto& x : jv["freq_cm1_exp"]) {
          if (!x.is_number()) throw SchemaError("'freq_cm1_exp' must be numbers");
          v.experimental_cm1.push_back(x.get<double>());
        }
      }
      m.modes.push_back(std::move(v));
    }
    catalog.molecules.push_back(std::move(m));
  }

  for (const auto& ji : doc["ions"]) {
    const std::string where = "ion entry";
    note_unknown_keys(ji, {"name", "mass_da", "control_wavelength_nm"}, where, mode,
                      warnings);
    LogicIon ion;
    ion.name = require_string(ji, "name", where);
    ion.mass_da = require_number(ji, "mass_da", where);
    ion.control_wavelength_m = require_number(ji, "control_wavelength_nm", where) * 1e-9;
    if (!(ion.mass_da > 0.0) || !(ion.control_wavelength_m > 0.0)) {
      throw SchemaError("ion mass and wavelength must be > 0");
    }
    catalog.ions.push_back(std::move(ion));
  }
  return catalog;
}

Catalog load_catalog(const std::string& path, SchemaMode mode,
                     std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open catalog file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str(), mode, warnings);
}

std::string catalog_to_json(const Catalog& catalog) {
  ordered_json doc;
  doc["molecules"] = ordered_json::array();
  for (const auto& m : catalog.molecules) {
    ordered_json jm;
    jm["name"] = m.name;
    jm["mass_da"] = m.mass_da;
    jm["modes"] = ordered_json::array();
    for (const auto& v : m.modes) {
      ordered_json jv;
      jv["label"] = v.label;
      jv["freq_cm1"] = v.frequency_cm1;
      jv["ir_km_mol"] = v.ir_intensity_km_mol;
      if (v.model != ModeModel::harmonic) jv["model"] = "two_level";
      if (!v.experimental_cm1.empty()) jv["freq_cm1_exp"] = v.experimental_cm1;
      jm["modes"].push_back(std::move(jv));
    }
    doc["molecules"].push_back(std::move(jm));
  }
  doc["ions"] = ordered_json::array();
  for (const auto& i : catalog.ions) {
    ordered_json ji;
    ji["name"] = i.name;
    ji["mass_da"] = i.mass_da;
    ji["control_wavelength_nm"] = i.control_wavelength_m * 1e9;
    doc["ions"].push_back(std::move(ji));
  }
  return doc.dump(2) + "\n";
}

void save_catalog(const Catalog& catalog, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write catalog file '" + path + "'");
  out << catalog_to_json(catalog);
}

std::string catalog_hash(const Catalog& catalog) {
  const std::string text = catalog_to_json(catalog);
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace qlrs

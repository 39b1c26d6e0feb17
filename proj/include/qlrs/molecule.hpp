#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlrs/errors.hpp"
#include "qlrs/physics.hpp"

namespace qlrs {

enum class ModeModel { two_level, harmonic };

struct VibrationalMode {
  std::string label;                 // e.g. "nu1"
  double frequency_cm1 = 0.0;        // > 0
  double ir_intensity_km_mol = 0.0;  // 0 = no catalog value; treated as
                                     // unit-strength in single-mode use
  ModeModel model = ModeModel::harmonic;
  std::vector<double> experimental_cm1;  // optional reference measurements
};

struct MoleculeSpec {
  std::string name;
  double mass_da = 0.0;
  std::vector<VibrationalMode> modes;

  const VibrationalMode& mode(const std::string& label) const;
  double max_ir_intensity() const;
};

struct LogicIon {
  std::string name;
  double mass_da = 0.0;
  double control_wavelength_m = 0.0;
};

struct Catalog {
  std::vector<MoleculeSpec> molecules;
  std::vector<LogicIon> ions;

  const MoleculeSpec& molecule(const std::string& name) const;
  const LogicIon& ion(const std::string& name) const;
  // Logic ion closest in mass; the pairing used for the reference tables.
  const LogicIon& default_ion(const MoleculeSpec& mol) const;
};

// The built-in species set used throughout the reference tables.
const Catalog& builtin_catalog();

struct IonCrystal {
  MoleculeSpec molecule;
  LogicIon ion;
  double trap_frequency = two_pi * 500e3;  // rad/s

  double total_mass_kg() const;
};

// Mass ratio outside [0.5, 2] degrades sympathetic cooling; flagged, not fatal.
std::optional<std::string> mass_ratio_warning(const IonCrystal& crystal);

// Lamb-Dicke parameter of the probe (IR) light at the given wavenumber.
double eta_probe(const IonCrystal& crystal, double probe_wavenumber_cm1, double theta = 0.0);

// Lamb-Dicke parameter of the atomic control beam at overlap angle theta.
double eta_control(const IonCrystal& crystal, double theta);

// Catalog file I/O. JSON schema:
//   { "molecules": [ { "name", "mass_da",
//                      "modes": [ { "label", "freq_cm1", "ir_km_mol",
//                                   "model"?, "freq_cm1_exp"? } ] } ],
//     "ions": [ { "name", "mass_da", "control_wavelength_nm" } ] }
// Unknown keys are rejected in strict mode and reported as warnings otherwise.
enum class SchemaMode { lenient, strict };

Catalog parse_catalog(const std::string& json_text, SchemaMode mode = SchemaMode::lenient,
                      std::vector<std::string>* warnings = nullptr);
Catalog load_catalog(const std::string& path, SchemaMode mode = SchemaMode::lenient,
                     std::vector<std::string>* warnings = nullptr);
std::string catalog_to_json(const Catalog& catalog);
void save_catalog(const Catalog& catalog, const std::string& path);

// FNV-1a hash of the canonical serialization; embedded in output metadata.
std::string catalog_hash(const Catalog& catalog);

}  // namespace qlrs

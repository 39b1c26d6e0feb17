#include "qlrs/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qlrs/catgen.hpp"
#include "qlrs/errors.hpp"
#include "qlrs/molecule.hpp"
#include "qlrs/optimizer.hpp"
#include "qlrs/pumpprobe.hpp"
#include "qlrs/recoil.hpp"
#include "qlrs/sweep_table.hpp"

namespace qlrs {

namespace {

constexpr double deg = two_pi / 360.0;

const Catalog& active_catalog(Catalog& storage) {
  const char* path = std::getenv("QLS_CATALOG");
  if (path && *path) {
    std::vector<std::string> warnings;
    storage = load_catalog(path, SchemaMode::lenient, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return storage;
  }
  return builtin_catalog();
}

struct SettingsFlags {
  std::string objective = "signal";
  std::string duration_model = "ld";
  bool roundtrip_heating = false;
  double rabi_cap_khz = 300.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--objective", objective, "efficiency objective")
        ->check(CLI::IsMember({"signal", "ramsey"}));
    cmd->add_option("--duration-model", duration_model,
                    "cat generation duration model")
        ->check(CLI::IsMember({"ld", "growth-ode"}));
    cmd->add_flag("--roundtrip-heating", roundtrip_heating,
                  "double the heating exposure to cover the inverse mapping");
    cmd->add_option("--rabi-cap-khz", rabi_cap_khz, "control Rabi limit (kHz)");
  }

  ProtocolSettings to_settings() const {
    ProtocolSettings s;
    s.objective = (objective == "ramsey") ? Objective::ramsey_probability
                                          : Objective::signal;
    s.duration_model = (duration_model == "growth-ode") ? DurationModel::growth_ode
                                                        : DurationModel::ld_analytic;
    s.roundtrip_heating = roundtrip_heating;
    s.rabi_cap = two_pi * rabi_cap_khz * 1e3;
    return s;
  }
};

void emit(const SweepTable& table, const std::string& format, const std::string& out_path,
          std::ostream& out) {
  const std::string text = (format == "json") ? table.to_json() : table.to_csv();
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write output file '" + out_path + "'");
    f << text;
  }
}

std::string format_text(const SweepTable& table) {
  std::ostringstream os;
  for (const auto& [k, v] : table.metadata) os << "# " << k << "=" << v << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      os << table.columns[i] << " = ";
      if (std::holds_alternative<double>(row[i])) {
        os << format_sig9(std::get<double>(row[i]));
      } else {
        os << std::get<std::string>(row[i]);
      }
      os << "\n";
    }
  }
  return os.str();
}

std::vector<double> parse_delays(const std::string& spec) {
  // start:stop:count
  double start = 0.0, stop = 0.0;
  long count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' ||
      count < 1 || stop < start || start < 0.0) {
    throw std::invalid_argument("--delays must be start:stop:count with start >= 0");
  }
  std::vector<double> delays;
  for (long i = 0; i < count; ++i) {
    delays.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  return delays;
}

int run_parsed(CLI::App& app, const Catalog& catalog, std::ostream& out,
               std::ostream& err);

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"quantum-logic recoil spectroscopy toolkit"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(0, 1);

  // catalog
  auto* cat = app.add_subcommand("catalog", "inspect or validate species catalogs");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list catalog entries");
  std::string show_name;
  auto* cat_show = cat->add_subcommand("show", "show one molecule or ion");
  cat_show->add_option("name", show_name, "entry name")->required();
  std::string validate_path;
  auto* cat_validate = cat->add_subcommand("validate", "validate a catalog file");
  cat_validate->add_option("file", validate_path, "catalog JSON file")->required();

  // detect
  auto* detect = app.add_subcommand("detect", "single-photon detection efficiency");
  std::string d_molecule, d_mode, d_ion, d_format = "text", d_out;
  double d_trap_khz = 500.0, d_heating = 0.0, d_angle_deg = 0.0, d_alpha = 0.0;
  int d_photons = 1;
  bool d_optimize = false;
  detect->add_option("--molecule", d_molecule)->required();
  detect->add_option("--mode", d_mode, "vibrational mode label (default: first mode)");
  detect->add_option("--ion", d_ion, "logic ion (default: nearest mass)");
  detect->add_option("--trap-freq", d_trap_khz, "trap frequency (kHz)");
  detect->add_option("--heating", d_heating, "heating rate (quanta/s)")->required();
  auto* opt_flag = detect->add_flag("--optimize-angle", d_optimize);
  auto* angle_opt = detect->add_option("--angle", d_angle_deg, "overlap angle (deg)");
  auto* alpha_opt = detect->add_option("--alpha", d_alpha, "cat displacement");
  angle_opt->excludes(opt_flag);
  alpha_opt->excludes(opt_flag);
  detect->add_option("--photons", d_photons)->check(CLI::IsMember({1, 2}));
  detect->add_option("--format", d_format)->check(CLI::IsMember({"text", "csv", "json"}));
  detect->add_option("--out", d_out, "output file (default stdout)");
  SettingsFlags d_settings;
  d_settings.attach(detect);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "single-pulse absorption spectrum");
  std::string s_molecule, s_ion, s_format = "csv", s_out;
  double s_from = 0.0, s_to = 0.0, s_step = 0.0, s_pulse_fs = 200.0, s_area = 1.0,
         s_heating = 0.0, s_trap_khz = 500.0;
  spectrum->add_option("--molecule", s_molecule)->required();
  spectrum->add_option("--ion", s_ion);
  spectrum->add_option("--from", s_from, "scan start (cm^-1)")->required();
  spectrum->add_option("--to", s_to, "scan end (cm^-1)")->required();
  spectrum->add_option("--step", s_step, "scan step (cm^-1)")->required();
  spectrum->add_option("--pulse-fs", s_pulse_fs, "pulse FWHM (fs)");
  spectrum->add_option("--pulse-area", s_area, "pulse area calibration");
  spectrum->add_option("--heating", s_heating, "heating rate (quanta/s)")->required();
  spectrum->add_option("--trap-freq", s_trap_khz, "trap frequency (kHz)");
  spectrum->add_option("--format", s_format)->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_option("--out", s_out);
  SettingsFlags s_settings;
  s_settings.attach(spectrum);

  // pumpprobe
  auto* pump = app.add_subcommand("pumpprobe", "pump-probe delay curve");
  std::string p_molecule, p_mode, p_ion, p_delays, p_format = "csv", p_out;
  double p_heating = 0.0, p_tau1 = 0.0, p_trap_khz = 500.0;
  pump->add_option("--molecule", p_molecule)->required();
  pump->add_option("--mode", p_mode, "bright mode label (default: first mode)");
  pump->add_option("--ion", p_ion);
  pump->add_option("--heating", p_heating, "heating rate (quanta/s)")->required();
  pump->add_option("--tau1", p_tau1, "IVR lifetime (s)")->required();
  pump->add_option("--delays", p_delays, "start:stop:count (s)")->required();
  pump->add_option("--trap-freq", p_trap_khz, "trap frequency (kHz)");
  pump->add_option("--format", p_format)->check(CLI::IsMember({"csv", "json"}));
  pump->add_option("--out", p_out);
  SettingsFlags p_settings;
  p_settings.attach(pump);

  // tables
  auto* tables = app.add_subcommand("tables", "reproduce the reference efficiency grids");
  int t_which = 2;
  std::string t_rates = "10,1,0.1", t_format = "csv", t_out;
  tables->add_option("--which", t_which, "2 = single photon, 3 = pump-probe")
      ->check(CLI::IsMember({2, 3}));
  tables->add_option("--heating-rates", t_rates, "comma-separated quanta/s");
  tables->add_option("--format", t_format)->check(CLI::IsMember({"csv", "json"}));
  tables->add_option("--out", t_out);
  SettingsFlags t_settings;
  t_settings.attach(tables);

  std::vector<const char*> argv;
  argv.push_back("qlrs");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Catalog storage;
    const Catalog& catalog = active_catalog(storage);

    if (cat->parsed()) {
      if (cat_list->parsed()) {
        for (const auto& m : catalog.molecules) {
          out << "molecule " << m.name << " (" << format_sig9(m.mass_da) << " Da, "
              << m.modes.size() << (m.modes.size() == 1 ? " mode)" : " modes)") << "\n";
        }
        for (const auto& i : catalog.ions) {
          out << "ion " << i.name << " (" << format_sig9(i.mass_da) << " Da, "
              << format_sig9(i.control_wavelength_m * 1e9) << " nm)\n";
        }
        return 0;
      }
      if (cat_show->parsed()) {
        bool is_molecule = false;
        for (const auto& m : catalog.molecules) is_molecule |= (m.name == show_name);
        if (is_molecule) {
          const MoleculeSpec& m = catalog.molecule(show_name);
          out << "molecule " << m.name << "\nmass_da = " << format_sig9(m.mass_da)
              << "\ndefault_ion = " << catalog.default_ion(m).name << "\n";
          for (const auto& v : m.modes) {
            out << "mode " << v.label << ": freq_cm1 = " << format_sig9(v.frequency_cm1)
                << ", ir_km_mol = " << format_sig9(v.ir_intensity_km_mol);
            if (!v.experimental_cm1.empty()) {
              out << ", freq_cm1_exp =";
              for (double e : v.experimental_cm1) out << " " << format_sig9(e);
            }
            out << "\n";
          }
          return 0;
        }
        const LogicIon& i = catalog.ion(show_name);  // throws NotFound otherwise
        out << "ion " << i.name << "\nmass_da = " << format_sig9(i.mass_da)
            << "\ncontrol_wavelength_nm = " << format_sig9(i.control_wavelength_m * 1e9)
            << "\n";
        return 0;
      }
      if (cat_validate->parsed()) {
        load_catalog(validate_path, SchemaMode::strict);
        out << "ok\n";
        return 0;
      }
    }

    if (detect->parsed()) {
      const MoleculeSpec& mol = catalog.molecule(d_molecule);
      if (mol.modes.empty()) throw NotFoundError("molecule has no modes");
      const VibrationalMode& mode = d_mode.empty() ? mol.modes.front() : mol.mode(d_mode);
      const LogicIon& ion = d_ion.empty() ? catalog.default_ion(mol) : catalog.ion(d_ion);
      IonCrystal crystal{mol, ion, two_pi * d_trap_khz * 1e3};
      if (auto warning = mass_ratio_warning(crystal)) err << "warning: " << *warning << "\n";

      OptimizationProblem problem;
      problem.crystal = crystal;
      problem.probe_wavenumber_cm1 = mode.frequency_cm1;
      problem.heating_rate = d_heating;
      problem.photon_count = d_photons;
      problem.settings = d_settings.to_settings();

      SweepTable table;
      table.columns = {"efficiency", "ramsey_probability", "background",
                       "contrast",   "theta_star_deg",     "alpha_star",
                       "duration_us"};
      if (d_optimize) {
        const Optimum opt = optimize_angle(problem);
        table.rows.push_back({opt.efficiency, opt.ramsey_probability, opt.background,
                              opt.contrast, opt.theta_star / deg, opt.alpha_star,
                              opt.duration * 1e6});
      } else if (d_alpha == 0.0) {
        table.rows.push_back({0.0, 0.0, 0.0, 1.0, d_angle_deg, 0.0, 0.0});
      } else {
        const EfficiencyBreakdown b = efficiency_at(problem, d_angle_deg * deg, d_alpha);
        table.rows.push_back({b.efficiency, b.ramsey_probability, b.background, b.contrast,
                              d_angle_deg, d_alpha, b.duration * 1e6});
      }
      table.add_metadata("molecule", mol.name);
      table.add_metadata("mode", mode.label);
      table.add_metadata("ion", ion.name);
      table.add_metadata("frequency_cm1", mode.frequency_cm1);
      table.add_metadata("heating_rate_quanta_per_s", d_heating);
      table.add_metadata("photons", double(d_photons));
      table.add_metadata("trap_frequency_khz", d_trap_khz);
      table.add_metadata("rabi_cap_khz", d_settings.rabi_cap_khz);
      table.add_metadata("objective", d_settings.objective);
      table.add_metadata("duration_model", d_settings.duration_model);
      table.add_metadata("roundtrip_heating", d_settings.roundtrip_heating ? "true" : "false");
      table.add_metadata("catalog_hash", catalog_hash(catalog));
      table.add_metadata("version", version);
      if (d_format == "text") {
        if (d_out.empty()) {
          out << format_text(table);
        } else {
          std::ofstream f(d_out, std::ios::binary);
          f << format_text(table);
        }
      } else {
        emit(table, d_format, d_out, out);
      }
      return 0;
    }

    if (spectrum->parsed()) {
      const MoleculeSpec& mol = catalog.molecule(s_molecule);
      const LogicIon& ion = s_ion.empty() ? catalog.default_ion(mol) : catalog.ion(s_ion);
      IonCrystal crystal{mol, ion, two_pi * s_trap_khz * 1e3};
      if (auto warning = mass_ratio_warning(crystal)) err << "warning: " << *warning << "\n";
      if (mol.max_ir_intensity() <= 0.0) {
        err << "warning: no catalog IR intensities; spectrum is pure background\n";
      }
      SweepTable table =
          spectrum_scan(crystal, {s_from, s_to, s_step}, {s_pulse_fs * 1e-15, s_area},
                        s_heating, s_settings.to_settings());
      table.add_metadata("catalog_hash", catalog_hash(catalog));
      table.add_metadata("version", version);
      emit(table, s_format, s_out, out);
      return 0;
    }

    if (pump->parsed()) {
      const MoleculeSpec& mol = catalog.molecule(p_molecule);
      if (mol.modes.empty()) throw NotFoundError("molecule has no modes");
      const VibrationalMode& mode = p_mode.empty() ? mol.modes.front() : mol.mode(p_mode);
      const LogicIon& ion = p_ion.empty() ? catalog.default_ion(mol) : catalog.ion(p_ion);
      IonCrystal crystal{mol, ion, two_pi * p_trap_khz * 1e3};
      if (!(p_tau1 > 0.0)) throw std::invalid_argument("--tau1 must be > 0");
      IvrModel model{p_tau1, mode};
      SweepTable table = pump_probe_curve(model, crystal, p_heating,
                                          parse_delays(p_delays), p_settings.to_settings());
      table.add_metadata("catalog_hash", catalog_hash(catalog));
      table.add_metadata("version", version);
      emit(table, p_format, p_out, out);
      return 0;
    }

    if (tables->parsed()) {
      std::vector<double> rates;
      std::stringstream ss(t_rates);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) rates.push_back(std::stod(item));
      }
      if (rates.empty()) throw std::invalid_argument("--heating-rates must be non-empty");
      SweepTable table =
          reproduce_tables(rates, t_which == 2 ? 1 : 2, t_settings.to_settings());
      table.add_metadata("version", version);
      emit(table, t_format, t_out, out);
      return 0;
    }

    out << app.help();
    return 0;
  } catch (const InfeasibleAlphaError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const StalledGenerationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NormDriftError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const TruncationOverflowError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qlrs

#include "shb/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "shb/errors.hpp"
#include "shb/units.hpp"

namespace shb::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(trim(value.substr(start)));
      break;
    }
    out.emplace_back(trim(value.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// One parsed [section] with consumption tracking, so anything left over at
/// the end of a handler is reported as an unknown key.
class Section {
 public:
  Section(std::string name, KeyValues entries)
      : name_(std::move(name)), entries_(std::move(entries)) {}

  const std::string& name() const { return name_; }

  std::optional<std::string> take(std::string_view key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      return std::nullopt;
    }
    std::string value = std::move(it->second);
    entries_.erase(it);
    return value;
  }

  std::string require(std::string_view key) {
    auto v = take(key);
    if (!v) {
      throw ConfigError("missing required key '" + name_ + "." + std::string(key) + "'");
    }
    return *v;
  }

  double quantity(std::string_view key, Quantity q, double fallback) {
    const auto v = take(key);
    return v ? parse_in(key, *v, q) : fallback;
  }

  std::optional<double> optional_quantity(std::string_view key, Quantity q) {
    const auto v = take(key);
    if (!v) {
      return std::nullopt;
    }
    return parse_in(key, *v, q);
  }

  int integer(std::string_view key, int fallback, int min_value) {
    const auto v = take(key);
    if (!v) {
      return fallback;
    }
    const double d = parse_in(key, *v, Quantity::Dimensionless);
    if (d != std::floor(d) || d < min_value || d > 1e9) {
      throw ConfigError("key '" + name_ + "." + std::string(key) + "' must be an integer >= " +
                        std::to_string(min_value));
    }
    return static_cast<int>(d);
  }

  std::vector<double> list(std::string_view key, Quantity q, std::vector<double> fallback) {
    const auto v = take(key);
    if (!v) {
      return fallback;
    }
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
      out.push_back(parse_in(key, item, q));
    }
    return out;
  }

  Eigen::Vector3d triple(std::string_view key, Quantity q, const Eigen::Vector3d& fallback) {
    const auto v = take(key);
    if (!v) {
      return fallback;
    }
    const auto items = split_list(*v);
    if (items.size() != 3) {
      throw ConfigError("key '" + name_ + "." + std::string(key) + "' needs exactly 3 values");
    }
    return {parse_in(key, items[0], q), parse_in(key, items[1], q), parse_in(key, items[2], q)};
  }

  std::optional<Eigen::Vector3d> optional_triple(std::string_view key, Quantity q) {
    if (entries_.find(key) == entries_.end()) {
      return std::nullopt;
    }
    return triple(key, q, Eigen::Vector3d::Zero());
  }

  void finish() const {
    if (!entries_.empty()) {
      throw ConfigError("unknown key '" + name_ + "." + entries_.begin()->first + "'");
    }
  }

 private:
  double parse_in(std::string_view key, std::string_view value, Quantity q) const {
    try {
      return parse_quantity(value, q);
    } catch (const ConfigError& e) {
      throw ConfigError("key '" + name_ + "." + std::string(key) + "': " + e.what());
    }
  }

  std::string name_;
  KeyValues entries_;
};

std::map<std::string, KeyValues> split_sections(const std::string& text) {
  std::map<std::string, KeyValues> sections;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (sections.count(current)) {
        throw ConfigError("duplicate section [" + current + "]");
      }
      sections[current];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!sections[current].emplace(key, value).second) {
      throw ConfigError("duplicate key '" + current + "." + key + "'");
    }
  }
  return sections;
}

void check_range(const std::string& what, double value, double lo, double hi) {
  if (!(value >= lo) || !(value <= hi)) {
    throw ConfigError(what + " = " + format_double(value) + " is outside [" +
                      format_double(lo) + ", " + format_double(hi) + "]");
  }
}

void check_positive(const std::string& what, double value) {
  if (!(value > 0.0)) {
    throw ConfigError(what + " must be positive, got " + format_double(value));
  }
}

void check_non_negative(const std::string& what, double value) {
  if (!(value >= 0.0)) {
    throw ConfigError(what + " must be non-negative, got " + format_double(value));
  }
}

void check_half_integer_spin(const std::string& what, double value) {
  const double twice = 2.0 * value;
  if (value < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
    throw ConfigError(what + " must be a non-negative half-integer, got " + format_double(value));
  }
}

SiteSpec parse_site(Section& section, const std::string& label) {
  SiteSpec site;
  site.label = label;

  const auto g_scalar = section.take("g");
  const auto g_principal = section.optional_triple("g_principal", Quantity::Dimensionless);
  if (g_scalar && g_principal) {
    throw ConfigError("site '" + label + "': give either g or g_principal, not both");
  }
  if (!g_scalar && !g_principal) {
    throw ConfigError("missing required key '" + section.name() + ".g' (or g_principal)");
  }
  if (g_scalar) {
    site.full_tensor = false;
    site.g_value = parse_quantity(*g_scalar, Quantity::Dimensionless);
    check_positive("site '" + label + "' g", site.g_value);
  } else {
    site.full_tensor = true;
    site.g_principal = *g_principal;
    site.g_euler_deg = section.triple("g_euler", Quantity::Angle, Eigen::Vector3d::Zero());
  }

  site.electron_spin = section.quantity("electron_spin", Quantity::Dimensionless, 0.5);
  site.nuclear_spin = section.quantity("nuclear_spin", Quantity::Dimensionless, 0.0);
  check_half_integer_spin("site '" + label + "' electron_spin", site.electron_spin);
  check_half_integer_spin("site '" + label + "' nuclear_spin", site.nuclear_spin);
  if (site.electron_spin != 0.5) {
    throw ConfigError("site '" + label + "': only electron_spin = 0.5 is supported");
  }

  const auto a_principal = section.optional_triple("a_principal", Quantity::Frequency);
  const auto q_principal = section.optional_triple("q_principal", Quantity::Frequency);
  if (site.nuclear_spin > 0.0) {
    if (!a_principal) {
      throw ConfigError("missing required key '" + section.name() +
                        ".a_principal' (site has nuclear spin)");
    }
    site.a_principal = *a_principal;
    site.a_euler_deg = section.triple("a_euler", Quantity::Angle, Eigen::Vector3d::Zero());
    site.q_principal = q_principal.value_or(Eigen::Vector3d::Zero());
    site.q_euler_deg = section.triple("q_euler", Quantity::Angle, Eigen::Vector3d::Zero());
  } else if (a_principal || q_principal) {
    throw ConfigError("site '" + label + "': hyperfine/quadrupole given but nuclear_spin = 0");
  }

  site.misalign_b_d2_deg = section.quantity("misalign_b_d2", Quantity::Angle, 0.0);
  site.misalign_d1_b_deg = section.quantity("misalign_d1_b", Quantity::Angle, 0.0);
  site.abundance = section.optional_quantity("abundance", Quantity::Dimensionless);
  if (site.abundance) {
    check_range("site '" + label + "' abundance", *site.abundance, 0.0, 1.0);
  }
  if (const auto iso = section.take("isotope")) {
    site.isotope = *iso;
  }
  section.finish();
  return site;
}

Eigen::Vector3d normalized_direction(const std::string& what, const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !v.allFinite()) {
    throw ConfigError(what + " must be a nonzero vector");
  }
  // Dividing an already-unit vector by its norm churns the last bit back and
  // forth, so parse -> serialize would never reach a fixed point. Leave
  // vectors that are unit length to within rounding noise untouched.
  if (std::abs(norm - 1.0) < 1e-12) {
    return v;
  }
  return v / norm;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  auto raw_sections = split_sections(text);
  ExperimentConfig config;
  config.sites.clear();

  // Sites: every [site.<label>] section.
  for (auto it = raw_sections.begin(); it != raw_sections.end();) {
    if (it->first.rfind("site.", 0) == 0) {
      const std::string label = it->first.substr(5);
      if (label.empty()) {
        throw ConfigError("section [" + it->first + "]: empty site label");
      }
      Section section(it->first, std::move(it->second));
      config.sites.push_back(parse_site(section, label));
      it = raw_sections.erase(it);
    } else {
      ++it;
    }
  }
  if (config.sites.empty()) {
    throw ConfigError("no [site.<label>] section found; at least one site is required");
  }
  std::sort(config.sites.begin(), config.sites.end(),
            [](const SiteSpec& a, const SiteSpec& b) { return a.label < b.label; });

  const auto grab = [&raw_sections](const std::string& name) -> std::optional<Section> {
    const auto it = raw_sections.find(name);
    if (it == raw_sections.end()) {
      return std::nullopt;
    }
    Section section(it->first, std::move(it->second));
    raw_sections.erase(it);
    return section;
  };

  // [linewidth] is the one required non-site section: gamma0 has no default.
  {
    auto section = grab("linewidth");
    if (!section) {
      throw ConfigError("missing required key 'linewidth.gamma0'");
    }
    config.linewidth.gamma0 = parse_quantity(section->require("gamma0"), Quantity::Frequency);
    check_positive("linewidth.gamma0", config.linewidth.gamma0);
    config.linewidth.delta_gamma =
        section->quantity("delta_gamma", Quantity::FieldSlope, 0.21e9);
    check_non_negative("linewidth.delta_gamma", config.linewidth.delta_gamma);
    section->finish();
  }

  if (auto section = grab("thermal")) {
    config.spin_temperature =
        section->quantity("spin_temperature", Quantity::Temperature, config.spin_temperature);
    config.cryostat_temperature = section->quantity("cryostat_temperature", Quantity::Temperature,
                                                    config.cryostat_temperature);
    check_positive("thermal.spin_temperature", config.spin_temperature);
    check_non_negative("thermal.cryostat_temperature", config.cryostat_temperature);
    section->finish();
  }

  if (auto section = grab("relaxation")) {
    config.relaxation.w_ff =
        section->quantity("w_ff", Quantity::Frequency, config.relaxation.w_ff);
    config.relaxation.w_d = section->quantity("w_d", Quantity::RatePerT5, config.relaxation.w_d);
    config.relaxation.t_min =
        section->quantity("t_min", Quantity::Temperature, config.relaxation.t_min);
    check_non_negative("relaxation.w_ff", config.relaxation.w_ff);
    check_non_negative("relaxation.w_d", config.relaxation.w_d);
    check_non_negative("relaxation.t_min", config.relaxation.t_min);
    section->finish();
  }

  if (auto section = grab("drive")) {
    config.drive.rabi = section->quantity("rabi", Quantity::Frequency, config.drive.rabi);
    config.drive.detuning =
        section->quantity("detuning", Quantity::Frequency, config.drive.detuning);
    config.drive.burn_duration =
        section->quantity("burn_duration", Quantity::Time, config.drive.burn_duration);
    config.drive.transverse_rate = section->quantity("transverse_rate", Quantity::Frequency,
                                                     config.drive.transverse_rate);
    config.observe_duration =
        section->quantity("observe_duration", Quantity::Time, config.observe_duration);
    config.bloch_step = section->quantity("step", Quantity::Time, config.bloch_step);
    check_non_negative("drive.rabi", config.drive.rabi);
    check_non_negative("drive.burn_duration", config.drive.burn_duration);
    check_positive("drive.transverse_rate", config.drive.transverse_rate);
    check_non_negative("drive.observe_duration", config.observe_duration);
    check_positive("drive.step", config.bloch_step);
    section->finish();
  }

  if (auto section = grab("geometry")) {
    config.field_direction = section->triple("field_direction", Quantity::Dimensionless,
                                             config.field_direction);
    config.drive_direction = section->triple("drive_direction", Quantity::Dimensionless,
                                             config.drive_direction);
    section->finish();
  }
  config.field_direction = normalized_direction("geometry.field_direction", config.field_direction);
  config.drive_direction = normalized_direction("geometry.drive_direction", config.drive_direction);

  if (auto section = grab("sweep")) {
    config.sweep.field_min =
        section->quantity("field_min", Quantity::Field, config.sweep.field_min);
    config.sweep.field_max =
        section->quantity("field_max", Quantity::Field, config.sweep.field_max);
    config.sweep.field_steps = section->integer("field_steps", config.sweep.field_steps, 2);
    config.sweep.freq_min = section->quantity("freq_min", Quantity::Frequency, config.sweep.freq_min);
    config.sweep.freq_max = section->quantity("freq_max", Quantity::Frequency, config.sweep.freq_max);
    config.sweep.freq_steps = section->integer("freq_steps", config.sweep.freq_steps, 2);
    config.sweep.field = section->quantity("field", Quantity::Field, config.sweep.field);
    config.sweep.temperatures =
        section->list("temperatures", Quantity::Temperature, config.sweep.temperatures);
    section->finish();
  }
  if (!(config.sweep.field_min < config.sweep.field_max)) {
    throw ConfigError("sweep.field_min must be below sweep.field_max");
  }
  if (!(config.sweep.freq_min < config.sweep.freq_max)) {
    throw ConfigError("sweep.freq_min must be below sweep.freq_max");
  }
  check_non_negative("sweep.field_min", config.sweep.field_min);
  check_positive("sweep.field", config.sweep.field);
  if (config.sweep.temperatures.empty()) {
    throw ConfigError("sweep.temperatures must not be empty");
  }
  for (const double t : config.sweep.temperatures) {
    check_positive("sweep.temperatures entry", t);
  }

  if (auto section = grab("hole")) {
    config.hole.depth = section->quantity("depth", Quantity::Dimensionless, config.hole.depth);
    config.hole.relative_width =
        section->quantity("relative_width", Quantity::Dimensionless, config.hole.relative_width);
    config.hole.width_hz = section->optional_quantity("width", Quantity::Frequency);
    config.hole.gamma_sd =
        section->quantity("gamma_sd", Quantity::Frequency, config.hole.gamma_sd);
    config.hole.rate_inside = section->optional_quantity("rate_inside", Quantity::Frequency);
    config.hole.rate_outside = section->optional_quantity("rate_outside", Quantity::Frequency);
    config.hole.times = section->list("times", Quantity::Time, config.hole.times);
    config.hole.span_factor =
        section->quantity("span_factor", Quantity::Dimensionless, config.hole.span_factor);
    config.hole.points = section->integer("points", config.hole.points, 5);
    if (const auto site = section->take("site")) {
      config.hole.site = *site;
    }
    section->finish();
  }
  check_range("hole.depth", config.hole.depth, 0.0, 1.0);
  check_positive("hole.relative_width", config.hole.relative_width);
  if (config.hole.width_hz) {
    check_positive("hole.width", *config.hole.width_hz);
  }
  check_non_negative("hole.gamma_sd", config.hole.gamma_sd);
  if (config.hole.rate_inside) {
    check_non_negative("hole.rate_inside", *config.hole.rate_inside);
  }
  if (config.hole.rate_outside) {
    check_non_negative("hole.rate_outside", *config.hole.rate_outside);
  }
  if (config.hole.times.empty()) {
    throw ConfigError("hole.times must not be empty");
  }
  if (!std::is_sorted(config.hole.times.begin(), config.hole.times.end())) {
    throw ConfigError("hole.times must be ascending");
  }
  check_non_negative("hole.times entry", config.hole.times.front());
  check_positive("hole.span_factor", config.hole.span_factor);

  if (auto section = grab("link")) {
    config.link.budget.source_power_dbm = section->quantity(
        "source_power", Quantity::PowerDbm, config.link.budget.source_power_dbm);
    config.link.budget.attenuation_stages_db = section->list(
        "attenuation_stages", Quantity::GainDb, config.link.budget.attenuation_stages_db);
    config.link.budget.mode_coupling_db =
        section->quantity("mode_coupling", Quantity::GainDb, config.link.budget.mode_coupling_db);
    config.link.budget.kappa =
        section->quantity("kappa", Quantity::FieldPerSqrtW, config.link.budget.kappa);
    config.link.rabi_convention = section->quantity("rabi_convention", Quantity::Dimensionless,
                                                    config.link.rabi_convention);
    if (const auto site = section->take("site")) {
      config.link.site = *site;
    }
    section->finish();
  }
  check_positive("link.kappa", config.link.budget.kappa);
  check_positive("link.rabi_convention", config.link.rabi_convention);

  if (auto section = grab("fit")) {
    if (const auto form = section->take("boltzmann_form")) {
      if (*form == "logistic") {
        config.fit.boltzmann_form = fit::BoltzmannForm::Logistic;
      } else if (*form == "population-difference") {
        config.fit.boltzmann_form = fit::BoltzmannForm::PopulationDifference;
      } else {
        throw ConfigError(
            "fit.boltzmann_form must be 'logistic' or 'population-difference', got '" + *form +
            "'");
      }
    }
    section->finish();
  }

  if (auto section = grab("output")) {
    if (const auto dir = section->take("dir")) {
      config.output_dir = *dir;
    }
    section->finish();
  }

  if (!raw_sections.empty()) {
    throw ConfigError("unknown section [" + raw_sections.begin()->first + "]");
  }

  // Cross-checks: referenced sites must exist, abundances must be coherent.
  for (const std::string* label : {&config.hole.site, &config.link.site}) {
    if (!label->empty()) {
      config.site(*label);
    }
  }
  int with_abundance = 0;
  for (const auto& site : config.sites) {
    with_abundance += site.abundance.has_value() ? 1 : 0;
  }
  if (with_abundance != 0 && with_abundance != static_cast<int>(config.sites.size())) {
    throw ConfigError("either all sites or no sites may set abundance");
  }
  spin::validate_ensemble(config.build_ensemble());
  return config;
}

spin::SpinSystem SiteSpec::build(double resolved_abundance) const {
  spin::SpinSystem sys;
  sys.electron_spin = electron_spin;
  sys.nuclear_spin = nuclear_spin;
  sys.site_label = label;
  sys.isotope_label = isotope;
  sys.abundance = resolved_abundance;

  sys.g = full_tensor ? spin::InteractionTensor::from_principal(g_principal, g_euler_deg)
                      : spin::InteractionTensor::isotropic(g_value);
  if (nuclear_spin > 0.0) {
    sys.a = spin::InteractionTensor::from_principal(a_principal, a_euler_deg);
    sys.q = spin::InteractionTensor::from_principal(q_principal, q_euler_deg);
  }

  if (misalign_b_d2_deg != 0.0 || misalign_d1_b_deg != 0.0) {
    const spin::OrientationCorrection corr{misalign_b_d2_deg, misalign_d1_b_deg, label};
    sys.g = spin::apply_misalignment(sys.g, corr);
    if (sys.a) {
      sys.a = spin::apply_misalignment(*sys.a, corr);
    }
    if (sys.q) {
      sys.q = spin::apply_misalignment(*sys.q, corr);
    }
  }
  return sys;
}

std::vector<spin::SpinSystem> ExperimentConfig::build_ensemble() const {
  std::vector<spin::SpinSystem> ensemble;
  ensemble.reserve(sites.size());
  const double equal_share = sites.empty() ? 1.0 : 1.0 / static_cast<double>(sites.size());
  for (const auto& site : sites) {
    ensemble.push_back(site.build(site.abundance.value_or(equal_share)));
  }
  return ensemble;
}

const SiteSpec& ExperimentConfig::site(const std::string& label) const {
  for (const auto& s : sites) {
    if (s.label == label) {
      return s;
    }
  }
  throw ConfigError("no site '" + label + "' defined in the config");
}

std::string ExperimentConfig::reference_site_label(const std::string& requested) const {
  if (!requested.empty()) {
    return site(requested).label;
  }
  if (sites.empty()) {
    throw ConfigError("config defines no sites");
  }
  return sites.front().label;
}

double ExperimentConfig::site_g_eff(const std::string& label) const {
  const spin::SpinSystem sys = site(label).build(1.0);
  return spin::effective_g(sys.g, field_direction);
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  const auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  const auto quantity = [&](const std::string& key, double value, Quantity q) {
    line(key, format_quantity(value, q));
  };
  const auto triple = [&](const std::string& key, const Eigen::Vector3d& v, Quantity q) {
    line(key, format_quantity(v[0], q) + ", " + format_quantity(v[1], q) + ", " +
                  format_quantity(v[2], q));
  };
  const auto list = [&](const std::string& key, const std::vector<double>& values, Quantity q) {
    std::string joined;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) {
        joined += ", ";
      }
      joined += format_quantity(values[k], q);
    }
    line(key, joined);
  };

  for (const auto& site : config.sites) {
    out += "[site." + site.label + "]\n";
    if (site.full_tensor) {
      triple("g_principal", site.g_principal, Quantity::Dimensionless);
      triple("g_euler", site.g_euler_deg, Quantity::Angle);
    } else {
      quantity("g", site.g_value, Quantity::Dimensionless);
    }
    quantity("electron_spin", site.electron_spin, Quantity::Dimensionless);
    quantity("nuclear_spin", site.nuclear_spin, Quantity::Dimensionless);
    if (site.nuclear_spin > 0.0) {
      triple("a_principal", site.a_principal, Quantity::Frequency);
      triple("a_euler", site.a_euler_deg, Quantity::Angle);
      triple("q_principal", site.q_principal, Quantity::Frequency);
      triple("q_euler", site.q_euler_deg, Quantity::Angle);
    }
    quantity("misalign_b_d2", site.misalign_b_d2_deg, Quantity::Angle);
    quantity("misalign_d1_b", site.misalign_d1_b_deg, Quantity::Angle);
    if (site.abundance) {
      quantity("abundance", *site.abundance, Quantity::Dimensionless);
    }
    if (!site.isotope.empty()) {
      line("isotope", site.isotope);
    }
    out += "\n";
  }

  out += "[linewidth]\n";
  quantity("gamma0", config.linewidth.gamma0, Quantity::Frequency);
  quantity("delta_gamma", config.linewidth.delta_gamma, Quantity::FieldSlope);

  out += "\n[thermal]\n";
  quantity("spin_temperature", config.spin_temperature, Quantity::Temperature);
  quantity("cryostat_temperature", config.cryostat_temperature, Quantity::Temperature);

  out += "\n[relaxation]\n";
  quantity("w_ff", config.relaxation.w_ff, Quantity::Frequency);
  quantity("w_d", config.relaxation.w_d, Quantity::RatePerT5);
  quantity("t_min", config.relaxation.t_min, Quantity::Temperature);

  out += "\n[drive]\n";
  quantity("rabi", config.drive.rabi, Quantity::Frequency);
  quantity("detuning", config.drive.detuning, Quantity::Frequency);
  quantity("burn_duration", config.drive.burn_duration, Quantity::Time);
  quantity("transverse_rate", config.drive.transverse_rate, Quantity::Frequency);
  quantity("observe_duration", config.observe_duration, Quantity::Time);
  quantity("step", config.bloch_step, Quantity::Time);

  out += "\n[geometry]\n";
  triple("field_direction", config.field_direction, Quantity::Dimensionless);
  triple("drive_direction", config.drive_direction, Quantity::Dimensionless);

  out += "\n[sweep]\n";
  quantity("field_min", config.sweep.field_min, Quantity::Field);
  quantity("field_max", config.sweep.field_max, Quantity::Field);
  line("field_steps", std::to_string(config.sweep.field_steps));
  quantity("freq_min", config.sweep.freq_min, Quantity::Frequency);
  quantity("freq_max", config.sweep.freq_max, Quantity::Frequency);
  line("freq_steps", std::to_string(config.sweep.freq_steps));
  quantity("field", config.sweep.field, Quantity::Field);
  list("temperatures", config.sweep.temperatures, Quantity::Temperature);

  out += "\n[hole]\n";
  quantity("depth", config.hole.depth, Quantity::Dimensionless);
  quantity("relative_width", config.hole.relative_width, Quantity::Dimensionless);
  if (config.hole.width_hz) {
    quantity("width", *config.hole.width_hz, Quantity::Frequency);
  }
  quantity("gamma_sd", config.hole.gamma_sd, Quantity::Frequency);
  if (config.hole.rate_inside) {
    quantity("rate_inside", *config.hole.rate_inside, Quantity::Frequency);
  }
  if (config.hole.rate_outside) {
    quantity("rate_outside", *config.hole.rate_outside, Quantity::Frequency);
  }
  list("times", config.hole.times, Quantity::Time);
  quantity("span_factor", config.hole.span_factor, Quantity::Dimensionless);
  line("points", std::to_string(config.hole.points));
  if (!config.hole.site.empty()) {
    line("site", config.hole.site);
  }

  out += "\n[link]\n";
  quantity("source_power", config.link.budget.source_power_dbm, Quantity::PowerDbm);
  list("attenuation_stages", config.link.budget.attenuation_stages_db, Quantity::GainDb);
  quantity("mode_coupling", config.link.budget.mode_coupling_db, Quantity::GainDb);
  quantity("kappa", config.link.budget.kappa, Quantity::FieldPerSqrtW);
  quantity("rabi_convention", config.link.rabi_convention, Quantity::Dimensionless);
  if (!config.link.site.empty()) {
    line("site", config.link.site);
  }

  out += "\n[fit]\n";
  line("boltzmann_form", config.fit.boltzmann_form == fit::BoltzmannForm::Logistic
                             ? "logistic"
                             : "population-difference");

  out += "\n[output]\n";
  line("dir", config.output_dir);
  return out;
}

}  // namespace shb::io

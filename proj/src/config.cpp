#include "bohm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bohm/error.hpp"

namespace bohm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::invalid_argument("not a number");
  return out;
}

template <class Int>
Int parse_int(const std::string& v) {
  Int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::invalid_argument("not an integer");
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  // Empty optional means the key is omitted on output.
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
Field real_field(std::string section, std::string key, T RunConfig::*sec,
                 double T::*member) {
  return {std::move(section), std::move(key),
          [sec, member](RunConfig& c, const std::string& v) { (c.*sec).*member = parse_double(v); },
          [sec, member](const RunConfig& c) -> std::optional<std::string> {
            return format_double((c.*sec).*member);
          }};
}

Field optional_field(std::string key, std::optional<double> DriveSection::*member) {
  return {"drive", std::move(key),
          [member](RunConfig& c, const std::string& v) { c.drive.*member = parse_double(v); },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.drive.*member)) return std::nullopt;
            return format_double(*(c.drive.*member));
          }};
}

Field point_field(std::string key, double SpatialPoint::*member) {
  return {"initial", std::move(key),
          [member](RunConfig& c, const std::string& v) { c.initial.*member = parse_double(v); },
          [member](const RunConfig& c) -> std::optional<std::string> {
            return format_double(c.initial.*member);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real_field("drive", "E0_volts_per_meter", &RunConfig::drive,
                           &DriveSection::E0_volts_per_meter));
    f.push_back(real_field("drive", "detuning_per_second", &RunConfig::drive,
                           &DriveSection::detuning_per_second));
    f.push_back(optional_field("omega0_per_second", &DriveSection::omega0_per_second));
    f.push_back(optional_field("nu_override_per_second", &DriveSection::nu_override_per_second));

    f.push_back(point_field("xi", &SpatialPoint::xi));
    f.push_back(point_field("theta", &SpatialPoint::theta));
    f.push_back(point_field("phi", &SpatialPoint::phi));

    f.push_back({"coefficients", "mode",
                 [](RunConfig& c, const std::string& v) { c.coefficients.mode = v; },
                 [](const RunConfig& c) -> std::optional<std::string> { return c.coefficients.mode; }});
    f.push_back(real_field("coefficients", "c1_re", &RunConfig::coefficients, &CoefficientSection::c1_re));
    f.push_back(real_field("coefficients", "c1_im", &RunConfig::coefficients, &CoefficientSection::c1_im));
    f.push_back(real_field("coefficients", "c2_re", &RunConfig::coefficients, &CoefficientSection::c2_re));
    f.push_back(real_field("coefficients", "c2_im", &RunConfig::coefficients, &CoefficientSection::c2_im));

    f.push_back(real_field("integrate", "tau_max", &RunConfig::integrate, &IntegrateSection::tau_max));
    f.push_back(real_field("integrate", "rel_tol", &RunConfig::integrate, &IntegrateSection::rel_tol));
    f.push_back(real_field("integrate", "abs_tol", &RunConfig::integrate, &IntegrateSection::abs_tol));
    f.push_back(real_field("integrate", "max_step", &RunConfig::integrate, &IntegrateSection::max_step));
    f.push_back(real_field("integrate", "min_step", &RunConfig::integrate, &IntegrateSection::min_step));
    f.push_back(real_field("integrate", "rho_floor", &RunConfig::integrate, &IntegrateSection::rho_floor));
    f.push_back(real_field("integrate", "output_stride", &RunConfig::integrate,
                           &IntegrateSection::output_stride));

    f.push_back({"ensemble", "count",
                 [](RunConfig& c, const std::string& v) { c.ensemble.count = parse_int<long>(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::to_string(c.ensemble.count);
                 }});
    f.push_back({"ensemble", "seed",
                 [](RunConfig& c, const std::string& v) { c.ensemble.seed = parse_int<std::uint64_t>(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::to_string(c.ensemble.seed);
                 }});
    f.push_back({"ensemble", "tau_targets",
                 [](RunConfig& c, const std::string& v) {
                   c.ensemble.tau_targets.clear();
                   for (const auto& item : split_list(v)) {
                     c.ensemble.tau_targets.push_back(parse_double(item));
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   std::vector<std::string> items;
                   for (double t : c.ensemble.tau_targets) items.push_back(format_double(t));
                   return join(items);
                 }});
    f.push_back({"ensemble", "bins",
                 [](RunConfig& c, const std::string& v) { c.ensemble.bins = parse_int<int>(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::to_string(c.ensemble.bins);
                 }});
    f.push_back(real_field("ensemble", "xi_max", &RunConfig::ensemble, &EnsembleSection::xi_max));
    f.push_back({"ensemble", "threads",
                 [](RunConfig& c, const std::string& v) { c.ensemble.threads = parse_int<unsigned>(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::to_string(c.ensemble.threads);
                 }});

    f.push_back({"output", "directory",
                 [](RunConfig& c, const std::string& v) { c.output.directory = v; },
                 [](const RunConfig& c) -> std::optional<std::string> { return c.output.directory; }});
    f.push_back({"output", "formats",
                 [](RunConfig& c, const std::string& v) { c.output.formats = split_list(v); },
                 [](const RunConfig& c) -> std::optional<std::string> { return join(c.output.formats); }});
    return f;
  }();
  return table;
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::Config, msg);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, const Field*> lookup;
  std::set<std::string> sections;
  for (const auto& f : fields()) {
    lookup[f.section + "." + f.key] = &f;
    sections.insert(f.section);
  }
  std::set<std::string> seen;
  std::string section;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!sections.count(section)) config_error(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where + "expected key = value");
    if (section.empty()) config_error(where + "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string full = section + "." + key;
    const auto it = lookup.find(full);
    if (it == lookup.end()) config_error(where + "unknown key " + full);
    if (!seen.insert(full).second) config_error(where + "duplicate key " + full);
    try {
      it->second->set(cfg, value);
    } catch (const std::invalid_argument&) {
      config_error(where + "invalid value '" + value + "' for " + full);
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    if (auto v = f.get(config)) os << f.key << " = " << *v << '\n';
  }
  return os.str();
}

DriveParameters drive_from_config(const RunConfig& config) {
  try {
    return derive_drive(config.drive.E0_volts_per_meter, config.drive.detuning_per_second, {},
                        config.drive.nu_override_per_second, config.drive.omega0_per_second);
  } catch (const Error& e) {
    config_error(std::string("[drive] ") + e.what());
  }
}

CoefficientSource source_from_config(const RunConfig& config) {
  const auto& c = config.coefficients;
  if (c.mode == "analytic") return CoefficientSource::analytic();
  if (c.mode == "numeric") return CoefficientSource::numeric();
  if (c.mode == "printed") return CoefficientSource::printed();
  if (c.mode == "frozen") {
    try {
      return CoefficientSource::frozen({c.c1_re, c.c1_im}, {c.c2_re, c.c2_im});
    } catch (const Error& e) {
      config_error(std::string("coefficients: ") + e.what());
    }
  }
  config_error("coefficients.mode must be analytic, numeric, frozen or printed (got '" +
               c.mode + "')");
}

IntegratorConfig integrator_from_config(const RunConfig& config) {
  IntegratorConfig ic;
  ic.rel_tol = config.integrate.rel_tol;
  ic.abs_tol = config.integrate.abs_tol;
  ic.max_step = config.integrate.max_step;
  ic.min_step = config.integrate.min_step;
  ic.rho_floor = config.integrate.rho_floor;
  ic.output_stride = config.integrate.output_stride;
  return ic;
}

void validate_config(const RunConfig& config, bool need_ensemble) {
  drive_from_config(config);
  source_from_config(config);
  try {
    integrator_from_config(config).validate();
    validate_initial_point(config.initial);
  } catch (const Error& e) {
    config_error(e.what());
  }
  const double tau_max = config.integrate.tau_max;
  if (!(std::isfinite(tau_max) && tau_max > 0.0)) config_error("integrate.tau_max must be positive");

  const auto& en = config.ensemble;
  if (need_ensemble) {
    if (en.count <= 0) config_error("ensemble.count must be positive");
    if (en.tau_targets.empty()) config_error("ensemble.tau_targets must not be empty");
  }
  for (double t : en.tau_targets) {
    if (!(std::isfinite(t) && t >= 0.0)) config_error("ensemble.tau_targets must be >= 0");
  }
  if (en.bins <= 0 || en.bins > 1000) config_error("ensemble.bins must lie in [1, 1000]");
  if (!(std::isfinite(en.xi_max) && en.xi_max > 0.0)) config_error("ensemble.xi_max must be positive");

  static const std::set<std::string> known{"csv", "json", "plot"};
  for (const auto& f : config.output.formats) {
    if (!known.count(f)) config_error("output.formats: unknown format '" + f + "'");
  }
  if (config.output.directory.empty()) config_error("output.directory must not be empty");
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.drive.E0_volts_per_meter = 8.8e7;
  c.drive.detuning_per_second = 1.55e12;
  c.drive.omega0_per_second = 1.549e16;
  c.drive.nu_override_per_second = -5.1e12;
  c.integrate.tau_max = 1e4;
  c.integrate.rel_tol = 1e-11;
  c.integrate.abs_tol = 1e-13;
  if (name == "fig1") {
    c.initial = {4.0, 1.0, 0.0};
    c.output.directory = "out/fig1";
  } else if (name == "fig2") {
    c.initial = {3.2, 2.0, 0.0};
    c.output.directory = "out/fig2";
  } else {
    config_error("unknown preset '" + std::string(name) + "' (expected fig1 or fig2)");
  }
  return c;
}

}  // namespace bohm

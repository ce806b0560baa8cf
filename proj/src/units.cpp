#include "shb/units.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <span>

#include "shb/errors.hpp"

namespace shb::io {

namespace {

struct Suffix {
  std::string_view text;
  double factor;
};

/// Longest-match tables per quantity. Order matters: longer suffixes first so
/// "mHz" is not read as "m" + leftover.
constexpr std::array frequency_suffixes = {
    Suffix{"GHz", 1e9},  Suffix{"MHz", 1e6},  Suffix{"kHz", 1e3},
    Suffix{"mHz", 1e-3}, Suffix{"uHz", 1e-6}, Suffix{"Hz", 1.0},
};
constexpr std::array field_suffixes = {
    Suffix{"mT", 1e-3}, Suffix{"uT", 1e-6}, Suffix{"nT", 1e-9},
    Suffix{"pT", 1e-12}, Suffix{"T", 1.0},
};
constexpr std::array temperature_suffixes = {
    Suffix{"mK", 1e-3}, Suffix{"uK", 1e-6}, Suffix{"K", 1.0},
};
constexpr std::array time_suffixes = {
    Suffix{"ms", 1e-3}, Suffix{"us", 1e-6}, Suffix{"s", 1.0},
};
constexpr std::array angle_suffixes = {
    Suffix{"deg", 1.0}, Suffix{"rad", 180.0 / std::numbers::pi},
};
constexpr std::array dbm_suffixes = {Suffix{"dBm", 1.0}};
constexpr std::array db_suffixes = {Suffix{"dB", 1.0}};
constexpr std::array slope_suffixes = {
    Suffix{"MHz/mT", 1e9}, Suffix{"kHz/mT", 1e6}, Suffix{"MHz/T", 1e6},
    Suffix{"kHz/T", 1e3},  Suffix{"Hz/T", 1.0},
};
constexpr std::array rate_t5_suffixes = {
    Suffix{"mHz/T^5", 1e-3}, Suffix{"Hz/T^5", 1.0},
};
constexpr std::array kappa_suffixes = {
    Suffix{"mT/sqrt(W)", 1e-3}, Suffix{"uT/sqrt(W)", 1e-6},
    Suffix{"nT/sqrt(W)", 1e-9}, Suffix{"T/sqrt(W)", 1.0},
};

std::span<const Suffix> suffixes_for(Quantity q) {
  switch (q) {
    case Quantity::Frequency: return frequency_suffixes;
    case Quantity::Field: return field_suffixes;
    case Quantity::Temperature: return temperature_suffixes;
    case Quantity::Time: return time_suffixes;
    case Quantity::Angle: return angle_suffixes;
    case Quantity::PowerDbm: return dbm_suffixes;
    case Quantity::GainDb: return db_suffixes;
    case Quantity::FieldSlope: return slope_suffixes;
    case Quantity::RatePerT5: return rate_t5_suffixes;
    case Quantity::FieldPerSqrtW: return kappa_suffixes;
    case Quantity::Dimensionless: return {};
  }
  return {};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Dimensionless: return "dimensionless";
    case Quantity::Frequency: return "frequency";
    case Quantity::Field: return "magnetic field";
    case Quantity::Temperature: return "temperature";
    case Quantity::Time: return "time";
    case Quantity::Angle: return "angle";
    case Quantity::PowerDbm: return "power (dBm)";
    case Quantity::GainDb: return "gain (dB)";
    case Quantity::FieldSlope: return "linewidth slope";
    case Quantity::RatePerT5: return "rate per T^5";
    case Quantity::FieldPerSqrtW: return "field per sqrt(power)";
  }
  return "unknown";
}

const char* canonical_suffix(Quantity q) {
  switch (q) {
    case Quantity::Dimensionless: return "";
    case Quantity::Frequency: return "Hz";
    case Quantity::Field: return "T";
    case Quantity::Temperature: return "K";
    case Quantity::Time: return "s";
    case Quantity::Angle: return "deg";
    case Quantity::PowerDbm: return "dBm";
    case Quantity::GainDb: return "dB";
    case Quantity::FieldSlope: return "Hz/T";
    case Quantity::RatePerT5: return "Hz/T^5";
    case Quantity::FieldPerSqrtW: return "T/sqrt(W)";
  }
  return "";
}

double parse_number(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) {
    throw ConfigError("expected a number, got empty text");
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("malformed number '" + std::string(text) + "'");
  }
  return value;
}

double parse_quantity(std::string_view text, Quantity quantity) {
  const std::string_view s = trim(text);
  if (quantity == Quantity::Dimensionless) {
    return parse_number(s);
  }
  for (const Suffix& suf : suffixes_for(quantity)) {
    if (s.size() > suf.text.size() && s.ends_with(suf.text)) {
      return parse_number(s.substr(0, s.size() - suf.text.size())) * suf.factor;
    }
  }
  throw ConfigError("value '" + std::string(text) + "' needs a " + quantity_name(quantity) +
                    " suffix (e.g. " + canonical_suffix(quantity) + ")");
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_quantity(double value, Quantity quantity) {
  return format_double(value) + canonical_suffix(quantity);
}

}  // namespace shb::io

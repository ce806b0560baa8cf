#pragma once

#include <string>
#include <string_view>

namespace shb::io {

/// Dimension classes accepted in config files and CLI overrides. Dimensioned
/// values must carry a unit suffix (185mT, 3.9Hz, 81.9mK); bare numbers are
/// rejected for them so units can never be silently misread.
enum class Quantity {
  Dimensionless,  // bare number
  Frequency,      // Hz kHz MHz GHz mHz uHz
  Field,          // T mT uT nT pT
  Temperature,    // K mK uK
  Time,           // s ms us
  Angle,          // deg rad  (stored in degrees)
  PowerDbm,       // dBm
  GainDb,         // dB
  FieldSlope,     // Hz/T kHz/T MHz/T kHz/mT MHz/mT  (stored in Hz/T)
  RatePerT5,      // Hz/T^5 mHz/T^5                  (stored in Hz/T^5)
  FieldPerSqrtW,  // T/sqrt(W) mT/sqrt(W) uT/sqrt(W) nT/sqrt(W)
};

const char* quantity_name(Quantity q);

/// Canonical suffix used when serializing (empty for dimensionless/dB kinds
/// stored as-is).
const char* canonical_suffix(Quantity q);

/// Locale-independent double parse of the full string. Throws ConfigError on
/// trailing garbage.
double parse_number(std::string_view text);

/// Parses "<number><suffix>" into the canonical SI value for the quantity
/// (angles stay in degrees, dB kinds stay in dB). Whitespace between number
/// and suffix is allowed. Throws ConfigError for unknown or missing suffixes.
double parse_quantity(std::string_view text, Quantity quantity);

/// %.17g -- enough digits for exact double round-trips.
std::string format_double(double value);

/// Canonical "<value><suffix>" form, e.g. 0.185T, 17000000Hz.
std::string format_quantity(double value, Quantity quantity);

}  // namespace shb::io

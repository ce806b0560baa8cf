#pragma once

// Physical constants, SI exact (2019 redefinition) resp. CODATA-2018.
// All internal computation is SI: tesla, hertz, kelvin, joule, second.
namespace shb::constants {

inline constexpr double k_boltzmann = 1.380649e-23;     // J/K
inline constexpr double planck = 6.62607015e-34;        // J*s
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T

// Zeeman slope per unit g-factor, ~13.9962 GHz/T.
inline constexpr double mu_b_over_h = bohr_magneton / planck;  // Hz/T

}  // namespace shb::constants

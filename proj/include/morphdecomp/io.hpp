#pragma once

// Text formats.
//
// Pmf3 file: one cell per line, `x y z p` with x, y, z in {-1,+1},
// whitespace separated. `#` starts a comment; blank lines are ignored;
// missing cells are 0. The total must be 1 within 1e-9.
//
// Model config: `key = value` lines with keys phi, psi, omega, zeta, mu,
// tau. Missing keys are 0 except zeta, which defaults to 50.

#include <filesystem>
#include <istream>
#include <string>

#include "morphdecomp/probcore.hpp"
#include "morphdecomp/sensorimotor.hpp"

namespace morphdecomp {

// Throws ParseError (with line number) on malformed lines and
// NormalizationError on negative or unnormalized mass.
Pmf3 parse_pmf3(std::istream& in);
// As parse_pmf3; IoError if the file cannot be opened.
Pmf3 read_pmf3(const std::filesystem::path& path);

// Writes all eight cells in the Pmf3 file format, 17 significant digits.
std::string format_pmf3(const Pmf3& P);

// Throws ParseError for unknown keys, duplicate keys or bad numbers.
// Values are not range-checked here; call ModelParams::validate().
ModelParams parse_model_config(std::istream& in);
ModelParams read_model_config(const std::filesystem::path& path);

}  // namespace morphdecomp

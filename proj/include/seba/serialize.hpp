#pragma once

#include <iosfwd>

#include "seba/spectrum.hpp"

namespace seba {

// JSON-lines layout: a header object {kind, e_max, params} followed by one
// object per line {index, energy, amplitude_re, amplitude_im, weight} plus a
// modes array when the line has lattice members behind it.
void write_spectrum_jsonl(const Spectrum& spec, std::ostream& os);
Spectrum read_spectrum_jsonl(std::istream& is);

// Plain text fixture: "energy amp_re amp_im" per row, '#' starts a comment.
// Rows are reduced on load, so unsorted and degenerate input is fine.
Spectrum read_spectrum_text(std::istream& is);
void write_spectrum_text(const Spectrum& spec, std::ostream& os);

}  // namespace seba

#pragma once

#include <iosfwd>
#include <string>

#include "wg/lattice.hpp"

namespace wg {

// Header line "lattice <lambda> <L> <N> <geometry>", then one "k1 k2 re im" line per
// lattice point in enumeration order. Numbers use shortest round-trip text.
void writeField(std::ostream& out, const SpectralField& f);
SpectralField readField(std::istream& in);

std::string fieldToString(const SpectralField& f);
SpectralField fieldFromString(const std::string& s);

void saveField(const std::string& path, const SpectralField& f);  // atomic
SpectralField loadField(const std::string& path);

}  // namespace wg

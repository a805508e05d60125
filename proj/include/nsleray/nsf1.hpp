#pragma once

#include "nsleray/field.hpp"

#include <filesystem>
#include <iosfwd>

namespace nsleray {

// NSF1 field dump: magic "NSF1", three little-endian uint32 dims (x, y, z),
// then little-endian float64 values, x fastest.

void write_nsf1(std::ostream& out, const ScalarField& f);
void write_nsf1(const std::filesystem::path& path, const ScalarField& f);

/// The format does not carry the box length; the caller supplies it.
ScalarField read_nsf1(std::istream& in, double box_length);
ScalarField read_nsf1(const std::filesystem::path& path, double box_length);

/// Writes <stem>_0.nsf1, <stem>_1.nsf1, <stem>_2.nsf1.
void write_nsf1(const std::filesystem::path& stem, const VectorField& v);
VectorField read_nsf1_vector(const std::filesystem::path& stem, double box_length);

}  // namespace nsleray

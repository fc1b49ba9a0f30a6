#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsfs/field.hpp"

namespace nsfs {

// NSF1 layout (all little-endian):
//   "NSF1" | u32 version (1) | u32 dim | u64 N | f64 L | u32 ncomp |
//   ncomp arrays of N^dim f64 in row-major order.

inline constexpr unsigned kNsf1Version = 1;

struct Nsf1File {
    GridSpec grid;
    std::vector<ScalarField> components;
};

void write_nsf1(std::ostream& os, const GridSpec& g, const std::vector<const ScalarField*>& components);
void write_nsf1(const std::string& path, const VectorField& v);
void write_nsf1(const std::string& path, const ScalarField& s);

/// Throws FormatError on bad magic, version, header values or short data.
Nsf1File read_nsf1(std::istream& is);
Nsf1File read_nsf1(const std::string& path);

/// Requires exactly dim components / exactly one component.
VectorField read_vector_field(const std::string& path);
ScalarField read_scalar_field(const std::string& path);

}  // namespace nsfs

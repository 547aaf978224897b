// STF1 field files and CSV export.
//
// An STF1 file starts with the ASCII line
//   STF1 <ncomp> <nx> <ny> <dx> <dy> <ox> <oy>\n
// followed by ncomp planes of nx*ny little-endian IEEE-754 doubles, x fastest.
// ncomp is 1 for scalar fields and 3 for tensor fields (order c11, c22, c12).
#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "straintomo/fields.hpp"

namespace straintomo {

using AnyField = std::variant<ScalarField2, TensorField2>;

void write_field(const ScalarField2& f, const std::filesystem::path& path);
void write_field(const TensorField2& f, const std::filesystem::path& path);

/// Reads either field kind; throws ValidationError on malformed input.
AnyField read_field(const std::filesystem::path& path);
TensorField2 read_tensor_field(const std::filesystem::path& path);
ScalarField2 read_scalar_field(const std::filesystem::path& path);

/// CSV with header `x,y,c11,c22,c12` (tensor) or `x,y,value` (scalar).
void write_field_csv(const TensorField2& f, const std::filesystem::path& path);
void write_field_csv(const ScalarField2& f, const std::filesystem::path& path);

/// Loop outline as CSV rows `loop,x,y`.
void write_mask_polygon(const Mask2& mask, const std::filesystem::path& path);

/// Reads an outline written by write_mask_polygon and rebuilds the mask on `grid`.
Mask2 read_mask_polygon(const Grid2& grid, const std::filesystem::path& path);

// Little-endian double I/O shared with the sinogram format.
void write_le_doubles(std::ostream& os, const double* data, std::size_t n);
void read_le_doubles(std::istream& is, double* data, std::size_t n, const char* what);

/// Formats a double so it parses back to the identical value.
std::string format_exact(double v);

}  // namespace straintomo

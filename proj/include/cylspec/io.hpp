#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "cylspec/coeffs.hpp"

namespace cylspec {

// FieldFile binary layout (little-endian):
//   magic "CCF1" | version u32 | kind u8 (0 = real grid values,
//   1 = complex coefficients) | m,n,p u32 | payload f64 in (l,k,j) order
//   (complex interleaved re,im) | CRC32 of the payload bytes (u32)
inline constexpr uint32_t kFieldFileVersion = 1;

struct FieldFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

uint32_t crc32_ieee(const uint8_t* data, size_t len);

void write_field(const std::string& path, const GridField& field);
void write_field(const std::string& path, const CoeffTensor& coeffs);

using FieldVariant = std::variant<GridField, CoeffTensor>;
FieldVariant read_field(const std::string& path);

/// CSV slice export: fixes one coordinate and evaluates the interpolant on
/// a regular lattice of the other two; header (coord1, coord2, value).
enum class SlicePlane { z_const, theta_const, r_const };
void export_slice_csv(const CoeffTensor& coeffs, SlicePlane plane, double value,
                      const std::string& path, int samples = 64);

}  // namespace cylspec

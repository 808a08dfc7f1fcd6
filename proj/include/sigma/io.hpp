#pragma once

// CSV serialization of fields and traces (17 significant digits, row-major grid order).

#include <filesystem>
#include <string>
#include <vector>

#include "sigma/solver.hpp"

namespace sigma::io {

std::string fmt(double v);  // %.17g

void write_map_csv(const std::filesystem::path& path, const MapField& phi);
void write_spinor_csv(const std::filesystem::path& path, const SpinorField& psi);
void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

/// Reads the field CSV formats back. Throws std::runtime_error on malformed
/// input (bad header, wrong row count, non-square grid, unparsable numbers).
RealField read_map_values_csv(const std::filesystem::path& path);
ComplexField read_spinor_values_csv(const std::filesystem::path& path, const Grid2D& expected);

}  // namespace sigma::io

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "telegraph/field_grid.hpp"
#include "telegraph/harness.hpp"
#include "telegraph/spectral.hpp"
#include "telegraph/transform_solver.hpp"

namespace telegraph {

/// Provenance written as the first line of every output file.
struct CsvHeader {
    std::string command;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

std::string header_line(const CsvHeader& h);

void write_field_csv(std::ostream& out, const FieldGrid& g, const CsvHeader& h);
void write_boundary_csv(std::ostream& out, const BoundarySeries& s, const CsvHeader& h);
void write_transforms_csv(std::ostream& out, std::span<const BoundaryTransforms> rows, const CsvHeader& h);
void write_roots_csv(std::ostream& out, std::span<const SpectralRoots<double>> rows, const CsvHeader& h);
void write_comparison_csv(std::ostream& out, std::span<const Metric> metrics, const CsvHeader& h);

/// Reads a field CSV back (comment lines skipped). Error columns are restored
/// when every row has them. Throws IoError on malformed input.
FieldGrid read_field_csv(std::istream& in);

}  // namespace telegraph

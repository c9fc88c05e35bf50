#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nskf/types.hpp"

namespace nskf::io {

// CMAT v1 text format:
//   cmat 1 <rows> <cols>
//   <rows> lines of <cols> whitespace-separated "re,im" pairs
// Values are written with 17 significant digits, so a save/load cycle is exact.

void write_cmat(std::ostream& out, const ComplexMatrix& a);
ComplexMatrix read_cmat(std::istream& in);

void save_cmat(const std::filesystem::path& path, const ComplexMatrix& a);
ComplexMatrix load_cmat(const std::filesystem::path& path);

/// Loads a CMAT file that must hold a column vector (cols == 1).
ComplexVector load_cmat_vector(const std::filesystem::path& path);

/// One line of space-separated integers.
void save_indices(const std::filesystem::path& path, const std::vector<Index>& idx);
std::vector<Index> load_indices(const std::filesystem::path& path);

}  // namespace nskf::io

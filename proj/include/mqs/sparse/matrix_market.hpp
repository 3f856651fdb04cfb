#pragma once

#include <filesystem>
#include <iosfwd>

#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

enum class MatrixMarketSymmetry { General, Symmetric };

/// Reads `coordinate real general|symmetric`. Symmetric files are expanded
/// to full storage. Throws ModelError on malformed input.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// Values are written with 17 significant digits so a read-back is exact.
/// `Symmetric` writes the lower triangle only; the caller guarantees symmetry.
void write_matrix_market(std::ostream& out, const CsrMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::General);
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::General);

}  // namespace mqs

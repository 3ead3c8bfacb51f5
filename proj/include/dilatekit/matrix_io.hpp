#pragma once

// Dense complex text format. First line: "N" for an N x N matrix or
// "R C" for R x C. Then one line per row with C pairs "re im", written
// with 17 significant digits.

#include <filesystem>
#include <iosfwd>

#include "dilatekit/linalg.hpp"

namespace dilatekit {

void write_dense(std::ostream& out, const CMatrix& M);
void write_dense(const std::filesystem::path& path, const CMatrix& M);
/// Throws InvalidInput on malformed content or a missing file.
CMatrix read_dense(std::istream& in);
CMatrix read_dense(const std::filesystem::path& path);

}  // namespace dilatekit

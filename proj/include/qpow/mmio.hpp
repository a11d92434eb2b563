// MatrixMarket coordinate IO ("complex hermitian" / "complex general") and
// plain-text vectors ("re im" per line). File indices are 1-based; hermitian
// files store the lower triangle only.
#pragma once

#include <string>
#include <vector>

#include "qpow/sparse.hpp"

namespace qpow {

struct MatrixFile {
  bool hermitian = false;
  int dim = 0;
  std::vector<Entry> entries;  // as stored: lower triangle when hermitian
};

/// Throws std::runtime_error on unreadable or malformed files.
MatrixFile read_matrix_market(const std::string& path);

SparseHermitianMatrix hermitian_from_file(const MatrixFile& f);
GeneralSparseMatrix general_from_file(const MatrixFile& f);

void write_matrix_market(const std::string& path, const SparseHermitianMatrix& a);
void write_matrix_market(const std::string& path, const GeneralSparseMatrix& a);

std::vector<cplx> read_vector(const std::string& path);
void write_vector(const std::string& path, std::span<const cplx> v);

/// FNV-1a 64-bit over the concatenated raw bytes of the given files,
/// rendered as 16 hex digits. Used as the content digest in run reports.
std::string files_digest_hex(const std::vector<std::string>& paths);

}  // namespace qpow

#include "qpow/mmio.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpow {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error(path + ": " + why);
}

std::string fmt_complex(const cplx& z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g %.17g", z.real(), z.imag());
  return buf;
}

}  // namespace

MatrixFile read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::string header;
  if (!std::getline(in, header)) fail(path, "empty file");
  std::istringstream hs(lower(header));
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate")
    fail(path, "expected a MatrixMarket coordinate header");
  if (field != "complex") fail(path, "expected field 'complex'");
  MatrixFile f;
  if (symmetry == "hermitian")
    f.hermitian = true;
  else if (symmetry == "general")
    f.hermitian = false;
  else
    fail(path, "expected symmetry 'hermitian' or 'general'");

  std::string line;
  long rows = 0, cols = 0, nnz = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (nnz < 0) {
      if (!(ls >> rows >> cols >> nnz)) fail(path, "malformed size line");
      if (rows != cols || rows <= 0) fail(path, "matrix must be square and non-empty");
      f.dim = static_cast<int>(rows);
      continue;
    }
    long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> i >> j >> re >> im)) fail(path, "malformed entry line: " + line);
    if (i < 1 || i > rows || j < 1 || j > cols) fail(path, "entry index out of range");
    f.entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), cplx{re, im}});
  }
  if (nnz < 0) fail(path, "missing size line");
  if (static_cast<long>(f.entries.size()) != nnz) fail(path, "entry count disagrees with header");
  return f;
}

SparseHermitianMatrix hermitian_from_file(const MatrixFile& f) {
  if (!f.hermitian) throw std::runtime_error("matrix file is not typed hermitian");
  return SparseHermitianMatrix::from_lower_triangle(f.dim, f.entries);
}

GeneralSparseMatrix general_from_file(const MatrixFile& f) {
  if (f.hermitian) {
    return hermitian_from_file(f).general();
  }
  return GeneralSparseMatrix::from_entries(f.dim, f.entries);
}

namespace {

void write_mm(const std::string& path, int dim, const std::vector<Entry>& entries,
              const char* symmetry) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out << "%%MatrixMarket matrix coordinate complex " << symmetry << "\n";
  out << dim << " " << dim << " " << entries.size() << "\n";
  for (const Entry& e : entries)
    out << (e.row + 1) << " " << (e.col + 1) << " " << fmt_complex(e.value) << "\n";
  if (!out) fail(path, "write failed");
}

}  // namespace

void write_matrix_market(const std::string& path, const SparseHermitianMatrix& a) {
  std::vector<Entry> lower;
  for (const Entry& e : a.entries())
    if (e.row >= e.col) lower.push_back(e);
  write_mm(path, a.dim(), lower, "hermitian");
}

void write_matrix_market(const std::string& path, const GeneralSparseMatrix& a) {
  write_mm(path, a.dim(), a.entries(), "general");
}

std::vector<cplx> read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::vector<cplx> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%' || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    if (!(ls >> re >> im)) fail(path, "malformed vector line: " + line);
    v.emplace_back(re, im);
  }
  if (v.empty()) fail(path, "empty vector file");
  return v;
}

void write_vector(const std::string& path, std::span<const cplx> v) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  for (const cplx& z : v) out << fmt_complex(z) << "\n";
  if (!out) fail(path, "write failed");
}

std::string files_digest_hex(const std::vector<std::string>& paths) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(p, "cannot open for digest");
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
      for (std::streamsize i = 0; i < in.gcount(); ++i) {
        h ^= static_cast<unsigned char>(buf[i]);
        h *= 0x100000001b3ULL;
      }
      if (!in) break;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace qpow

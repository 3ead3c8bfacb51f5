#include "dilatekit/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "dilatekit/errors.hpp"

namespace dilatekit {

namespace {

void put(std::string& s, double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  s.append(buf, r.ptr);
}

}  // namespace

void write_dense(std::ostream& out, const CMatrix& M) {
  std::string s;
  if (M.rows() == M.cols())
    s = std::to_string(M.rows()) + "\n";
  else
    s = std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) s += ' ';
      put(s, M(i, j).real());
      s += ' ';
      put(s, M(i, j).imag());
    }
    s += '\n';
  }
  out << s;
}

void write_dense(const std::filesystem::path& path, const CMatrix& M) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dense(out, M);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CMatrix read_dense(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidInput("matrix file: missing header");
  std::istringstream hs(header);
  long rows = -1, cols = -1;
  hs >> rows;
  if (!(hs >> cols)) cols = rows;
  if (rows < 0 || cols < 0) throw InvalidInput("matrix file: bad header '" + header + "'");
  CMatrix M(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      double re, im;
      if (!(in >> re >> im)) throw InvalidInput("matrix file: truncated at row " + std::to_string(i));
      M(i, j) = {re, im};
    }
  return M;
}

CMatrix read_dense(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file " + path.string());
  try {
    return read_dense(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace dilatekit

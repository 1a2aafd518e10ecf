#include "vpgmres/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace vpgmres {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_real(const std::string& tok, long line) {
  // strtod accepts the Matrix Market real syntax including exponents.
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw MatrixMarketError("invalid real value '" + tok + "'", line);
  return v;
}

long parse_index(const std::string& tok, long line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw MatrixMarketError("invalid index '" + tok + "'", line);
  return v;
}

}  // namespace

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("read_matrix_market: cannot open " + path);

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line))
    throw MatrixMarketError("empty file", 1);
  ++line_no;

  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket")
    throw MatrixMarketError("missing %%MatrixMarket banner", line_no);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix")
    throw MatrixMarketError("unsupported object '" + object + "'", line_no);
  if (format != "coordinate" && format != "array")
    throw MatrixMarketError("unsupported format '" + format + "'", line_no);
  if (field != "real")
    throw MatrixMarketError("unsupported field '" + field +
                                "' (only real matrices are handled)",
                            line_no);
  if (symmetry != "general" && symmetry != "symmetric")
    throw MatrixMarketError("unsupported symmetry '" + symmetry + "'",
                            line_no);
  const bool symmetric = symmetry == "symmetric";

  // Skip comments.
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] != '%') break;
  }
  if (!in && line.empty())
    throw MatrixMarketError("missing size line", line_no);

  std::istringstream ss(line);
  std::vector<std::string> toks;
  for (std::string t; ss >> t;) toks.push_back(t);

  if (format == "coordinate") {
    if (toks.size() != 3)
      throw MatrixMarketError("size line must be 'rows cols nnz'", line_no);
    const long rows = parse_index(toks[0], line_no);
    const long cols = parse_index(toks[1], line_no);
    const long nnz = parse_index(toks[2], line_no);
    if (rows <= 0 || cols <= 0 || nnz < 0)
      throw MatrixMarketError("invalid dimensions", line_no);
    if (symmetric && rows != cols)
      throw MatrixMarketError("symmetric matrix must be square", line_no);

    std::vector<Matrix::Triplet> tr;
    tr.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (long e = 0; e < nnz; ++e) {
      if (!std::getline(in, line))
        throw MatrixMarketError("unexpected end of file: expected " +
                                    std::to_string(nnz) + " entries",
                                line_no);
      ++line_no;
      std::istringstream es(line);
      std::string si, sj, sv, extra;
      if (!(es >> si >> sj >> sv))
        throw MatrixMarketError("entry must be 'i j value'", line_no);
      if (es >> extra)
        throw MatrixMarketError("trailing tokens after entry", line_no);
      const long i = parse_index(si, line_no);
      const long j = parse_index(sj, line_no);
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw MatrixMarketError("index out of range", line_no);
      const double v = parse_real(sv, line_no);
      tr.push_back({static_cast<std::size_t>(i - 1),
                    static_cast<std::size_t>(j - 1), v});
      if (symmetric && i != j)
        tr.push_back({static_cast<std::size_t>(j - 1),
                      static_cast<std::size_t>(i - 1), v});
    }
    try {
      return Matrix::sparse_from_triplets(static_cast<std::size_t>(rows),
                                          static_cast<std::size_t>(cols),
                                          std::move(tr));
    } catch (const std::invalid_argument& e) {
      throw MatrixMarketError(e.what(), line_no);
    }
  }

  // array format: dense, column-major entry list
  if (toks.size() != 2)
    throw MatrixMarketError("size line must be 'rows cols'", line_no);
  const long rows = parse_index(toks[0], line_no);
  const long cols = parse_index(toks[1], line_no);
  if (rows <= 0 || cols <= 0)
    throw MatrixMarketError("invalid dimensions", line_no);
  if (symmetric && rows != cols)
    throw MatrixMarketError("symmetric matrix must be square", line_no);

  Matrix m = Matrix::dense(static_cast<std::size_t>(rows),
                           static_cast<std::size_t>(cols));
  const long expected =
      symmetric ? (rows * (rows + 1)) / 2 : rows * cols;
  long count = 0;
  for (long j = 0; j < cols; ++j) {
    for (long i = symmetric ? j : 0; i < rows; ++i) {
      if (!std::getline(in, line))
        throw MatrixMarketError("unexpected end of file: expected " +
                                    std::to_string(expected) + " values",
                                line_no);
      ++line_no;
      std::istringstream es(line);
      std::string sv, extra;
      if (!(es >> sv))
        throw MatrixMarketError("expected a value", line_no);
      if (es >> extra)
        throw MatrixMarketError("trailing tokens after value", line_no);
      const double v = parse_real(sv, line_no);
      m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
      if (symmetric)
        m.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
      ++count;
    }
  }
  (void)count;
  return m;
}

void write_matrix_market(const Matrix& A, const std::string& path,
                         bool symmetric_lower) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_matrix_market: cannot open " + path);
  out.precision(17);

  if (symmetric_lower) {
    if (A.nrows() != A.ncols())
      throw std::invalid_argument("write_matrix_market: symmetric output "
                                  "requires a square matrix");
    std::vector<Matrix::Triplet> lowerpart;
    A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
      if (v == 0.0 && A.is_sparse()) return;
      if (j > i) return;
      if (v != 0.0 || !A.is_sparse()) {
        if (std::abs(A(j, i) - v) != 0.0)
          throw std::invalid_argument(
              "write_matrix_market: matrix is not symmetric");
        lowerpart.push_back({i, j, v});
      }
    });
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << A.nrows() << " " << A.ncols() << " " << lowerpart.size() << "\n";
    for (const auto& t : lowerpart)
      out << t.row + 1 << " " << t.col + 1 << " " << t.value << "\n";
    return;
  }

  if (A.is_sparse()) {
    std::size_t nnz = 0;
    A.for_each_stored([&](std::size_t, std::size_t, double v) {
      if (v != 0.0) ++nnz;
    });
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.nrows() << " " << A.ncols() << " " << nnz << "\n";
    A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
      if (v != 0.0) out << i + 1 << " " << j + 1 << " " << v << "\n";
    });
  } else {
    out << "%%MatrixMarket matrix array real general\n";
    out << A.nrows() << " " << A.ncols() << "\n";
    for (std::size_t j = 0; j < A.ncols(); ++j)
      for (std::size_t i = 0; i < A.nrows(); ++i) out << A(i, j) << "\n";
  }
  if (!out) throw std::runtime_error("write_matrix_market: write failed");
}

}  // namespace vpgmres

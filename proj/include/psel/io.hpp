#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "psel/matrix.hpp"

namespace psel {

enum class CsvDelimiter { Comma, Whitespace };

struct CsvOptions {
  bool has_header = false;
  CsvDelimiter delimiter = CsvDelimiter::Comma;
};

// Loads a numeric CSV file.  Every data line must carry the same field
// count; diagnostics cite 1-based line numbers.  Blank lines are skipped.
ColMatrix load_csv(const std::string& path, const CsvOptions& opts = {});

// Writes a comma-separated file, one row per line, with round-trip-exact
// double formatting.
void save_csv(const ColMatrix& m, const std::string& path);

// PSELMAT1 container: 8-byte ASCII magic "PSELMAT1", then rows and cols as
// unsigned 64-bit little-endian, then rows*cols IEEE-754 binary64
// little-endian values in column-major order.
ColMatrix load_bin(const std::string& path);
void save_bin(const ColMatrix& m, const std::string& path);

// Incremental PSELMAT1 writer: header up front, then values appended in
// column-major order.  finish() verifies the advertised element count.
class MatrixStreamWriter {
 public:
  MatrixStreamWriter(const std::string& path, Index rows, Index cols);
  ~MatrixStreamWriter();

  void append(const double* values, std::size_t count);
  void finish();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t expected_ = 0;
  std::size_t written_ = 0;
  bool finished_ = false;
};

// Random-access row-chunk reader over a PSELMAT1 file.  Columns are stored
// contiguously, so a row chunk is one strided read per column.
class MatrixChunkReader {
 public:
  explicit MatrixChunkReader(const std::string& path);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  // Reads rows [begin, begin + count) of every column into a count x cols
  // block.  Throws IoError on short reads or non-finite payload values.
  ColMatrix read_rows(Index begin, Index count);

 private:
  std::ifstream in_;
  std::string path_;
  Index rows_ = 0;
  Index cols_ = 0;
};

}  // namespace psel

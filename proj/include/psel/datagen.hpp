#pragma once

#include <cstdint>
#include <string>

#include "psel/matrix.hpp"

namespace psel {

// Two-view synthetic scheme: X has i.i.d. N(0, sigma) entries and
// Y = X W + E with W and E drawn the same way.  Every (matrix, column) pair
// owns an independent derived generator stream, so output is byte-stable
// regardless of generation order or blocking.
struct GenSpec {
  Index m = 0;
  Index n_x = 0;
  Index n_y = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  bool noise = true;  // false zeroes E for exact-recovery experiments
};

struct TwoView {
  ColMatrix x;
  ColMatrix y;
};

// In-memory generation; sized for desk-scale experiments.
TwoView generate(const GenSpec& spec);

// Writes the pair as PSELMAT1 files, generating X in column blocks so peak
// memory stays near one view.  Output bytes are identical across runs.
void generate_files(const GenSpec& spec, const std::string& x_path, const std::string& y_path);

}  // namespace psel

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mnac/rng.hpp"

namespace mnac {

// Row-major dense matrix; rows are codewords or signatures.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  std::span<double> row(int i) { return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
  }
};

// Row 0 is the all-zero word sent by an inactive user; rows 1..M carry messages.
struct Codebook {
  int M = 0;
  int len = 0;
  double E = 0;
  Matrix words;

  std::span<const double> word(int w) const { return words.row(w); }
};

// Row i is the signature of user i.
struct SignatureMatrix {
  int ell = 0;
  int n_sig = 0;
  double E_sig = 0;
  Matrix cols;

  std::span<const double> signature(int i) const { return cols.row(i); }
};

enum class MuMethod { exact, chernoff_lb, monte_carlo };

struct MuEstimate {
  double value = 1.0;
  MuMethod method = MuMethod::exact;
  double stderr_ = 0.0;  // monte-carlo only
};

const char* to_string(MuMethod m);

inline constexpr long kMaxRejections = 1000000;

// Fills `out` with one draw of i.i.d. N(0, E/(2 len)) coordinates conditioned on
// squared norm <= E. Returns the number of raw draws used; throws
// std::runtime_error after kMaxRejections failures.
long draw_truncated_gaussian(std::span<double> out, double E, Rng& rng);

std::vector<std::vector<double>> gen_truncated_gaussian(int count, int len, double E, Rng& rng);

Codebook gen_codebook(int M, int len, double E, Rng& rng);
SignatureMatrix gen_signatures(int ell, int n_sig, double E_sig, Rng& rng);

// Pulse-position words in a slot: pilot sqrt(tE) at position 0 and message
// amplitude sqrt((1-t)E) at position w.
Codebook gen_ppm_codebook(int M, int slot_len, double E, double t);

// Probability that an untruncated draw lands in the energy ball:
// P(chi^2_len <= 2 len).
MuEstimate mu_exact(int len);
// 1 - exp(-len (1 - ln 2) / 2).
MuEstimate mu_chernoff_lb(int len);
// Acceptance rate of the raw sampler with E = len (the ratio is scale free).
MuEstimate mu_monte_carlo(int len, long trials, Rng& rng);

// CSV snapshot, one row per line, 17 significant digits.
void write_matrix_csv(std::ostream& os, const Matrix& m);
Matrix read_matrix_csv(std::istream& is);

}  // namespace mnac

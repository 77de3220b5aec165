#include "mnac/codebooks.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

namespace mnac {

const char* to_string(MuMethod m) {
  switch (m) {
    case MuMethod::exact: return "exact";
    case MuMethod::chernoff_lb: return "chernoff-lb";
    case MuMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

long draw_truncated_gaussian(std::span<double> out, double E, Rng& rng) {
  if (out.empty()) throw DomainError("codeword length must be >= 1");
  if (!(E > 0.0)) throw DomainError("energy cap must be positive");
  const double sigma = std::sqrt(E / (2.0 * static_cast<double>(out.size())));
  for (long attempt = 1; attempt <= kMaxRejections; ++attempt) {
    double energy = 0.0;
    for (double& x : out) {
      x = sigma * rng.normal();
      energy += x * x;
    }
    if (energy <= E) return attempt;
  }
  throw std::runtime_error("truncated Gaussian sampler exceeded the rejection limit");
}

std::vector<std::vector<double>> gen_truncated_gaussian(int count, int len, double E, Rng& rng) {
  if (count < 1 || len < 1) throw DomainError("count and len must be >= 1");
  std::vector<std::vector<double>> out(count, std::vector<double>(len));
  for (auto& v : out) draw_truncated_gaussian(v, E, rng);
  return out;
}

Codebook gen_codebook(int M, int len, double E, Rng& rng) {
  if (M < 2) throw DomainError("M must be >= 2");
  if (len < 1) throw DomainError("len must be >= 1");
  Codebook cb{M, len, E, Matrix(M + 1, len)};
  for (int w = 1; w <= M; ++w) draw_truncated_gaussian(cb.words.row(w), E, rng);
  return cb;
}

SignatureMatrix gen_signatures(int ell, int n_sig, double E_sig, Rng& rng) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  if (n_sig < 1) throw DomainError("n_sig must be >= 1");
  SignatureMatrix s{ell, n_sig, E_sig, Matrix(ell, n_sig)};
  for (int i = 0; i < ell; ++i) draw_truncated_gaussian(s.cols.row(i), E_sig, rng);
  return s;
}

Codebook gen_ppm_codebook(int M, int slot_len, double E, double t) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (slot_len < M + 1) throw SizeError("slot too short: need a pilot plus one position per message");
  if (!(E > 0.0)) throw DomainError("energy must be positive");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("pilot fraction must lie in (0, 1)");
  Codebook cb{M, slot_len, E, Matrix(M + 1, slot_len)};
  const double pilot = std::sqrt(t * E);
  const double pulse = std::sqrt((1.0 - t) * E);
  for (int w = 1; w <= M; ++w) {
    auto row = cb.words.row(w);
    row[0] = pilot;
    row[w] = pulse;
  }
  return cb;
}

MuEstimate mu_exact(int len) {
  if (len < 1) throw DomainError("len must be >= 1");
  return {gamma_p(0.5 * len, static_cast<double>(len)), MuMethod::exact, 0.0};
}

MuEstimate mu_chernoff_lb(int len) {
  if (len < 1) throw DomainError("len must be >= 1");
  const double tau = 1.0 - std::log(2.0);
  return {-std::expm1(-0.5 * len * tau), MuMethod::chernoff_lb, 0.0};
}

MuEstimate mu_monte_carlo(int len, long trials, Rng& rng) {
  if (len < 1 || trials < 1) throw DomainError("len and trials must be >= 1");
  const double E = len;
  const double sigma = std::sqrt(E / (2.0 * len));
  long accepted = 0;
  for (long i = 0; i < trials; ++i) {
    double energy = 0.0;
    for (int j = 0; j < len; ++j) {
      const double x = sigma * rng.normal();
      energy += x * x;
    }
    accepted += (energy <= E);
  }
  const double p = static_cast<double>(accepted) / trials;
  return {p, MuMethod::monte_carlo, std::sqrt(p * (1.0 - p) / trials)};
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  char buf[32];
  for (int r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    for (int c = 0; c < m.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

Matrix read_matrix_csv(std::istream& is) {
  Matrix m;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      m.data.push_back(std::stod(cell));
      ++cols;
    }
    if (m.rows == 0) m.cols = cols;
    else if (cols != m.cols) throw DimensionMismatch("ragged CSV matrix");
    ++m.rows;
  }
  return m;
}

}  // namespace mnac

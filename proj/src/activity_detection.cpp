#include "mnac/activity_detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

namespace mnac {

int v_cap(const SystemParams& params, const EnergySchedule& sched) {
  if (!(sched.c > 0.0)) throw InvalidRegime("schedule constant must be positive");
  return static_cast<int>(std::floor(params.k() * (1.0 + sched.c)));
}

double ls_candidate_count(int ell, int v) {
  double total = 0.0;
  for (int j = 0; j <= std::min(v, ell); ++j) total += std::exp(log_binomial(ell, j));
  return std::round(total);
}

namespace {

struct LsSearch {
  int ell;
  int v;
  std::vector<double> corr;   // <Y, s_i>
  std::vector<double> gram;   // <s_i, s_j>, row-major ell x ell
  std::vector<int> current;
  std::vector<int> best;
  double best_residual;

  // cross[j] holds sum over the current set of gram(i, j); one row per depth.
  std::vector<double> cross;

  bool better(double r) const {
    if (r < best_residual) return true;
    if (r > best_residual) return false;
    if (current.size() != best.size()) return current.size() < best.size();
    return current < best;
  }

  void descend(int start, double residual) {
    const int depth = static_cast<int>(current.size());
    if (depth == v) return;
    const double* acc = cross.data() + static_cast<std::size_t>(depth) * ell;
    double* next = cross.data() + static_cast<std::size_t>(depth + 1) * ell;
    for (int j = start; j < ell; ++j) {
      const double r = residual - 2.0 * corr[j] + gram[static_cast<std::size_t>(j) * ell + j] + 2.0 * acc[j];
      current.push_back(j);
      if (better(r)) {
        best_residual = r;
        best = current;
      }
      if (depth + 1 < v) {
        const double* gj = gram.data() + static_cast<std::size_t>(j) * ell;
        for (int m = j + 1; m < ell; ++m) next[m] = acc[m] + gj[m];
        descend(j + 1, r);
      }
      current.pop_back();
    }
  }
};

}  // namespace

DetectionResult detect_ls_exhaustive(std::span<const double> y_sig, const SignatureMatrix& S, int v, double budget) {
  if (static_cast<int>(y_sig.size()) != S.n_sig) throw DimensionMismatch("received signature segment has wrong length");
  if (v < 0) throw DomainError("weight cap must be nonnegative");
  const int ell = S.ell;
  v = std::min(v, ell);
  if (ls_candidate_count(ell, v) > budget) throw BudgetExceeded("exhaustive detection exceeds its candidate budget");

  LsSearch search{ell, v, std::vector<double>(ell), std::vector<double>(static_cast<std::size_t>(ell) * ell), {}, {}, 0.0,
                  std::vector<double>(static_cast<std::size_t>(v + 1) * ell, 0.0)};
  double y_energy = 0.0;
  for (double y : y_sig) y_energy += y * y;
  for (int i = 0; i < ell; ++i) {
    const auto si = S.signature(i);
    double c = 0.0;
    for (int j = 0; j < S.n_sig; ++j) c += y_sig[j] * si[j];
    search.corr[i] = c;
    for (int m = i; m < ell; ++m) {
      const auto sm = S.signature(m);
      double g = 0.0;
      for (int j = 0; j < S.n_sig; ++j) g += si[j] * sm[j];
      search.gram[static_cast<std::size_t>(i) * ell + m] = g;
      search.gram[static_cast<std::size_t>(m) * ell + i] = g;
    }
  }
  search.best_residual = y_energy;
  search.descend(0, y_energy);

  DetectionResult out;
  out.d_hat.assign(ell, 0);
  for (int i : search.best) out.d_hat[i] = 1;
  std::vector<double> r(y_sig.begin(), y_sig.end());
  for (int i : search.best) {
    const auto si = S.signature(i);
    for (int j = 0; j < S.n_sig; ++j) r[j] -= si[j];
  }
  for (double x : r) out.residual += x * x;
  return out;
}

bool detect_pilot(double y_pilot, double t, double E) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("pilot fraction must lie in (0, 1)");
  if (!(E > 0.0)) throw DomainError("energy must be positive");
  return y_pilot > 0.5 * std::sqrt(t * E);
}

std::pair<int, int> detection_stats(const ActivityVector& d_true, const ActivityVector& d_hat) {
  if (d_true.size() != d_hat.size()) throw DimensionMismatch("activity vectors differ in length");
  int misses = 0, false_alarms = 0;
  for (std::size_t i = 0; i < d_true.size(); ++i) {
    misses += (d_true[i] && !d_hat[i]);
    false_alarms += (!d_true[i] && d_hat[i]);
  }
  return {misses, false_alarms};
}

ActivityVector activity_of(const MessageVector& w) {
  ActivityVector d(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d[i] = (w[i] != 0);
  return d;
}

}  // namespace mnac

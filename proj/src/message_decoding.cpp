#include "mnac/message_decoding.hpp"

#include <cmath>
#include <limits>

#include "mnac/errors.hpp"

namespace mnac {

void BoundParams::validate() const {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("rho must lie in (0, 1]");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (xi < 1) throw DomainError("xi must be a positive integer");
}

int decode_ppm(std::span<const double> y_slot, int M, double t, double E) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (static_cast<int>(y_slot.size()) < M + 1) throw DimensionMismatch("slot shorter than M + 1");
  if (!(t > 0.0 && t < 1.0) || !(E > 0.0)) throw DomainError("invalid PPM energy split");
  int best = 1;
  for (int w = 2; w <= M; ++w) {
    if (y_slot[w] > y_slot[best]) best = w;
  }
  return best;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct TupleSearch {
  int users;
  int M;
  // unary[u * M + (w - 1)] = ||x_u(w)||^2 - 2 <y, x_u(w)>
  std::vector<double> unary;
  // pair tables for u < v: pair[index(u, v)][(wu - 1) * M + (wv - 1)] = 2 <x_u(wu), x_v(wv)>
  std::vector<std::vector<double>> pair;
  std::vector<int> current;
  std::vector<int> best;
  double best_cost = std::numeric_limits<double>::infinity();

  std::size_t pair_index(int u, int v) const { return static_cast<std::size_t>(v) * (v - 1) / 2 + u; }

  void descend(int depth, double cost) {
    if (depth == users) {
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
      }
      return;
    }
    for (int w = 1; w <= M; ++w) {
      double c = cost + unary[static_cast<std::size_t>(depth) * M + (w - 1)];
      for (int u = 0; u < depth; ++u) {
        c += pair[pair_index(u, depth)][static_cast<std::size_t>(current[u] - 1) * M + (w - 1)];
      }
      current[depth] = w;
      descend(depth + 1, c);
    }
  }
};

}  // namespace

std::vector<int> decode_joint_ml(std::span<const double> y_msg, const TransmissionPlan& plan,
                                 const std::vector<int>& active, double budget) {
  if (static_cast<int>(y_msg.size()) != plan.n_msg()) throw DimensionMismatch("message segment has wrong length");
  const int users = static_cast<int>(active.size());
  if (users == 0) return {};
  const int M = plan.M();
  if (users * std::log(static_cast<double>(M)) > std::log(budget))
    throw BudgetExceeded("joint ML decoding exceeds its tuple budget");

  TupleSearch search{users, M, std::vector<double>(static_cast<std::size_t>(users) * M), {}, std::vector<int>(users, 0), {}};
  for (int u = 0; u < users; ++u) {
    const Codebook& cb = plan.codebook(active[u]);
    for (int w = 1; w <= M; ++w) {
      const auto x = cb.word(w);
      search.unary[static_cast<std::size_t>(u) * M + (w - 1)] = dot(x, x) - 2.0 * dot(y_msg, x);
    }
  }
  search.pair.resize(static_cast<std::size_t>(users) * (users - 1) / 2);
  for (int v = 1; v < users; ++v) {
    const Codebook& cv = plan.codebook(active[v]);
    for (int u = 0; u < v; ++u) {
      const Codebook& cu = plan.codebook(active[u]);
      auto& table = search.pair[search.pair_index(u, v)];
      table.resize(static_cast<std::size_t>(M) * M);
      for (int wu = 1; wu <= M; ++wu) {
        for (int wv = 1; wv <= M; ++wv) {
          table[static_cast<std::size_t>(wu - 1) * M + (wv - 1)] = 2.0 * dot(cu.word(wu), cv.word(wv));
        }
      }
    }
  }
  search.descend(0, 0.0);
  return search.best;
}

ReceiveResult two_phase_receive(std::span<const double> y, const TransmissionPlan& plan, const SystemParams& params,
                                const EnergySchedule& sched, const BoundParams& bp, ReceiverBudgets budgets) {
  if (static_cast<int>(y.size()) != plan.n()) throw DimensionMismatch("received vector has wrong length");
  ReceiveResult out;
  out.w_hat.assign(plan.ell(), 0);
  const int v = v_cap(params, sched);
  out.detection = detect_ls_exhaustive(y.subspan(0, plan.n_sig()), plan.signatures(), v, budgets.detect);

  std::vector<int> detected;
  for (int i = 0; i < plan.ell(); ++i) {
    if (out.detection.d_hat[i]) detected.push_back(i);
  }
  const int cap = static_cast<int>(std::floor(bp.xi * params.k()));
  if (static_cast<int>(detected.size()) > cap) {
    out.overflow = true;
    return out;
  }
  const auto decoded = decode_joint_ml(y.subspan(plan.n_sig()), plan, detected, budgets.decode);
  for (std::size_t j = 0; j < detected.size(); ++j) out.w_hat[detected[j]] = decoded[j];
  return out;
}

MessageVector ortho_receive(std::span<const double> y, const TransmissionPlan& plan, const SystemParams& params,
                            const EnergySchedule& sched) {
  if (static_cast<int>(y.size()) != plan.n()) throw DimensionMismatch("received vector has wrong length");
  if (params.ell != plan.ell()) throw DimensionMismatch("plan and parameters disagree on ell");
  MessageVector w_hat(plan.ell(), 0);
  const int L = plan.slot_len();
  for (int i = 0; i < plan.ell(); ++i) {
    const auto slot = y.subspan(static_cast<std::size_t>(i) * L, L);
    if (detect_pilot(slot[0], sched.split, sched.E)) w_hat[i] = decode_ppm(slot, plan.M(), sched.split, sched.E);
  }
  return w_hat;
}

ErrorStats score_errors(const MessageVector& w_true, const MessageVector& w_hat, bool overflow) {
  if (w_true.size() != w_hat.size()) throw DimensionMismatch("message vectors differ in length");
  ErrorStats s;
  s.overflow = overflow;
  if (overflow) {
    s.per_user_errors = active_count(w_true);
    s.joint_error = true;
  } else {
    for (std::size_t i = 0; i < w_true.size(); ++i) s.per_user_errors += (w_true[i] != w_hat[i]);
    s.joint_error = s.per_user_errors > 0;
  }
  s.ape = w_true.empty() ? 0.0 : static_cast<double>(s.per_user_errors) / static_cast<double>(w_true.size());
  return s;
}

}  // namespace mnac

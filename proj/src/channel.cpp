#include "mnac/channel.hpp"

#include <cmath>
#include <utility>

#include "mnac/errors.hpp"

namespace mnac {

TransmissionPlan TransmissionPlan::joint(int n, int M, const EnergySchedule& sched, SignatureMatrix signatures,
                                         std::uint64_t codebook_seed) {
  if (sched.n_sig + sched.n_msg != n) throw DimensionMismatch("schedule lengths do not add up to n");
  if (signatures.n_sig != sched.n_sig) throw DimensionMismatch("signature length differs from n_sig");
  if (M < 2) throw DomainError("M must be >= 2");
  TransmissionPlan p;
  p.scheme_ = Scheme::joint;
  p.n_ = n;
  p.ell_ = signatures.ell;
  p.M_ = M;
  p.n_sig_ = sched.n_sig;
  p.n_msg_ = sched.n_msg;
  p.E_msg_ = sched.E_msg;
  p.codebook_seed_ = codebook_seed;
  p.signatures_ = std::move(signatures);
  p.codebooks_.resize(p.ell_);
  p.ready_.assign(p.ell_, false);
  return p;
}

TransmissionPlan TransmissionPlan::ortho(int n, int ell, int M, const EnergySchedule& sched) {
  if (sched.slot_len < 2 || static_cast<long>(sched.slot_len) * ell > n)
    throw DimensionMismatch("slots do not fit in the block");
  TransmissionPlan p;
  p.scheme_ = Scheme::ortho;
  p.n_ = n;
  p.ell_ = ell;
  p.M_ = M;
  p.n_sig_ = 1;
  p.n_msg_ = sched.slot_len - 1;
  p.slot_len_ = sched.slot_len;
  p.ppm_ = gen_ppm_codebook(M, sched.slot_len, sched.E, sched.split);
  return p;
}

const Codebook& TransmissionPlan::codebook(int user) const {
  if (scheme_ != Scheme::joint) throw std::logic_error("per-user codebooks exist only in the joint scheme");
  if (user < 0 || user >= ell_) throw DimensionMismatch("user index out of range");
  if (!ready_[user]) {
    Rng rng(codebook_seed_, kStreamUserCodebookBase + static_cast<std::uint64_t>(user));
    codebooks_[user] = gen_codebook(M_, n_msg_, E_msg_, rng);
    ready_[user] = true;
  }
  return codebooks_[user];
}

void TransmissionPlan::set_codebook(int user, Codebook cb) {
  if (user < 0 || user >= ell_) throw DimensionMismatch("user index out of range");
  if (cb.len != n_msg_ || cb.M != M_) throw DimensionMismatch("codebook shape differs from plan");
  codebooks_[user] = std::move(cb);
  ready_[user] = true;
}

Signal transmit_joint(const TransmissionPlan& plan, const MessageVector& msgs) {
  if (plan.scheme() != Scheme::joint) throw std::logic_error("plan is not a joint plan");
  if (static_cast<int>(msgs.size()) != plan.ell()) throw DimensionMismatch("message vector length differs from ell");
  Signal x(plan.n(), 0.0);
  for (int i = 0; i < plan.ell(); ++i) {
    const int w = msgs[i];
    if (w == 0) continue;
    if (w < 0 || w > plan.M()) throw DomainError("message index out of range");
    const auto s = plan.signatures().signature(i);
    for (int j = 0; j < plan.n_sig(); ++j) x[j] += s[j];
    const auto c = plan.codebook(i).word(w);
    for (int j = 0; j < plan.n_msg(); ++j) x[plan.n_sig() + j] += c[j];
  }
  return x;
}

Signal transmit_ortho(const TransmissionPlan& plan, const MessageVector& msgs) {
  if (plan.scheme() != Scheme::ortho) throw std::logic_error("plan is not an orthogonal plan");
  if (static_cast<int>(msgs.size()) != plan.ell()) throw DimensionMismatch("message vector length differs from ell");
  Signal x(plan.n(), 0.0);
  for (int i = 0; i < plan.ell(); ++i) {
    const int w = msgs[i];
    if (w == 0) continue;
    if (w < 0 || w > plan.M()) throw DomainError("message index out of range");
    const auto word = plan.ppm().word(w);
    const std::size_t base = static_cast<std::size_t>(i) * plan.slot_len();
    for (int j = 0; j < plan.slot_len(); ++j) x[base + j] = word[j];
  }
  return x;
}

Signal awgn(Signal signal, double N0, Rng& rng) {
  if (N0 < 0.0) throw DomainError("N0 must be nonnegative");
  if (N0 == 0.0) return signal;
  const double sigma = std::sqrt(N0 / 2.0);
  for (double& y : signal) y += sigma * rng.normal();
  return signal;
}

}  // namespace mnac

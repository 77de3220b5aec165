#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mnac/codebooks.hpp"
#include "mnac/rng.hpp"
#include "mnac/system_model.hpp"

namespace mnac {

// Stream ids inside one trial seed.
inline constexpr std::uint64_t kStreamMessages = 0;
inline constexpr std::uint64_t kStreamSignatures = 1;
inline constexpr std::uint64_t kStreamNoise = 2;
inline constexpr std::uint64_t kStreamUserCodebookBase = 16;

// Everything the transmitters and the receiver share for one block.
//
// Joint scheme: user i sends signature i over the first n_sig uses, then its
// own codeword over the remaining n_msg uses. Per-user codebooks are drawn
// independently, each from stream kStreamUserCodebookBase + i of
// codebook_seed, and are materialized on first use: at large ell only the
// active and detected users ever need one. The lazy cache makes a plan
// unsuitable for sharing between threads; build one per trial.
//
// Orthogonal scheme: user i owns the slot [i * slot_len, (i + 1) * slot_len)
// and all users share one PPM codebook.
class TransmissionPlan {
 public:
  static TransmissionPlan joint(int n, int M, const EnergySchedule& sched, SignatureMatrix signatures,
                                std::uint64_t codebook_seed);
  static TransmissionPlan ortho(int n, int ell, int M, const EnergySchedule& sched);

  Scheme scheme() const { return scheme_; }
  int n() const { return n_; }
  int ell() const { return ell_; }
  int M() const { return M_; }
  int n_sig() const { return n_sig_; }
  int n_msg() const { return n_msg_; }
  int slot_len() const { return slot_len_; }

  const SignatureMatrix& signatures() const { return signatures_; }
  const Codebook& codebook(int user) const;
  const Codebook& ppm() const { return ppm_; }

  // Replaces user i's codebook; used by tests that need hand-built words.
  void set_codebook(int user, Codebook cb);

 private:
  Scheme scheme_ = Scheme::joint;
  int n_ = 0;
  int ell_ = 0;
  int M_ = 0;
  int n_sig_ = 0;
  int n_msg_ = 0;
  int slot_len_ = 0;
  double E_msg_ = 0;
  std::uint64_t codebook_seed_ = 0;
  SignatureMatrix signatures_;
  mutable std::vector<Codebook> codebooks_;
  mutable std::vector<bool> ready_;
  Codebook ppm_;
};

using Signal = std::vector<double>;

Signal transmit_joint(const TransmissionPlan& plan, const MessageVector& msgs);
Signal transmit_ortho(const TransmissionPlan& plan, const MessageVector& msgs);

// Adds N(0, N0/2) noise per coordinate. N0 = 0 passes the signal through.
Signal awgn(Signal signal, double N0, Rng& rng);

}  // namespace mnac

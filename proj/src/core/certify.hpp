#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/norms.hpp"

namespace nscert {

// The well-posedness conditions are stated with existential constants; the
// ledger makes them explicit run parameters with a provenance note each.
// A "certified" verdict is always relative to the ledger in force.
struct ConstantsLedger {
  double C0 = 1.0;      // Sobolev embedding ||u||_{L4} <= C0 ||u||_{H1}
  double C1 = 1.0;      // beta(s) = C1 + C1 s^15
  double C1star = 1.0;  // alpha(s) = 1 / (C1* + C1* [C0 + (C0+1) s]^9)^2
  double C2 = 1.0;
  double C3 = 1.0;
  double C4 = 1.0;
  double C5 = 1.0;
  double C6 = 1.0;
  double C7 = 1.0;
  double C8 = 1.0;
  double C9 = 1.0;
  std::map<std::string, std::string> provenance;

  void validate() const;  // all entries strictly positive and finite
  double get(const std::string& name) const;
  void set(const std::string& name, double value, const std::string& note);
  static const std::vector<std::string>& names();
};

// Scalar result carried both linearly and in log space. The linear value is
// clamped to the smallest positive normal on underflow (flagged); log10 is
// kept in long double because Phi(M)^8 exceeds double range for ordinary M.
struct CertValue {
  double value = 0.0;
  long double log10_value = 0.0L;
  bool underflow = false;
  bool overflow = false;
};

// Natural-log-domain certificate functions; the argument is log(s).
long double log_alpha(long double log_s, const ConstantsLedger& ledger);
long double log_beta(long double log_s, const ConstantsLedger& ledger);
long double log_phi(long double log_s, const ConstantsLedger& ledger);
long double log_Phi(long double log_s, const ConstantsLedger& ledger);

// Linear-domain wrappers for s >= 0 (s = 0 maps to log_s = -inf).
CertValue alpha(double s, const ConstantsLedger& ledger);
CertValue beta(double s, const ConstantsLedger& ledger);
CertValue phi(double s, const ConstantsLedger& ledger);
CertValue Phi_fn(double s, const ConstantsLedger& ledger);

// Mesh-size thresholds:
//   tau_M = min( phi(M)/2, 1/(8 max(C2,C3) Phi(M)^8), (1/2) exp(-C9 Phi(M)^8) )
//   h_M   = (1/4) exp(-2 C9 Phi(M)^8)
// Both decrease in M. max(C2, C3) covers the two forms in which the same
// step-size condition appears.
struct Thresholds {
  CertValue tau_M;
  CertValue h_M;
};
Thresholds thresholds(double M, const ConstantsLedger& ledger);

// Left side of the norm condition:
//   ||u_{h,tau}||_{Linf(0,T;L4)} + ||u0||_{H2} + 1,
// with the H1_0-cap-H2 norm read as the full H2 norm.
double compute_M_lhs(const Trajectory& traj, const VectorField& u0,
                     const SpacePair& spaces, const TetMesh& mesh);

double round_up_3_significant(double x);

// Discrete Gronwall bound: given nonnegative sequences with
//   a_{n+1} + tau sum b <= tau sum gamma a + tau sum c + B  and
//   tau gamma_{m+1} < 1/2,
// returns bound[n] = exp(2 sum_{m<=n} tau gamma) (tau sum_{m<=n} c + B),
// which dominates a_{n+1} + tau sum_{m<=n} b. Throws DomainError naming the
// first index where the hypothesis tau gamma < 1/2 fails.
std::vector<double> gronwall_bound(const std::vector<double>& b,
                                   const std::vector<double>& c,
                                   const std::vector<double>& gamma,
                                   double tau, double B);

struct Certificate {
  double M_lhs = 0.0;
  double M = 0.0;
  CertValue phi_M, Phi_M, tau_M, h_M;
  double tau = 0.0, h = 0.0;
  bool cond_norm_bound = false;  // M_lhs <= M
  bool cond_tau = false;         // tau < tau_M
  bool cond_h = false;           // h < h_M
  long double log10_tau_gap = 0.0L;  // log10(tau) - log10(tau_M)
  long double log10_h_gap = 0.0L;
  std::string energy_status;
  bool energy_passed = false;
  double error_bound = 0.0;  // tau + h^{3/2}
  std::string verdict;
  std::string regularity;
  double linf_l4 = 0.0;
  double u0_h2 = 0.0;
  ConstantsLedger ledger;
};

// Evaluates the full certificate for a completed trajectory. All failures are
// verdict content, never exceptions. M defaults to M_lhs rounded up to 3
// significant digits.
Certificate certify(const Trajectory& traj, const VectorField& u0,
                    const ConstantsLedger& ledger, std::optional<double> M,
                    const SpacePair& spaces, const TetMesh& mesh);

}  // namespace nscert

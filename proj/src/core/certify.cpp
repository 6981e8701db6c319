#include "core/certify.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace nscert {

namespace {

constexpr long double kLog10E = 0.434294481903251827651128918916605082L;
constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

// log(1 + e^t), overflow-safe.
long double softplus(long double t) {
  if (t == kNegInf) return 0.0L;
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

long double logsumexp(long double a, long double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const long double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// exp with a saturation flag instead of silent inf.
long double checked_expl(long double t, bool* overflow) {
  if (t > 11350.0L) {  // past long-double range
    if (overflow) *overflow = true;
    return std::numeric_limits<long double>::infinity();
  }
  return std::exp(t);
}

CertValue from_log(long double natural_log) {
  CertValue v;
  v.log10_value = natural_log * kLog10E;
  if (natural_log == kNegInf) {
    v.value = 0.0;
    v.underflow = true;
    return v;
  }
  const long double linear = std::exp(natural_log);
  if (linear < (long double)DBL_MIN) {
    v.value = DBL_MIN;  // smallest positive normal; see underflow flag
    v.underflow = true;
  } else if (linear > (long double)DBL_MAX) {
    v.value = std::numeric_limits<double>::infinity();
    v.overflow = true;
  } else {
    v.value = static_cast<double>(linear);
  }
  return v;
}

long double safe_log(double s) {
  if (s < 0) throw DomainError("certificate functions require s >= 0");
  return s == 0 ? kNegInf : std::log((long double)s);
}

}  // namespace

void ConstantsLedger::validate() const {
  for (const auto& name : names()) {
    const double v = get(name);
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("ledger constant " + name +
                        " must be strictly positive and finite");
  }
}

const std::vector<std::string>& ConstantsLedger::names() {
  static const std::vector<std::string> n = {"C0", "C1", "C1star", "C2", "C3",
                                             "C4", "C5", "C6",     "C7", "C8",
                                             "C9"};
  return n;
}

double ConstantsLedger::get(const std::string& name) const {
  if (name == "C0") return C0;
  if (name == "C1") return C1;
  if (name == "C1star") return C1star;
  if (name == "C2") return C2;
  if (name == "C3") return C3;
  if (name == "C4") return C4;
  if (name == "C5") return C5;
  if (name == "C6") return C6;
  if (name == "C7") return C7;
  if (name == "C8") return C8;
  if (name == "C9") return C9;
  throw ConfigError("unknown ledger constant " + name);
}

void ConstantsLedger::set(const std::string& name, double value,
                          const std::string& note) {
  double* slot = nullptr;
  if (name == "C0") slot = &C0;
  else if (name == "C1") slot = &C1;
  else if (name == "C1star") slot = &C1star;
  else if (name == "C2") slot = &C2;
  else if (name == "C3") slot = &C3;
  else if (name == "C4") slot = &C4;
  else if (name == "C5") slot = &C5;
  else if (name == "C6") slot = &C6;
  else if (name == "C7") slot = &C7;
  else if (name == "C8") slot = &C8;
  else if (name == "C9") slot = &C9;
  else throw ConfigError("unknown ledger constant " + name);
  *slot = value;
  if (!note.empty()) provenance[name] = note;
}

// beta(s) = C1 (1 + s^15)
long double log_beta(long double log_s, const ConstantsLedger& ledger) {
  return std::log((long double)ledger.C1) + softplus(15.0L * log_s);
}

// alpha(s) = 1 / (C1* (1 + X^9))^2 with X = C0 + (C0+1) s
long double log_alpha(long double log_s, const ConstantsLedger& ledger) {
  const long double log_X =
      logsumexp(std::log((long double)ledger.C0),
                std::log((long double)ledger.C0 + 1.0L) + log_s);
  return -2.0L *
         (std::log((long double)ledger.C1star) + softplus(9.0L * log_X));
}

long double log_phi(long double log_s, const ConstantsLedger& ledger) {
  return log_alpha(log_beta(log_s, ledger), ledger);
}

// Phi(s) = beta(C0 beta(s) + s + C0)
long double log_Phi(long double log_s, const ConstantsLedger& ledger) {
  const long double log_C0 = std::log((long double)ledger.C0);
  const long double arg = logsumexp(
      logsumexp(log_C0 + log_beta(log_s, ledger), log_s), log_C0);
  return log_beta(arg, ledger);
}

CertValue alpha(double s, const ConstantsLedger& ledger) {
  return from_log(log_alpha(safe_log(s), ledger));
}
CertValue beta(double s, const ConstantsLedger& ledger) {
  return from_log(log_beta(safe_log(s), ledger));
}
CertValue phi(double s, const ConstantsLedger& ledger) {
  return from_log(log_phi(safe_log(s), ledger));
}
CertValue Phi_fn(double s, const ConstantsLedger& ledger) {
  return from_log(log_Phi(safe_log(s), ledger));
}

Thresholds thresholds(double M, const ConstantsLedger& ledger) {
  if (!(M > 0)) throw DomainError("thresholds require M > 0");
  const long double log_M = safe_log(M);
  const long double lphi = log_phi(log_M, ledger);
  const long double lPhi = log_Phi(log_M, ledger);
  const long double ln2 = std::log(2.0L);

  bool overflow = false;
  const long double Phi8 = checked_expl(8.0L * lPhi, &overflow);

  const long double term_phi = lphi - ln2;
  const long double C23 = (long double)std::max(ledger.C2, ledger.C3);
  const long double term_step =
      -(std::log(8.0L) + std::log(C23) + 8.0L * lPhi);
  const long double term_exp = -ln2 - (long double)ledger.C9 * Phi8;

  Thresholds th;
  th.tau_M = from_log(std::min(term_phi, std::min(term_step, term_exp)));
  th.h_M = from_log(-std::log(4.0L) - 2.0L * (long double)ledger.C9 * Phi8);
  th.tau_M.overflow = th.tau_M.overflow || overflow;
  th.h_M.overflow = th.h_M.overflow || overflow;
  // thresholds are strictly positive for every finite M; keep the clamp even
  // when the log itself saturates
  if (th.tau_M.value == 0.0) th.tau_M.value = DBL_MIN;
  if (th.h_M.value == 0.0) th.h_M.value = DBL_MIN;
  return th;
}

double compute_M_lhs(const Trajectory& traj, const VectorField& u0,
                     const SpacePair& spaces, const TetMesh& mesh) {
  return linf_time_norm(traj, NormKind::L4, spaces, mesh) +
         expr_sobolev_norm(u0, mesh, 2) + 1.0;
}

double round_up_3_significant(double x) {
  if (x <= 0) return x;
  const double exponent = std::floor(std::log10(x));
  const double scale = std::pow(10.0, exponent - 2.0);
  const double scaled = x / scale;
  double up = std::ceil(scaled);
  // keep exact 3-digit values unchanged
  if (scaled - std::floor(scaled) < 1e-9) up = std::round(scaled);
  return up * scale;
}

std::vector<double> gronwall_bound(const std::vector<double>& b,
                                   const std::vector<double>& c,
                                   const std::vector<double>& gamma,
                                   double tau, double B) {
  const std::size_t len = gamma.size();
  if (b.size() != len || c.size() != len)
    throw DomainError("gronwall sequences must have equal length");
  if (!(tau > 0) || B < 0)
    throw DomainError("gronwall requires tau > 0 and B >= 0");
  for (std::size_t m = 0; m < len; ++m) {
    if (b[m] < 0 || c[m] < 0 || gamma[m] < 0)
      throw DomainError("gronwall sequences must be nonnegative (index " +
                        std::to_string(m) + ")");
    if (!(tau * gamma[m] < 0.5))
      throw DomainError("gronwall hypothesis tau*gamma < 1/2 fails at index " +
                        std::to_string(m));
  }

  std::vector<double> bound(len);
  double sum_gamma = 0.0, sum_c = 0.0;
  for (std::size_t n = 0; n < len; ++n) {
    sum_gamma += tau * gamma[n];
    sum_c += tau * c[n];
    bound[n] = std::exp(2.0 * sum_gamma) * (sum_c + B);
  }
  return bound;
}

Certificate certify(const Trajectory& traj, const VectorField& u0,
                    const ConstantsLedger& ledger, std::optional<double> M,
                    const SpacePair& spaces, const TetMesh& mesh) {
  ledger.validate();

  Certificate cert;
  cert.ledger = ledger;
  cert.linf_l4 = linf_time_norm(traj, NormKind::L4, spaces, mesh);
  cert.u0_h2 = expr_sobolev_norm(u0, mesh, 2);
  cert.M_lhs = cert.linf_l4 + cert.u0_h2 + 1.0;
  cert.M = M.value_or(round_up_3_significant(cert.M_lhs));
  cert.tau = traj.tau;
  cert.h = mesh.h;

  cert.phi_M = phi(cert.M, ledger);
  cert.Phi_M = Phi_fn(cert.M, ledger);
  const Thresholds th = thresholds(cert.M, ledger);
  cert.tau_M = th.tau_M;
  cert.h_M = th.h_M;

  cert.cond_norm_bound = cert.M_lhs <= cert.M;
  const long double log10_tau = std::log10((long double)cert.tau);
  const long double log10_h = std::log10((long double)cert.h);
  cert.cond_tau = log10_tau < cert.tau_M.log10_value;
  cert.cond_h = log10_h < cert.h_M.log10_value;
  cert.log10_tau_gap = log10_tau - cert.tau_M.log10_value;
  cert.log10_h_gap = log10_h - cert.h_M.log10_value;

  const EnergyLedger energy = energy_ledger(traj, spaces, mesh);
  cert.energy_status = energy.status;
  cert.energy_passed = energy.applicable && energy.passed;

  cert.error_bound = cert.tau + std::pow(cert.h, 1.5);

  if (cert.cond_norm_bound && cert.cond_tau && cert.cond_h &&
      cert.energy_passed) {
    cert.verdict = "certified";
    cert.regularity =
        "unique solution with u in Linf(0,T;(H1_0 cap H2)^3) and "
        "dt u in L2(0,T;(H1)^3); "
        "|u_{h,tau} - u|^2_{Linf(0,T;L2)} <= tau + h^(3/2)";
  } else {
    std::string reasons;
    auto append = [&](const std::string& r) {
      if (!reasons.empty()) reasons += "; ";
      reasons += r;
    };
    if (!cert.cond_norm_bound) append("norm bound exceeded (M_lhs > M)");
    if (!cert.cond_tau) append("tau >= tau_M");
    if (!cert.cond_h) append("h >= h_M");
    if (!cert.energy_passed) append("energy ledger " + cert.energy_status);
    cert.verdict = "conditions not met: " + reasons;
    cert.regularity = "no conclusion";
  }
  return cert;
}

}  // namespace nscert

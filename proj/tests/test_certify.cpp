#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/catalog.hpp"
#include "core/errors.hpp"
#include "core/norms.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nscert;

namespace {

ConstantsLedger all_ones() { return ConstantsLedger{}; }

// 1000 log-spaced sample arguments
std::vector<double> sample_grid() {
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i)
    s.push_back(std::pow(10.0, -3.0 + 6.0 * i / 999.0));
  return s;
}

long double rel_gap(long double a, long double b) {
  return std::abs(a - b) /
         std::max({(long double)1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("alpha: hand values, monotonicity, limits") {
  const ConstantsLedger ledger = all_ones();
  // s = 0: 1 / (1 + 1*(1+0)^9)^2 = 1/4
  CHECK(alpha(0.0, ledger).value == doctest::Approx(0.25).epsilon(1e-14));

  long double prev = std::numeric_limits<long double>::infinity();
  for (double s : sample_grid()) {
    const long double la = log_alpha(std::log((long double)s), ledger);
    CHECK(la < prev);  // strictly decreasing
    prev = la;
  }

  ConstantsLedger big = all_ones();
  big.set("C1star", 1e30, "limit probe");
  CHECK(alpha(1.0, big).value < 1e-59);
}

TEST_CASE("beta: hand values and monotonicity") {
  const ConstantsLedger ledger = all_ones();
  CHECK(beta(0.0, ledger).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta(1.0, ledger).value == doctest::Approx(2.0).epsilon(1e-14));

  long double prev = -std::numeric_limits<long double>::infinity();
  for (double s : sample_grid()) {
    const long double lb = log_beta(std::log((long double)s), ledger);
    CHECK(lb > prev);
    prev = lb;
  }
}

TEST_CASE("phi is alpha composed with beta, Phi dominates beta") {
  const ConstantsLedger ledger = all_ones();
  for (double s : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    const CertValue composed = alpha(beta(s, ledger).value, ledger);
    const CertValue direct = phi(s, ledger);
    CHECK(rel_gap(direct.log10_value, composed.log10_value) <= 1e-13);
  }
  // Phi(0) = beta(C0 beta(0) + 0 + C0) = beta(2) = 1 + 2^15
  CHECK(Phi_fn(0.0, ledger).value == doctest::Approx(32769.0).epsilon(1e-13));

  for (double s : sample_grid())
    CHECK(log_Phi(std::log((long double)s), ledger) >=
          log_beta(std::log((long double)s), ledger));
}

TEST_CASE("phi decreasing, Phi increasing on the grid") {
  const ConstantsLedger ledger = all_ones();
  long double prev_phi = std::numeric_limits<long double>::infinity();
  long double prev_Phi = -std::numeric_limits<long double>::infinity();
  for (double s : sample_grid()) {
    const long double ls = std::log((long double)s);
    const long double p = log_phi(ls, ledger);
    const long double P = log_Phi(ls, ledger);
    // below s ~ 0.1 the s^15 variation inside alpha(beta(s)) falls under
    // long-double resolution, so strictness is only representable above it
    if (s >= 0.1)
      CHECK(p < prev_phi);
    else
      CHECK(p <= prev_phi);
    CHECK(P > prev_Phi);
    prev_phi = p;
    prev_Phi = P;
  }
}

TEST_CASE("log-space arithmetic matches the independent oracle") {
  auto rng = test_rng(1234);
  int samples = 0;
  while (samples < 20) {
    ConstantsLedger ledger = all_ones();
    if (samples % 2 == 1)
      for (const auto& name : ConstantsLedger::names())
        ledger.set(name, uniform(rng, 0.1, 10.0), "random sample");
    const double s = uniform(rng, 0.0, 5.0);

    CHECK(rel_gap(beta(s, ledger).log10_value,
                  oracle::log10_beta(s, ledger)) <= 1e-12);
    CHECK(rel_gap(alpha(s, ledger).log10_value,
                  oracle::log10_alpha(s, ledger)) <= 1e-12);
    CHECK(rel_gap(phi(s, ledger).log10_value,
                  oracle::log10_phi(s, ledger)) <= 1e-12);
    CHECK(rel_gap(Phi_fn(s, ledger).log10_value,
                  oracle::log10_Phi(s, ledger)) <= 1e-12);

    const double M = s + 0.1;
    const Thresholds th = thresholds(M, ledger);
    const oracle::ThresholdLogs ref = oracle::thresholds_log10(M, ledger);
    CHECK(rel_gap(th.tau_M.log10_value, ref.log10_tau_M) <= 1e-12);
    CHECK(rel_gap(th.h_M.log10_value, ref.log10_h_M) <= 1e-12);
    ++samples;
  }
}

TEST_CASE("thresholds decrease componentwise in M") {
  const ConstantsLedger ledger = all_ones();
  long double prev_tau = std::numeric_limits<long double>::infinity();
  long double prev_h = std::numeric_limits<long double>::infinity();
  for (double M : sample_grid()) {
    if (M > 2.5) break;  // keep Phi^8 inside long-double range
    const Thresholds th = thresholds(M, ledger);
    CHECK(th.tau_M.log10_value <= prev_tau);
    CHECK(th.h_M.log10_value < prev_h);
    CHECK(th.tau_M.value > 0.0);
    CHECK(th.h_M.value > 0.0);
    prev_tau = th.tau_M.log10_value;
    prev_h = th.h_M.log10_value;
  }
  // componentwise comparison at a sample pair
  const Thresholds t1 = thresholds(1.0, ledger);
  const Thresholds t2 = thresholds(2.0, ledger);
  CHECK(t1.tau_M.log10_value >= t2.tau_M.log10_value);
  CHECK(t1.h_M.log10_value >= t2.h_M.log10_value);
}

TEST_CASE("thresholds: exponential term dominates for the all-ones ledger") {
  const ConstantsLedger ledger = all_ones();
  const Thresholds th = thresholds(1.0, ledger);
  const long double l10e = 0.434294481903251827651128918916605082L;
  // Phi(1) = 1 + 4^15; the exponential term is astronomically smallest
  const long double Phi = 1.0L + std::pow(4.0L, 15.0L);
  const long double expected = std::log10(0.5L) - std::pow(Phi, 8.0L) * l10e;
  CHECK(rel_gap(th.tau_M.log10_value, expected) <= 1e-12);
  CHECK(th.tau_M.underflow);
  CHECK(th.tau_M.value == 2.2250738585072014e-308);  // clamped
  // h_M = (1/4) exp(-2 C9 Phi^8) by direct formula
  const long double expected_h =
      std::log10(0.25L) - 2.0L * std::pow(Phi, 8.0L) * l10e;
  CHECK(rel_gap(th.h_M.log10_value, expected_h) <= 1e-12);
}

TEST_CASE("ledger validation") {
  ConstantsLedger bad = all_ones();
  bad.C4 = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.C4 = -2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(all_ones().get("C10"), ConfigError);
  ConstantsLedger ok = all_ones();
  ok.set("C9", 1e-300, "tiny but positive");
  ok.validate();
}

TEST_CASE("rounding M up to three significant digits") {
  CHECK(round_up_3_significant(1.0) == doctest::Approx(1.0));
  CHECK(round_up_3_significant(2.344) == doctest::Approx(2.35));
  CHECK(round_up_3_significant(10.1003) == doctest::Approx(10.2));
  CHECK(round_up_3_significant(0.012341) == doctest::Approx(0.0124));
  CHECK(round_up_3_significant(999.0) == doctest::Approx(999.0));
}

TEST_CASE("gronwall bound: exactness when gamma vanishes") {
  const std::vector<double> b = {0.1, 0.2, 0.3};
  const std::vector<double> c = {1.0, 2.0, 0.5};
  const std::vector<double> gamma = {0.0, 0.0, 0.0};
  const double tau = 0.1, B = 2.0;
  const auto bound = gronwall_bound(b, c, gamma, tau, B);
  REQUIRE(bound.size() == 3);
  // bound = tau * partial sums of c + B exactly
  CHECK(bound[0] == doctest::Approx(0.1 + 2.0).epsilon(1e-12));
  CHECK(bound[2] == doctest::Approx(0.35 + 2.0).epsilon(1e-12));

  std::vector<double> a;
  REQUIRE(oracle::gronwall_recursion(b, c, gamma, tau, B, &a));
  double sum_b = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    sum_b += tau * b[n];
    CHECK(a[n] + sum_b == doctest::Approx(bound[n]).epsilon(1e-12));
  }
}

TEST_CASE("gronwall bound dominates the brute-force recursion") {
  auto rng = test_rng(321);
  int valid = 0;
  while (valid < 1000) {
    const int len = 1 + static_cast<int>(uniform(rng, 0, 49));
    const double tau = uniform(rng, 0.01, 0.1);
    const double B = uniform(rng, 0.0, 2.0);
    std::vector<double> b(len), c(len), gamma(len);
    for (int i = 0; i < len; ++i) {
      b[i] = uniform(rng, 0.0, 1.0);
      c[i] = uniform(rng, 0.0, 1.0);
      gamma[i] = uniform(rng, 0.0, 0.49 / tau);
    }
    std::vector<double> a;
    if (!oracle::gronwall_recursion(b, c, gamma, tau, B, &a)) continue;
    const auto bound = gronwall_bound(b, c, gamma, tau, B);
    double sum_b = 0.0;
    for (int n = 0; n < len; ++n) {
      sum_b += tau * b[n];
      CHECK(a[n] + sum_b <= bound[n] * (1 + 1e-12));
    }
    ++valid;
  }
}

TEST_CASE("gronwall hypothesis violations are reported with the index") {
  const std::vector<double> seq = {0.1, 0.1, 0.1};
  std::vector<double> gamma = {1.0, 5.0, 1.0};  // tau*gamma = 0.5 at index 1
  try {
    gronwall_bound(seq, seq, gamma, 0.1, 1.0);
    FAIL("expected a precondition error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  CHECK_THROWS_AS(gronwall_bound(seq, seq, {0.1, -0.1, 0.1}, 0.1, 1.0),
                  DomainError);
  CHECK_THROWS_AS(gronwall_bound({0.1}, seq, gamma, 0.1, 1.0), DomainError);
}

TEST_CASE("compute_M_lhs: zero data, additivity, monotonicity") {
  const TetMesh mesh = build_box_mesh(2, 2, 2, Box{});
  const SpacePair spaces = build_spaces(mesh);
  const VectorField zero = find_catalog("zero")->velocity;
  const Trajectory ztraj = run(zero, 0.01, 5, 1.0, nullptr, spaces, mesh);
  CHECK(compute_M_lhs(ztraj, zero, spaces, mesh) == doctest::Approx(1.0));

  const VectorField sine = find_catalog("sine")->velocity;
  const Trajectory traj = run(sine, 0.01, 5, 1.0, nullptr, spaces, mesh);
  const double lhs = compute_M_lhs(traj, sine, spaces, mesh);
  CHECK(lhs ==
        doctest::Approx(linf_time_norm(traj, NormKind::L4, spaces, mesh) +
                        expr_sobolev_norm(sine, mesh, 2) + 1.0)
            .epsilon(1e-14));

  const Trajectory longer = run(sine, 0.01, 10, 1.0, nullptr, spaces, mesh);
  CHECK(compute_M_lhs(longer, sine, spaces, mesh) >= lhs - 1e-14);
}

TEST_CASE("certify: generous ledger certifies a zero run on a fine mesh") {
  // h must be below 1/4 for any ledger (h_M <= 1/4 by construction)
  const Box small{Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5)};
  const TetMesh mesh = build_box_mesh(4, 4, 4, small);
  REQUIRE(mesh.h < 0.25);
  const SpacePair spaces = build_spaces(mesh);
  const VectorField zero = find_catalog("zero")->velocity;
  const Trajectory traj = run(zero, 0.01, 3, 1.0, nullptr, spaces, mesh);

  const ConstantsLedger generous = oracle::generous_ledger(1.0, 0.01, mesh.h);
  const Certificate cert =
      certify(traj, zero, generous, std::nullopt, spaces, mesh);
  CHECK(cert.M_lhs == doctest::Approx(1.0));
  CHECK(cert.M == doctest::Approx(1.0));
  CHECK(cert.cond_norm_bound);
  CHECK(cert.cond_tau);
  CHECK(cert.cond_h);
  CHECK(cert.energy_passed);
  CHECK(cert.verdict == "certified");
  CHECK(cert.regularity.find("H1_0 cap H2") != std::string::npos);
  CHECK(cert.error_bound ==
        doctest::Approx(0.01 + std::pow(mesh.h, 1.5)).epsilon(1e-14));

  // default all-ones ledger on the same run: thresholds are astronomically
  // small, verdict carries finite log-space gaps (finite in long double)
  const Certificate fail =
      certify(traj, zero, all_ones(), std::nullopt, spaces, mesh);
  CHECK(fail.verdict.find("conditions not met") == 0);
  CHECK(fail.verdict.find("tau >= tau_M") != std::string::npos);
  CHECK(fail.log10_tau_gap > 0.0L);
  CHECK(fail.log10_tau_gap < std::numeric_limits<long double>::infinity());
  CHECK(fail.log10_h_gap > 0.0L);
  CHECK(fail.log10_h_gap < std::numeric_limits<long double>::infinity());
}

TEST_CASE("certify: forced runs cannot be certified") {
  const TetMesh mesh = build_box_mesh(2, 2, 2, Box{});
  const SpacePair spaces = build_spaces(mesh);
  const CatalogEntry* mms = find_catalog("mms");
  const VectorField forcing =
      manufactured_forcing(mms->velocity, mms->pressure, 1.0);
  const Trajectory traj =
      run(mms->velocity, 0.01, 2, 1.0, &forcing, spaces, mesh);
  const Certificate cert = certify(traj, mms->velocity, all_ones(),
                                   std::nullopt, spaces, mesh);
  CHECK(cert.verdict.find("not applicable") != std::string::npos);
  CHECK(cert.verdict.find("conditions not met") == 0);
}

TEST_CASE("certify is a pure function of its inputs") {
  const TetMesh mesh = build_box_mesh(2, 2, 2, Box{});
  const SpacePair spaces = build_spaces(mesh);
  const VectorField sine = find_catalog("sine")->velocity;
  const Trajectory traj = run(sine, 0.01, 5, 1.0, nullptr, spaces, mesh);
  const Certificate a = certify(traj, sine, all_ones(), 12.0, spaces, mesh);
  const Certificate b = certify(traj, sine, all_ones(), 12.0, spaces, mesh);
  CHECK(a.M_lhs == b.M_lhs);
  CHECK(a.M == 12.0);
  CHECK(a.verdict == b.verdict);
  CHECK((a.tau_M.log10_value == b.tau_M.log10_value));
  CHECK(a.error_bound == b.error_bound);
}

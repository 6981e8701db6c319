#pragma once

#include <array>
#include <optional>
#include <string>

#include "core/certify.hpp"
#include "core/mesh.hpp"

namespace nscert {

// One batch run, parsed from a line-oriented "key = value" file with section
// headers. Unknown keys are fatal. See docs/README for the key list.
struct RunConfig {
  std::array<double, 6> extents{0, 0, 0, 1, 1, 1};
  int nx = 2, ny = 2, nz = 2;
  int refine = 0;

  double tau = 0.01;
  double T = 0.1;
  int N = 10;           // derived from T unless given explicitly
  bool N_given = false;
  double mu = 1.0;

  std::string u0 = "zero";        // catalog name or "(ex, ey, ez)"
  std::string forcing = "none";   // none | manufactured | "(ex, ey, ez)"

  ConstantsLedger ledger;
  std::optional<double> M_override;

  std::string out = "out";
  int snapshot_stride = 0;
  double solver_tol = 1e-10;
  double divergence_tol = 1e-9;
  unsigned long long seed = 0;
  int threads = 1;
  int levels = 3;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Assign one key; same validation as the file parser. Used for command-line
// overrides.
void config_set(RunConfig& config, const std::string& key,
                const std::string& value);

// Canonical echo; parsing the echo reproduces the config exactly.
std::string echo_config(const RunConfig& config);

// Cross-field validation (tau/T/N consistency, resolvable fields, ...).
// parse_config_* run this; call it again after config_set overrides.
void validate_config(RunConfig& config);

Box config_box(const RunConfig& config);
TetMesh build_config_mesh(const RunConfig& config);

// Resolves u0 / forcing texts to fields. For forcing == "manufactured" the
// catalog pair "mms" provides (w, q) and u0 is pinned to w.
struct ResolvedFields {
  VectorField u0;
  std::optional<VectorField> forcing;
  std::optional<VectorField> exact_velocity;  // set for manufactured runs
  bool zero_forcing = true;
};
ResolvedFields resolve_fields(const RunConfig& config);

}  // namespace nscert

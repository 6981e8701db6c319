#include "nscert/nscert.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/runner.hpp"

struct nscert_mesh {
  nscert::TetMesh mesh;
};

struct nscert_config {
  nscert::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Maps core exceptions onto stable status codes and stashes the message.
template <typename Fn>
nscert_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NSCERT_OK;
  } catch (const nscert::ExprParseError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_PARSE;
  } catch (const nscert::ConfigError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_CONFIG;
  } catch (const nscert::SolverError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_SOLVER;
  } catch (const nscert::IoError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_IO;
  } catch (const nscert::InvalidDomainError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_INVALID_ARGUMENT;
  } catch (const nscert::DomainError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_INVALID_ARGUMENT;
  } catch (const nscert::IncompatibleDataError& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NSCERT_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NSCERT_ERROR_INTERNAL;
  }
}

nscert_status require(bool ok, const char* message) {
  if (ok) return NSCERT_OK;
  g_last_error = message;
  return NSCERT_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* nscert_last_error(void) { return g_last_error.c_str(); }

void nscert_string_free(char* s) { std::free(s); }

nscert_status nscert_mesh_create_box(int nx, int ny, int nz,
                                     const double* extents,
                                     nscert_mesh** out_mesh) {
  if (nscert_status s = require(out_mesh != nullptr, "out_mesh is NULL"))
    return s;
  return guarded([&] {
    nscert::Box box;
    if (extents) {
      box.lo = nscert::Vec3(extents[0], extents[1], extents[2]);
      box.hi = nscert::Vec3(extents[3], extents[4], extents[5]);
    }
    *out_mesh = new nscert_mesh{nscert::build_box_mesh(nx, ny, nz, box)};
  });
}

nscert_status nscert_mesh_refine(const nscert_mesh* mesh,
                                 nscert_mesh** out_mesh) {
  if (nscert_status s =
          require(mesh && out_mesh, "mesh and out_mesh must be non-NULL"))
    return s;
  return guarded([&] {
    *out_mesh = new nscert_mesh{nscert::refine_uniform(mesh->mesh)};
  });
}

nscert_status nscert_mesh_get_stats(const nscert_mesh* mesh,
                                    nscert_mesh_stats* out_stats) {
  if (nscert_status s =
          require(mesh && out_stats, "mesh and out_stats must be non-NULL"))
    return s;
  return guarded([&] {
    const nscert::SpacePair spaces = nscert::build_spaces(mesh->mesh);
    const nscert::QualityReport q = nscert::quality_report(mesh->mesh);
    out_stats->vertex_count = mesh->mesh.vertex_count();
    out_stats->tet_count = mesh->mesh.tet_count();
    out_stats->boundary_face_count =
        static_cast<long long>(mesh->mesh.boundary_faces.size());
    out_stats->edge_count = spaces.num_edges;
    out_stats->velocity_dof_count = spaces.velocity_dofs();
    out_stats->pressure_dof_count = spaces.pressure_dofs();
    out_stats->h = mesh->mesh.h;
    out_stats->volume = mesh->mesh.box.volume();
    out_stats->diameter_ratio = q.diameter_ratio;
    out_stats->shape_regularity = q.shape_regularity;
  });
}

nscert_status nscert_mesh_write_vtk(const nscert_mesh* mesh,
                                    const char* path) {
  if (nscert_status s =
          require(mesh && path, "mesh and path must be non-NULL"))
    return s;
  return guarded([&] { nscert::write_vtk_mesh(mesh->mesh, path); });
}

void nscert_mesh_destroy(nscert_mesh* mesh) { delete mesh; }

nscert_status nscert_config_load(const char* path,
                                 nscert_config** out_config) {
  if (nscert_status s =
          require(path && out_config, "path and out_config must be non-NULL"))
    return s;
  return guarded([&] {
    *out_config = new nscert_config{nscert::parse_config_file(path)};
  });
}

nscert_status nscert_config_parse(const char* text,
                                  nscert_config** out_config) {
  if (nscert_status s =
          require(text && out_config, "text and out_config must be non-NULL"))
    return s;
  return guarded([&] {
    *out_config = new nscert_config{nscert::parse_config_text(text)};
  });
}

nscert_status nscert_config_set(nscert_config* config, const char* key,
                                const char* value) {
  if (nscert_status s = require(config && key && value,
                                "config, key, value must be non-NULL"))
    return s;
  return guarded([&] {
    nscert::config_set(config->config, key, value);
    nscert::validate_config(config->config);
  });
}

nscert_status nscert_config_echo(const nscert_config* config,
                                 char** out_text) {
  if (nscert_status s =
          require(config && out_text, "config and out_text must be non-NULL"))
    return s;
  return guarded(
      [&] { *out_text = dup_string(nscert::echo_config(config->config)); });
}

void nscert_config_destroy(nscert_config* config) { delete config; }

nscert_status nscert_run(const nscert_config* config, const char* out_dir) {
  if (nscert_status s =
          require(config && out_dir, "config and out_dir must be non-NULL"))
    return s;
  return guarded([&] { nscert::cmd_run(config->config, out_dir); });
}

nscert_status nscert_certify(const nscert_config* config, const char* out_dir,
                             char** out_verdict) {
  if (nscert_status s =
          require(config && out_dir, "config and out_dir must be non-NULL"))
    return s;
  return guarded([&] {
    const nscert::CertifyOutcome outcome =
        nscert::cmd_certify(config->config, out_dir);
    if (out_verdict) *out_verdict = dup_string(outcome.certificate.verdict);
  });
}

nscert_status nscert_convergence(const nscert_config* config,
                                 const char* out_dir, int levels) {
  if (nscert_status s =
          require(config && out_dir, "config and out_dir must be non-NULL"))
    return s;
  return guarded(
      [&] { nscert::cmd_convergence(config->config, out_dir, levels); });
}

nscert_status nscert_project(const nscert_config* config,
                             const char* out_dir) {
  if (nscert_status s =
          require(config && out_dir, "config and out_dir must be non-NULL"))
    return s;
  return guarded([&] { nscert::cmd_project(config->config, out_dir); });
}

nscert_status nscert_mesh_info(const nscert_config* config,
                               const char* out_dir, char** out_report) {
  if (nscert_status s =
          require(config && out_report, "config and out_report must be non-NULL"))
    return s;
  return guarded([&] {
    *out_report = dup_string(
        nscert::mesh_info(config->config, out_dir ? out_dir : ""));
  });
}

}  // extern "C"

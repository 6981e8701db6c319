/* nscert C API: batch driver for the linearized incompressible-flow solver
 * and its regularity certificate harness. All functions return NSCERT_OK on
 * success; on failure they return an error code and leave a message readable
 * through nscert_last_error() (thread-local). Handles are opaque and must be
 * released with the matching _destroy function. Strings returned through
 * char** out-parameters are heap-allocated; release them with
 * nscert_string_free.
 */
#ifndef NSCERT_H
#define NSCERT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nscert_status {
  NSCERT_OK = 0,
  NSCERT_ERROR_INVALID_ARGUMENT = 1,
  NSCERT_ERROR_PARSE = 2,
  NSCERT_ERROR_CONFIG = 3,
  NSCERT_ERROR_SOLVER = 4,
  NSCERT_ERROR_IO = 5,
  NSCERT_ERROR_INTERNAL = 6
} nscert_status;

typedef struct nscert_mesh nscert_mesh;
typedef struct nscert_config nscert_config;

/* Message for the most recent failure on this thread; empty string if none. */
const char* nscert_last_error(void);

void nscert_string_free(char* s);

/* ---- meshes -------------------------------------------------------------
 * extents = {x0, y0, z0, x1, y1, z1}; pass NULL for the unit cube. */
nscert_status nscert_mesh_create_box(int nx, int ny, int nz,
                                     const double* extents,
                                     nscert_mesh** out_mesh);
nscert_status nscert_mesh_refine(const nscert_mesh* mesh,
                                 nscert_mesh** out_mesh);

typedef struct nscert_mesh_stats {
  long long vertex_count;
  long long tet_count;
  long long boundary_face_count;
  long long edge_count;
  long long velocity_dof_count;
  long long pressure_dof_count;
  double h;
  double volume;
  double diameter_ratio;
  double shape_regularity;
} nscert_mesh_stats;

nscert_status nscert_mesh_get_stats(const nscert_mesh* mesh,
                                    nscert_mesh_stats* out_stats);
nscert_status nscert_mesh_write_vtk(const nscert_mesh* mesh, const char* path);
void nscert_mesh_destroy(nscert_mesh* mesh);

/* ---- configuration ------------------------------------------------------ */
nscert_status nscert_config_load(const char* path, nscert_config** out_config);
nscert_status nscert_config_parse(const char* text,
                                  nscert_config** out_config);
/* Assign one "key = value" pair with the same validation as the file parser;
 * re-validates the whole config. */
nscert_status nscert_config_set(nscert_config* config, const char* key,
                                const char* value);
nscert_status nscert_config_echo(const nscert_config* config, char** out_text);
void nscert_config_destroy(nscert_config* config);

/* ---- commands -----------------------------------------------------------
 * Verdicts are command output, never error codes: a "conditions not met"
 * certificate still returns NSCERT_OK. */
nscert_status nscert_run(const nscert_config* config, const char* out_dir);
nscert_status nscert_certify(const nscert_config* config, const char* out_dir,
                             char** out_verdict /* may be NULL */);
nscert_status nscert_convergence(const nscert_config* config,
                                 const char* out_dir, int levels);
nscert_status nscert_project(const nscert_config* config, const char* out_dir);
/* Pass out_dir = NULL to skip the mesh.vtk export. */
nscert_status nscert_mesh_info(const nscert_config* config,
                               const char* out_dir, char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* NSCERT_H */

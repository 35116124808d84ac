/* tacf: tri-attention correlation-filter tracking library.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local error message retrievable via tacf_last_error(). All
 * functions return TACF_OK (0) on success unless documented otherwise.
 */

#ifndef TACF_TACF_H_
#define TACF_TACF_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum tacf_status {
  TACF_OK = 0,
  TACF_ERR_INVALID_ARG = 1,
  TACF_ERR_INVALID_CONFIG = 2,
  TACF_ERR_IO = 3,
  TACF_ERR_FORMAT = 4,
  TACF_ERR_RUNTIME = 5
};

typedef struct tacf_tracker_s tacf_tracker;
typedef struct tacf_sequence_s tacf_sequence;

/* Axis-aligned box, top-left convention, pixels. */
typedef struct tacf_rect_s {
  double x, y, w, h;
} tacf_rect;

typedef struct tacf_config_s {
  double lambda1;        /* filter regularization */
  double lambda2;        /* context regularization */
  int context_interval;  /* frames between context-learning updates (f_c) */
  int context_patches;   /* context patch count (S) */
  double beta_t;         /* dimensional-attention activation threshold */
  double eta;            /* model learning rate */
  double padding;        /* search region scale */
  int cell_size;         /* feature cell size in pixels */
  double kernel_sigma;   /* Gaussian kernel width */
  double sigma_factor;   /* regression target width factor */
  double gamma;          /* motion-factor base gain */
  int template_size;     /* padded region resized to ~template_size^2 px */
  double context_offset; /* context patch offset in object sizes */
  int use_ca, use_da, use_sa; /* attention stage switches (0/1) */
  const char* cn_table_path;  /* NULL or empty: built-in color-name table */
} tacf_config;

typedef struct tacf_telemetry_s {
  int frame;
  tacf_rect box;
  double peak;
  double pme;
  double gamma_t;
  double ms_detect;
  double ms_train;
  int context_frame;
} tacf_telemetry;

const char* tacf_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* tacf_last_error(void);

void tacf_config_default(tacf_config* cfg);

/* --- frame-level tracking ------------------------------------------- */

int tacf_tracker_create(tacf_tracker** out, const tacf_config* cfg);
void tacf_tracker_destroy(tacf_tracker* tracker);

/* pixels: row-major interleaved 8-bit buffer, 1 or 3 channels. */
int tacf_tracker_init(tacf_tracker* tracker, const uint8_t* pixels, int width,
                      int height, int channels, tacf_rect init_box);
int tacf_tracker_step(tacf_tracker* tracker, const uint8_t* pixels, int width,
                      int height, int channels, tacf_rect* out_box,
                      tacf_telemetry* telemetry /* may be NULL */);

/* --- sequences ------------------------------------------------------- */

int tacf_sequence_load(tacf_sequence** out, const char* dir);
/* scenario_json: JSON text (not a path). seed_override applies when
 * has_seed_override != 0. */
int tacf_sequence_synth(tacf_sequence** out, const char* scenario_json,
                        uint64_t seed_override, int has_seed_override);
int tacf_sequence_save(const tacf_sequence* seq, const char* dir);
int tacf_sequence_length(const tacf_sequence* seq);
int tacf_sequence_name(const tacf_sequence* seq, char* buf, size_t buf_size);
/* present is set to 0 for absent (NaN) ground-truth annotations. */
int tacf_sequence_gt(const tacf_sequence* seq, int frame_index, tacf_rect* out,
                     int* present);
/* Two-call pattern: query the frame shape, then fill a caller buffer of
 * width*height*channels bytes (row-major interleaved, RGB order). */
int tacf_sequence_frame_info(const tacf_sequence* seq, int frame_index,
                             int* width, int* height, int* channels);
int tacf_sequence_frame_pixels(const tacf_sequence* seq, int frame_index,
                               uint8_t* buf, size_t buf_size);
void tacf_sequence_destroy(tacf_sequence* seq);

/* --- batch runs (write results/telemetry/metrics/manifest files) ----- */

typedef struct tacf_run_options_s {
  const char* out_dir;
  int workers;          /* bench only; >= 1 */
  int verbose;          /* adds per-channel attention CSV */
  const char* command;  /* recorded in the manifest; may be NULL */
  uint64_t seed;        /* recorded in the manifest when has_seed != 0 */
  int has_seed;
} tacf_run_options;

int tacf_run_track(const tacf_sequence* seq, const tacf_config* cfg,
                   const tacf_run_options* opts);
/* Returns TACF_OK if at least one sequence succeeded; failures are recorded
 * per sequence in aggregate.json. */
int tacf_run_bench(const char* dataset_root, const tacf_config* cfg,
                   const tacf_run_options* opts);
int tacf_run_ablation(const tacf_sequence* seq, const tacf_config* cfg,
                      const tacf_run_options* opts);

/* --- utilities ------------------------------------------------------- */

int tacf_cn_table_write(const char* path);
int tacf_iou(tacf_rect a, tacf_rect b, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TACF_TACF_H_ */

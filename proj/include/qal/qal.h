// Copyright 2026 The QAL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * libqal: C interface to the Quantum Abstraction Layer.
 *
 * A device handle owns one virtual QPX accelerator plus the host-side job
 * queue in front of it. Job operations go through qal_ioctl() with one of
 * the QAL_CMD_* commands and its fixed argument record; the qal_submit()
 * family are one-line wrappers over it. Every call returns a qal_status;
 * on failure qal_last_error() describes the most recent error on the
 * calling thread.
 *
 * Handles are safe to share between threads. Buffers returned through
 * qal_buffer must be released with qal_buffer_free().
 */
#ifndef QAL_QAL_H_
#define QAL_QAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QAL_BUILDING_LIBRARY)
#define QAL_API __attribute__((visibility("default")))
#else
#define QAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qal_status {
  QAL_OK = 0,
  QAL_ERR_INVALID_ARGUMENT = 1,
  QAL_ERR_INVALID_CIRCUIT = 2,
  QAL_ERR_BAD_MAGIC = 3,
  QAL_ERR_UNSUPPORTED_VERSION = 4,
  QAL_ERR_TRUNCATED_PAYLOAD = 5,
  QAL_ERR_BAD_OPCODE = 6,
  QAL_ERR_QUBIT_OUT_OF_RANGE = 7,
  QAL_ERR_MALFORMED_PAYLOAD = 8,
  QAL_ERR_SYNTAX = 9,
  QAL_ERR_SEMANTIC = 10,
  QAL_ERR_QUBIT_COUNT_OUT_OF_RANGE = 11,
  QAL_ERR_NON_UNITARY_OPCODE = 12,
  QAL_ERR_NON_UNITARY_CIRCUIT = 13,
  QAL_ERR_UNSUPPORTED_OPCODE = 14,
  QAL_ERR_DISCONNECTED_COUPLING = 15,
  QAL_ERR_CONFIG_INVALID = 16,
  QAL_ERR_BAD_HEADER = 17,
  QAL_ERR_QUEUE_SATURATED = 18,
  QAL_ERR_UNKNOWN_JOB = 19,
  QAL_ERR_TIMED_OUT = 20,
  QAL_ERR_NOT_FINISHED = 21,
  QAL_ERR_JOB_FAILED = 22,
  QAL_ERR_TOO_LATE_TO_CANCEL = 23,
  QAL_ERR_WRONG_MODE = 24,
  QAL_ERR_IO = 25,
  QAL_ERR_BUFFER_TOO_SMALL = 26,
  QAL_ERR_INTERNAL = 27
} qal_status;

typedef enum qal_job_state {
  QAL_JOB_CREATED = 0,
  QAL_JOB_QUEUED = 1,
  QAL_JOB_DISPATCHED = 2,
  QAL_JOB_RUNNING = 3,
  QAL_JOB_DONE = 4,
  QAL_JOB_FAILED = 5,
  QAL_JOB_CANCELLED = 6
} qal_job_state;

typedef enum qal_mode { QAL_MODE_FIDELITY = 0, QAL_MODE_LATENCY = 1 } qal_mode;

typedef enum qal_format { QAL_FORMAT_TEXT = 0, QAL_FORMAT_JSON = 1, QAL_FORMAT_CSV = 2 } qal_format;

typedef uint64_t qal_job_id;
typedef struct qal_device qal_device;
typedef struct qal_report qal_report;

typedef struct qal_buffer {
  uint8_t* data; /* text results are NUL-terminated; len excludes the NUL */
  size_t len;
} qal_buffer;

#define QAL_MAX_PRIORITY 7u
#define QAL_SUBMIT_LATENCY 0x1u /* per-job latency-mode override */
#define QAL_MAX_EDGES 120u
#define QAL_WAIT_FOREVER (-1)

/* ---- command set ---------------------------------------------------- */

typedef enum qal_cmd {
  QAL_CMD_SUBMIT = 1,
  QAL_CMD_CHECK = 2,
  QAL_CMD_WAIT = 3,
  QAL_CMD_GET_RESULTS = 4,
  QAL_CMD_CANCEL = 5,
  QAL_CMD_QUERY = 6,
  QAL_CMD_FREE = 7
} qal_cmd;

typedef struct qal_submit_args {
  const uint8_t* payload; /* in: .qalb bytes */
  uint64_t payload_len;   /* in */
  uint32_t shots;         /* in: >= 1 */
  uint32_t priority;      /* in: 0 (highest) .. 7 */
  uint32_t flags;         /* in: QAL_SUBMIT_* */
  uint32_t reserved;      /* must be 0 */
  qal_job_id job_id;      /* out */
} qal_submit_args;

typedef struct qal_check_args {
  qal_job_id job_id; /* in */
  uint32_t state;    /* out: qal_job_state */
  uint32_t reserved;
} qal_check_args;

typedef struct qal_wait_args {
  qal_job_id job_id;  /* in */
  int64_t timeout_ns; /* in: QAL_WAIT_FOREVER or >= 0 */
  uint32_t state;     /* out: terminal qal_job_state */
  uint32_t reserved;
} qal_wait_args;

/* Outcome keys use bit k for classical bit k. With capacity too small the
 * call fails with QAL_ERR_BUFFER_TOO_SMALL and num_entries holds the size
 * needed. On QAL_ERR_JOB_FAILED device_status carries the device code. */
typedef struct qal_results_args {
  qal_job_id job_id;     /* in */
  uint64_t* outcomes;    /* in: caller array, capacity entries */
  uint64_t* counts;      /* in: caller array, capacity entries */
  uint64_t capacity;     /* in */
  uint64_t num_entries;  /* out */
  uint64_t shots;        /* out */
  uint64_t exec_time_ns; /* out: model execution time */
  uint32_t num_cbits;    /* out */
  uint32_t device_status; /* out */
} qal_results_args;

typedef struct qal_cancel_args {
  qal_job_id job_id; /* in */
} qal_cancel_args;

typedef struct qal_free_args {
  qal_job_id job_id; /* in */
} qal_free_args;

typedef struct qal_edge {
  uint32_t a;
  uint32_t b;
} qal_edge;

typedef struct qal_device_info {
  uint32_t num_qubits;
  uint32_t caps;              /* CAPS register */
  uint64_t native_gates;      /* bit n set: opcode n is native */
  uint32_t active_mode;       /* qal_mode */
  uint32_t sq_depth;
  uint32_t cq_depth;
  uint32_t num_edges;
  qal_edge edges[QAL_MAX_EDGES]; /* declaration order */
} qal_device_info;

typedef struct qal_query_args {
  qal_device_info info; /* out */
} qal_query_args;

QAL_API qal_status qal_ioctl(qal_device* dev, uint32_t cmd, void* args);

/* ---- device lifecycle ----------------------------------------------- */

/* config_json may be NULL for the default device. Recognised keys:
 * num_qubits, coupling ("line" | "ring" | "full" | [[a,b],...]), mode,
 * bypass_transpile, seed, timing (object), timing_file (path), sq_depth,
 * cq_depth, host_memory_bytes, cache_capacity, queue_high_water. */
QAL_API qal_status qal_device_open(const char* config_json, qal_device** out);
QAL_API void qal_device_close(qal_device* dev);

/* While paused, submitted jobs stay QUEUED. */
QAL_API qal_status qal_pause_dispatch(qal_device* dev);
QAL_API qal_status qal_resume_dispatch(qal_device* dev);

/* ---- command wrappers ----------------------------------------------- */

QAL_API qal_status qal_submit(qal_device* dev, const uint8_t* payload, uint64_t len, uint32_t shots,
                              uint32_t priority, uint32_t flags, qal_job_id* out);
QAL_API qal_status qal_check(qal_device* dev, qal_job_id job, qal_job_state* out);
QAL_API qal_status qal_wait(qal_device* dev, qal_job_id job, int64_t timeout_ns, qal_job_state* out);
QAL_API qal_status qal_get_results(qal_device* dev, qal_results_args* args);
QAL_API qal_status qal_cancel(qal_device* dev, qal_job_id job);
QAL_API qal_status qal_free_job(qal_device* dev, qal_job_id job);
QAL_API qal_status qal_query(qal_device* dev, qal_device_info* out);

/* ---- circuits ------------------------------------------------------- */

/* Text (.qalt) to binary (.qalb). Diagnostics carry "line:col". */
QAL_API qal_status qal_compile_text(const char* text, size_t len, qal_buffer* out);
/* Binary to canonical text. */
QAL_API qal_status qal_disassemble(const uint8_t* bytes, size_t len, qal_buffer* out);
QAL_API qal_status qal_instruction_count(const uint8_t* bytes, size_t len, uint32_t* out);

/* ---- rendering ------------------------------------------------------ */

QAL_API qal_status qal_render_device_info(qal_device* dev, qal_format fmt, qal_buffer* out);
QAL_API qal_status qal_render_status(qal_device* dev, qal_job_id job, qal_format fmt, qal_buffer* out);
/* Histogram lines sorted by bitstring, classical bit 0 rightmost. */
QAL_API qal_status qal_render_results(qal_device* dev, qal_job_id job, qal_format fmt, qal_buffer* out);

/* ---- latency profiling ---------------------------------------------- */

typedef struct qal_workload_item {
  const uint8_t* payload;
  uint64_t payload_len;
  uint32_t shots;
  uint32_t priority;
} qal_workload_item;

/* Requires a latency-mode device. Runs the whole workload from an idle
 * engine and decomposes each job's model-time latency. */
QAL_API qal_status qal_profile_run(qal_device* dev, const qal_workload_item* items, size_t count,
                                   qal_report** out);
QAL_API qal_status qal_report_render(const qal_report* report, qal_format fmt, qal_buffer* out);
QAL_API uint64_t qal_report_job_count(const qal_report* report);
QAL_API void qal_report_free(qal_report* report);

/* ---- misc ----------------------------------------------------------- */

QAL_API void qal_buffer_free(qal_buffer* buf);
QAL_API const char* qal_last_error(void);
QAL_API const char* qal_status_string(qal_status status);
QAL_API const char* qal_job_state_string(qal_job_state state);
QAL_API const char* qal_version(void);

#ifdef __cplusplus
}
#endif

#endif /* QAL_QAL_H_ */

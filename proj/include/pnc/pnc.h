#ifndef PNC_PNC_H
#define PNC_PNC_H

/* C interface to the asynchronous PNC baseband simulator.
 *
 * Every call returns a pnc_status; on failure pnc_last_error() describes the
 * problem for the calling thread. Handles are opaque and owned by the caller.
 * Symbols cross the boundary as Gray labels (bit 0 real sign, bit 1 imaginary
 * sign, 0 = positive); bits are one per byte, values 0 or 1. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PNC_API __declspec(dllexport)
#else
#define PNC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pnc_status {
    PNC_OK = 0,
    PNC_ERR_INVALID_ARGUMENT = 1,
    PNC_ERR_IO = 2,
    PNC_ERR_INTERNAL = 3
} pnc_status;

typedef enum pnc_modulation { PNC_BPSK = 0, PNC_QPSK = 1 } pnc_modulation;

typedef enum pnc_scheme {
    PNC_SCHEME_SYNC = 0,
    PNC_SCHEME_UPNC = 1,
    PNC_SCHEME_JTCNC = 2,
    PNC_SCHEME_XORCD = 3
} pnc_scheme;

typedef struct pnc_ber_record {
    pnc_scheme scheme;
    pnc_modulation modulation;
    double delta;
    double phi;
    double ebn0_db;
    uint64_t packets;
    uint64_t bit_errors;
    uint64_t total_bits;
    double ber;
    double ci_lo;
    double ci_hi;
    uint64_t nonconverged;
} pnc_ber_record;

typedef struct pnc_sweep pnc_sweep;
typedef struct pnc_frame pnc_frame;
typedef struct pnc_code pnc_code;

PNC_API const char* pnc_version(void);
PNC_API const char* pnc_last_error(void);
PNC_API const char* pnc_status_string(pnc_status s);

/* ---- sweeps ---- */

PNC_API pnc_status pnc_sweep_create(pnc_scheme scheme, pnc_modulation mod, pnc_sweep** out);
PNC_API void pnc_sweep_destroy(pnc_sweep* s);
PNC_API pnc_status pnc_sweep_set_deltas(pnc_sweep* s, const double* v, size_t n);
PNC_API pnc_status pnc_sweep_set_phis(pnc_sweep* s, const double* v, size_t n);
PNC_API pnc_status pnc_sweep_set_ebn0(pnc_sweep* s, const double* v, size_t n);
PNC_API pnc_status pnc_sweep_set_packets(pnc_sweep* s, uint64_t packets_per_point);
PNC_API pnc_status pnc_sweep_set_bits(pnc_sweep* s, uint64_t bits_per_packet);
PNC_API pnc_status pnc_sweep_set_seed(pnc_sweep* s, uint64_t master_seed);
PNC_API pnc_status pnc_sweep_set_code(pnc_sweep* s, int q, uint64_t interleaver_seed);
PNC_API pnc_status pnc_sweep_set_limits(pnc_sweep* s, int max_iters, double tol);
PNC_API pnc_status pnc_sweep_set_threads(pnc_sweep* s, unsigned threads);
PNC_API pnc_status pnc_sweep_set_rate_shift(pnc_sweep* s, int enabled);

/* Runs the whole grid. csv_path may be NULL; with resume != 0 rows already in
 * the file for the same point and packet count are reused. */
PNC_API pnc_status pnc_sweep_run(pnc_sweep* s, const char* csv_path, int resume);
PNC_API pnc_status pnc_sweep_record_count(const pnc_sweep* s, size_t* out);
PNC_API pnc_status pnc_sweep_record(const pnc_sweep* s, size_t i, pnc_ber_record* out);

/* ---- single frames ---- */

/* Modulates nbits bits per node, superimposes them at the relay and adds
 * noise drawn from seed (skipped when noiseless != 0). */
PNC_API pnc_status pnc_frame_transmit(pnc_modulation mod, const uint8_t* bits_a, const uint8_t* bits_b,
                                      size_t nbits, double delta, double phi, double esn0_db, uint64_t seed,
                                      int noiseless, pnc_frame** out);
/* Same, for label sequences of n symbols each (for example RA codewords). */
PNC_API pnc_status pnc_frame_transmit_symbols(pnc_modulation mod, const uint8_t* labels_a,
                                              const uint8_t* labels_b, size_t n, double delta, double phi,
                                              double esn0_db, uint64_t seed, int noiseless, pnc_frame** out);
PNC_API void pnc_frame_destroy(pnc_frame* f);
PNC_API pnc_status pnc_frame_symbol_count(const pnc_frame* f, size_t* out);
PNC_API pnc_status pnc_frame_sample_count(const pnc_frame* f, size_t* out);
/* Interleaved re/im pairs; out holds 2 * sample_count doubles. Absent samples
 * of synchronous frames read as zero. */
PNC_API pnc_status pnc_frame_samples(const pnc_frame* f, double* out, size_t capacity);

/* Joint posteriors P(x_A[n] = a, x_B[n] = b), n = 0..N-1, written row-major as
 * out[n * k * k + a * k + b] with k the constellation size. */
PNC_API pnc_status pnc_upnc_posteriors(const pnc_frame* f, double* out, size_t capacity);
/* Decided XOR labels, N entries. */
PNC_API pnc_status pnc_upnc_decide(const pnc_frame* f, uint8_t* out, size_t capacity);
/* Synchronous symbol-by-symbol benchmark; the frame must have delta = 0. */
PNC_API pnc_status pnc_sync_decide(const pnc_frame* f, uint8_t* out, size_t capacity);

/* ---- repeat-accumulate coding ---- */

PNC_API pnc_status pnc_code_create(size_t m, int q, uint64_t interleaver_seed, pnc_code** out);
PNC_API void pnc_code_destroy(pnc_code* c);
PNC_API pnc_status pnc_code_length(const pnc_code* c, size_t* out);
/* The interleaver as 0-based indices: code position n reads repeated symbol
 * out[n]. Holds code_length entries. */
PNC_API pnc_status pnc_code_interleaver(const pnc_code* c, uint32_t* out, size_t capacity);
/* m source labels in, q * m code labels out. */
PNC_API pnc_status pnc_code_encode(const pnc_code* c, pnc_modulation mod, const uint8_t* source, size_t m,
                                   uint8_t* out, size_t capacity);
/* Decode the XOR source packet (m labels) from a frame carrying codewords.
 * iterations may be NULL. */
PNC_API pnc_status pnc_jtcnc_decode(const pnc_code* c, const pnc_frame* f, int max_iters, double tol,
                                    uint8_t* out, size_t capacity, int* iterations);
PNC_API pnc_status pnc_xorcd_decode(const pnc_code* c, const pnc_frame* f, int max_iters, double tol,
                                    uint8_t* out, size_t capacity, int* iterations);

/* ---- output ---- */

/* Reads a sweep CSV and writes one series file per curve into out_dir;
 * *files_written may be NULL. */
PNC_API pnc_status pnc_plotdata(const char* csv_path, const char* out_dir, size_t* files_written);

#ifdef __cplusplus
}
#endif

#endif

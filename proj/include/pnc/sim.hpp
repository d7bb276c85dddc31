#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnc/channel.hpp"
#include "pnc/constellation.hpp"
#include "pnc/ra_code.hpp"

namespace pnc {

enum class Scheme : std::uint8_t { sync_bench = 0, bp_upnc = 1, jt_cnc = 2, xor_cd = 3 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);
inline bool is_coded(Scheme s) noexcept { return s == Scheme::jt_cnc || s == Scheme::xor_cd; }

struct SweepConfig {
    Scheme scheme = Scheme::bp_upnc;
    Modulation modulation = Modulation::bpsk;
    std::vector<double> delta_list{0.0};
    std::vector<double> phi_list{0.0};
    std::vector<double> ebn0_db_list{0.0};
    std::size_t packets_per_point = 2000;
    std::size_t bits_per_packet = 2048;  // source bits per node and packet
    std::uint64_t master_seed = 1;
    int q = 3;
    std::uint64_t interleaver_seed = 1;
    DecoderLimits limits{};
    bool rate_shift = true;  // x-axis of coded schemes is per source bit
    unsigned threads = 0;    // 0: hardware concurrency; PNC_SIM_THREADS caps either

    // Symbols per node and packet: M for coded schemes, N otherwise.
    std::size_t symbols_per_packet() const;
    RaConfig ra_config() const;

    // Throws std::invalid_argument on empty lists, out-of-range offsets or a
    // bit count that does not fill whole symbols.
    void validate() const;
};

struct BerRecord {
    Scheme scheme = Scheme::bp_upnc;
    Modulation modulation = Modulation::bpsk;
    double delta = 0.0;
    double phi = 0.0;
    double ebn0_db = 0.0;
    std::uint64_t packets = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t total_bits = 0;
    double ber = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t nonconverged = 0;
};

// 95% Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_ci95(std::uint64_t k, std::uint64_t n);

double ebn0_to_esn0(double ebn0_db, Modulation mod, Scheme scheme, int q, bool rate_shift = true);

// Frames depend on the point through (modulation, delta, phi, Eb/N0) only, so
// schemes evaluated at the same point see identical packets and noise.
std::uint64_t point_id(Modulation mod, double delta, double phi, double ebn0_db);
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t point, std::uint64_t trial);

// Everything a decoder gets to see (and the truth the harness scores against).
struct Trial {
    ChannelParams params;
    SourcePacket source_a;
    SourcePacket source_b;
    Codeword code_a;
    Codeword code_b;
    ReceivedFrame frame;
};

// Decides the XOR packet (source symbols for coded schemes, channel symbols
// otherwise). Clears `converged` when an iterative decode hit its cap.
using TrialDecoder = std::function<SourcePacket(const Trial&, bool& converged)>;

struct TrialOutcome {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    bool converged = true;

    bool operator==(const TrialOutcome&) const = default;
};

Trial make_trial(const SweepConfig& cfg, const RaConfig* ra, double delta, double phi, double ebn0_db,
                 std::uint64_t trial_index, bool noiseless = false);

// Factory producing one decoder per worker thread; the default decodes with
// the configured scheme.
using DecoderFactory = std::function<TrialDecoder()>;
DecoderFactory default_decoder_factory(const SweepConfig& cfg);

std::vector<TrialOutcome> run_trials(const SweepConfig& cfg, double delta, double phi, double ebn0_db,
                                     std::uint64_t first, std::uint64_t count,
                                     const DecoderFactory& factory = {});

BerRecord run_point(const SweepConfig& cfg, double delta, double phi, double ebn0_db,
                    const DecoderFactory& factory = {});

unsigned resolve_threads(unsigned requested);

// Cross product delta x phi x Eb/N0 in list order. With a csv path the records
// are written there; with resume, rows already present for the same point and
// packet count are reused instead of recomputed.
std::vector<BerRecord> run_sweep(const SweepConfig& cfg, const std::optional<std::filesystem::path>& csv = {},
                                 bool resume = false,
                                 const std::function<void(const BerRecord&)>& on_record = {});

inline constexpr std::string_view csv_header =
    "scheme,modulation,delta,phi,ebn0_db,packets,bit_errors,total_bits,ber,ci_lo,ci_hi,nonconverged";

std::string format_double(double v);
std::string to_csv_row(const BerRecord& r);
void write_csv(std::ostream& os, const std::vector<BerRecord>& records);
std::vector<BerRecord> read_csv(std::istream& is);
std::vector<BerRecord> read_csv_file(const std::filesystem::path& path);
void write_csv_file(const std::filesystem::path& path, const std::vector<BerRecord>& records);

// One whitespace-separated series file per (scheme, modulation, delta, phi)
// curve, rows sorted by Eb/N0. Returns the files written.
std::vector<std::filesystem::path> write_plot_data(const std::vector<BerRecord>& records,
                                                   const std::filesystem::path& out_dir);

}  // namespace pnc

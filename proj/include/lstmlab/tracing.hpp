#pragma once

#include <string>
#include <vector>

#include "lstmlab/languages.hpp"
#include "lstmlab/lstm.hpp"

namespace lstmlab {

/// Snapshot of one timestep of a zero-state run.
struct TraceRecord {
  int t = 0;
  Symbol input_symbol = Symbol::A;
  std::vector<double> h;
  std::vector<double> c;
  SymbolSet predicted;
};

/// Timestep indices where the input symbol changes, e.g. {100, 200, 300}
/// for a^100 b^100 c^100 d^100. Phase p spans [boundary(p-1), boundary(p)).
struct PhaseSegmentation {
  std::vector<int> boundaries;
};

enum class Direction { Up, Down };

struct CounterUnit {
  int unit = 0;
  std::vector<Direction> phase_directions;
};

/// Full per-timestep h, c and decoded prediction; pure read of the model.
std::vector<TraceRecord> trace_sequence(const LstmParameters& p, LanguageId lang, int n);

/// Boundaries of the same-symbol phases of generate_sample(lang, n).
PhaseSegmentation phase_boundaries(LanguageId lang, int n);

/// Spearman rank correlation with average ranks for ties; 0 when either
/// series is constant or shorter than two points.
double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Correlation of each unit's cell-state series with time, one value per
/// (unit, phase).
std::vector<std::vector<double>> counter_stats(const std::vector<TraceRecord>& trace,
                                               const PhaseSegmentation& seg);

/// Units whose cell state moves monotonically with time in every phase
/// (|rho| >= rho_min), with the per-phase direction. Empty if none qualify.
std::vector<CounterUnit> detect_counters(const std::vector<TraceRecord>& trace,
                                         const PhaseSegmentation& seg,
                                         double rho_min = 0.9);

/// Compact run-length notation for a decoded sequence, e.g.
/// "(a/b)^5 b^4 ⊣". Sets with several members are parenthesized; the
/// count is omitted for runs of length one; empty sets render as "{}".
std::string render_run_length(const std::vector<SymbolSet>& sets);

/// Inverse of render_run_length.
std::vector<SymbolSet> expand_run_length(const std::string& text);

/// Decoded outputs of a zero-state run on generate_sample(lang, n) in
/// run-length notation, for eyeballing near-miss failures.
std::string probe_failure_mode(const LstmParameters& p, LanguageId lang, int n);

/// Long-format state CSV (t,input,unit,h,c) and prediction sidecar
/// (t,input,predicted_set).
void write_trace_csv(const std::string& states_path, const std::string& predictions_path,
                     const std::vector<TraceRecord>& trace);

}  // namespace lstmlab

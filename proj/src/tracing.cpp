#include "lstmlab/tracing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lstmlab/encoding.hpp"

namespace lstmlab {

std::vector<TraceRecord> trace_sequence(const LstmParameters& p, LanguageId lang, int n) {
  const Sample sample = generate_sample(lang, n);
  const SequenceResult run = run_sequence(p, sample);
  std::vector<TraceRecord> trace;
  trace.reserve(sample.input.size());
  for (std::size_t t = 0; t < sample.input.size(); ++t) {
    TraceRecord rec;
    rec.t = static_cast<int>(t);
    rec.input_symbol = sample.input[t];
    rec.h = run.states[t].h;
    rec.c = run.states[t].c;
    rec.predicted = decode_prediction(lang, run.outputs[t]);
    trace.push_back(std::move(rec));
  }
  return trace;
}

PhaseSegmentation phase_boundaries(LanguageId lang, int n) {
  if (n < 1) throw std::invalid_argument("phase_boundaries: n must be >= 1");
  PhaseSegmentation seg;
  for (int block = 1; block < input_dim(lang); ++block) seg.boundaries.push_back(block * n);
  return seg;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("spearman_rank_correlation: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::vector<double>> counter_stats(const std::vector<TraceRecord>& trace,
                                               const PhaseSegmentation& seg) {
  if (trace.empty()) throw std::invalid_argument("counter_stats: empty trace");
  const int T = static_cast<int>(trace.size());
  std::vector<int> starts{0};
  for (int b : seg.boundaries) {
    if (b <= starts.back() || b >= T)
      throw std::invalid_argument("counter_stats: boundaries must be strictly increasing and "
                                  "inside the sequence");
    starts.push_back(b);
  }
  starts.push_back(T);

  const std::size_t units = trace.front().c.size();
  const std::size_t phases = starts.size() - 1;
  std::vector<std::vector<double>> rho(units, std::vector<double>(phases, 0.0));
  for (std::size_t ph = 0; ph < phases; ++ph) {
    const int begin = starts[ph];
    const int end = starts[ph + 1];
    std::vector<double> time(static_cast<std::size_t>(end - begin));
    std::iota(time.begin(), time.end(), 0.0);
    for (std::size_t u = 0; u < units; ++u) {
      std::vector<double> series;
      series.reserve(time.size());
      for (int t = begin; t < end; ++t)
        series.push_back(trace[static_cast<std::size_t>(t)].c[u]);
      rho[u][ph] = spearman_rank_correlation(time, series);
    }
  }
  return rho;
}

std::vector<CounterUnit> detect_counters(const std::vector<TraceRecord>& trace,
                                         const PhaseSegmentation& seg, double rho_min) {
  const std::vector<std::vector<double>> rho = counter_stats(trace, seg);
  std::vector<CounterUnit> counters;
  for (std::size_t u = 0; u < rho.size(); ++u) {
    bool monotone_everywhere = true;
    CounterUnit unit;
    unit.unit = static_cast<int>(u);
    for (double r : rho[u]) {
      if (std::fabs(r) < rho_min) {
        monotone_everywhere = false;
        break;
      }
      unit.phase_directions.push_back(r > 0 ? Direction::Up : Direction::Down);
    }
    if (monotone_everywhere) counters.push_back(std::move(unit));
  }
  return counters;
}

namespace {

std::string set_token(const SymbolSet& set) {
  if (set.empty()) return "{}";
  if (set.size() == 1) return to_string(set);
  return "(" + to_string(set) + ")";
}

SymbolSet parse_set_token(const std::string& token) {
  if (token == "{}") return SymbolSet{};
  std::string inner = token;
  if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')')
    inner = inner.substr(1, inner.size() - 2);
  SymbolSet set;
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    const std::size_t slash = inner.find('/', pos);
    const std::string part = inner.substr(pos, slash == std::string::npos ? std::string::npos
                                                                          : slash - pos);
    if (part == "a") set.insert(Symbol::A);
    else if (part == "b") set.insert(Symbol::B);
    else if (part == "c") set.insert(Symbol::C);
    else if (part == "d") set.insert(Symbol::D);
    else if (part == "⊣") set.insert(Symbol::End);
    else throw std::invalid_argument("expand_run_length: bad symbol '" + part + "'");
    if (slash == std::string::npos) break;
    pos = slash + 1;
  }
  return set;
}

}  // namespace

std::string render_run_length(const std::vector<SymbolSet>& sets) {
  std::string out;
  std::size_t i = 0;
  while (i < sets.size()) {
    std::size_t j = i;
    while (j + 1 < sets.size() && sets[j + 1] == sets[i]) ++j;
    if (!out.empty()) out += ' ';
    out += set_token(sets[i]);
    const std::size_t count = j - i + 1;
    if (count > 1) out += "^" + std::to_string(count);
    i = j + 1;
  }
  return out;
}

std::vector<SymbolSet> expand_run_length(const std::string& text) {
  std::vector<SymbolSet> sets;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    std::size_t count = 1;
    const std::size_t caret = token.rfind('^');
    if (caret != std::string::npos && caret + 1 < token.size() &&
        token.find_first_not_of("0123456789", caret + 1) == std::string::npos) {
      count = std::stoul(token.substr(caret + 1));
      token = token.substr(0, caret);
    }
    const SymbolSet set = parse_set_token(token);
    sets.insert(sets.end(), count, set);
  }
  return sets;
}

std::string probe_failure_mode(const LstmParameters& p, LanguageId lang, int n) {
  const std::vector<TraceRecord> trace = trace_sequence(p, lang, n);
  std::vector<SymbolSet> predicted;
  predicted.reserve(trace.size());
  for (const TraceRecord& rec : trace) predicted.push_back(rec.predicted);
  return render_run_length(predicted);
}

void write_trace_csv(const std::string& states_path, const std::string& predictions_path,
                     const std::vector<TraceRecord>& trace) {
  std::ofstream states(states_path, std::ios::trunc);
  if (!states) throw std::runtime_error("cannot open for writing: " + states_path);
  states << "t,input,unit,h,c\n";
  char buf[96];
  for (const TraceRecord& rec : trace) {
    for (std::size_t u = 0; u < rec.h.size(); ++u) {
      std::snprintf(buf, sizeof(buf), "%d,%s,%zu,%.17g,%.17g", rec.t,
                    to_string(rec.input_symbol).c_str(), u, rec.h[u], rec.c[u]);
      states << buf << "\n";
    }
  }

  std::ofstream preds(predictions_path, std::ios::trunc);
  if (!preds) throw std::runtime_error("cannot open for writing: " + predictions_path);
  preds << "t,input,predicted_set\n";
  for (const TraceRecord& rec : trace)
    preds << rec.t << "," << to_string(rec.input_symbol) << "," << to_string(rec.predicted)
          << "\n";
}

}  // namespace lstmlab

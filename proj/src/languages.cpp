#include "lstmlab/languages.hpp"

#include <stdexcept>

namespace lstmlab {

std::vector<Symbol> SymbolSet::members() const {
  std::vector<Symbol> out;
  for (int i = 0; i < kSymbolCount; ++i) {
    Symbol s = static_cast<Symbol>(i);
    if (contains(s)) out.push_back(s);
  }
  return out;
}

int input_dim(LanguageId lang) {
  switch (lang) {
    case LanguageId::AnBn: return 2;
    case LanguageId::AnBnCn: return 3;
    case LanguageId::AnBnCnDn: return 4;
  }
  throw std::invalid_argument("input_dim: unknown language");
}

int output_dim(LanguageId lang) { return input_dim(lang) + 1; }

LanguageId language_for_input_dim(int d) {
  switch (d) {
    case 2: return LanguageId::AnBn;
    case 3: return LanguageId::AnBnCn;
    case 4: return LanguageId::AnBnCnDn;
  }
  throw std::invalid_argument("language_for_input_dim: no language has input dimension " +
                              std::to_string(d));
}

std::vector<Symbol> input_vocab(LanguageId lang) {
  std::vector<Symbol> v;
  for (int i = 0; i < input_dim(lang); ++i) v.push_back(static_cast<Symbol>(i));
  return v;
}

std::vector<Symbol> output_vocab(LanguageId lang) {
  std::vector<Symbol> v = input_vocab(lang);
  v.push_back(Symbol::End);
  return v;
}

int sequence_length(LanguageId lang, int n) {
  if (n < 1) throw std::invalid_argument("sequence_length: n must be >= 1");
  return input_dim(lang) * n;
}

Sample generate_sample(LanguageId lang, int n) {
  if (n < 1) throw std::invalid_argument("generate_sample: n must be >= 1");
  const int d = input_dim(lang);
  Sample sample;
  sample.language = lang;
  sample.n = n;
  sample.input.reserve(static_cast<std::size_t>(d) * n);
  for (int block = 0; block < d; ++block)
    sample.input.insert(sample.input.end(), n, static_cast<Symbol>(block));

  // Targets: the first b makes the rest of the string deterministic.
  auto& t = sample.targets;
  t.reserve(sample.input.size());
  t.insert(t.end(), n, SymbolSet{Symbol::A, Symbol::B});
  t.insert(t.end(), n - 1, SymbolSet{Symbol::B});
  if (d >= 3) t.insert(t.end(), n, SymbolSet{Symbol::C});
  if (d >= 4) t.insert(t.end(), n, SymbolSet{Symbol::D});
  t.push_back(SymbolSet{Symbol::End});
  return sample;
}

std::string to_string(LanguageId lang) {
  switch (lang) {
    case LanguageId::AnBn: return "anbn";
    case LanguageId::AnBnCn: return "anbncn";
    case LanguageId::AnBnCnDn: return "anbncndn";
  }
  throw std::invalid_argument("to_string: unknown language");
}

std::string to_string(Symbol s) {
  switch (s) {
    case Symbol::A: return "a";
    case Symbol::B: return "b";
    case Symbol::C: return "c";
    case Symbol::D: return "d";
    case Symbol::End: return "⊣";
  }
  throw std::invalid_argument("to_string: unknown symbol");
}

std::string to_string(const SymbolSet& set) {
  if (set.empty()) return "{}";
  std::string out;
  for (Symbol s : set.members()) {
    if (!out.empty()) out += '/';
    out += to_string(s);
  }
  return out;
}

LanguageId parse_language(const std::string& name) {
  if (name == "anbn") return LanguageId::AnBn;
  if (name == "anbncn") return LanguageId::AnBnCn;
  if (name == "anbncndn") return LanguageId::AnBnCnDn;
  throw std::invalid_argument("unknown language '" + name +
                              "' (expected anbn, anbncn or anbncndn)");
}

std::string dump_sample(const Sample& sample) {
  std::string line;
  for (Symbol s : sample.input) line += to_string(s);
  line += '\t';
  for (std::size_t i = 0; i < sample.targets.size(); ++i) {
    if (i > 0) line += ' ';
    line += to_string(sample.targets[i]);
  }
  return line;
}

}  // namespace lstmlab

#include "lstmlab/encoding.hpp"

#include <stdexcept>

namespace lstmlab {

Vector encode_input(LanguageId lang, Symbol s) {
  const int d = input_dim(lang);
  const int idx = static_cast<int>(s);
  if (idx >= d)
    throw std::invalid_argument("encode_input: symbol " + to_string(s) +
                                " is not in the input vocabulary of " + to_string(lang));
  Vector v(static_cast<std::size_t>(d), 0.0);
  v[static_cast<std::size_t>(idx)] = 1.0;
  return v;
}

Vector encode_target(LanguageId lang, const SymbolSet& set) {
  if (set.empty()) throw std::invalid_argument("encode_target: empty symbol set");
  const int dim = output_dim(lang);
  Vector v(static_cast<std::size_t>(dim), 0.0);
  for (Symbol s : set.members()) {
    const int idx = s == Symbol::End ? dim - 1 : static_cast<int>(s);
    if (s != Symbol::End && idx >= input_dim(lang))
      throw std::invalid_argument("encode_target: symbol " + to_string(s) +
                                  " is not in the output vocabulary of " + to_string(lang));
    v[static_cast<std::size_t>(idx)] = 1.0;
  }
  return v;
}

SymbolSet decode_prediction(LanguageId lang, const Vector& activations) {
  const int dim = output_dim(lang);
  if (static_cast<int>(activations.size()) != dim)
    throw std::invalid_argument("decode_prediction: expected " + std::to_string(dim) +
                                " activations, got " + std::to_string(activations.size()));
  SymbolSet set;
  for (int i = 0; i < dim; ++i) {
    if (activations[static_cast<std::size_t>(i)] > 0.5) {
      set.insert(i == dim - 1 ? Symbol::End : static_cast<Symbol>(i));
    }
  }
  return set;
}

bool sample_accepted(const std::vector<SymbolSet>& predicted,
                     const std::vector<SymbolSet>& targets) {
  if (predicted.size() != targets.size())
    throw std::invalid_argument("sample_accepted: predicted/target length mismatch (" +
                                std::to_string(predicted.size()) + " vs " +
                                std::to_string(targets.size()) + ")");
  for (std::size_t t = 0; t < targets.size(); ++t)
    if (!(predicted[t] == targets[t])) return false;
  return true;
}

}  // namespace lstmlab

#pragma once

#include <vector>

#include "lstmlab/languages.hpp"

namespace lstmlab {

using Vector = std::vector<double>;

/// One-hot vector of length input_dim(lang). Rejects the termination
/// symbol and symbols outside the language's input vocabulary.
Vector encode_input(LanguageId lang, Symbol s);

/// k-hot vector of length output_dim(lang). Rejects the empty set and
/// sets containing out-of-vocabulary symbols.
Vector encode_target(LanguageId lang, const SymbolSet& set);

/// Symbols whose activation is strictly greater than 0.5; an activation
/// of exactly 0.5 counts as absent. May return the empty set.
SymbolSet decode_prediction(LanguageId lang, const Vector& activations);

/// True iff predicted and target sets are equal at every position, i.e.
/// every output unit sits on the correct side of the threshold at every
/// timestep. Length mismatch is a caller bug and throws.
bool sample_accepted(const std::vector<SymbolSet>& predicted,
                     const std::vector<SymbolSet>& targets);

}  // namespace lstmlab

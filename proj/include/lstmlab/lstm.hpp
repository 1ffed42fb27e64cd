#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lstmlab/encoding.hpp"
#include "lstmlab/languages.hpp"
#include "lstmlab/rng.hpp"

namespace lstmlab {

/// Dense row-major matrix of doubles. Biases are stored as n-by-1.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  bool operator==(const Matrix&) const = default;
};

/// All trainable tensors of the single-layer LSTM plus its linear+sigmoid
/// readout. Gate order everywhere is i, f, g, o.
struct LstmParameters {
  int input_size = 0;   // d
  int hidden_size = 0;  // H

  Matrix w_xi, w_xf, w_xg, w_xo;  // H x d
  Matrix w_hi, w_hf, w_hg, w_ho;  // H x H
  Matrix b_i, b_f, b_g, b_o;      // H x 1
  Matrix w_y;                     // (d+1) x H
  Matrix b_y;                     // (d+1) x 1

  int output_size() const { return input_size + 1; }

  using Member = Matrix LstmParameters::*;
  struct NamedMember {
    const char* name;
    Member member;
  };
  /// Canonical tensor order; fixes init draws, updates and the
  /// checkpoint layout.
  static const std::array<NamedMember, 14>& tensor_members();

  bool operator==(const LstmParameters&) const = default;
};

/// Gradients are shape-congruent with the parameters.
using Gradients = LstmParameters;

/// Hidden and cell vectors. Sequences start from all zeros.
struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  static LstmState zero(int hidden_size) {
    return {std::vector<double>(static_cast<std::size_t>(hidden_size), 0.0),
            std::vector<double>(static_cast<std::size_t>(hidden_size), 0.0)};
  }
};

/// Parameters shaped (d, H) with every entry drawn i.i.d. uniform on
/// [-1/sqrt(H), +1/sqrt(H)]. Deterministic given (d, H, seed).
LstmParameters init_parameters(int input_size, int hidden_size, std::uint64_t seed);

/// Zero-filled tensors congruent with p.
Gradients zeros_like(const LstmParameters& p);

/// One timestep:
///   i = sig(Wxi x + Whi h + bi)   f = sig(...)   o = sig(...)
///   g = tanh(Wxg x + Whg h + bg)
///   c' = f*c + i*g   h' = o*tanh(c')   y = sig(Wy h' + by)
std::pair<LstmState, Vector> step(const LstmParameters& p, const LstmState& st,
                                  const Vector& x);

struct SequenceResult {
  std::vector<Vector> outputs;    // per-timestep activations, length d+1
  std::vector<LstmState> states;  // state after each timestep
  double loss = 0.0;              // sum over t of mean-squared error per character
};

/// Runs the sample from the zero state and accumulates
/// loss = sum_t mean_j (y_tj - target_tj)^2. Empty input gives loss 0.
SequenceResult run_sequence(const LstmParameters& p, const Sample& sample);

/// run_sequence without recording outputs or states.
double sequence_loss(const LstmParameters& p, const Sample& sample);

/// True iff decoding every timestep at the strict 0.5 threshold
/// reproduces the sample's target sets. Streaming with early exit;
/// agrees with decode_prediction + sample_accepted over run_sequence.
bool predicts_targets(const LstmParameters& p, const Sample& sample);

/// Exact gradient of the run_sequence loss via backpropagation through
/// time over the full sequence.
std::pair<Gradients, double> backward(const LstmParameters& p, const Sample& sample);

/// Central differences (loss(p + eps e) - loss(p - eps e)) / (2 eps) per
/// scalar parameter. Rejects eps <= 0. Verification oracle for backward.
Gradients finite_difference_grad(const LstmParameters& p, const Sample& sample,
                                 double epsilon);

/// max over scalars of |a - b| / max(1, |a|, |b|).
double max_relative_error(const Gradients& a, const Gradients& b);

/// Adam accumulators when rule = Adam; step counter drives bias
/// correction. Plain gradient descent keeps only the step size.
struct OptimizerState {
  enum class Rule { Adam, Sgd };

  Rule rule = Rule::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step_count = 0;
  Gradients m;
  Gradients v;

  static OptimizerState adam(const LstmParameters& p, double learning_rate = 1e-3);
  static OptimizerState sgd(const LstmParameters& p, double learning_rate);
};

/// In-place parameter update. Deterministic.
void apply_update(LstmParameters& p, const Gradients& g, OptimizerState& opt);

/// Self-describing binary checkpoint: dims header plus row-major 64-bit
/// tensors in canonical order. Load/save round trips are bit-exact.
void save_parameters(const std::string& path, const LstmParameters& p);
LstmParameters load_parameters(const std::string& path);

/// Byte image of the checkpoint payload, for checksums and in-memory
/// round trips.
std::vector<unsigned char> serialize_parameters(const LstmParameters& p);

}  // namespace lstmlab

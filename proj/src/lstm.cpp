#include "lstmlab/lstm.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lstmlab {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr char kCheckpointMagic[8] = {'L', 'L', 'C', 'K', 'P', 'T', '0', '1'};

/// Per-timestep forward cache used by BPTT. All arrays are flat row-major,
/// one row per timestep.
struct ForwardTape {
  int steps = 0;
  int hidden = 0;
  int out_dim = 0;
  std::vector<int> x_index;               // input symbol index per t
  std::vector<double> i, f, g, o, c, tc;  // steps x hidden
  std::vector<double> h;                  // steps x hidden
  std::vector<double> y;                  // steps x out_dim
  std::vector<double> target;             // steps x out_dim, 0/1
  double loss = 0.0;
};

ForwardTape forward_pass(const LstmParameters& p, const Sample& sample) {
  const int H = p.hidden_size;
  const int out_dim = p.output_size();
  const int T = static_cast<int>(sample.input.size());

  ForwardTape tape;
  tape.steps = T;
  tape.hidden = H;
  tape.out_dim = out_dim;
  tape.x_index.resize(T);
  const std::size_t cells = static_cast<std::size_t>(T) * H;
  tape.i.resize(cells);
  tape.f.resize(cells);
  tape.g.resize(cells);
  tape.o.resize(cells);
  tape.c.resize(cells);
  tape.tc.resize(cells);
  tape.h.resize(cells);
  tape.y.resize(static_cast<std::size_t>(T) * out_dim);
  tape.target.assign(static_cast<std::size_t>(T) * out_dim, 0.0);
  for (int t = 0; t < T; ++t) {
    const SymbolSet& set = sample.targets[static_cast<std::size_t>(t)];
    for (int j = 0; j < out_dim; ++j) {
      const Symbol s = j == out_dim - 1 ? Symbol::End : static_cast<Symbol>(j);
      if (set.contains(s)) tape.target[static_cast<std::size_t>(t) * out_dim + j] = 1.0;
    }
  }

  std::vector<double> h_prev(static_cast<std::size_t>(H), 0.0);
  std::vector<double> c_prev(static_cast<std::size_t>(H), 0.0);

  for (int t = 0; t < T; ++t) {
    const int xi = static_cast<int>(sample.input[static_cast<std::size_t>(t)]);
    tape.x_index[static_cast<std::size_t>(t)] = xi;
    const std::size_t row = static_cast<std::size_t>(t) * H;

    for (int u = 0; u < H; ++u) {
      double pre_i = p.b_i(u, 0) + p.w_xi(u, xi);
      double pre_f = p.b_f(u, 0) + p.w_xf(u, xi);
      double pre_g = p.b_g(u, 0) + p.w_xg(u, xi);
      double pre_o = p.b_o(u, 0) + p.w_xo(u, xi);
      for (int v = 0; v < H; ++v) {
        const double hv = h_prev[static_cast<std::size_t>(v)];
        pre_i += p.w_hi(u, v) * hv;
        pre_f += p.w_hf(u, v) * hv;
        pre_g += p.w_hg(u, v) * hv;
        pre_o += p.w_ho(u, v) * hv;
      }
      const double iu = sigmoid(pre_i);
      const double fu = sigmoid(pre_f);
      const double gu = std::tanh(pre_g);
      const double ou = sigmoid(pre_o);
      const double cu = fu * c_prev[static_cast<std::size_t>(u)] + iu * gu;
      const double tcu = std::tanh(cu);
      tape.i[row + u] = iu;
      tape.f[row + u] = fu;
      tape.g[row + u] = gu;
      tape.o[row + u] = ou;
      tape.c[row + u] = cu;
      tape.tc[row + u] = tcu;
      tape.h[row + u] = ou * tcu;
    }

    const std::size_t yrow = static_cast<std::size_t>(t) * out_dim;
    double err_sum = 0.0;
    for (int j = 0; j < out_dim; ++j) {
      double pre = p.b_y(j, 0);
      for (int u = 0; u < H; ++u) pre += p.w_y(j, u) * tape.h[row + u];
      const double yj = sigmoid(pre);
      tape.y[yrow + j] = yj;
      const double e = yj - tape.target[yrow + j];
      err_sum += e * e;
    }
    tape.loss += err_sum / out_dim;

    for (int u = 0; u < H; ++u) {
      h_prev[static_cast<std::size_t>(u)] = tape.h[row + u];
      c_prev[static_cast<std::size_t>(u)] = tape.c[row + u];
    }
  }
  return tape;
}

}  // namespace

const std::array<LstmParameters::NamedMember, 14>& LstmParameters::tensor_members() {
  static const std::array<NamedMember, 14> members = {{
      {"w_xi", &LstmParameters::w_xi},
      {"w_xf", &LstmParameters::w_xf},
      {"w_xg", &LstmParameters::w_xg},
      {"w_xo", &LstmParameters::w_xo},
      {"w_hi", &LstmParameters::w_hi},
      {"w_hf", &LstmParameters::w_hf},
      {"w_hg", &LstmParameters::w_hg},
      {"w_ho", &LstmParameters::w_ho},
      {"b_i", &LstmParameters::b_i},
      {"b_f", &LstmParameters::b_f},
      {"b_g", &LstmParameters::b_g},
      {"b_o", &LstmParameters::b_o},
      {"w_y", &LstmParameters::w_y},
      {"b_y", &LstmParameters::b_y},
  }};
  return members;
}

static LstmParameters shaped_parameters(int input_size, int hidden_size) {
  if (input_size < 2) throw std::invalid_argument("init_parameters: input size must be >= 2");
  if (hidden_size < 1) throw std::invalid_argument("init_parameters: hidden size must be >= 1");
  LstmParameters p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  const int H = hidden_size;
  const int d = input_size;
  p.w_xi = p.w_xf = p.w_xg = p.w_xo = Matrix(H, d);
  p.w_hi = p.w_hf = p.w_hg = p.w_ho = Matrix(H, H);
  p.b_i = p.b_f = p.b_g = p.b_o = Matrix(H, 1);
  p.w_y = Matrix(d + 1, H);
  p.b_y = Matrix(d + 1, 1);
  return p;
}

LstmParameters init_parameters(int input_size, int hidden_size, std::uint64_t seed) {
  LstmParameters p = shaped_parameters(input_size, hidden_size);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  Rng rng(seed);
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    (void)name;
    for (double& w : (p.*member).data) w = rng.next_double(-bound, bound);
  }
  return p;
}

Gradients zeros_like(const LstmParameters& p) {
  return shaped_parameters(p.input_size, p.hidden_size);
}

std::pair<LstmState, Vector> step(const LstmParameters& p, const LstmState& st,
                                  const Vector& x) {
  const int H = p.hidden_size;
  const int d = p.input_size;
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("step: input vector has wrong dimension");
  if (static_cast<int>(st.h.size()) != H || static_cast<int>(st.c.size()) != H)
    throw std::invalid_argument("step: state has wrong dimension");

  LstmState next = LstmState::zero(H);
  for (int u = 0; u < H; ++u) {
    double pre_i = p.b_i(u, 0);
    double pre_f = p.b_f(u, 0);
    double pre_g = p.b_g(u, 0);
    double pre_o = p.b_o(u, 0);
    for (int k = 0; k < d; ++k) {
      const double xk = x[static_cast<std::size_t>(k)];
      pre_i += p.w_xi(u, k) * xk;
      pre_f += p.w_xf(u, k) * xk;
      pre_g += p.w_xg(u, k) * xk;
      pre_o += p.w_xo(u, k) * xk;
    }
    for (int v = 0; v < H; ++v) {
      const double hv = st.h[static_cast<std::size_t>(v)];
      pre_i += p.w_hi(u, v) * hv;
      pre_f += p.w_hf(u, v) * hv;
      pre_g += p.w_hg(u, v) * hv;
      pre_o += p.w_ho(u, v) * hv;
    }
    const double c_new = sigmoid(pre_f) * st.c[static_cast<std::size_t>(u)] +
                         sigmoid(pre_i) * std::tanh(pre_g);
    next.c[static_cast<std::size_t>(u)] = c_new;
    next.h[static_cast<std::size_t>(u)] = sigmoid(pre_o) * std::tanh(c_new);
  }

  Vector y(static_cast<std::size_t>(p.output_size()));
  for (int j = 0; j < p.output_size(); ++j) {
    double pre = p.b_y(j, 0);
    for (int u = 0; u < H; ++u) pre += p.w_y(j, u) * next.h[static_cast<std::size_t>(u)];
    y[static_cast<std::size_t>(j)] = sigmoid(pre);
  }
  return {std::move(next), std::move(y)};
}

SequenceResult run_sequence(const LstmParameters& p, const Sample& sample) {
  ForwardTape tape = forward_pass(p, sample);
  SequenceResult result;
  result.loss = tape.loss;
  result.outputs.reserve(static_cast<std::size_t>(tape.steps));
  result.states.reserve(static_cast<std::size_t>(tape.steps));
  for (int t = 0; t < tape.steps; ++t) {
    const std::size_t row = static_cast<std::size_t>(t) * tape.hidden;
    const std::size_t yrow = static_cast<std::size_t>(t) * tape.out_dim;
    result.outputs.emplace_back(tape.y.begin() + yrow, tape.y.begin() + yrow + tape.out_dim);
    LstmState st;
    st.h.assign(tape.h.begin() + row, tape.h.begin() + row + tape.hidden);
    st.c.assign(tape.c.begin() + row, tape.c.begin() + row + tape.hidden);
    result.states.push_back(std::move(st));
  }
  return result;
}

double sequence_loss(const LstmParameters& p, const Sample& sample) {
  return forward_pass(p, sample).loss;
}

bool predicts_targets(const LstmParameters& p, const Sample& sample) {
  const int H = p.hidden_size;
  const int out_dim = p.output_size();
  const int T = static_cast<int>(sample.input.size());

  std::vector<double> h(static_cast<std::size_t>(H), 0.0);
  std::vector<double> c(static_cast<std::size_t>(H), 0.0);
  std::vector<double> h_next(static_cast<std::size_t>(H), 0.0);

  for (int t = 0; t < T; ++t) {
    const int xi = static_cast<int>(sample.input[static_cast<std::size_t>(t)]);
    for (int u = 0; u < H; ++u) {
      double pre_i = p.b_i(u, 0) + p.w_xi(u, xi);
      double pre_f = p.b_f(u, 0) + p.w_xf(u, xi);
      double pre_g = p.b_g(u, 0) + p.w_xg(u, xi);
      double pre_o = p.b_o(u, 0) + p.w_xo(u, xi);
      for (int v = 0; v < H; ++v) {
        const double hv = h[static_cast<std::size_t>(v)];
        pre_i += p.w_hi(u, v) * hv;
        pre_f += p.w_hf(u, v) * hv;
        pre_g += p.w_hg(u, v) * hv;
        pre_o += p.w_ho(u, v) * hv;
      }
      const double cu = sigmoid(pre_f) * c[static_cast<std::size_t>(u)] +
                        sigmoid(pre_i) * std::tanh(pre_g);
      c[static_cast<std::size_t>(u)] = cu;
      h_next[static_cast<std::size_t>(u)] = sigmoid(pre_o) * std::tanh(cu);
    }
    h.swap(h_next);

    const SymbolSet& target = sample.targets[static_cast<std::size_t>(t)];
    for (int j = 0; j < out_dim; ++j) {
      double pre = p.b_y(j, 0);
      for (int u = 0; u < H; ++u) pre += p.w_y(j, u) * h[static_cast<std::size_t>(u)];
      const Symbol s = j == out_dim - 1 ? Symbol::End : static_cast<Symbol>(j);
      const bool predicted = sigmoid(pre) > 0.5;
      if (predicted != target.contains(s)) return false;
    }
  }
  return true;
}

std::pair<Gradients, double> backward(const LstmParameters& p, const Sample& sample) {
  const ForwardTape tape = forward_pass(p, sample);
  const int H = p.hidden_size;
  const int out_dim = p.output_size();
  const int T = tape.steps;

  Gradients grad = zeros_like(p);
  std::vector<double> dh(static_cast<std::size_t>(H), 0.0);  // carried from t+1
  std::vector<double> dc(static_cast<std::size_t>(H), 0.0);
  std::vector<double> dpre_i(static_cast<std::size_t>(H));
  std::vector<double> dpre_f(static_cast<std::size_t>(H));
  std::vector<double> dpre_g(static_cast<std::size_t>(H));
  std::vector<double> dpre_o(static_cast<std::size_t>(H));

  for (int t = T - 1; t >= 0; --t) {
    const std::size_t row = static_cast<std::size_t>(t) * H;
    const std::size_t yrow = static_cast<std::size_t>(t) * out_dim;

    // Output layer: loss_t = (1/out_dim) sum_j (y_j - y*_j)^2, y = sig(u).
    for (int j = 0; j < out_dim; ++j) {
      const double yj = tape.y[yrow + j];
      const double du = 2.0 / out_dim * (yj - tape.target[yrow + j]) * yj * (1.0 - yj);
      grad.b_y(j, 0) += du;
      for (int u = 0; u < H; ++u) {
        grad.w_y(j, u) += du * tape.h[row + u];
        dh[static_cast<std::size_t>(u)] += p.w_y(j, u) * du;
      }
    }

    // Gate-local derivatives at t.
    for (int u = 0; u < H; ++u) {
      const double iu = tape.i[row + u];
      const double fu = tape.f[row + u];
      const double gu = tape.g[row + u];
      const double ou = tape.o[row + u];
      const double tcu = tape.tc[row + u];
      const double c_prev = t > 0 ? tape.c[row - H + u] : 0.0;
      const double dhu = dh[static_cast<std::size_t>(u)];

      const double dou = dhu * tcu;
      double dcu = dc[static_cast<std::size_t>(u)] + dhu * ou * (1.0 - tcu * tcu);
      dpre_o[static_cast<std::size_t>(u)] = dou * ou * (1.0 - ou);
      dpre_i[static_cast<std::size_t>(u)] = dcu * gu * iu * (1.0 - iu);
      dpre_f[static_cast<std::size_t>(u)] = dcu * c_prev * fu * (1.0 - fu);
      dpre_g[static_cast<std::size_t>(u)] = dcu * iu * (1.0 - gu * gu);
      dc[static_cast<std::size_t>(u)] = dcu * fu;  // carried to t-1
    }

    const int xi = tape.x_index[static_cast<std::size_t>(t)];
    for (int u = 0; u < H; ++u) {
      grad.w_xi(u, xi) += dpre_i[static_cast<std::size_t>(u)];
      grad.w_xf(u, xi) += dpre_f[static_cast<std::size_t>(u)];
      grad.w_xg(u, xi) += dpre_g[static_cast<std::size_t>(u)];
      grad.w_xo(u, xi) += dpre_o[static_cast<std::size_t>(u)];
      grad.b_i(u, 0) += dpre_i[static_cast<std::size_t>(u)];
      grad.b_f(u, 0) += dpre_f[static_cast<std::size_t>(u)];
      grad.b_g(u, 0) += dpre_g[static_cast<std::size_t>(u)];
      grad.b_o(u, 0) += dpre_o[static_cast<std::size_t>(u)];
    }
    if (t > 0) {
      const std::size_t prev = row - static_cast<std::size_t>(H);
      for (int u = 0; u < H; ++u) {
        const double di = dpre_i[static_cast<std::size_t>(u)];
        const double df = dpre_f[static_cast<std::size_t>(u)];
        const double dg = dpre_g[static_cast<std::size_t>(u)];
        const double dout = dpre_o[static_cast<std::size_t>(u)];
        for (int v = 0; v < H; ++v) {
          const double hv = tape.h[prev + v];
          grad.w_hi(u, v) += di * hv;
          grad.w_hf(u, v) += df * hv;
          grad.w_hg(u, v) += dg * hv;
          grad.w_ho(u, v) += dout * hv;
        }
      }
      for (int v = 0; v < H; ++v) {
        double acc = 0.0;
        for (int u = 0; u < H; ++u) {
          acc += p.w_hi(u, v) * dpre_i[static_cast<std::size_t>(u)];
          acc += p.w_hf(u, v) * dpre_f[static_cast<std::size_t>(u)];
          acc += p.w_hg(u, v) * dpre_g[static_cast<std::size_t>(u)];
          acc += p.w_ho(u, v) * dpre_o[static_cast<std::size_t>(u)];
        }
        dh[static_cast<std::size_t>(v)] = acc;
      }
    }
    // h0 and c0 are constants; their incoming gradients are dropped.
  }
  return {std::move(grad), tape.loss};
}

Gradients finite_difference_grad(const LstmParameters& p, const Sample& sample,
                                 double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("finite_difference_grad: epsilon must be positive");
  LstmParameters probe = p;
  Gradients grad = zeros_like(p);
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    (void)name;
    std::vector<double>& values = (probe.*member).data;
    std::vector<double>& out = (grad.*member).data;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + epsilon;
      const double loss_plus = sequence_loss(probe, sample);
      values[k] = saved - epsilon;
      const double loss_minus = sequence_loss(probe, sample);
      values[k] = saved;
      out[k] = (loss_plus - loss_minus) / (2.0 * epsilon);
    }
  }
  return grad;
}

double max_relative_error(const Gradients& a, const Gradients& b) {
  double worst = 0.0;
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    (void)name;
    const std::vector<double>& av = (a.*member).data;
    const std::vector<double>& bv = (b.*member).data;
    if (av.size() != bv.size())
      throw std::invalid_argument("max_relative_error: shape mismatch");
    for (std::size_t k = 0; k < av.size(); ++k) {
      const double scale = std::max({1.0, std::fabs(av[k]), std::fabs(bv[k])});
      worst = std::max(worst, std::fabs(av[k] - bv[k]) / scale);
    }
  }
  return worst;
}

OptimizerState OptimizerState::adam(const LstmParameters& p, double learning_rate) {
  OptimizerState opt;
  opt.rule = Rule::Adam;
  opt.learning_rate = learning_rate;
  opt.m = zeros_like(p);
  opt.v = zeros_like(p);
  return opt;
}

OptimizerState OptimizerState::sgd(const LstmParameters& p, double learning_rate) {
  OptimizerState opt;
  opt.rule = Rule::Sgd;
  opt.learning_rate = learning_rate;
  opt.m = zeros_like(p);
  opt.v = zeros_like(p);
  return opt;
}

void apply_update(LstmParameters& p, const Gradients& g, OptimizerState& opt) {
  if (opt.rule == OptimizerState::Rule::Sgd) {
    for (const auto& [name, member] : LstmParameters::tensor_members()) {
      (void)name;
      std::vector<double>& pv = (p.*member).data;
      const std::vector<double>& gv = (g.*member).data;
      if (pv.size() != gv.size()) throw std::invalid_argument("apply_update: shape mismatch");
      for (std::size_t k = 0; k < pv.size(); ++k) pv[k] -= opt.learning_rate * gv[k];
    }
    return;
  }

  opt.step_count += 1;
  const double bias1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step_count));
  const double bias2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step_count));
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    (void)name;
    std::vector<double>& pv = (p.*member).data;
    const std::vector<double>& gv = (g.*member).data;
    std::vector<double>& mv = (opt.m.*member).data;
    std::vector<double>& vv = (opt.v.*member).data;
    if (pv.size() != gv.size()) throw std::invalid_argument("apply_update: shape mismatch");
    for (std::size_t k = 0; k < pv.size(); ++k) {
      mv[k] = opt.beta1 * mv[k] + (1.0 - opt.beta1) * gv[k];
      vv[k] = opt.beta2 * vv[k] + (1.0 - opt.beta2) * gv[k] * gv[k];
      const double m_hat = mv[k] / bias1;
      const double v_hat = vv[k] / bias2;
      pv[k] -= opt.learning_rate * m_hat / (std::sqrt(v_hat) + opt.epsilon);
    }
  }
}

std::vector<unsigned char> serialize_parameters(const LstmParameters& p) {
  std::vector<unsigned char> bytes;
  auto put = [&bytes](const void* src, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(src);
    bytes.insert(bytes.end(), b, b + len);
  };
  put(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::uint32_t d = static_cast<std::uint32_t>(p.input_size);
  const std::uint32_t h = static_cast<std::uint32_t>(p.hidden_size);
  put(&d, sizeof(d));
  put(&h, sizeof(h));
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    (void)name;
    const Matrix& m = p.*member;
    const std::uint32_t rows = static_cast<std::uint32_t>(m.rows);
    const std::uint32_t cols = static_cast<std::uint32_t>(m.cols);
    put(&rows, sizeof(rows));
    put(&cols, sizeof(cols));
    put(m.data.data(), m.data.size() * sizeof(double));
  }
  return bytes;
}

void save_parameters(const std::string& path, const LstmParameters& p) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  const std::vector<unsigned char> bytes = serialize_parameters(p);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

LstmParameters load_parameters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  auto fail = [&path](const std::string& why) -> std::runtime_error {
    return std::runtime_error("malformed checkpoint " + path + ": " + why);
  };

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw fail("bad magic");
  std::uint32_t d = 0, h = 0;
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in) throw fail("truncated header");
  if (d < 2 || d > 4 || h < 1 || h > 1u << 20) throw fail("implausible dimensions");

  LstmParameters p = shaped_parameters(static_cast<int>(d), static_cast<int>(h));
  for (const auto& [name, member] : LstmParameters::tensor_members()) {
    Matrix& m = p.*member;
    std::uint32_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!in) throw fail(std::string("truncated tensor header for ") + name);
    if (static_cast<int>(rows) != m.rows || static_cast<int>(cols) != m.cols)
      throw fail(std::string("unexpected shape for ") + name);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!in) throw fail(std::string("truncated data for ") + name);
  }
  in.peek();
  if (!in.eof()) throw fail("trailing bytes");
  return p;
}

}  // namespace lstmlab

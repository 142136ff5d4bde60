#include "bilstm/cells.hpp"

#include <cmath>

namespace bilstm {

std::string_view cell_type_name(CellType type) {
  switch (type) {
    case CellType::linear: return "linear";
    case CellType::bilinear: return "bilinear";
    case CellType::shared_weight: return "shared";
  }
  return "?";
}

std::optional<CellType> cell_type_from_name(std::string_view name) {
  if (name == "linear") return CellType::linear;
  if (name == "bilinear") return CellType::bilinear;
  if (name == "shared" || name == "shared_weight") return CellType::shared_weight;
  return std::nullopt;
}

CellParams make_cell_params(CellType type, CellDims dims) {
  if (dims.n < 1 || dims.m < 1) {
    throw Error::contract("cell dims must satisfy n >= 1, m >= 1, got n=" +
                          std::to_string(dims.n) + " m=" + std::to_string(dims.m));
  }
  if (dims.c < 0) throw Error::contract("pool size c must be >= 0");
  if (type != CellType::bilinear) dims.c = 0;
  CellParams p;
  p.type = type;
  p.dims = dims;
  for (int g = 0; g < 4; ++g) {
    p.w_x[g] = Tensor({dims.m, dims.n});
    p.w_h[g] = Tensor({dims.m, dims.m});
    p.bias[g] = Tensor({dims.m});
  }
  if (type == CellType::bilinear) {
    p.pool_x = Tensor({dims.n, dims.c});
    p.pool_h = Tensor({dims.c, dims.m});
    for (int g = 0; g < 4; ++g) p.w_mu[g] = Tensor({dims.m, dims.c});
  }
  return p;
}

namespace {

void glorot_fill(Tensor& t, int fan_in, int fan_out, RngStream& rng, double gain = 1.0) {
  const double a = gain * std::sqrt(6.0 / (fan_in + fan_out));
  for (int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-a, a);
}

}  // namespace

void init_cell_params(CellParams& p, RngStream& rng) {
  const auto [n, m, c] = p.dims;
  for (int g = 0; g < 4; ++g) glorot_fill(p.w_x[g], n, m, rng);
  for (int g = 0; g < 4; ++g) glorot_fill(p.w_h[g], m, m, rng);
  // forget-gate bias 1, the rest 0
  for (int64_t i = 0; i < m; ++i) p.bias[1][i] = 1.0;
  if (p.type == CellType::bilinear && c > 0) {
    glorot_fill(p.pool_x, n, c, rng);
    glorot_fill(p.pool_h, m, c, rng);
    // small integration init tempers early second-order gradient spikes
    for (int g = 0; g < 4; ++g) glorot_fill(p.w_mu[g], c, m, rng, 0.1);
  }
}

int64_t count_cell_params(CellType type, CellDims dims) {
  const int64_t n = dims.n, m = dims.m, c = (type == CellType::bilinear) ? dims.c : 0;
  int64_t count = 4 * (m * n + m * m + m);
  count += n * c + c * m + 4 * m * c;
  return count;
}

CellLeafRefs add_cell_leaves(Graph& g, const CellParams& p, bool trainable) {
  auto leaf = [&](const Tensor& t) { return trainable ? g.param(t) : g.input(t); };
  CellLeafRefs refs;
  refs.type = p.type;
  refs.dims = p.dims;
  for (int i = 0; i < 4; ++i) refs.w_x[i] = leaf(p.w_x[i]);
  for (int i = 0; i < 4; ++i) refs.w_h[i] = leaf(p.w_h[i]);
  for (int i = 0; i < 4; ++i) refs.bias[i] = leaf(p.bias[i]);
  if (p.type == CellType::bilinear && p.dims.c > 0) {
    refs.pool_x = leaf(p.pool_x);
    refs.pool_h = leaf(p.pool_h);
    refs.pool_x_t = g.transpose(refs.pool_x);
    for (int i = 0; i < 4; ++i) refs.w_mu[i] = leaf(p.w_mu[i]);
  }
  return refs;
}

StepNodeIds build_cell_step(Graph& g, const CellLeafRefs& cell, Graph::NodeId x,
                            Graph::NodeId h_prev, Graph::NodeId c_prev) {
  StepNodeIds out;
  std::array<Graph::NodeId, 4> xa{}, hh{}, pre{};
  for (int i = 0; i < 4; ++i) {
    xa[i] = g.matmul(cell.w_x[i], x);
    hh[i] = g.matmul(cell.w_h[i], h_prev);
    out.linear_pre[i] = g.add_bias_cols(g.add(xa[i], hh[i]), cell.bias[i]);
    out.bilinear_pre[i] = Graph::kNone;
  }
  if (cell.type == CellType::bilinear && cell.dims.c > 0) {
    out.pool = g.hadamard(g.matmul(cell.pool_x_t, x), g.matmul(cell.pool_h, h_prev));
    for (int i = 0; i < 4; ++i) out.bilinear_pre[i] = g.matmul(cell.w_mu[i], out.pool);
  } else if (cell.type == CellType::shared_weight) {
    for (int i = 0; i < 4; ++i) out.bilinear_pre[i] = g.hadamard(xa[i], hh[i]);
  }
  for (int i = 0; i < 4; ++i) {
    pre[i] = (out.bilinear_pre[i] == Graph::kNone)
                 ? out.linear_pre[i]
                 : g.add(out.linear_pre[i], out.bilinear_pre[i]);
  }
  out.gates[0] = g.sigmoid(pre[0]);
  out.gates[1] = g.sigmoid(pre[1]);
  out.gates[2] = g.sigmoid(pre[2]);
  out.gates[3] = g.tanh(pre[3]);
  out.c = g.add(g.hadamard(out.gates[1], c_prev), g.hadamard(out.gates[0], out.gates[3]));
  out.h = g.hadamard(g.tanh(out.c), out.gates[2]);
  return out;
}

StepTrace extract_trace(const Graph& g, const StepNodeIds& ids, const CellDims& dims) {
  auto as_vec = [&](Graph::NodeId id, int len) -> Tensor {
    if (id == Graph::kNone) return Tensor({len});
    return g.value(id).reshaped({len});
  };
  StepTrace t;
  for (int i = 0; i < 4; ++i) {
    t.linear_pre[i] = as_vec(ids.linear_pre[i], dims.m);
    t.bilinear_pre[i] = as_vec(ids.bilinear_pre[i], dims.m);
    t.gates[i] = as_vec(ids.gates[i], dims.m);
  }
  t.pool = (ids.pool == Graph::kNone) ? Tensor({0}) : g.value(ids.pool).reshaped({dims.c});
  t.h = as_vec(ids.h, dims.m);
  t.c = as_vec(ids.c, dims.m);
  return t;
}

namespace {

StepResult run_single_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                           const Tensor& c_prev) {
  const auto [n, m, c] = p.dims;
  if (x.rank() != 1 || x.extent(0) != n) {
    throw Error::contract("step input shape " + shape_to_string(x.shape()) + " != [" +
                          std::to_string(n) + "]");
  }
  if (h_prev.rank() != 1 || h_prev.extent(0) != m || c_prev.rank() != 1 ||
      c_prev.extent(0) != m) {
    throw Error::contract("step state shapes " + shape_to_string(h_prev.shape()) + ", " +
                          shape_to_string(c_prev.shape()) + " != [" + std::to_string(m) + "]");
  }
  Graph g;
  CellLeafRefs refs = add_cell_leaves(g, p, /*trainable=*/false);
  const auto x_id = g.input(x.reshaped({n, 1}));
  const auto h_id = g.input(h_prev.reshaped({m, 1}));
  const auto c_id = g.input(c_prev.reshaped({m, 1}));
  StepNodeIds ids = build_cell_step(g, refs, x_id, h_id, c_id);
  StepResult r;
  r.trace = extract_trace(g, ids, p.dims);
  r.h = r.trace.h;
  r.c = r.trace.c;
  return r;
}

}  // namespace

StepResult lstm_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                     const Tensor& c_prev) {
  if (p.type != CellType::linear) throw Error::contract("lstm_step requires a linear cell");
  return run_single_step(p, x, h_prev, c_prev);
}

StepResult bilinear_lstm_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                              const Tensor& c_prev) {
  if (p.type != CellType::bilinear) {
    throw Error::contract("bilinear_lstm_step requires a bilinear cell");
  }
  return run_single_step(p, x, h_prev, c_prev);
}

StepResult shared_weight_bilinear_step(const CellParams& p, const Tensor& x,
                                       const Tensor& h_prev, const Tensor& c_prev) {
  if (p.type != CellType::shared_weight) {
    throw Error::contract("shared_weight_bilinear_step requires a shared-weight cell");
  }
  return run_single_step(p, x, h_prev, c_prev);
}

StepResult cell_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                     const Tensor& c_prev) {
  return run_single_step(p, x, h_prev, c_prev);
}

Tensor bilinear_pool(const Tensor& pool_x, const Tensor& pool_h, const Tensor& x,
                     const Tensor& h_prev) {
  if (pool_x.rank() != 2 || pool_h.rank() != 2 || x.rank() != 1 || h_prev.rank() != 1) {
    throw Error::contract("bilinear_pool expects matrices W_x (n x c), W_h (c x m) and vectors");
  }
  const int n = pool_x.rows(), c = pool_x.cols(), m = pool_h.cols();
  if (pool_h.rows() != c || x.extent(0) != n || h_prev.extent(0) != m) {
    throw Error::contract("bilinear_pool shape mismatch: W_x " + shape_to_string(pool_x.shape()) +
                          ", W_h " + shape_to_string(pool_h.shape()) + ", x " +
                          shape_to_string(x.shape()) + ", h " + shape_to_string(h_prev.shape()));
  }
  // mu = (x^T W_x)^T o (W_h h)
  Tensor mu_x = matmul(transpose(pool_x), x.reshaped({n, 1}));
  Tensor mu_h = matmul(pool_h, h_prev.reshaped({m, 1}));
  return hadamard(mu_x, mu_h).reshaped({c});
}

Tensor naive_per_neuron_bilinear(const Tensor& w_x_rows, const Tensor& w_h_rows,
                                 const Tensor& x, const Tensor& h) {
  if (w_x_rows.rank() != 2 || w_h_rows.rank() != 2 || w_x_rows.rows() != w_h_rows.rows()) {
    throw Error::contract("per-neuron weights must be (c x n) and (c x m) with equal row counts");
  }
  const int c = w_x_rows.rows();
  const int n = w_x_rows.cols();
  const int m = w_h_rows.cols();
  if (x.rank() != 1 || x.extent(0) != n || h.rank() != 1 || h.extent(0) != m) {
    throw Error::contract("per-neuron input shapes " + shape_to_string(x.shape()) + ", " +
                          shape_to_string(h.shape()) + " do not match weights");
  }
  Tensor beta({c});
  for (int i = 0; i < c; ++i) {
    double dx = 0.0;
    for (int j = 0; j < n; ++j) dx += x[j] * w_x_rows.at(i, j);
    double dh = 0.0;
    for (int j = 0; j < m; ++j) dh += w_h_rows.at(i, j) * h[j];
    beta[i] = dx * dh;
  }
  return beta;
}

}  // namespace bilstm

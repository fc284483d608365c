#include "fogsim/nn/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fogsim::nn {

namespace {

double sig(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Vector sigv(const Vector& z) { return z.unaryExpr([](double v) { return sig(v); }); }
Vector tanhv(const Vector& z) { return z.unaryExpr([](double v) { return std::tanh(v); }); }

struct CellStep {
  Vector x, i, f, o, g, c, h, c_prev, h_prev;
};

CellStep run_cell(const LstmPredictor& p, const Vector& x, const Vector& h_prev,
                  const Vector& c_prev) {
  CellStep s;
  s.x = x;
  s.h_prev = h_prev;
  s.c_prev = c_prev;
  s.i = sigv(p.Wi * x + p.Ui * h_prev + p.bi);
  s.f = sigv(p.Wf * x + p.Uf * h_prev + p.bf);
  s.o = sigv(p.Wo * x + p.Uo * h_prev + p.bo);
  s.g = tanhv(p.Wg * x + p.Ug * h_prev + p.bg);
  s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
  s.h = s.o.cwiseProduct(tanhv(s.c));
  return s;
}

std::vector<Matrix*> matrix_params(LstmPredictor& p) {
  return {&p.Wi, &p.Ui, &p.Wf, &p.Uf, &p.Wo, &p.Uo, &p.Wg, &p.Ug, &p.Wy};
}
std::vector<Vector*> vector_params(LstmPredictor& p) {
  return {&p.bi, &p.bf, &p.bo, &p.bg, &p.by};
}

}  // namespace

LstmPredictor LstmPredictor::make(int hidden, Rng& rng) {
  LstmPredictor p;
  p.hidden = hidden;
  const double lim = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto mat = [&](int rows, int cols) {
    return Matrix::NullaryExpr(rows, cols, [&]() { return rng.uniform(-lim, lim); });
  };
  p.Wi = mat(hidden, kResourceDims);
  p.Ui = mat(hidden, hidden);
  p.bi = Vector::Zero(hidden);
  p.Wf = mat(hidden, kResourceDims);
  p.Uf = mat(hidden, hidden);
  p.bf = Vector::Ones(hidden);  // start remembering, a standard forget-gate init
  p.Wo = mat(hidden, kResourceDims);
  p.Uo = mat(hidden, hidden);
  p.bo = Vector::Zero(hidden);
  p.Wg = mat(hidden, kResourceDims);
  p.Ug = mat(hidden, hidden);
  p.bg = Vector::Zero(hidden);
  p.Wy = mat(kResourceDims, hidden);
  p.by = Vector::Zero(kResourceDims);
  return p;
}

UtilizationSample lstm_predict(const LstmPredictor& p,
                               const std::vector<UtilizationSample>& history) {
  if (history.empty()) throw std::invalid_argument("lstm_predict: empty history");
  Vector h = Vector::Zero(p.hidden);
  Vector c = Vector::Zero(p.hidden);
  for (const auto& sample : history) {
    const Vector x = sample.vec().cwiseQuotient(p.feature_scale);
    const CellStep s = run_cell(p, x, h, c);
    h = s.h;
    c = s.c;
  }
  const Vector y = (p.Wy * h + p.by).cwiseProduct(Vector(p.feature_scale)).cwiseMax(0.0);
  return UtilizationSample::from_vec(Vec4(y));
}

double lstm_train_epoch(LstmPredictor& p, LstmTrainState& state,
                        const std::vector<std::vector<UtilizationSample>>& sequences,
                        double lr) {
  if (!state.scale_fitted) {
    Vec4 scale = Vec4::Ones();
    for (const auto& seq : sequences)
      for (const auto& sample : seq) scale = scale.cwiseMax(sample.vec());
    p.feature_scale = scale;
    state.scale_fitted = true;
  }
  auto mats = matrix_params(p);
  auto vecs = vector_params(p);
  if (state.m_mat.empty()) {
    for (auto* m : mats) {
      state.m_mat.push_back(Matrix::Zero(m->rows(), m->cols()));
      state.v_mat.push_back(Matrix::Zero(m->rows(), m->cols()));
    }
    for (auto* v : vecs) {
      state.m_vec.push_back(Vector::Zero(v->size()));
      state.v_vec.push_back(Vector::Zero(v->size()));
    }
  }

  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double total_err = 0.0;
  long total_steps = 0;

  for (const auto& seq : sequences) {
    if (seq.size() < 2) continue;
    const auto steps = seq.size() - 1;

    std::vector<CellStep> trace(steps);
    std::vector<Vector> errors(steps);
    Vector h = Vector::Zero(p.hidden);
    Vector c = Vector::Zero(p.hidden);
    for (std::size_t t = 0; t < steps; ++t) {
      const Vector x = seq[t].vec().cwiseQuotient(p.feature_scale);
      trace[t] = run_cell(p, x, h, c);
      h = trace[t].h;
      c = trace[t].c;
      const Vector target = seq[t + 1].vec().cwiseQuotient(p.feature_scale);
      errors[t] = p.Wy * h + p.by - target;
      total_err += errors[t].squaredNorm();
    }
    total_steps += static_cast<long>(steps);

    // Backward pass through time.
    Matrix dWi = Matrix::Zero(p.Wi.rows(), p.Wi.cols()), dUi = Matrix::Zero(p.Ui.rows(), p.Ui.cols());
    Matrix dWf = dWi, dUf = dUi, dWo = dWi, dUo = dUi, dWg = dWi, dUg = dUi;
    Matrix dWy = Matrix::Zero(p.Wy.rows(), p.Wy.cols());
    Vector dbi = Vector::Zero(p.hidden), dbf = dbi, dbo = dbi, dbg = dbi;
    Vector dby = Vector::Zero(kResourceDims);
    Vector dh_next = Vector::Zero(p.hidden);
    Vector dc_next = Vector::Zero(p.hidden);
    const double norm = 1.0 / static_cast<double>(steps);
    for (auto t = static_cast<long>(steps) - 1; t >= 0; --t) {
      const CellStep& s = trace[static_cast<std::size_t>(t)];
      const Vector dy = 2.0 * norm * errors[static_cast<std::size_t>(t)];
      dWy += dy * s.h.transpose();
      dby += dy;
      Vector dh = p.Wy.transpose() * dy + dh_next;
      const Vector tc = tanhv(s.c);
      const Vector do_ = dh.cwiseProduct(tc);
      Vector dc = dh.cwiseProduct(s.o).cwiseProduct(
                      (1.0 - tc.array().square()).matrix()) + dc_next;
      const Vector di = dc.cwiseProduct(s.g);
      const Vector df = dc.cwiseProduct(s.c_prev);
      const Vector dg = dc.cwiseProduct(s.i);
      const Vector dzi = di.cwiseProduct(s.i).cwiseProduct((1.0 - s.i.array()).matrix());
      const Vector dzf = df.cwiseProduct(s.f).cwiseProduct((1.0 - s.f.array()).matrix());
      const Vector dzo = do_.cwiseProduct(s.o).cwiseProduct((1.0 - s.o.array()).matrix());
      const Vector dzg = dg.cwiseProduct((1.0 - s.g.array().square()).matrix());
      dWi += dzi * s.x.transpose();
      dUi += dzi * s.h_prev.transpose();
      dbi += dzi;
      dWf += dzf * s.x.transpose();
      dUf += dzf * s.h_prev.transpose();
      dbf += dzf;
      dWo += dzo * s.x.transpose();
      dUo += dzo * s.h_prev.transpose();
      dbo += dzo;
      dWg += dzg * s.x.transpose();
      dUg += dzg * s.h_prev.transpose();
      dbg += dzg;
      dh_next = p.Ui.transpose() * dzi + p.Uf.transpose() * dzf +
                p.Uo.transpose() * dzo + p.Ug.transpose() * dzg;
      dc_next = dc.cwiseProduct(s.f);
    }

    std::vector<Matrix> mat_grads = {dWi, dUi, dWf, dUf, dWo, dUo, dWg, dUg, dWy};
    std::vector<Vector> vec_grads = {dbi, dbf, dbo, dbg, dby};

    // Clip by global norm, then one Adam step per sequence.
    double sq = 0.0;
    for (const auto& g : mat_grads) sq += g.squaredNorm();
    for (const auto& g : vec_grads) sq += g.squaredNorm();
    const double gnorm = std::sqrt(sq);
    if (gnorm > 1.0) {
      for (auto& g : mat_grads) g /= gnorm;
      for (auto& g : vec_grads) g /= gnorm;
    }
    state.steps += 1;
    const double bias1 = 1.0 - std::pow(beta1, static_cast<double>(state.steps));
    const double bias2 = 1.0 - std::pow(beta2, static_cast<double>(state.steps));
    for (std::size_t k = 0; k < mats.size(); ++k) {
      auto& m = state.m_mat[k];
      auto& v = state.v_mat[k];
      m = beta1 * m + (1.0 - beta1) * mat_grads[k];
      v = beta2 * v + (1.0 - beta2) * mat_grads[k].cwiseProduct(mat_grads[k]);
      *mats[k] -= lr * ((m / bias1).array() / ((v / bias2).array().sqrt() + eps)).matrix();
    }
    for (std::size_t k = 0; k < vecs.size(); ++k) {
      auto& m = state.m_vec[k];
      auto& v = state.v_vec[k];
      m = beta1 * m + (1.0 - beta1) * vec_grads[k];
      v = beta2 * v + (1.0 - beta2) * vec_grads[k].cwiseProduct(vec_grads[k]);
      *vecs[k] -= lr * ((m / bias1).array() / ((v / bias2).array().sqrt() + eps)).matrix();
    }
  }
  return total_steps == 0 ? 0.0 : total_err / static_cast<double>(total_steps);
}

}  // namespace fogsim::nn

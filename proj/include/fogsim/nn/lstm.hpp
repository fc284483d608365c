#pragma once

#include "fogsim/rng.hpp"
#include "fogsim/types.hpp"

#include <vector>

namespace fogsim::nn {

/// Single-cell LSTM over per-interval utilization vectors with a linear
/// readout, used to forecast the next sample of a task's demand series.
/// Inputs and targets are scaled by `feature_scale` (fit during training) so
/// the recurrence operates near [0, 1].
struct LstmPredictor {
  int hidden = 32;
  Matrix Wi, Ui;
  Vector bi;
  Matrix Wf, Uf;
  Vector bf;
  Matrix Wo, Uo;
  Vector bo;
  Matrix Wg, Ug;
  Vector bg;
  Matrix Wy;
  Vector by;
  Vec4 feature_scale = Vec4::Ones();

  static LstmPredictor make(int hidden, Rng& rng);
};

/// Runs the cell over the whole history and returns the forecast for the
/// next sample (non-negative). Throws std::invalid_argument on an empty
/// history.
UtilizationSample lstm_predict(const LstmPredictor& p,
                               const std::vector<UtilizationSample>& history);

/// One epoch of teacher-forced next-step training over the sequences; call
/// repeatedly with the same state to continue. Returns the mean per-step
/// squared error in scaled units.
struct LstmTrainState;  // opaque Adam state

double lstm_train_epoch(LstmPredictor& p, LstmTrainState& state,
                        const std::vector<std::vector<UtilizationSample>>& sequences,
                        double lr);

struct LstmTrainState {
  long steps = 0;
  std::vector<Matrix> m_mat, v_mat;
  std::vector<Vector> m_vec, v_vec;
  bool scale_fitted = false;
};

}  // namespace fogsim::nn

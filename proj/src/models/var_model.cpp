#include "linchpin/models/var_model.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "linchpin/distributions.hpp"

namespace linchpin {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// LLT with a one-shot symmetric jitter repair for borderline matrices.
Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& matrix, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success) {
    std::cerr << "var_model: " << what << " not positive-definite, repairing with 1e-10 jitter\n";
    Eigen::MatrixXd repaired = matrix;
    repaired.diagonal().array() += 1e-10;
    llt.compute(repaired);
    if (llt.info() != Eigen::Success)
      throw std::domain_error(std::string("var_model: ") + what + " not positive-definite");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

// Lower-triangular Bartlett factor: T_ii^2 ~ chi^2(df - i), T_ij ~ N(0,1).
Eigen::MatrixXd bartlett_factor(int dim, double df, RandomStream& stream) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    t(i, i) = std::sqrt(draw_chi_square(stream, df - i));
    for (int j = 0; j < i; ++j) t(i, j) = stream.normal();
  }
  return t;
}
}  // namespace

VarModelData::VarModelData(Eigen::MatrixXd Y_in, Eigen::MatrixXd X_in, int lag_in,
                           Eigen::VectorXd m_in, Eigen::MatrixXd C_in, Eigen::MatrixXd D_in,
                           double a_in)
    : Y(std::move(Y_in)), X(std::move(X_in)), lag(lag_in), m(std::move(m_in)),
      C(std::move(C_in)), D(std::move(D_in)), a(a_in) {
  if (lag < 1) throw std::domain_error("VarModelData: lag must be >= 1");
  if (Y.rows() != X.rows()) throw std::domain_error("VarModelData: Y and X row counts differ");
  if (K() <= lag) throw std::domain_error("VarModelData: needs more than q observations");
  const int qr2 = lag * r() * r();
  if (m.size() != qr2 || C.rows() != qr2 || C.cols() != qr2)
    throw std::domain_error("VarModelData: coefficient prior dimensions mismatch");
  if (D.rows() != r() || D.cols() != r())
    throw std::domain_error("VarModelData: D must be r x r");
  if (Eigen::LLT<Eigen::MatrixXd>(C).info() != Eigen::Success)
    throw std::domain_error("VarModelData: C must be positive-definite");
  if (Eigen::LLT<Eigen::MatrixXd>(D).info() != Eigen::Success)
    throw std::domain_error("VarModelData: D must be positive-definite");
}

VarModelData make_var_data(Eigen::MatrixXd Y, Eigen::MatrixXd X, int lag) {
  const int r = static_cast<int>(Y.cols());
  const int qr2 = lag * r * r;
  return VarModelData(std::move(Y), std::move(X), lag, Eigen::VectorXd::Zero(qr2),
                      Eigen::MatrixXd::Identity(qr2, qr2),
                      Eigen::MatrixXd::Identity(r, r), r + 2.0);
}

Eigen::MatrixXd VarModelData::effective_response() const {
  return Y.bottomRows(effective());
}

Eigen::MatrixXd VarModelData::lagged_design() const {
  const int T = effective();
  Eigen::MatrixXd W(T, lag * r());
  for (int t = 0; t < T; ++t)
    for (int i = 1; i <= lag; ++i)
      W.row(t).segment((i - 1) * r(), r()) = Y.row(lag + t - i);
  return W;
}

Eigen::MatrixXd VarModelData::exog_design() const {
  return X.bottomRows(effective());
}

double var_log_joint(const VarModelData& data, const VarState& state) {
  const int r = data.r();
  if (state.A.rows() != data.lag * r || state.A.cols() != r ||
      state.B.rows() != data.p() || state.B.cols() != r || state.Sigma.rows() != r ||
      state.Sigma.cols() != r)
    throw std::domain_error("var_log_joint: state dimensions mismatch");
  if (!state.Sigma.isApprox(state.Sigma.transpose(), 1e-10)) return kNegInf;
  Eigen::LLT<Eigen::MatrixXd> llt(state.Sigma);
  if (llt.info() != Eigen::Success) return kNegInf;

  const Eigen::MatrixXd resid = data.effective_response() - data.lagged_design() * state.A -
                                data.exog_design() * state.B;
  const double log_det_sigma = log_det_from_llt(llt);
  const int T = data.effective();

  double value = -0.5 * T * (r * kLogTwoPi + log_det_sigma);
  value -= 0.5 * llt.solve(resid.transpose()).cwiseProduct(resid.transpose()).sum();

  const Eigen::VectorXd centered =
      Eigen::Map<const Eigen::VectorXd>(state.A.data(), state.A.size()) - data.m;
  value -= 0.5 * centered.dot(data.C * centered);
  value -= 0.5 * data.a * log_det_sigma;
  value -= 0.5 * llt.solve(data.D).trace();
  return value;
}

double var_log_marginal_a_sigma(const VarModelData& data, const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& Sigma) {
  const int r = data.r();
  if (!Sigma.isApprox(Sigma.transpose(), 1e-10)) return kNegInf;
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) return kNegInf;

  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::LLT<Eigen::MatrixXd> llt_xx(Eigen::MatrixXd(Xe.transpose() * Xe));
  const Eigen::MatrixXd E = data.effective_response() - data.lagged_design() * A;
  // S = E^T M E with M the projector off the column space of Xe
  const Eigen::MatrixXd XtE = Xe.transpose() * E;
  const Eigen::MatrixXd S = E.transpose() * E - XtE.transpose() * llt_xx.solve(XtE);

  const double log_det_sigma = log_det_from_llt(llt);
  const int T = data.effective();
  double value = -0.5 * (T - data.p()) * log_det_sigma;
  value -= 0.5 * llt.solve(S).trace();
  const Eigen::VectorXd centered = Eigen::Map<const Eigen::VectorXd>(A.data(), A.size()) - data.m;
  value -= 0.5 * centered.dot(data.C * centered);
  value -= 0.5 * data.a * log_det_sigma;
  value -= 0.5 * llt.solve(data.D).trace();
  (void)r;
  return value;
}

Eigen::MatrixXd var_draw_sigma(const VarModelData& data, const Eigen::MatrixXd& A,
                               RandomStream& stream) {
  const int r = data.r();
  const Eigen::MatrixXd Ye = data.effective_response();
  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::LLT<Eigen::MatrixXd> llt_xx = checked_llt(Xe.transpose() * Xe, "X^T X");

  // inverse Wishart with scale D + E^T M E, B integrated out
  const double df = data.effective() - data.p() + data.a - r - 1;
  if (!(df > r - 1))
    throw std::domain_error("var_draw_sigma: too few observations for the Sigma draw");
  const Eigen::MatrixXd E = Ye - data.lagged_design() * A;
  const Eigen::MatrixXd XtE = Xe.transpose() * E;
  Eigen::MatrixXd scale = data.D + E.transpose() * E - XtE.transpose() * llt_xx.solve(XtE);
  scale = 0.5 * (scale + scale.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt_scale = checked_llt(scale, "Sigma scale");
  const Eigen::MatrixXd bartlett = bartlett_factor(r, df, stream);
  // Sigma = L T^{-T} T^{-1} L^T for scale = L L^T
  const Eigen::MatrixXd g = bartlett.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd(llt_scale.matrixL()).transpose());
  Eigen::MatrixXd sigma = g.transpose() * g;
  return 0.5 * (sigma + sigma.transpose());
}

Eigen::MatrixXd var_draw_coefficients(const VarModelData& data, const Eigen::MatrixXd& Sigma,
                                      RandomStream& stream) {
  const int r = data.r();
  const Eigen::MatrixXd Ye = data.effective_response();
  const Eigen::MatrixXd W = data.lagged_design();
  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::LLT<Eigen::MatrixXd> llt_xx = checked_llt(Xe.transpose() * Xe, "X^T X");

  // Gaussian on vec(A) with B integrated out
  const Eigen::LLT<Eigen::MatrixXd> llt_sigma = checked_llt(Sigma, "Sigma");
  const Eigen::MatrixXd sigma_inv = llt_sigma.solve(Eigen::MatrixXd::Identity(r, r));
  const Eigen::MatrixXd XtW = Xe.transpose() * W;
  const Eigen::MatrixXd WtMW = W.transpose() * W - XtW.transpose() * llt_xx.solve(XtW);
  const Eigen::MatrixXd XtY = Xe.transpose() * Ye;
  const Eigen::MatrixXd WtMY = W.transpose() * Ye - XtW.transpose() * llt_xx.solve(XtY);

  const Eigen::MatrixXd precision = kron(sigma_inv, WtMW) + data.C;
  const Eigen::MatrixXd lin = WtMY * sigma_inv;  // vec gives the likelihood part
  const Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(lin.data(), lin.size()) + data.C * data.m;
  const Eigen::LLT<Eigen::MatrixXd> llt_prec = checked_llt(precision, "A precision");
  const Eigen::VectorXd mean = llt_prec.solve(rhs);
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = stream.normal();
  const Eigen::VectorXd vec_a =
      mean +
      Eigen::MatrixXd(llt_prec.matrixL()).transpose().triangularView<Eigen::Upper>().solve(z);
  return Eigen::Map<const Eigen::MatrixXd>(vec_a.data(), data.lag * r, r);
}

Eigen::MatrixXd var_draw_exog(const VarModelData& data, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& Sigma, RandomStream& stream) {
  const int r = data.r();
  const Eigen::MatrixXd Xe = data.exog_design();
  const Eigen::LLT<Eigen::MatrixXd> llt_xx = checked_llt(Xe.transpose() * Xe, "X^T X");

  // matrix normal around the regression solve given the A-residuals
  const Eigen::MatrixXd E = data.effective_response() - data.lagged_design() * A;
  const Eigen::MatrixXd b_hat = llt_xx.solve(Xe.transpose() * E);
  Eigen::MatrixXd z(data.p(), r);
  for (int i = 0; i < data.p(); ++i)
    for (int j = 0; j < r; ++j) z(i, j) = stream.normal();
  const Eigen::LLT<Eigen::MatrixXd> llt_sigma = checked_llt(Sigma, "Sigma");
  const Eigen::MatrixXd l_sigma = llt_sigma.matrixL();
  const Eigen::MatrixXd lx = llt_xx.matrixL();
  return b_hat + lx.transpose().triangularView<Eigen::Upper>().solve(z) * l_sigma.transpose();
}

VarState var_collapsed_step(const VarModelData& data, const VarState& state,
                            RandomStream& stream) {
  VarState next;
  next.Sigma = var_draw_sigma(data, state.A, stream);
  next.A = var_draw_coefficients(data, next.Sigma, stream);
  next.B = var_draw_exog(data, next.A, next.Sigma, stream);
  return next;
}

int var_packed_size(const VarModelData& data) {
  const int r = data.r();
  return data.lag * r * r + data.p() * r + r * (r + 1) / 2;
}

Eigen::VectorXd pack_var_state(const VarModelData& data, const VarState& state) {
  const int r = data.r();
  Eigen::VectorXd packed(var_packed_size(data));
  Eigen::Index pos = 0;
  packed.segment(pos, state.A.size()) =
      Eigen::Map<const Eigen::VectorXd>(state.A.data(), state.A.size());
  pos += state.A.size();
  packed.segment(pos, state.B.size()) =
      Eigen::Map<const Eigen::VectorXd>(state.B.data(), state.B.size());
  pos += state.B.size();
  for (int j = 0; j < r; ++j)
    for (int i = j; i < r; ++i) packed[pos++] = state.Sigma(i, j);
  return packed;
}

VarState unpack_var_state(const VarModelData& data, const Eigen::VectorXd& packed) {
  const int r = data.r();
  if (packed.size() != var_packed_size(data))
    throw std::domain_error("unpack_var_state: packed size mismatch");
  VarState state;
  Eigen::Index pos = 0;
  state.A = Eigen::Map<const Eigen::MatrixXd>(packed.data() + pos, data.lag * r, r);
  pos += state.A.size();
  state.B = Eigen::Map<const Eigen::MatrixXd>(packed.data() + pos, data.p(), r);
  pos += state.B.size();
  state.Sigma.resize(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = j; i < r; ++i) {
      state.Sigma(i, j) = packed[pos];
      state.Sigma(j, i) = packed[pos];
      ++pos;
    }
  return state;
}

TargetDensity var_joint_target(const VarModelData& data) {
  TargetDensity target;
  target.dimension = var_packed_size(data);
  auto shared = std::make_shared<VarModelData>(data);
  target.log_density = [shared](const Eigen::VectorXd& packed) {
    return var_log_joint(*shared, unpack_var_state(*shared, packed));
  };
  return target;
}

VarModelData synth_var(int r, int p, int lag, int K, const VarState& truth,
                       std::uint64_t seed) {
  if (truth.A.rows() != lag * r || truth.A.cols() != r || truth.B.rows() != p ||
      truth.B.cols() != r)
    throw std::domain_error("synth_var: truth dimensions mismatch");
  RandomStream stream(seed);
  const MvnParams noise(Eigen::VectorXd::Zero(r), truth.Sigma);

  Eigen::MatrixXd X(K, p), Y(K, r);
  for (int t = 0; t < K; ++t)
    for (int j = 0; j < p; ++j) X(t, j) = stream.normal();
  Y.topRows(lag).setZero();
  for (int t = lag; t < K; ++t) {
    Eigen::VectorXd mean = truth.B.transpose() * X.row(t).transpose();
    for (int i = 1; i <= lag; ++i)
      mean += truth.A.middleRows((i - 1) * r, r).transpose() * Y.row(t - i).transpose();
    Y.row(t) = (mean + draw_mvn(stream, noise)).transpose();
  }
  return make_var_data(std::move(Y), std::move(X), lag);
}

}  // namespace linchpin

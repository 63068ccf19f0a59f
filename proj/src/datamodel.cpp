/*
 * Copyright (c) 2026 The dissynth authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "datamodel.hpp"

#include <random>
#include <string>

#include "qmi.hpp"

namespace dissynth::datamodel {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expectShape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                 const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(name) + " must be " +
                         std::to_string(rows) + "x" + std::to_string(cols) +
                         ", got " + shape(m));
  }
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// [I Top; 0_{gap} 0; 0 -Low; 0_{pad} 0] Phi_G [...]'.
SymMatrix outerProduct(const Matrix& top, const Matrix& low, Eigen::Index gap,
                       Eigen::Index pad, const PartitionedForm& phiG) {
  const auto q = top.rows();
  const auto t = top.cols();
  const auto rows = q + gap + low.rows() + pad;
  Matrix fac = Matrix::Zero(rows, q + t);
  fac.topLeftCorner(q, q).setIdentity();
  fac.block(0, q, q, t) = top;
  fac.block(q + gap, q, low.rows(), t) = -low;
  return SymMatrix::symmetrize(fac * phiG.matrix() * fac.transpose());
}

Matrix stateInput(const ExperimentData& data) {
  return vstack(data.xMinus(), data.uMinus);
}

void requireRank(const ExperimentData& data) {
  if (!checkRank(data)) {
    throw HypothesisError(
        "rank", "[X-; U-] has rank " +
                    std::to_string(matcore::numericalRank(stateInput(data))) +
                    ", needs " + std::to_string(data.n() + data.m()));
  }
}

const Matrix& requireOutputs(const ExperimentData& data) {
  if (!data.yMinus) throw ValidationError("output data Y- is missing");
  return *data.yMinus;
}

void checkChannels(const ExperimentData& data, const Matrix& e,
                   const NoiseModel& noise) {
  expectShape(e, data.n(), noise.d(), "E");
  if (noise.samples() != data.samples()) {
    throw DimensionError("noise model covers " +
                         std::to_string(noise.samples()) +
                         " samples, data has " +
                         std::to_string(data.samples()));
  }
}

}  // namespace

void PlantModel::validate() const {
  const auto nn = n();
  expectShape(a, nn, nn, "A");
  expectShape(b, nn, b.cols(), "B");
  expectShape(c, c.rows(), nn, "C");
  expectShape(d, c.rows(), b.cols(), "D");
  expectShape(e, nn, e.cols(), "E");
  expectShape(f, c.rows(), e.cols(), "F");
}

NoiseModel::NoiseModel(PartitionedForm phi) : phi_(std::move(phi)) {
  const qmi::PiClassReport rep = qmi::validatePiClass(phi_);
  if (!rep.inPiClass || !rep.pi22Nd) {
    throw HypothesisError("noise model",
                          "Phi must lie in the Pi-class with Phi22 < 0");
  }
}

NoiseModel NoiseModel::normBound(Eigen::Index d, Eigen::Index t, double bound) {
  if (!(bound >= 0.0)) throw ValidationError("noise bound must be >= 0");
  return energyBound(d, t, static_cast<double>(t) * bound * bound);
}

NoiseModel NoiseModel::energyBound(Eigen::Index d, Eigen::Index t,
                                   double energy) {
  if (!(energy >= 0.0)) throw ValidationError("noise energy must be >= 0");
  if (d < 1 || t < 1) throw ValidationError("noise model needs d, T >= 1");
  Matrix phi = Matrix::Zero(d + t, d + t);
  phi.topLeftCorner(d, d) = energy * Matrix::Identity(d, d);
  phi.bottomRightCorner(t, t) = -Matrix::Identity(t, t);
  return NoiseModel(PartitionedForm(SymMatrix(phi), d, t));
}

bool NoiseModel::admits(const Matrix& w, double tol) const {
  return qmi::zMembership(phi_, w.transpose(), tol);
}

void ExperimentData::validate() const {
  if (samples() < 1) throw ValidationError("experiment needs T >= 1");
  expectShape(x, x.rows(), samples() + 1, "X");
  if (yMinus) expectShape(*yMinus, yMinus->rows(), samples(), "Y_minus");
}

std::pair<Matrix, Matrix> stackNoiseChannels(const Matrix& e, const Matrix& f) {
  const auto d1 = e.cols();
  const auto d2 = f.cols();
  Matrix es = Matrix::Zero(e.rows(), d1 + d2);
  Matrix fs = Matrix::Zero(f.rows(), d1 + d2);
  es.leftCols(d1) = e;
  fs.rightCols(d2) = f;
  return {es, fs};
}

ExperimentData simulate(const PlantModel& plant, const Matrix& inputs,
                        const Vector& x0, const Matrix& noise) {
  plant.validate();
  const auto t = inputs.cols();
  expectShape(inputs, plant.m(), t, "inputs");
  expectShape(noise, plant.noiseDim(), t, "noise");
  expectShape(x0, plant.n(), 1, "x0");
  ExperimentData data;
  data.uMinus = inputs;
  data.x.resize(plant.n(), t + 1);
  Matrix y(plant.p(), t);
  data.x.col(0) = x0;
  for (Eigen::Index k = 0; k < t; ++k) {
    const Vector xk = data.x.col(k);
    data.x.col(k + 1) = plant.a * xk + plant.b * inputs.col(k) + plant.e * noise.col(k);
    y.col(k) = plant.c * xk + plant.d * inputs.col(k) + plant.f * noise.col(k);
  }
  data.yMinus = y;
  return data;
}

Experiment generateExperiment(const ExperimentConfig& cfg) {
  cfg.plant.validate();
  if (cfg.samples < 1) throw ValidationError("experiment needs T >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(cfg.noiseLow, cfg.noiseHigh);
  Experiment ex;
  ex.x0.resize(cfg.plant.n());
  for (auto& v : ex.x0) v = cfg.x0Scale * gauss(rng);
  Matrix u(cfg.plant.m(), cfg.samples);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = cfg.inputScale * gauss(rng);
  ex.noise.resize(cfg.plant.noiseDim(), cfg.samples);
  for (Eigen::Index i = 0; i < ex.noise.size(); ++i) ex.noise.data()[i] = unif(rng);
  ex.data = simulate(cfg.plant, u, ex.x0, ex.noise);
  return ex;
}

PartitionedForm phiTransformed(const NoiseModel& noise, const Matrix& g) {
  return qmi::transformW(noise.phi(), g);
}

PartitionedForm buildNk(const ExperimentData& data, const Matrix& e,
                        const NoiseModel& noise) {
  checkChannels(data, e, noise);
  const PartitionedForm phiE = phiTransformed(noise, e.transpose());
  return PartitionedForm(
      outerProduct(data.xPlus(), stateInput(data), 0, 0, phiE), data.n(),
      data.n() + data.m());
}

PartitionedForm buildNu(const ExperimentData& data, const Matrix& e,
                        const Matrix& f, const NoiseModel& noise) {
  const Matrix& y = requireOutputs(data);
  checkChannels(data, e, noise);
  expectShape(f, y.rows(), e.cols(), "F");
  const PartitionedForm phiG =
      phiTransformed(noise, vstack(e, f).transpose());
  return PartitionedForm(
      outerProduct(vstack(data.xPlus(), y), stateInput(data), 0, 0, phiG),
      data.n() + y.rows(), data.n() + data.m());
}

PartitionedForm buildBarNk(const ExperimentData& data, const Matrix& e,
                           const NoiseModel& noise, Eigen::Index p) {
  checkChannels(data, e, noise);
  requireRank(data);
  const PartitionedForm phiE = phiTransformed(noise, e.transpose());
  return PartitionedForm(
      outerProduct(data.xPlus(), stateInput(data), p, 0, phiE), data.n() + p,
      data.n() + data.m());
}

SymMatrix buildHatNk(const ExperimentData& data, const Matrix& e,
                     const NoiseModel& noise, Eigen::Index p) {
  checkChannels(data, e, noise);
  const PartitionedForm phiE = phiTransformed(noise, e.transpose());
  return outerProduct(data.xPlus(), stateInput(data), p, data.n(), phiE);
}

SymMatrix buildHatNu(const ExperimentData& data, const Matrix& e,
                     const Matrix& f, const NoiseModel& noise) {
  const Matrix& y = requireOutputs(data);
  checkChannels(data, e, noise);
  expectShape(f, y.rows(), e.cols(), "F");
  const PartitionedForm phiG =
      phiTransformed(noise, vstack(e, f).transpose());
  return outerProduct(vstack(data.xPlus(), y), stateInput(data), 0, data.n(),
                      phiG);
}

SymMatrix buildHatR(const SymMatrix& q, const Matrix& e, const Matrix& f,
                    const SymMatrix& sHat) {
  const auto n = q.dim();
  const auto p = f.rows();
  const auto d = e.cols();
  expectShape(e, n, d, "E");
  expectShape(sHat.matrix(), p + d, p + d, "Shat");
  Matrix g = Matrix::Zero(p + d, n + p);
  g.block(0, n, p, p).setIdentity();
  g.block(p, 0, d, n) = e.transpose();
  g.block(p, n, d, p) = f.transpose();
  Matrix r = g.transpose() * sHat.matrix() * g;
  r.topLeftCorner(n, n) += q.matrix();
  return SymMatrix::symmetrize(r);
}

SymMatrix buildHatMk(const SymMatrix& q, const Matrix& l, const Matrix& cs,
                     const Matrix& ds, const Matrix& e, const Matrix& f,
                     const SymMatrix& sHat) {
  const auto n = q.dim();
  const auto m = l.rows();
  const auto p = cs.rows();
  expectShape(l, m, n, "L");
  expectShape(cs, p, n, "C_s");
  expectShape(ds, p, m, "D_s");
  const Matrix& qm = q.matrix();
  const auto k = 3 * n + p + m;
  Matrix out = Matrix::Zero(k, k);
  Matrix r = buildHatR(q, e, f, sHat).matrix();
  r.bottomRightCorner(p, p) -= cs * qm * cs.transpose() +
                               cs * l.transpose() * ds.transpose() +
                               ds * l * cs.transpose();
  out.topLeftCorner(n + p, n + p) = r;
  const auto c2 = n + p;
  const auto c3 = 2 * n + p + m;
  out.block(n, c2, p, n) = -cs * qm;
  out.block(n, c2 + n, p, m) = -cs * l.transpose();
  out.block(n, c3, p, n) = ds * l;
  out.block(c2, c3, n, n) = qm;
  out.block(c2 + n, c3, m, n) = l;
  out.block(c3, c3, n, n) = qm;
  return SymMatrix(Matrix(out.selfadjointView<Eigen::Upper>()));
}

SymMatrix buildHatMu(const SymMatrix& q, const Matrix& l, const Matrix& e,
                     const Matrix& f, const SymMatrix& sHat) {
  const auto n = q.dim();
  const auto m = l.rows();
  const auto p = f.rows();
  expectShape(l, m, n, "L");
  const auto k = 3 * n + p + m;
  Matrix out = Matrix::Zero(k, k);
  out.topLeftCorner(n + p, n + p) = buildHatR(q, e, f, sHat).matrix();
  const auto c2 = n + p;
  const auto c3 = 2 * n + p + m;
  out.block(c2, c3, n, n) = q.matrix();
  out.block(c2 + n, c3, m, n) = l;
  out.block(c3, c3, n, n) = q.matrix();
  return SymMatrix(Matrix(out.selfadjointView<Eigen::Upper>()));
}

SymMatrix buildMk(const SymMatrix& q, const Matrix& k, const Matrix& cs,
                  const Matrix& ds, const Matrix& e, const Matrix& f,
                  const SymMatrix& sHat) {
  const auto n = q.dim();
  const auto m = k.rows();
  const auto p = cs.rows();
  expectShape(k, m, n, "K");
  expectShape(cs, p, n, "C_s");
  expectShape(ds, p, m, "D_s");
  const Matrix& qm = q.matrix();
  const Matrix ccl = cs + ds * k;
  Matrix out = Matrix::Zero(2 * n + p + m, 2 * n + p + m);
  Matrix r = buildHatR(q, e, f, sHat).matrix();
  r.bottomRightCorner(p, p) -= ccl * qm * ccl.transpose();
  out.topLeftCorner(n + p, n + p) = r;
  const auto c2 = n + p;
  out.block(n, c2, p, n) = -ccl * qm;
  out.block(n, c2 + n, p, m) = -ccl * qm * k.transpose();
  Matrix ik(n + m, n);
  ik << Matrix::Identity(n, n), k;
  out.block(c2, c2, n + m, n + m) = -ik * qm * ik.transpose();
  return SymMatrix(Matrix(out.selfadjointView<Eigen::Upper>()));
}

SymMatrix buildMu(const SymMatrix& q, const Matrix& k, const Matrix& e,
                  const Matrix& f, const SymMatrix& sHat) {
  const auto n = q.dim();
  const auto m = k.rows();
  const auto p = f.rows();
  expectShape(k, m, n, "K");
  Matrix out = Matrix::Zero(2 * n + p + m, 2 * n + p + m);
  out.topLeftCorner(n + p, n + p) = buildHatR(q, e, f, sHat).matrix();
  Matrix ik(n + m, n);
  ik << Matrix::Identity(n, n), k;
  out.bottomRightCorner(n + m, n + m) = -ik * q.matrix() * ik.transpose();
  return SymMatrix::symmetrize(out);
}

std::vector<PlantModel> sampleConsistentKnown(
    const ExperimentData& data, const Matrix& e, const Matrix& f,
    const Matrix& cs, const Matrix& ds, const NoiseModel& noise, int count,
    std::uint64_t seed, int boundaryCount) {
  requireRank(data);
  const PartitionedForm nk = buildNk(data, e, noise);
  const auto n = data.n();
  std::vector<PlantModel> out;
  for (const Matrix& z : qmi::sampleZ(nk, count, seed, boundaryCount)) {
    const Matrix ab = z.transpose();
    out.push_back({ab.leftCols(n), ab.rightCols(data.m()), cs, ds, e, f});
  }
  return out;
}

std::vector<PlantModel> sampleConsistentUnknown(
    const ExperimentData& data, const Matrix& e, const Matrix& f,
    const NoiseModel& noise, int count, std::uint64_t seed,
    int boundaryCount) {
  requireRank(data);
  const PartitionedForm nu = buildNu(data, e, f, noise);
  const auto n = data.n();
  const auto m = data.m();
  const auto p = f.rows();
  std::vector<PlantModel> out;
  for (const Matrix& z : qmi::sampleZ(nu, count, seed, boundaryCount)) {
    const Matrix sys = z.transpose();
    out.push_back({sys.topLeftCorner(n, n), sys.topRightCorner(n, m),
                   sys.bottomLeftCorner(p, n), sys.bottomRightCorner(p, m), e,
                   f});
  }
  return out;
}

bool checkRank(const ExperimentData& data) {
  return matcore::numericalRank(stateInput(data)) == data.n() + data.m();
}

bool checkPositiveEigenvalue(const SymMatrix& n) {
  return matcore::maxEigenvalue(n) > matcore::kZeroTol * matcore::scaleOf(n);
}

bool checkInteriorSufficient(const PartitionedForm& n) {
  const SymMatrix p22 = SymMatrix::symmetrize(n.block22());
  const double scale = matcore::scaleOf(n.sym());
  return matcore::maxEigenvalue(p22) < -matcore::kZeroTol * scale &&
         matcore::minEigenvalue(matcore::schurComplement(n)) >
             matcore::kZeroTol * scale;
}

}  // namespace dissynth::datamodel

// Copyright 2026 The nebcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nebcert/channels.hpp"

#include <cmath>
#include <string>

#include "nebcert/errors.hpp"

namespace nebcert {

namespace {

constexpr double kChannelTol = 1e-10;

}  // namespace

void EBChannelSpec::validate() const {
  if (povm.empty()) throw ConfigError("measure-and-prepare spec needs at least one effect");
  if (povm.size() != outputs.size()) {
    throw ConfigError("measure-and-prepare spec has " + std::to_string(povm.size()) + " effects but " +
                      std::to_string(outputs.size()) + " output states");
  }
  Mat2 sum = Mat2::Zero();
  for (const Mat2& e : povm) {
    if (!e.allFinite() || (e - e.adjoint()).cwiseAbs().maxCoeff() > kChannelTol) {
      throw ConfigError("POVM effect is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kChannelTol) throw ConfigError("POVM effect is not positive semidefinite");
    sum += e;
  }
  if ((sum - Mat2::Identity()).cwiseAbs().maxCoeff() > kChannelTol) {
    throw ConfigError("POVM effects do not sum to the identity");
  }
  for (const DensityMatrix& out : outputs) {
    if (out.dim() != 2) throw ConfigError("measure-and-prepare outputs must be qubit states");
  }
}

Channel::Channel(std::vector<Mat2> kraus_ops) : kraus_(std::move(kraus_ops)) {
  if (kraus_.empty()) throw ConfigError("channel needs at least one Kraus operator");
  Mat2 sum = Mat2::Zero();
  for (const Mat2& k : kraus_) sum += k.adjoint() * k;
  if (!sum.allFinite() || (sum - Mat2::Identity()).cwiseAbs().maxCoeff() > kChannelTol) {
    throw ConfigError("Kraus operators are not trace preserving");
  }
}

Channel Channel::identity() { return Channel({Mat2::Identity()}); }

Channel decoherence(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError("decoherence strength must lie in [0, 1], got " + std::to_string(gamma));
  }
  return Channel({std::sqrt(1.0 - gamma / 2.0) * Mat2::Identity(), std::sqrt(gamma / 2.0) * pauli_z()});
}

Channel from_eb_spec(const EBChannelSpec& spec) {
  spec.validate();
  std::vector<Mat2> kraus;
  for (std::size_t k = 0; k < spec.povm.size(); ++k) {
    const Mat2& effect = spec.povm[k];
    Eigen::SelfAdjointEigenSolver<Mat2> measure(0.5 * (effect + effect.adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat2> prepare(spec.outputs[k].as_mat2());
    for (int i = 0; i < 2; ++i) {
      const double l = std::max(0.0, measure.eigenvalues()(i));
      if (l == 0.0) continue;
      for (int j = 0; j < 2; ++j) {
        const double p = std::max(0.0, prepare.eigenvalues()(j));
        if (p == 0.0) continue;
        kraus.push_back(std::sqrt(l * p) * prepare.eigenvectors().col(j) * measure.eigenvectors().col(i).adjoint());
      }
    }
  }
  return Channel(std::move(kraus));
}

Mat2 apply(const Channel& ch, const Mat2& rho) {
  Mat2 out = Mat2::Zero();
  for (const Mat2& k : ch.kraus_ops()) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  Mat2 out = nebcert::apply(ch, rho.as_mat2());
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(out);
}

DensityMatrix choi_state(const Channel& ch) {
  // |Phi+><Phi+| = 1/2 sum_ij |i><j| (x) |i><j|.
  Mat4 choi = Mat4::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat2 unit = Mat2::Zero();
      unit(i, j) = 1.0;
      choi += 0.5 * kron(nebcert::apply(ch, unit), unit);
    }
  }
  choi = 0.5 * (choi + choi.adjoint());
  return DensityMatrix(choi);
}

Mat4 partial_transpose(const Mat4& m) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
  return out;
}

double min_partial_transpose_eigenvalue(const DensityMatrix& rho4) {
  if (rho4.dim() != 4) throw InvalidStateError("partial transpose needs a two-qubit state");
  const Mat4 pt = partial_transpose(rho4.matrix());
  Eigen::SelfAdjointEigenSolver<Mat4> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double negativity(const DensityMatrix& rho4) {
  if (rho4.dim() != 4) throw InvalidStateError("negativity needs a two-qubit state");
  Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose(rho4.matrix()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i) neg += std::max(0.0, -es.eigenvalues()(i));
  return neg;
}

}  // namespace nebcert

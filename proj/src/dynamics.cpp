// Copyright 2026 The hybridspin Authors
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

#include "hybridspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hybridspin/errors.hpp"
#include "hybridspin/kernels.hpp"

namespace hybridspin {

const HilbertSpace& state_space(const InitialState& state) {
  return std::visit([](const auto& s) -> const HilbertSpace& { return s.space(); }, state);
}

DenseMatrix initial_density(const InitialState& state) {
  if (const auto* psi = std::get_if<StateVector>(&state)) {
    return psi->amplitudes() * psi->amplitudes().adjoint();
  }
  if (const auto* rho = std::get_if<DensityMatrix>(&state)) return rho->matrix();
  return std::get<DiagonalDensity>(state).to_dense().matrix();
}

std::vector<double> EvolutionSpec::sample_times() const {
  std::vector<double> ts(n_samples);
  const double span = t_end - t_start;
  for (std::size_t k = 0; k < n_samples; ++k) {
    ts[k] = t_start + span * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  }
  ts.back() = t_end;
  return ts;
}

void EvolutionSpec::validate(const HilbertSpace& space) const {
  if (!(t_end > t_start)) throw InvalidArgument("t_end must exceed t_start");
  if (n_samples < 2) throw InvalidArgument("n_samples must be >= 2");
  const auto tol_ok = [](double v) { return v > 1e-14 && v < 1e-3; };
  if (!tol_ok(rel_tol) || !tol_ok(abs_tol)) {
    throw InvalidArgument("integrator tolerances must lie in (1e-14, 1e-3)");
  }
  if (!initial) throw InvalidArgument("evolution needs an initial state");
  require_same_space(space, state_space(*initial), "initial state");
  for (const auto& obs : observables) {
    require_same_space(space, obs.op.space(), "observable");
    obs.op.require_hermitian(("observable " + obs.name).c_str(), 1e-10);
  }
}

IntegratorOptions EvolutionSpec::integrator_options() const {
  IntegratorOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  o.max_step = max_step;
  return o;
}

bool TimeSeries::has_column(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::column(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidArgument("no column named '" + std::string(name) + "'");
  return columns[static_cast<std::size_t>(it - names.begin())];
}

void TimeSeries::add_column(std::string name, std::vector<double> values) {
  if (values.size() != times.size()) throw InvalidArgument("column length mismatch: " + name);
  if (has_column(name)) throw InvalidArgument("duplicate column: " + name);
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

namespace {

nlohmann::json stats_json(const IntegratorStats& s) {
  return {{"accepted_steps", s.accepted},
          {"rejected_steps", s.rejected},
          {"rhs_evaluations", s.rhs_evaluations},
          {"smallest_step", std::isfinite(s.smallest_step) ? s.smallest_step : 0.0}};
}

nlohmann::json base_metadata(const LindbladModel& model, const EvolutionSpec& spec,
                             const char* solver) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& f : model.space.factors()) dims.push_back(f.dim);
  return {{"model", model.label},
          {"space", model.space.describe()},
          {"factor_dims", dims},
          {"solver", solver},
          {"rel_tol", spec.rel_tol},
          {"abs_tol", spec.abs_tol},
          {"t_start", spec.t_start},
          {"t_end", spec.t_end},
          {"n_samples", spec.n_samples},
          {"truncation_converged", nullptr}};
}

TimeSeries empty_series(const EvolutionSpec& spec) {
  TimeSeries ts;
  ts.times = spec.sample_times();
  for (const auto& obs : spec.observables) {
    ts.names.push_back(obs.name);
    ts.columns.emplace_back(ts.times.size(), 0.0);
  }
  return ts;
}

std::vector<double> model_check_times(const EvolutionSpec& spec) {
  std::vector<double> ts;
  for (int k = 0; k <= 8; ++k) ts.push_back(spec.t_start + (spec.t_end - spec.t_start) * k / 8.0);
  return ts;
}

}  // namespace

TimeSeries evolve_lindblad(const LindbladModel& model, const EvolutionSpec& spec) {
  spec.validate(model.space);
  model.validate(model_check_times(spec));
  const LindbladGenerator gen(model);

  TimeSeries ts = empty_series(spec);
  DenseMatrix rho = initial_density(*spec.initial);

  double max_trace_err = 0.0, max_herm = 0.0, max_imag = 0.0;
  auto observer = [&](std::size_t k, double t, const DenseMatrix& r) {
    const StateChecks c = check_state(r, spec.checks.positivity);
    max_trace_err = std::max(max_trace_err, c.trace_error);
    max_herm = std::max(max_herm, c.hermiticity_defect);
    if (c.trace_error > spec.checks.trace) {
      std::ostringstream os;
      os << "trace drifted by " << c.trace_error;
      throw IntegrationError(os.str(), t);
    }
    if (c.hermiticity_defect > spec.checks.hermiticity) {
      std::ostringstream os;
      os << "density matrix lost Hermiticity (defect " << c.hermiticity_defect << ")";
      throw IntegrationError(os.str(), t);
    }
    if (!c.positive) {
      throw IntegrationError("density matrix has an eigenvalue below -" +
                                 std::to_string(spec.checks.positivity),
                             t);
    }
    for (std::size_t j = 0; j < spec.observables.size(); ++j) {
      const Complex v = trace_product(r, spec.observables[j].op.sparse());
      max_imag = std::max(max_imag, std::abs(v.imag()));
      ts.columns[j][k] = v.real();
    }
    if (spec.on_sample) spec.on_sample(k, t, r);
  };
  auto rhs = [&gen](double t, const DenseMatrix& y, DenseMatrix& dy) { gen.apply(t, y, dy); };
  const std::vector<double> samples = ts.times;
  const IntegratorStats stats = integrate_dopri5(rhs, rho, spec.t_start, samples,
                                                 spec.integrator_options(), observer);

  ts.metadata = base_metadata(model, spec, "lindblad-dense");
  ts.metadata["integrator"] = stats_json(stats);
  ts.metadata["max_trace_error"] = max_trace_err;
  ts.metadata["max_hermiticity_defect"] = max_herm;
  ts.metadata["max_imaginary_residue"] = max_imag;
  return ts;
}

DenseMatrix unitary_exponential(const Operator& h, double t) {
  h.require_hermitian("Hamiltonian", 1e-10);
  const DenseMatrix hd = 0.5 * (h.dense() + h.dense().adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(hd);
  if (es.info() != Eigen::Success) throw IntegrationError("eigendecomposition failed", t);
  const DenseVector phases =
      (-kI * t * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TimeSeries evolve_unitary(const LindbladModel& model, const EvolutionSpec& spec,
                          bool ignore_collapse) {
  spec.validate(model.space);
  model.validate(model_check_times(spec));
  if (!ignore_collapse) {
    for (const auto& c : model.collapse) {
      if (c.rate > 0.0) {
        throw InvalidArgument("model has collapse channel '" + c.name +
                              "'; pass ignore_collapse to evolve the Hamiltonian part");
      }
    }
  }
  const auto* psi0 = std::get_if<StateVector>(&*spec.initial);
  if (!psi0) throw InvalidArgument("unitary evolution needs a pure initial state");

  TimeSeries ts = empty_series(spec);
  double max_drift = 0.0, max_imag = 0.0;
  auto observer = [&](std::size_t k, double t, const DenseMatrix& psi) {
    const double drift = std::abs(psi.col(0).squaredNorm() - 1.0);
    max_drift = std::max(max_drift, drift);
    if (drift > 1e-6) {
      std::ostringstream os;
      os << "norm drifted by " << drift;
      throw IntegrationError(os.str(), t);
    }
    for (std::size_t j = 0; j < spec.observables.size(); ++j) {
      const DenseVector o = spec.observables[j].op.sparse() * psi.col(0);
      const Complex v = psi.col(0).dot(o);
      max_imag = std::max(max_imag, std::abs(v.imag()));
      ts.columns[j][k] = v.real();
    }
    if (spec.on_sample) spec.on_sample(k, t, psi);
  };

  DenseMatrix psi = psi0->amplitudes();
  if (model.hamiltonian.is_static()) {
    const Operator& h = model.hamiltonian.static_part();
    const DenseMatrix hd = 0.5 * (h.dense() + h.dense().adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(hd);
    if (es.info() != Eigen::Success) throw IntegrationError("eigendecomposition failed", 0.0);
    const DenseVector c0 = es.eigenvectors().adjoint() * psi.col(0);
    for (std::size_t k = 0; k < ts.times.size(); ++k) {
      const double dt = ts.times[k] - spec.t_start;
      const DenseVector ck =
          c0.cwiseProduct((-kI * dt * es.eigenvalues().cast<Complex>()).array().exp().matrix());
      const DenseMatrix state = es.eigenvectors() * ck;
      observer(k, ts.times[k], state);
    }
    ts.metadata = base_metadata(model, spec, "unitary-eigen");
  } else {
    const LindbladGenerator gen(model);
    auto rhs = [&gen](double t, const DenseMatrix& y, DenseMatrix& dy) {
      gen.apply_schroedinger(t, y, dy);
    };
    const std::vector<double> samples = ts.times;
    const IntegratorStats stats = integrate_dopri5(rhs, psi, spec.t_start, samples,
                                                   spec.integrator_options(), observer);
    ts.metadata = base_metadata(model, spec, "unitary-dopri5");
    ts.metadata["integrator"] = stats_json(stats);
  }
  ts.metadata["max_norm_drift"] = max_drift;
  ts.metadata["max_imaginary_residue"] = max_imag;
  return ts;
}

Operator propagator(const LindbladModel& model, double t0, double t1,
                    const IntegratorOptions& options) {
  if (t1 < t0) throw InvalidArgument("propagator needs t1 >= t0");
  const auto d = static_cast<Eigen::Index>(model.space.dim());
  DenseMatrix u;
  if (t1 == t0) {
    u = DenseMatrix::Identity(d, d);
  } else if (model.hamiltonian.is_static()) {
    u = unitary_exponential(model.hamiltonian.static_part(), t1 - t0);
  } else {
    const double samples[] = {t0 + 0.5 * (t1 - t0), t1};
    model.validate(samples);
    const LindbladGenerator gen(model);
    u = DenseMatrix::Identity(d, d);
    auto rhs = [&gen](double t, const DenseMatrix& y, DenseMatrix& dy) {
      gen.apply_schroedinger(t, y, dy);
    };
    const double target[] = {t1};
    integrate_dopri5(rhs, u, t0, target, options, [](std::size_t, double, const DenseMatrix&) {});
  }
  const double defect =
      (u.adjoint() * u - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > 1e-7) {
    std::ostringstream os;
    os << "propagator is not unitary (defect " << defect << ")";
    throw IntegrationError(os.str(), t1);
  }
  return Operator::from_dense(model.space, u, 0.0);
}

}  // namespace hybridspin

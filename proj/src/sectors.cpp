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

#include "hybridspin/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "csr.hpp"
#include "hybridspin/errors.hpp"

namespace hybridspin {

std::vector<int> basis_charges(const HilbertSpace& space, std::span<const int> weights) {
  if (weights.size() != space.num_factors()) {
    throw InvalidArgument("need one charge weight per factor");
  }
  std::vector<int> q(space.dim(), 0);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    int c = 0;
    for (std::size_t f = 0; f < weights.size(); ++f) c += weights[f] * space.digit(i, f);
    q[i] = c;
  }
  return q;
}

int charge_shift(const Operator& op, std::span<const int> charges) {
  const SparseMatrix& m = op.sparse();
  bool found = false;
  int shift = 0;
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      const int s = charges[static_cast<std::size_t>(i)] - charges[static_cast<std::size_t>(it.col())];
      if (!found) {
        shift = s;
        found = true;
      } else if (s != shift) {
        throw InvalidArgument("operator does not shift the charge by a fixed amount");
      }
    }
  }
  return shift;
}

namespace {

using ConstBlock = Eigen::Map<const DenseMatrix>;
using Block = Eigen::Map<DenseMatrix>;

struct Sector {
  int charge;
  std::vector<std::size_t> basis;
  Eigen::Index offset = 0;  // into the flat state; valid for active sectors
  Eigen::Index size() const { return static_cast<Eigen::Index>(basis.size()); }
};

class SectorLayout {
 public:
  SectorLayout(const HilbertSpace& space, std::span<const int> weights)
      : charges_(basis_charges(space, weights)), position_(space.dim()) {
    std::map<int, std::vector<std::size_t>> by_charge;
    for (std::size_t i = 0; i < charges_.size(); ++i) by_charge[charges_[i]].push_back(i);
    for (auto& [c, basis] : by_charge) {
      for (std::size_t p = 0; p < basis.size(); ++p) position_[basis[p]] = p;
      index_of_charge_[c] = all_.size();
      all_.push_back({c, std::move(basis)});
    }
    sector_of_.resize(space.dim());
    for (std::size_t s = 0; s < all_.size(); ++s) {
      for (std::size_t i : all_[s].basis) sector_of_[i] = s;
    }
    active_of_.assign(all_.size(), -1);
  }

  const std::vector<int>& charges() const { return charges_; }
  std::size_t num_sectors() const { return all_.size(); }
  const Sector& sector(std::size_t s) const { return all_[s]; }
  std::optional<std::size_t> sector_with_charge(int c) const {
    const auto it = index_of_charge_.find(c);
    if (it == index_of_charge_.end()) return std::nullopt;
    return it->second;
  }

  void activate(const std::vector<std::size_t>& sectors) {
    active_ = sectors;
    std::sort(active_.begin(), active_.end());
    Eigen::Index offset = 0;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      active_of_[active_[a]] = static_cast<long>(a);
      all_[active_[a]].offset = offset;
      offset += all_[active_[a]].size() * all_[active_[a]].size();
    }
    state_size_ = offset;
  }
  const std::vector<std::size_t>& active() const { return active_; }
  long active_index(std::size_t sector) const { return active_of_[sector]; }
  const Sector& active_sector(std::size_t a) const { return all_[active_[a]]; }
  Eigen::Index state_size() const { return state_size_; }

  // Blocks of `op` between active sectors, indexed by active target sector.
  // `with_source` receives the active source index per target.
  std::vector<SparseMatrix> restrict_op(const SparseMatrix& op,
                                        std::vector<long>* with_source = nullptr) const {
    const std::size_t na = active_.size();
    std::vector<std::vector<Eigen::Triplet<Complex>>> trip(na);
    std::vector<long> source(na, -1);
    for (Eigen::Index i = 0; i < op.outerSize(); ++i) {
      const long t = active_of_[sector_of_[static_cast<std::size_t>(i)]];
      if (t < 0) continue;
      for (SparseMatrix::InnerIterator it(op, i); it; ++it) {
        if (it.value() == Complex(0.0)) continue;
        const long s = active_of_[sector_of_[static_cast<std::size_t>(it.col())]];
        if (s < 0) continue;
        source[t] = s;
        trip[t].emplace_back(static_cast<Eigen::Index>(position_[static_cast<std::size_t>(i)]),
                             static_cast<Eigen::Index>(position_[static_cast<std::size_t>(it.col())]),
                             it.value());
      }
    }
    std::vector<SparseMatrix> out(na);
    for (std::size_t t = 0; t < na; ++t) {
      const Eigen::Index rows = active_sector(t).size();
      const Eigen::Index cols =
          source[t] >= 0 ? active_sector(static_cast<std::size_t>(source[t])).size() : rows;
      out[t].resize(rows, cols);
      out[t].setFromTriplets(trip[t].begin(), trip[t].end());
      out[t].makeCompressed();
    }
    if (with_source) *with_source = std::move(source);
    return out;
  }

  std::size_t position(std::size_t i) const { return position_[i]; }
  std::size_t sector_of(std::size_t i) const { return sector_of_[i]; }

 private:
  std::vector<int> charges_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> sector_of_;
  std::vector<Sector> all_;
  std::map<int, std::size_t> index_of_charge_;
  std::vector<std::size_t> active_;
  std::vector<long> active_of_;
  Eigen::Index state_size_ = 0;
};

// Dense block to compressed sparse, dropping rounding-level entries.
SparseMatrix sparsify(const DenseMatrix& m) {
  const double cut = 1e-13 * (m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > cut) trip.emplace_back(i, j, m(i, j));
    }
  }
  SparseMatrix out(m.rows(), m.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

// Initial charge blocks of every sector with nonzero weight, plus the
// Frobenius weight of discarded inter-sector coherences.
struct InitialBlocks {
  std::map<std::size_t, DenseMatrix> blocks;
  double dropped = 0.0;
};

InitialBlocks split_initial(const InitialState& state, const SectorLayout& layout) {
  InitialBlocks out;
  const std::size_t dim = layout.charges().size();
  if (const auto* psi = std::get_if<StateVector>(&state)) {
    std::map<std::size_t, DenseVector> parts;
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex a = psi->amplitudes()[static_cast<Eigen::Index>(i)];
      if (a == Complex(0.0)) continue;
      const std::size_t s = layout.sector_of(i);
      auto [it, fresh] = parts.try_emplace(s);
      if (fresh) it->second = DenseVector::Zero(layout.sector(s).size());
      it->second[static_cast<Eigen::Index>(layout.position(i))] = a;
    }
    double kept = 0.0;
    for (auto& [s, v] : parts) {
      const double w = v.squaredNorm();
      kept += w * w;
      out.blocks[s] = v * v.adjoint();
    }
    out.dropped = std::sqrt(std::max(0.0, 1.0 - kept));
  } else if (const auto* diag = std::get_if<DiagonalDensity>(&state)) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double p = diag->populations()[i];
      if (p == 0.0) continue;
      const std::size_t s = layout.sector_of(i);
      auto [it, fresh] = out.blocks.try_emplace(s);
      if (fresh) it->second = DenseMatrix::Zero(layout.sector(s).size(), layout.sector(s).size());
      const auto k = static_cast<Eigen::Index>(layout.position(i));
      it->second(k, k) = p;
    }
  } else {
    const DenseMatrix& rho = std::get<DensityMatrix>(state).matrix();
    double kept = 0.0;
    for (std::size_t s = 0; s < layout.num_sectors(); ++s) {
      const Sector& sec = layout.sector(s);
      DenseMatrix b(sec.size(), sec.size());
      for (Eigen::Index c = 0; c < sec.size(); ++c) {
        for (Eigen::Index r = 0; r < sec.size(); ++r) {
          b(r, c) = rho(static_cast<Eigen::Index>(sec.basis[static_cast<std::size_t>(r)]),
                        static_cast<Eigen::Index>(sec.basis[static_cast<std::size_t>(c)]));
        }
      }
      const double w = b.squaredNorm();
      if (w == 0.0) continue;
      kept += w;
      out.blocks[s] = std::move(b);
    }
    out.dropped = std::sqrt(std::max(0.0, rho.squaredNorm() - kept));
  }
  return out;
}

}  // namespace

TimeSeries evolve_lindblad_sectors(const LindbladModel& model, const EvolutionSpec& spec,
                                   std::span<const int> weights, const SectorOptions& options) {
  spec.validate(model.space);
  if (options.frame == SectorFrame::interaction && !model.hamiltonian.is_static()) {
    throw InvalidArgument("the interaction frame needs a static Hamiltonian");
  }
  {
    std::vector<double> ts;
    for (int k = 0; k <= 8; ++k) ts.push_back(spec.t_start + (spec.t_end - spec.t_start) * k / 8.0);
    model.validate(ts);
  }
  SectorLayout layout(model.space, weights);
  const std::vector<int>& q = layout.charges();

  if (charge_shift(model.hamiltonian.static_part(), q) != 0) {
    throw InvalidArgument("Hamiltonian does not conserve the sector charge");
  }
  for (const auto& term : model.hamiltonian.terms()) {
    if (charge_shift(term.op, q) != 0) {
      throw InvalidArgument("time-dependent Hamiltonian term does not conserve the sector charge");
    }
  }
  std::vector<int> shifts;
  for (const auto& c : model.collapse) shifts.push_back(charge_shift(c.op, q));
  for (const auto& obs : spec.observables) {
    if (charge_shift(obs.op, q) != 0) {
      throw InvalidArgument("observable '" + obs.name + "' is not charge-diagonal");
    }
  }

  InitialBlocks init = split_initial(*spec.initial, layout);

  // Sectors reachable from the initial state through collapse shifts.
  std::vector<char> seen(layout.num_sectors(), 0);
  std::deque<std::size_t> queue;
  for (const auto& [s, b] : init.blocks) {
    seen[s] = 1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t c = 0; c < model.collapse.size(); ++c) {
      if (model.collapse[c].rate == 0.0 || shifts[c] == 0) continue;
      const auto next = layout.sector_with_charge(layout.sector(s).charge + shifts[c]);
      if (next && !seen[*next]) {
        seen[*next] = 1;
        queue.push_back(*next);
      }
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < seen.size(); ++s) {
    if (seen[s]) active.push_back(s);
  }
  layout.activate(active);
  const std::size_t na = active.size();

  // Restricted generators.
  const bool interaction = options.frame == SectorFrame::interaction;
  SparseMatrix damping(static_cast<Eigen::Index>(model.space.dim()),
                       static_cast<Eigen::Index>(model.space.dim()));
  struct Jump {
    std::vector<SparseMatrix> blocks;
    std::vector<long> source;
  };
  std::vector<Jump> jumps;
  for (const auto& c : model.collapse) {
    if (c.rate == 0.0) continue;
    const SparseMatrix l = std::sqrt(c.rate) * c.op.sparse();
    damping += SparseMatrix(SparseMatrix(l.adjoint()) * l);
    Jump j;
    j.blocks = layout.restrict_op(l, &j.source);
    jumps.push_back(std::move(j));
  }
  std::vector<std::vector<SparseMatrix>> term_blocks;
  for (const auto& term : model.hamiltonian.terms()) {
    term_blocks.push_back(layout.restrict_op(term.op.sparse()));
  }
  std::vector<std::vector<SparseMatrix>> obs_blocks;
  for (const auto& obs : spec.observables) obs_blocks.push_back(layout.restrict_op(obs.op.sparse()));

  // In the interaction frame every block is expressed in the eigenbasis of
  // the sector Hamiltonian, which then only contributes phases.
  std::vector<SparseMatrix> heff;
  std::vector<DenseMatrix> eigvecs;
  std::vector<Eigen::VectorXd> energies;
  if (interaction) {
    const std::vector<SparseMatrix> hb = layout.restrict_op(model.hamiltonian.static_part().sparse());
    const std::vector<SparseMatrix> db = layout.restrict_op(damping);
    heff.resize(na);
    eigvecs.resize(na);
    energies.resize(na);
    bool failed = false;
#pragma omp parallel for schedule(dynamic) reduction(|| : failed)
    for (std::size_t a = 0; a < na; ++a) {
      const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(DenseMatrix(hb[a]));
      if (es.info() != Eigen::Success) {
        failed = true;
        continue;
      }
      energies[a] = es.eigenvalues();
      eigvecs[a] = es.eigenvectors();
      heff[a] = sparsify(Complex(0.0, -0.5) * (eigvecs[a].adjoint() * DenseMatrix(db[a]) * eigvecs[a]));
      for (auto& ob : obs_blocks) ob[a] = sparsify(eigvecs[a].adjoint() * DenseMatrix(ob[a]) * eigvecs[a]);
    }
    if (failed) throw Error("sector eigendecomposition failed");
    for (auto& j : jumps) {
      for (std::size_t t = 0; t < na; ++t) {
        if (j.source[t] < 0) continue;
        const auto s = static_cast<std::size_t>(j.source[t]);
        j.blocks[t] = sparsify(eigvecs[t].adjoint() * DenseMatrix(j.blocks[t]) * eigvecs[s]);
      }
    }
  } else {
    const SparseMatrix heff_full =
        model.hamiltonian.static_part().sparse() - Complex(0.0, 0.5) * damping;
    heff = layout.restrict_op(heff_full);
  }

  // Incoming jumps per active target sector.
  std::vector<std::vector<std::pair<const SparseMatrix*, std::size_t>>> incoming(na);
  for (const auto& j : jumps) {
    for (std::size_t t = 0; t < na; ++t) {
      if (j.source[t] >= 0 && j.blocks[t].nonZeros() > 0) {
        incoming[t].emplace_back(&j.blocks[t], static_cast<std::size_t>(j.source[t]));
      }
    }
  }

  std::size_t generator_nnz = 0;
  for (const auto& h : heff) generator_nnz += static_cast<std::size_t>(h.nonZeros());
  for (const auto& j : jumps) {
    for (const auto& b : j.blocks) generator_nnz += static_cast<std::size_t>(b.nonZeros());
  }

  DenseVector y = DenseVector::Zero(layout.state_size());
  for (const auto& [s, b] : init.blocks) {
    const Sector& sec = layout.sector(s);
    Block block(y.data() + sec.offset, sec.size(), sec.size());
    if (interaction) {
      const auto a = static_cast<std::size_t>(layout.active_index(s));
      block = eigvecs[a].adjoint() * b * eigvecs[a];
    } else {
      block = b;
    }
  }

  // Phases u = exp(-i E (t - t_start)) per sector, stored back to back.
  std::vector<Eigen::Index> phase_offset(na + 1, 0);
  for (std::size_t a = 0; a < na; ++a) {
    phase_offset[a + 1] = phase_offset[a] + layout.active_sector(a).size();
  }
  DenseVector phase = DenseVector::Ones(phase_offset[na]);
  const auto fill_phases = [&](std::size_t a, double t) {
    if (!interaction) return;
    const Eigen::VectorXd& e = energies[a];
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      phase[phase_offset[a] + i] = std::polar(1.0, -e[i] * (t - spec.t_start));
    }
  };

  const auto& terms = model.hamiltonian.terms();
  // Hermitian part of the (phase-restored) state; the block formulas below
  // assume rho = rho^dag.
  DenseVector herm(layout.state_size());
  auto rhs = [&](double t, const DenseVector& state, DenseVector& dstate) {
    dstate.resize(state.size());
    std::vector<Complex> coeff(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) coeff[k] = terms[k].coefficient(t);
#pragma omp parallel
    {
      DenseMatrix x, y, z;
#pragma omp for schedule(dynamic)
      for (std::size_t a = 0; a < na; ++a) {
        const Sector& sec = layout.active_sector(a);
        const Eigen::Index m = sec.size();
        const ConstBlock raw(state.data() + sec.offset, m, m);
        Block h(herm.data() + sec.offset, m, m);
        for (Eigen::Index j = 0; j < m; ++j) {
          for (Eigen::Index i = 0; i < m; ++i) h(i, j) = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
        }
        if (interaction) {
          fill_phases(a, t);
          const Complex* u = phase.data() + phase_offset[a];
          for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index i = 0; i < m; ++i) h(i, j) *= u[i] * std::conj(u[j]);
          }
        }
      }
#pragma omp for schedule(dynamic)
      for (std::size_t a = 0; a < na; ++a) {
        const Sector& sec = layout.active_sector(a);
        const Eigen::Index m = sec.size();
        const Complex* rho = herm.data() + sec.offset;
        Block out(dstate.data() + sec.offset, m, m);
        x.setZero(m, m);
        detail::csr_apply(heff[a], Complex(1.0), rho, m, x.data());
        for (std::size_t k = 0; k < terms.size(); ++k) {
          if (term_blocks[k][a].nonZeros() > 0) {
            detail::csr_apply(term_blocks[k][a], coeff[k], rho, m, x.data());
          }
        }
        for (Eigen::Index j = 0; j < m; ++j) {
          for (Eigen::Index i = 0; i < m; ++i) out(i, j) = -kI * x(i, j) + kI * std::conj(x(j, i));
        }
        // L rho L^dag = L (L rho)^dag.
        for (const auto& [op, src] : incoming[a]) {
          const Sector& ss = layout.active_sector(src);
          const Eigen::Index ms = ss.size();
          y.setZero(m, ms);
          detail::csr_apply(*op, Complex(1.0), herm.data() + ss.offset, ms, y.data());
          z = y.adjoint();
          detail::csr_apply(*op, Complex(1.0), z.data(), m, out.data());
        }
        if (interaction) {
          const Complex* u = phase.data() + phase_offset[a];
          for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index i = 0; i < m; ++i) out(i, j) *= std::conj(u[i]) * u[j];
          }
        }
      }
    }
  };

  TimeSeries ts;
  ts.times = spec.sample_times();
  for (const auto& obs : spec.observables) {
    ts.names.push_back(obs.name);
    ts.columns.emplace_back(ts.times.size(), 0.0);
  }
  const std::size_t full_dim = model.space.dim();
  if (spec.on_sample && full_dim > 4096) {
    throw InvalidArgument("on_sample needs the dense state; space too large for sector solver hook");
  }

  double max_trace_err = 0.0, max_herm = 0.0, max_imag = 0.0;
  auto observer = [&](std::size_t k, double t, const DenseVector& state) {
    Complex trace = 0.0;
    double defect = 0.0;
    bool positive = true;
    std::vector<Complex> vals(spec.observables.size(), Complex(0.0));
    std::vector<DenseMatrix> blocks(na);
    for (std::size_t a = 0; a < na; ++a) {
      const Sector& sec = layout.active_sector(a);
      const Eigen::Index m = sec.size();
      DenseMatrix& rho = blocks[a];
      rho = ConstBlock(state.data() + sec.offset, m, m);
      if (interaction) {
        fill_phases(a, t);
        const Complex* u = phase.data() + phase_offset[a];
        for (Eigen::Index j = 0; j < m; ++j) {
          for (Eigen::Index i = 0; i < m; ++i) rho(i, j) *= u[i] * std::conj(u[j]);
        }
      }
      trace += rho.trace();
      defect = std::max(defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      DenseMatrix shifted = 0.5 * (rho + rho.adjoint());
      shifted.diagonal().array() += spec.checks.positivity;
      if (Eigen::LLT<DenseMatrix>(shifted).info() != Eigen::Success) positive = false;
      for (std::size_t j = 0; j < vals.size(); ++j) {
        const SparseMatrix& o = obs_blocks[j][a];
        for (Eigen::Index i = 0; i < o.outerSize(); ++i) {
          for (SparseMatrix::InnerIterator it(o, i); it; ++it) {
            vals[j] += rho(it.col(), i) * it.value();
          }
        }
      }
    }
    const double terr = std::abs(trace - Complex(1.0));
    max_trace_err = std::max(max_trace_err, terr);
    max_herm = std::max(max_herm, defect);
    if (terr > spec.checks.trace) {
      std::ostringstream os;
      os << "trace drifted by " << terr;
      throw IntegrationError(os.str(), t);
    }
    if (defect > spec.checks.hermiticity) {
      std::ostringstream os;
      os << "density matrix lost Hermiticity (defect " << defect << ")";
      throw IntegrationError(os.str(), t);
    }
    if (!positive) {
      throw IntegrationError("density matrix has an eigenvalue below -" +
                                 std::to_string(spec.checks.positivity),
                             t);
    }
    for (std::size_t j = 0; j < vals.size(); ++j) {
      max_imag = std::max(max_imag, std::abs(vals[j].imag()));
      ts.columns[j][k] = vals[j].real();
    }
    if (spec.on_sample) {
      DenseMatrix full = DenseMatrix::Zero(static_cast<Eigen::Index>(full_dim),
                                           static_cast<Eigen::Index>(full_dim));
      for (std::size_t a = 0; a < na; ++a) {
        const Sector& sec = layout.active_sector(a);
        const DenseMatrix rho =
            interaction ? DenseMatrix(eigvecs[a] * blocks[a] * eigvecs[a].adjoint()) : blocks[a];
        for (Eigen::Index c = 0; c < sec.size(); ++c) {
          for (Eigen::Index r = 0; r < sec.size(); ++r) {
            full(static_cast<Eigen::Index>(sec.basis[static_cast<std::size_t>(r)]),
                 static_cast<Eigen::Index>(sec.basis[static_cast<std::size_t>(c)])) = rho(r, c);
          }
        }
      }
      spec.on_sample(k, t, full);
    }
  };

  const std::vector<double> samples = ts.times;
  const IntegratorStats stats =
      integrate_dopri5(rhs, y, spec.t_start, samples, spec.integrator_options(), observer);

  nlohmann::json dims = nlohmann::json::array();
  for (const auto& f : model.space.factors()) dims.push_back(f.dim);
  Eigen::Index largest = 0;
  for (std::size_t a = 0; a < na; ++a) largest = std::max(largest, layout.active_sector(a).size());
  ts.metadata = {{"model", model.label},
                 {"space", model.space.describe()},
                 {"factor_dims", dims},
                 {"solver", "lindblad-sectors"},
                 {"frame", interaction ? "interaction" : "lab"},
                 {"charge_weights", std::vector<int>(weights.begin(), weights.end())},
                 {"active_sectors", na},
                 {"largest_sector", largest},
                 {"state_entries", layout.state_size()},
                 {"generator_nonzeros", generator_nnz},
                 {"dropped_coherence", init.dropped},
                 {"rel_tol", spec.rel_tol},
                 {"abs_tol", spec.abs_tol},
                 {"t_start", spec.t_start},
                 {"t_end", spec.t_end},
                 {"n_samples", spec.n_samples},
                 {"truncation_converged", nullptr},
                 {"integrator",
                  {{"accepted_steps", stats.accepted},
                   {"rejected_steps", stats.rejected},
                   {"rhs_evaluations", stats.rhs_evaluations},
                   {"smallest_step", std::isfinite(stats.smallest_step) ? stats.smallest_step : 0.0}}},
                 {"max_trace_error", max_trace_err},
                 {"max_hermiticity_defect", max_herm},
                 {"max_imaginary_residue", max_imag}};
  return ts;
}

}  // namespace hybridspin

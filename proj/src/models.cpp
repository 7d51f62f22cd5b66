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

#include "hybridspin/models.hpp"

#include <cmath>
#include <sstream>

#include "hybridspin/errors.hpp"

namespace hybridspin {

Hamiltonian::Hamiltonian(Operator static_part, std::vector<HamiltonianTerm> terms)
    : static_part_(std::move(static_part)), terms_(std::move(terms)) {
  for (const auto& term : terms_) {
    require_same_space(static_part_.space(), term.op.space(), "Hamiltonian term");
    if (!term.coefficient) throw InvalidArgument("Hamiltonian term without coefficient");
  }
}

Operator Hamiltonian::at(double t) const {
  Operator h = static_part_;
  for (const auto& term : terms_) h += term.coefficient(t) * term.op;
  return h;
}

void LindbladModel::validate(std::span<const double> sample_times) const {
  require_same_space(space, hamiltonian.space(), "LindbladModel Hamiltonian");
  for (const auto& c : collapse) {
    require_same_space(space, c.op.space(), "LindbladModel collapse operator");
    if (!(c.rate >= 0.0)) throw InvalidArgument("negative rate for collapse '" + c.name + "'");
  }
  if (hamiltonian.is_static()) {
    hamiltonian.static_part().require_hermitian("Hamiltonian");
    return;
  }
  for (double t : sample_times) {
    const Operator h = hamiltonian.at(t);
    if (!h.is_hermitian(1e-10)) {
      std::ostringstream os;
      os << "Hamiltonian of '" << label << "' is not Hermitian at t = " << t
         << " (defect " << h.hermiticity_defect() << ")";
      throw InvalidArgument(os.str());
    }
  }
}

void LindbladModel::validate() const {
  const double ts[] = {0.0, 0.137, 0.5, 1.7, 3.3};
  validate(ts);
}

LindbladModel LindbladModel::with_rates_scaled(double factor) const {
  if (!(factor >= 0.0)) throw InvalidArgument("rate scale factor must be >= 0");
  LindbladModel out = *this;
  for (auto& c : out.collapse) c.rate *= factor;
  return out;
}

LindbladModel LindbladModel::without_collapse() const {
  LindbladModel out = *this;
  out.collapse.clear();
  return out;
}

const char* to_string(Sideband s) { return s == Sideband::red ? "red" : "blue"; }

double ModelRecipe::delta_m_s() const {
  return squeeze_params_from_r(params.Delta_m, r).delta_m_s;
}

double ModelRecipe::pump() const {
  if (pump_frequency) return *pump_frequency;
  const double dms = delta_m_s();
  return sideband == Sideband::red ? params.Delta - dms : params.Delta + dms;
}

namespace {

void require_truncations(const ModelRecipe& recipe, std::size_t count, const char* builder) {
  if (recipe.truncations.size() != count) {
    std::ostringstream os;
    os << builder << ": expected " << count << " boson truncation(s), got "
       << recipe.truncations.size();
    throw SpaceMismatchError(os.str());
  }
  for (int t : recipe.truncations) {
    if (t < 2) throw SpaceMismatchError(std::string(builder) + ": truncation must be >= 2");
  }
}

void add_channel(std::vector<CollapseChannel>& out, double rate, Operator op, std::string name) {
  if (!(rate >= 0.0)) throw InvalidArgument("negative rate for " + name);
  out.push_back({rate, std::move(op), std::move(name)});
}

HilbertSpace boson_qubits(int truncation, int n_qubits) {
  std::vector<Factor> f{Factor::boson(truncation)};
  for (int k = 0; k < n_qubits; ++k) f.push_back(Factor::qubit());
  return HilbertSpace(std::move(f));
}

std::vector<double> spin_couplings(const ModelRecipe& recipe, double lambda, int n_spins) {
  if (recipe.spin_couplings.empty()) return std::vector<double>(n_spins, lambda);
  if (recipe.spin_couplings.size() != static_cast<std::size_t>(n_spins)) {
    throw InvalidArgument("spin_couplings must have one entry per spin");
  }
  return recipe.spin_couplings;
}

// b_0 (x) qubit model shared by the J-C and anti-J-C builders.
LindbladModel build_single_spin(const ModelRecipe& recipe, double lambda, bool anti,
                                const char* name) {
  require_truncations(recipe, 1, name);
  const HilbertSpace space{Factor::boson(recipe.truncations[0]), Factor::qubit()};
  const Operator b = annihilation(space, 0);
  const Operator sp = pauli(space, 1, Pauli::plus);
  const Operator sm = pauli(space, 1, Pauli::minus);
  Operator coupling = anti ? b * sm : b * sp;
  Operator h = lambda * (coupling + coupling.adjoint());

  std::vector<CollapseChannel> c;
  add_channel(c, recipe.params.Gamma_m_s, b, "Gamma_m_s b0");
  add_channel(c, recipe.params.gamma, sm, "gamma sigma_-");
  return {space, Hamiltonian(std::move(h)), std::move(c), name};
}

// a_0 (x) b_0 (x) qubit trilinear model shared by the blue/red builders.
LindbladModel build_trilinear(const ModelRecipe& recipe, double lambda0, bool red,
                              const char* name) {
  require_truncations(recipe, 2, name);
  const HilbertSpace space{Factor::boson(recipe.truncations[0]),
                           Factor::boson(recipe.truncations[1]), Factor::qubit()};
  const Operator a = annihilation(space, 0);
  const Operator b = annihilation(space, 1);
  const Operator sm = pauli(space, 2, Pauli::minus);
  // blue: sigma_- b a^dag + h.c.; red: sigma_- b^dag a^dag + h.c.
  Operator term = red ? sm * b.adjoint() * a.adjoint() : sm * b * a.adjoint();
  Operator h = lambda0 * (term + term.adjoint());

  std::vector<CollapseChannel> c;
  add_channel(c, recipe.params.kappa, a, "kappa a0");
  add_channel(c, recipe.params.Gamma_m_s, b, "Gamma_m_s b0");
  add_channel(c, recipe.params.gamma, sm, "gamma sigma_-");
  return {space, Hamiltonian(std::move(h)), std::move(c), name};
}

}  // namespace

LindbladModel build_full(const ModelRecipe& recipe) {
  require_truncations(recipe, 6, "build_full");
  const SystemParams& p = recipe.params;
  std::vector<Factor> factors;
  for (int t : recipe.truncations) factors.push_back(Factor::boson(t));
  factors.push_back(Factor::qubit());
  const HilbertSpace space(std::move(factors));

  enum { aL, aT, aR, bL, bT, bR, spin };
  std::vector<Operator> a, b;
  for (std::size_t j = 0; j < 3; ++j) {
    a.push_back(annihilation(space, aL + j));
    b.push_back(annihilation(space, bL + j));
  }
  const Operator sm = pauli(space, spin, Pauli::minus);

  // H1: parametrically driven mechanics with T-L / T-R hopping.
  Operator h = Operator::zero(space);
  for (std::size_t j = 0; j < 3; ++j) {
    const Operator bd = b[j].adjoint();
    h += p.Delta_m * (bd * b[j]);
    h -= (0.5 * p.Omega_p) * (b[j] * b[j] + bd * bd);
  }
  {
    Operator hop = p.J_m * (b[1].adjoint() * (b[0] + b[2]));
    h += hop + hop.adjoint();
  }
  // H2: cavities, spin and the T-cavity couplings.
  for (std::size_t j = 0; j < 3; ++j) h += p.omega_c * (a[j].adjoint() * a[j]);
  h += p.omega_A * pauli(space, spin, Pauli::z);
  {
    Operator x = p.g * (a[1].adjoint() * sm) + p.J * (a[1].adjoint() * (a[0] + a[2]));
    h += x + x.adjoint();
  }
  // H3: -g0 n_a_j (b_j^dag e^{i w_p t} + b_j e^{-i w_p t}).
  Operator raising = Operator::zero(space);
  for (std::size_t j = 0; j < 3; ++j) raising += a[j].adjoint() * a[j] * b[j].adjoint();
  raising *= Complex(-p.g0);
  const double wp = p.omega_p;
  std::vector<HamiltonianTerm> terms;
  terms.push_back({[wp](double t) { return std::exp(kI * wp * t); }, raising});
  terms.push_back({[wp](double t) { return std::exp(-kI * wp * t); }, raising.adjoint()});

  std::vector<CollapseChannel> c;
  const char* an[] = {"kappa aL", "kappa aT", "kappa aR"};
  const char* bn[] = {"Gamma_m bL", "Gamma_m bT", "Gamma_m bR"};
  for (std::size_t j = 0; j < 3; ++j) add_channel(c, p.kappa, a[j], an[j]);
  const double gm = recipe.mechanical_bath.gamma_m_product();
  for (std::size_t j = 0; j < 3; ++j) add_channel(c, gm, b[j], bn[j]);
  add_channel(c, p.gamma, sm, "gamma sigma_-");
  return {space, Hamiltonian(std::move(h), std::move(terms)), std::move(c), "full"};
}

LindbladModel build_effective_tripartite(const ModelRecipe& recipe) {
  const SystemParams& p = recipe.params;
  if (!(p.J > 0.0)) throw InvalidArgument("J must be positive");
  const double dms = recipe.delta_m_s();
  const double amp = p.g * p.g0 * std::exp(recipe.r) / (2.0 * p.J);
  const double wp = recipe.pump();
  Coefficient cosine = [wp](double t) { return Complex(std::cos(wp * t)); };

  if (recipe.classical_drive) {
    require_truncations(recipe, 1, "build_effective_tripartite");
    const HilbertSpace space{Factor::boson(recipe.truncations[0]), Factor::qubit()};
    const Operator b = annihilation(space, 0);
    Operator h0 = p.Delta * pauli(space, 1, Pauli::z) + dms * (b.adjoint() * b);
    Operator coupling = (p.n_bar_cav() * amp) * ((b + b.adjoint()) * pauli(space, 1, Pauli::x));
    std::vector<HamiltonianTerm> terms{{cosine, std::move(coupling)}};
    std::vector<CollapseChannel> c;
    add_channel(c, p.Gamma_m_s, b, "Gamma_m_s b0");
    add_channel(c, p.gamma, pauli(space, 1, Pauli::minus), "gamma sigma_-");
    return {space, Hamiltonian(std::move(h0), std::move(terms)), std::move(c),
            std::string("rabi_") + to_string(recipe.sideband)};
  }

  require_truncations(recipe, 2, "build_effective_tripartite");
  const HilbertSpace space{Factor::boson(recipe.truncations[0]),
                           Factor::boson(recipe.truncations[1]), Factor::qubit()};
  const Operator a = annihilation(space, 0);
  const Operator b = annihilation(space, 1);
  const Operator sm = pauli(space, 2, Pauli::minus);
  Operator h0 = p.Delta * pauli(space, 2, Pauli::z) + dms * (b.adjoint() * b);
  Operator exchange = a.adjoint() * sm;
  exchange += exchange.adjoint();
  Operator coupling = amp * ((b + b.adjoint()) * exchange);
  std::vector<HamiltonianTerm> terms{{cosine, std::move(coupling)}};
  std::vector<CollapseChannel> c;
  add_channel(c, p.kappa, a, "kappa a0");
  add_channel(c, p.Gamma_m_s, b, "Gamma_m_s b0");
  add_channel(c, p.gamma, sm, "gamma sigma_-");
  return {space, Hamiltonian(std::move(h0), std::move(terms)), std::move(c),
          std::string("tripartite_") + to_string(recipe.sideband)};
}

LindbladModel build_jc(const ModelRecipe& recipe, double lambda) {
  return build_single_spin(recipe, lambda, false, "jc");
}

LindbladModel build_anti_jc(const ModelRecipe& recipe, double lambda) {
  return build_single_spin(recipe, lambda, true, "anti_jc");
}

LindbladModel build_blue(const ModelRecipe& recipe, double lambda0) {
  return build_trilinear(recipe, lambda0, false, "blue");
}

LindbladModel build_red(const ModelRecipe& recipe, double lambda0) {
  return build_trilinear(recipe, lambda0, true, "red");
}

LindbladModel build_ms_gate(const ModelRecipe& recipe, double lambda, int n_spins,
                            double delta_m_s) {
  if (n_spins < 2) throw InvalidArgument("the entangling gate needs at least 2 spins");
  if (!(delta_m_s > 0.0)) throw InvalidArgument("Delta_m^S must be positive");
  require_truncations(recipe, 1, "build_ms_gate");
  const HilbertSpace space = boson_qubits(recipe.truncations[0], n_spins);
  const Operator b = annihilation(space, 0);
  const std::vector<double> lam = spin_couplings(recipe, lambda, n_spins);

  Operator jx = Operator::zero(space);
  for (int k = 0; k < n_spins; ++k) jx += lam[k] * pauli(space, 1 + k, Pauli::x);
  Operator lowering = b * jx;
  Operator raising = b.adjoint() * jx;
  const double d = delta_m_s;
  std::vector<HamiltonianTerm> terms;
  terms.push_back({[d](double t) { return std::exp(-kI * d * t); }, std::move(lowering)});
  terms.push_back({[d](double t) { return std::exp(kI * d * t); }, std::move(raising)});

  std::vector<CollapseChannel> c;
  add_channel(c, recipe.params.Gamma_m_s, b, "Gamma_m_s b0");
  for (int k = 0; k < n_spins; ++k) {
    add_channel(c, recipe.params.gamma, pauli(space, 1 + k, Pauli::minus),
                "gamma sigma_-" + std::to_string(k));
  }
  return {space, Hamiltonian(Operator::zero(space), std::move(terms)), std::move(c), "ms_gate"};
}

LindbladModel build_cooling_exact(const ModelRecipe& recipe, double lambda, int n_spins) {
  if (n_spins < 1) throw InvalidArgument("need at least one spin");
  if (n_spins > kMaxExactSpins) {
    throw InvalidArgument("N = " + std::to_string(n_spins) +
                          " is too large for the exact model; use build_cooling_hp");
  }
  require_truncations(recipe, 1, "build_cooling_exact");
  const HilbertSpace space = boson_qubits(recipe.truncations[0], n_spins);
  const Operator b = annihilation(space, 0);
  const std::vector<double> lam = spin_couplings(recipe, lambda, n_spins);
  Operator jp = Operator::zero(space);
  for (int k = 0; k < n_spins; ++k) jp += lam[k] * pauli(space, 1 + k, Pauli::plus);
  Operator term = b * jp;
  Operator h = term + term.adjoint();

  std::vector<CollapseChannel> c;
  add_channel(c, recipe.params.Gamma_m_s, b, "Gamma_m_s b0");
  for (int k = 0; k < n_spins; ++k) {
    add_channel(c, recipe.params.gamma, pauli(space, 1 + k, Pauli::minus),
                n_spins == 1 ? std::string("gamma sigma_-") : "gamma sigma_-" + std::to_string(k));
  }
  return {space, Hamiltonian(std::move(h)), std::move(c), "cooling_exact"};
}

LindbladModel build_cooling_hp(const ModelRecipe& recipe, double lambda, int n_spins,
                               double initial_occupation) {
  if (n_spins < 1) throw InvalidArgument("need at least one spin");
  require_truncations(recipe, 2, "build_cooling_hp");
  if (!(initial_occupation >= 0.0)) throw InvalidArgument("initial occupation must be >= 0");
  const double guard = initial_occupation + 6.0 * std::sqrt(initial_occupation);
  if (recipe.truncations[0] - 1 < guard) {
    std::ostringstream os;
    os << "b0 truncation " << recipe.truncations[0] << " below occupancy guard n0 + 6 sqrt(n0) = "
       << guard;
    throw TruncationError(os.str());
  }
  const HilbertSpace space{Factor::boson(recipe.truncations[0]),
                           Factor::boson(recipe.truncations[1])};
  const Operator b = annihilation(space, 0);
  const Operator d = annihilation(space, 1);
  Operator term = b * d.adjoint();
  Operator h = (lambda * std::sqrt(static_cast<double>(n_spins))) * (term + term.adjoint());

  std::vector<CollapseChannel> c;
  add_channel(c, recipe.params.Gamma_m_s, b, "Gamma_m_s b0");
  add_channel(c, recipe.params.gamma, d, "gamma d");
  return {space, Hamiltonian(std::move(h)), std::move(c), "cooling_hp"};
}

}  // namespace hybridspin

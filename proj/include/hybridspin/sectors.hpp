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

// Block-diagonal master-equation solver for models with a U(1) charge.
//
// The charge of a basis state is a weighted sum of its factor digits. When H
// conserves the charge and every collapse operator shifts it by a fixed
// amount, the charge-diagonal blocks of rho evolve in closed form, and
// expectations of charge-diagonal observables are exact.

#pragma once

#include <span>
#include <vector>

#include "hybridspin/dynamics.hpp"

namespace hybridspin {

/// Q(i) = sum_f weights[f] * digit_f(i).
std::vector<int> basis_charges(const HilbertSpace& space, std::span<const int> weights);

/// Charge shift of `op` (every nonzero element must have the same shift).
/// Returns 0 for the zero operator. Throws InvalidArgument otherwise.
int charge_shift(const Operator& op, std::span<const int> charges);

enum class SectorFrame {
  lab,
  /// Static Hamiltonian removed exactly through a per-sector
  /// eigendecomposition; the integrator only resolves the dissipative part.
  interaction,
};

struct SectorOptions {
  SectorFrame frame = SectorFrame::lab;
};

/// Same contract as evolve_lindblad; observables must be charge-diagonal.
/// Coherences between sectors in the initial state are discarded and their
/// Frobenius weight is recorded as metadata "dropped_coherence". The
/// on_sample hook receives the reachable block-diagonal part of rho and is
/// intended for small systems only.
TimeSeries evolve_lindblad_sectors(const LindbladModel& model, const EvolutionSpec& spec,
                                   std::span<const int> weights, const SectorOptions& options = {});

}  // namespace hybridspin

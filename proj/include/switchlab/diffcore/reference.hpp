#pragma once

#include <vector>

#include "switchlab/diffcore/lstm.hpp"
#include "switchlab/diffcore/network.hpp"

namespace switchlab::diff {

// Naive double-precision re-implementations of every layer kind, written
// independently of the optimized float32 kernels. These back the
// finite-difference gradient checks (float32 forward noise would otherwise
// swamp an h=1e-3 quotient) and double as a cross-check of the fast path.
//
// Dropout draws its mask through the same rng protocol as Network::forward,
// so a re-seeded rng reproduces identical masks on both paths.

std::vector<double> reference_forward(const Network& net, const Tensor& input, Mode mode,
                                      Rng* rng);

// Reference LSTM step; returns h followed by c.
std::vector<double> reference_lstm_step(const LstmCell& cell, const Tensor& x,
                                        const LstmCell::State& prev);

}  // namespace switchlab::diff

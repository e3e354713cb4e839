#pragma once

#include "bdris/optimizer.hpp"

#include <random>

namespace bdris {

// Diagonal-surface counterpart of the full design: same penalty machinery
// with a selection expansion (vec(diag(x)) = S x), no unitary latent, and the
// distinguished diagonal entries of the initial surface as the start.
RunResult dris_optimize(const SystemConfig& cfg, const ChannelSet& ch, PhaseMode mode,
                        const RunOptions& options = {});

struct SnrTriple {
    double snr_c = 0.0;
    double snr_r = 0.0;
    double snr_t = 0.0;
};

// Direct link only: the surface contributes nothing, the radar path is blocked.
SnrTriple no_ris_snr(const SystemConfig& cfg, const ChannelSet& ch);

// V V^T with Haar-distributed V: symmetric unitary, used as the feasible
// random baseline and as optimizer initialization material.
ComplexMatrix random_symmetric_unitary(int l, std::mt19937_64& stream);

// SNRs of an arbitrary fixed surface on one channel realization.
SnrTriple evaluate_surface(const SystemConfig& cfg, const ChannelSet& ch,
                           const ComplexMatrix& phi);

} // namespace bdris

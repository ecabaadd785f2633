// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include "stin/channel.hpp"
#include "stin/linalg.hpp"
#include "stin/scenario.hpp"

namespace stin {

// Private streams only: F is M x Ks, V is N x Kt, equal power per stream and
// unit total power.
struct BaselinePrecoders {
  Mat F;
  Mat V;
  bool regularized = false;  // ZF fell back to a regularized inverse
};

BaselinePrecoders slnr_max(const CsitEstimate& csit, const SystemConfig& cfg);
BaselinePrecoders zf_single_cell(const CsitEstimate& csit, const SystemConfig& cfg);
// Satellite beams also null the estimated channels of interfered TUs.
BaselinePrecoders zf_local(const CsitEstimate& csit, const SystemConfig& cfg);

// Channel-inversion directions for the columns of H, optionally with extra
// columns to null. Returns the first H.cols() directions, unnormalized.
Mat zero_forcing(const Mat& H, bool* regularized);

}  // namespace stin

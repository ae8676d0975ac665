#pragma once

#include <string>
#include <vector>

namespace wigsim {

// Orthonormal conjugate-mirror filter pair. `vanishing_moments` is K; the
// lowpass filter has 2K taps supported on [0, 2K-1] and the highpass taps
// follow the quadrature-mirror rule g_k = (-1)^k h_{2K-1-k}.
struct WaveletFamily {
  std::string name;
  int vanishing_moments = 0;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  // Conservative lower bound on the L2 Sobolev smoothness exponent, used to
  // gate derivative orders (see docs/README for the table source).
  double sobolev_estimate = 0.0;

  int taps() const { return static_cast<int>(lowpass.size()); }
  int support_length() const { return taps() - 1; }  // phi lives on [0, 2K-1]
};

// name: "haar" or "daubechies-K" with K in 2..10.
WaveletFamily make_family(const std::string& name);

// Scaling/wavelet function values on the dyadic grid m / 2^depth covering the
// support [0, 2K-1]. Values at integers come from the eigenvalue-1 eigenvector
// of the refinement matrix; interior dyadic points from the refinement
// relation. Haar uses the left-continuous convention phi(0)=1, phi(1)=0.
struct DyadicFunctionTable {
  WaveletFamily family;
  int depth = 0;  // J
  std::vector<double> phi_values;
  std::vector<double> psi_values;

  double step() const;
  int points() const { return static_cast<int>(phi_values.size()); }
  // Dyadic quadrature of phi over its support (left-endpoint sum, which is
  // exact under the left-continuous convention; for K >= 2 the endpoints
  // vanish and this coincides with the trapezoid rule).
  double integral_phi() const;
};

DyadicFunctionTable cascade_table(const WaveletFamily& family, int depth);

}  // namespace wigsim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlkpp {

// One checked case inside a certification suite. margin > 0 means the bound
// held with room to spare (its meaning per suite is spelled out in `label`).
struct VerifyCase {
  std::string label;
  double margin = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string target;
  std::vector<VerifyCase> cases;
  bool pass = false;         // all cases passed
  std::string summary;       // one-paragraph account with worst margins
};

// Certification suites, one per target id:
//   gamma-envelope  fundamental-solution envelope rate for sinusoidal drift
//   hill            Gaussian sandwich vs the exact constant-drift kernel
//   fp-tail         drift-diffusion far-field bound vs simulation
//   conv-bounds     discrete convolution norms vs the kernel facts
//   phi-max         rearrangement maximum vs randomized brute force
// All randomness is seeded deterministically.
VerifyReport verify_gamma_envelope();
VerifyReport verify_hill();
VerifyReport verify_fp_tail();
VerifyReport verify_conv_bounds();
VerifyReport verify_phi_max();

std::vector<std::string> verify_targets();
VerifyReport run_verify(const std::string& target);  // throws ConfigError

// Flat-text rendering (one line per case, margins printed with %.6g).
std::string verify_text(const VerifyReport& rep);

}  // namespace nlkpp

// One line per acceptance criterion; exit status is nonzero if any criterion fails.
#include <cstdio>
#include <exception>
#include <string>

#include "greenquad/suites.hpp"

namespace {

struct criterion {
  int number;
  const char* suite;
  const char* summary;
};

constexpr criterion criteria[] = {
    {1, "reduction", "sigma = (1, 1) two-weight kernel equals the C^3 Heisenberg kernel"},
    {2, "mehler", "Mehler partial sums and integrated form match the closed form"},
    {3, "hermite", "Hermite orthonormality, oscillator eigen-identity and Fourier eigenvalues"},
    {4, "commutators", "exact invariant-field brackets and Box_b identities"},
    {5, "annihilate", "transformed kernels are annihilated by the transformed operator"},
    {6, "scaling", "kernels are homogeneous under the group dilation"},
    {7, "m2-constant", "M2 closed-form constant agrees with the polar integral"},
    {8, "inversion", "lambda-inversion of transform kernels reproduces the physical kernels"},
    {9, "szego", "Szego kernel normalisation and ground-state annihilation"},
    {10, "series", "truncated spectral series agrees with the Mehler-integral form"},
};

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      const auto rep = greenquad::run_suite(c.suite);
      ok = rep.passed();
      for (const auto& chk : rep.checks) {
        if (chk.pass) continue;
        char buf[512];
        std::snprintf(buf, sizeof buf, "; %s residual %.3g > %.3g", chk.name.c_str(), chk.residual, chk.threshold);
        detail += buf;
      }
    } catch (const std::exception& e) {
      detail = std::string("; exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s%s\n", ok ? "PASS" : "FAIL", c.number, c.summary, detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

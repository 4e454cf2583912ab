// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <string>

#include "g2cert/verify.hpp"

using namespace g2cert;

namespace {

const char* const kTitles[] = {
    "",
    "Jacobi identity on all seven extensions, m in {-1,-2,-3}",
    "conformally parallel equations exact",
    "half-flat bases, h3+h3 control fails with -e^{1234}",
    "eigenvalue types",
    "Ricci-flat charts",
    "holonomy dimensions 0,3,8,14,8,14,14",
    "parallel phi, dx2 and dx1",
    "tau4 = m e^7 and Phi = m psi-",
    "symplectic only for abelian, Nijenhuis",
    "RK4 flow vs closed forms, order",
    "flow metric equals chart metric",
    "homothetic field on the G2 metric",
    "byte-identical reports",
};

std::string summary(const Report& rep, int k) {
  std::string out;
  for (const auto& r : rep.checks) {
    if (r.criterion == k && !r.pass) out += " " + r.id + "[" + r.kase + "]";
  }
  return out;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg;
  const Report first = verify_all(cfg);
  const Report second = verify_all(cfg);
  int failed = 0;
  for (int k = 1; k <= 13; ++k) {
    bool pass = false;
    std::string why;
    if (k == 13) {
      pass = first.dump() == second.dump();
      if (!pass) why = " reports differ";
    } else {
      const auto st = first.criterion_status(k);
      pass = st.value_or(false);
      why = st ? summary(first, k) : std::string(" no checks ran");
    }
    failed += pass ? 0 : 1;
    std::printf("%s %2d  %s%s\n", pass ? "PASS" : "FAIL", k, kTitles[k], why.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/13 passed in %.2f s (%zu checks per run)\n", 13 - failed, secs, first.checks.size());
  return failed == 0 ? 0 : 1;
}

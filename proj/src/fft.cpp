#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace qpww::detail {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int resolution, int sign) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(dim, resolution, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<int> n(dim, resolution);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(resolution);
    auto* scratch = fftw_alloc_complex(total);
    // FFTW_ESTIMATE keeps planning deterministic; UNALIGNED lets us run the
    // plan on std::vector storage.
    fftw_plan plan = fftw_plan_dft(dim, n.data(), scratch, scratch, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dim, int resolution, int sign) {
  fftw_plan plan = cache().get(dim, resolution, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace qpww::detail

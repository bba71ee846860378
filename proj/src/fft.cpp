#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace superstar::fft {
namespace {

using Key = std::tuple<std::vector<int>, int, int>;

struct PlanCache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan get_plan(const std::vector<int>& dims, int sign, int howmany) {
  auto& c = cache();
  std::lock_guard lock(c.mu);
  Key key{dims, sign, howmany};
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  int dist = 1;
  for (int d : dims) dist *= d;
  auto* buf = fftw_alloc_complex(static_cast<std::size_t>(dist) * howmany);
  fftw_plan p = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, buf, nullptr, 1,
                                   dist, buf, nullptr, 1, dist, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  c.plans.emplace(key, p);
  return p;
}

}  // namespace

void transform(std::complex<double>* data, const std::vector<int>& dims, int sign, int howmany) {
  fftw_plan p = get_plan(dims, sign, howmany);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace superstar::fft

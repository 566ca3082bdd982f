#include "cosine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace gllb::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_r2r_kind to_fftw(AxisTransform t) {
  switch (t) {
    case AxisTransform::kCosineSynthesis:
      return FFTW_REDFT01;
    case AxisTransform::kSineSynthesis:
      return FFTW_RODFT01;
    case AxisTransform::kCosineAnalysis:
      return FFTW_REDFT10;
  }
  return FFTW_REDFT01;
}

class Plan {
 public:
  Plan(std::span<const int> shape, std::span<const AxisTransform> kinds,
       int batch) {
    std::size_t per = 1;
    for (int n : shape) per *= static_cast<std::size_t>(n);
    size_ = per * static_cast<std::size_t>(batch);
    std::vector<fftw_r2r_kind> fk;
    for (auto k : kinds) fk.push_back(to_fftw(k));
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_real(size_);
    if (buffer_ == nullptr) throw std::bad_alloc();
    plan_ = fftw_plan_many_r2r(static_cast<int>(shape.size()), shape.data(),
                               batch, buffer_, nullptr, 1,
                               static_cast<int>(per), buffer_, nullptr, 1,
                               static_cast<int>(per), fk.data(),
                               FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      fftw_free(buffer_);
      throw std::runtime_error("FFTW failed to create an r2r plan");
    }
  }

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buffer_);
  }

  void run(std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), buffer_);
    fftw_execute(plan_);
    std::copy(buffer_, buffer_ + size_, out.begin());
  }

  std::size_t size() const { return size_; }

 private:
  std::size_t size_ = 0;
  double* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
};

using PlanKey = std::tuple<std::vector<int>, std::vector<int>, int>;

}  // namespace

void apply_r2r(std::span<const int> shape, std::span<const AxisTransform> kinds,
               int batch, std::span<const double> in, std::span<double> out) {
  if (shape.size() != kinds.size()) {
    throw std::invalid_argument("apply_r2r: one transform kind per axis");
  }
  thread_local std::map<PlanKey, std::unique_ptr<Plan>> cache;

  std::vector<int> kind_ids;
  for (auto k : kinds) kind_ids.push_back(static_cast<int>(k));
  PlanKey key{std::vector<int>(shape.begin(), shape.end()), kind_ids, batch};
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<Plan>(shape, kinds, batch)).first;
  }
  Plan& plan = *it->second;
  if (in.size() != plan.size() || out.size() != plan.size()) {
    throw std::invalid_argument("apply_r2r: buffer size does not match shape");
  }
  plan.run(in, out);
}

}  // namespace gllb::detail

#include "macrospin/model.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace macrospin {

SpinSize::SpinSize(int two_s) : two_s_(two_s) {
  if (two_s < 1) {
    throw std::invalid_argument("spin size must satisfy S >= 1/2 (got 2S = " +
                                std::to_string(two_s) + ")");
  }
}

SpinSize SpinSize::parse(std::string_view text) {
  auto bad = [&] {
    return std::invalid_argument("cannot parse spin size '" +
                                 std::string(text) + "'");
  };
  if (text.empty()) throw bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    int num = 0;
    int den = 0;
    auto num_part = text.substr(0, slash);
    auto den_part = text.substr(slash + 1);
    auto r1 = std::from_chars(num_part.data(), num_part.data() + num_part.size(), num);
    auto r2 = std::from_chars(den_part.data(), den_part.data() + den_part.size(), den);
    if (r1.ec != std::errc{} || r1.ptr != num_part.data() + num_part.size() ||
        r2.ec != std::errc{} || r2.ptr != den_part.data() + den_part.size()) {
      throw bad();
    }
    if (den == 1) return SpinSize(2 * num);
    if (den == 2) return SpinSize(num);
    throw bad();
  }

  double value = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) throw bad();
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-12 || rounded > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("spin size must be a multiple of 1/2 (got '" +
                                std::string(text) + "')");
  }
  return SpinSize(static_cast<int>(rounded));
}

std::string SpinSize::to_string() const {
  if (two_s_ % 2 == 0) return std::to_string(two_s_ / 2);
  return std::to_string(two_s_) + "/2";
}

double rescaling_length(SpinSize spin, Frame frame) noexcept {
  return frame == Frame::Classical ? spin.s() : std::sqrt(spin.casimir());
}

double ModelParams::j_over_delta() const noexcept {
  if (delta == 0.0) {
    return j == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return j / delta;
}

void validate(const ModelParams& params) {
  if (!std::isfinite(params.j) || !std::isfinite(params.delta)) {
    throw std::invalid_argument("couplings must be finite");
  }
  if (params.j < 0.0) {
    throw std::invalid_argument("exchange J must be non-negative");
  }
  if (params.delta < 0.0) {
    throw std::invalid_argument("inhomogeneity delta must be non-negative");
  }
}

ModelParams rescale(const PhysicalParams& phys, Frame frame) {
  const double lambda = rescaling_length(phys.spin, frame);
  ModelParams params{lambda * lambda * phys.j_s, lambda * phys.delta_s, phys.spin,
                     frame};
  validate(params);
  return params;
}

PhysicalParams unscale(const ModelParams& params) {
  const double lambda = params.lambda();
  return PhysicalParams{params.j / (lambda * lambda), params.delta / lambda,
                        params.spin};
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Dephased:
      return "dephased";
    case Regime::Critical:
      return "critical";
    case Regime::Synchronized:
      return "synchronized";
  }
  return "unknown";
}

Regime classify_regime(const ModelParams& params, double band) {
  validate(params);
  if (params.delta == 0.0) return Regime::Synchronized;
  const double ratio = params.j / params.delta;
  if (ratio < 1.0 - band) return Regime::Dephased;
  if (ratio > 1.0 + band) return Regime::Synchronized;
  return Regime::Critical;
}

}  // namespace macrospin

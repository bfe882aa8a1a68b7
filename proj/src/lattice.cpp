#include "aalg/lattice.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace aalg {

std::string integrality_name(Integrality v) {
  switch (v) {
    case Integrality::Integer: return "INTEGER";
    case Integrality::Warn: return "WARN";
    case Integrality::NonInteger: return "NON_INTEGER";
  }
  return "NON_INTEGER";
}

std::vector<TSample> two_log_k_rule(int k_max) {
  std::vector<TSample> out;
  for (int k = 2; k <= k_max; ++k) out.push_back({2 * boost::multiprecision::log(HighFloat(k)), k});
  return out;
}

std::vector<TSample> uniform_grid(const HighFloat& lo, const HighFloat& hi, int n) {
  if (n < 1) throw Error(ErrorCode::Input, "grid needs at least one point");
  std::vector<TSample> out;
  if (n == 1) return {{lo, 0}};
  for (int i = 0; i < n; ++i) out.push_back({lo + (hi - lo) * HighFloat(i) / HighFloat(n - 1), 0});
  return out;
}

namespace {

double deviation(const std::vector<HighFloat>& coeffs) {
  HighFloat worst(0);
  for (const auto& c : coeffs) worst = std::max(worst, HighFloat(abs(c - round(c))));
  return worst.convert_to<double>();
}

}  // namespace

ProbePoint probe_point(const Matrix<HighFloat>& b, const TSample& sample, const ProbeOptions& options) {
  ProbePoint p;
  p.sample = sample;
  Matrix<HighFloat> e = matrix_exp(b, sample.t);
  auto polys = char_min_poly(e);
  p.char_coeffs = polys.characteristic.coefficients();
  p.min_coeffs = polys.minimal.coefficients();
  p.max_deviation = std::max(deviation(p.char_coeffs), deviation(p.min_coeffs));
  if (p.max_deviation <= options.eps_int)
    p.verdict = Integrality::Integer;
  else if (p.max_deviation <= 10 * options.eps_int)
    p.verdict = Integrality::Warn;
  else
    p.verdict = Integrality::NonInteger;
  if (options.remark_pattern && sample.k > 0 && polys.minimal.degree() == 3) {
    const HighFloat k(sample.k);
    HighFloat value = k * k * (k * k + polys.minimal.coefficient(2)) + polys.minimal.coefficient(1);
    p.remark_value = value;
    p.remark_residual = HighFloat(abs(value - 1 / k)).convert_to<double>();
  }
  return p;
}

IntegralityReport integrality_probe(const Matrix<HighFloat>& b, const std::vector<TSample>& samples,
                                    const ProbeOptions& options) {
  if (!b.is_square()) throw Error(ErrorCode::DimensionMismatch, "probe: B must be square");
  IntegralityReport report;
  report.eps_int = options.eps_int;
  report.points.resize(samples.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(samples.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) report.points[i] = probe_point(b, samples[i], options);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < samples.size(); i += threads)
            report.points[i] = probe_point(b, samples[i], options);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  for (std::size_t i = 0; i < report.points.size(); ++i)
    if (report.points[i].verdict == Integrality::Integer && report.points[i].sample.t != 0) {
      report.found = i;
      break;
    }
  return report;
}

}  // namespace aalg

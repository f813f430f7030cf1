#include "pnlab/common.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace pnlab {

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  auto to_ll = [&](const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    return v;
  };
  if (slash == std::string::npos) return Rational(to_ll(text), 1);
  return Rational(to_ll(text.substr(0, slash)), to_ll(text.substr(slash + 1)));
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf);
}

std::string double_to_hex(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", value);
  return std::string(buf);
}

double double_from_hex(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw std::invalid_argument("double_from_hex: cannot parse '" + text + "'");
  return v;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int nthreads = std::min<std::size_t>(std::max(workers, 1), count);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pnlab

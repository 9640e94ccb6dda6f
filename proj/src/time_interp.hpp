#ifndef IFD_TIME_INTERP_HPP
#define IFD_TIME_INTERP_HPP

#include <cmath>
#include <cstddef>

namespace ifd::detail {

// Periodic 4-point (cubic Lagrange) interpolation stencil in time.
// For smooth T-periodic coefficient data on the nt-grid the O(tau^4)
// interpolation error is far below every tolerance in the suite.
struct TimeStencil {
  std::size_t j[4];
  double w[4];
};

inline TimeStencil time_stencil(double t, double tau, std::size_t nt) {
  double s = t / tau;
  double fl = std::floor(s);
  double f = s - fl;
  auto j0 = static_cast<long long>(fl);
  auto n = static_cast<long long>(nt);
  auto wrap = [n](long long j) { return static_cast<std::size_t>(((j % n) + n) % n); };
  TimeStencil st;
  st.j[0] = wrap(j0 - 1);
  st.j[1] = wrap(j0);
  st.j[2] = wrap(j0 + 1);
  st.j[3] = wrap(j0 + 2);
  st.w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  st.w[1] = (f - 1.0) * (f + 1.0) * (f - 2.0) / 2.0;
  st.w[2] = -f * (f + 1.0) * (f - 2.0) / 2.0;
  st.w[3] = f * (f - 1.0) * (f + 1.0) / 6.0;
  return st;
}

// out[k] = sum_m w[m] * data[j[m] * stride + k], k = 0..count-1.
inline void gather_rows(const TimeStencil& st, const double* data, std::size_t stride,
                        std::size_t count, double* out) {
  const double* r0 = data + st.j[0] * stride;
  const double* r1 = data + st.j[1] * stride;
  const double* r2 = data + st.j[2] * stride;
  const double* r3 = data + st.j[3] * stride;
  for (std::size_t k = 0; k < count; ++k)
    out[k] = st.w[0] * r0[k] + st.w[1] * r1[k] + st.w[2] * r2[k] + st.w[3] * r3[k];
}

} // namespace ifd::detail

#endif

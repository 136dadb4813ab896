#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "sovlat/lotka_volterra.hpp"

namespace sovlat {

namespace {

using State = std::vector<double>;

struct Abort {
  std::string why;
};

// Relative drift tracker for a vector of monitored quantities.
class DriftMonitor {
 public:
  void observe(const std::vector<Complex>& x) {
    if (ref_.empty()) {
      ref_ = x;
      for (const auto& c : x) scale_ = std::max(scale_, std::abs(c));
      return;
    }
    for (std::size_t k = 0; k < x.size() && k < ref_.size(); ++k) {
      double denom = std::abs(ref_[k]) > 1e-12 * scale_ ? std::abs(ref_[k]) : scale_;
      if (denom == 0) continue;
      worst_ = std::max(worst_, std::abs(x[k] - ref_[k]) / denom);
    }
  }
  double worst() const { return worst_; }

 private:
  std::vector<Complex> ref_;
  double scale_ = 0;
  double worst_ = 0;
};

std::vector<Complex> as_complex(const std::vector<double>& x) { return {x.begin(), x.end()}; }

// Coefficients of z^a w^b, b < N, a <= L, in a fixed layout.
std::vector<Complex> curve_coefficients_at(int n, const State& v) {
  std::vector<Complex> vc(v.begin(), v.end());
  auto f = char_poly(lv_monodromy<Complex>(n, vc));
  const int l = static_cast<int>(v.size());
  std::vector<Complex> out;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a <= l; ++a) out.push_back(f.coeff(a, b));
  return out;
}

}  // namespace

Trajectory integrate(const LVModel& model, int i, std::vector<double> v0, double t_end, double dt, Method method) {
  namespace ode = boost::numeric::odeint;
  if (!(dt > 0)) throw std::invalid_argument("integrate: dt must be positive");
  if (static_cast<int>(v0.size()) != model.L) throw std::invalid_argument("integrate: state has the wrong length");
  (void)model.flow_field(i, v0);

  Trajectory tr;
  DriftMonitor dh, dc, df;
  auto rhs = [&](const State& x, State& dxdt, double) { dxdt = model.flow_field(i, x); };
  auto observe = [&](const State& x, double t) {
    for (double xn : x)
      if (!(std::abs(xn) >= 1e-12)) throw Abort{"V_n fell below 1e-12 at t=" + std::to_string(t)};
    tr.t.push_back(t);
    tr.v.push_back(x);
    tr.h.push_back(model.im_values(x));
    dh.observe(as_complex(tr.h.back()));
    dc.observe(as_complex(model.center_values(x)));
    df.observe(curve_coefficients_at(model.N, x));
  };

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  State x = std::move(v0);
  try {
    if (method == Method::Rk4) {
      ode::runge_kutta4<State> stepper;
      ode::integrate_n_steps(stepper, rhs, x, 0.0, dt, steps, observe);
    } else {
      auto stepper = ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());
      ode::integrate_n_steps(stepper, rhs, x, 0.0, dt, steps, observe);
    }
  } catch (const Abort& a) {
    tr.aborted = true;
    tr.diagnostic = a.why;
  }
  tr.max_drift_h = dh.worst();
  tr.max_drift_center = dc.worst();
  tr.max_drift_curve = df.worst();
  return tr;
}

}  // namespace sovlat

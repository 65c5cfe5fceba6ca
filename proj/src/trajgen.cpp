#include "peacock/trajgen.hpp"

#include <cmath>
#include <stdexcept>

#include "peacock/errors.hpp"

namespace peacock {

namespace {

// d!/(d-order)! falling factorial; zero when order > d.
double deriv_factor(int d, int order) {
  double f = 1.0;
  for (int k = 0; k < order; ++k) f *= static_cast<double>(d - k);
  return d >= order ? f : 0.0;
}

bool finite_state(const BoundaryState& s) {
  return s.position.allFinite() && s.velocity.allFinite() &&
         s.acceleration.allFinite() && s.jerk.allFinite();
}

}  // namespace

double Polynomial1D::eval(double t, int derivative_order) const {
  double acc = 0.0;
  double tp = 1.0;
  for (int d = derivative_order; d < 8; ++d) {
    acc += coefficients[static_cast<size_t>(d)] * deriv_factor(d, derivative_order) * tp;
    tp *= t;
  }
  return acc;
}

Segment3D solve_min_snap_segment(const BoundaryState& start, const BoundaryState& end,
                                 double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw NonPositiveDuration("segment duration must be > 0");
  if (!finite_state(start) || !finite_state(end))
    throw NonFiniteInput("boundary state has non-finite component");

  // Solve in normalized time tau = t/T; the unit-interval system is far
  // better conditioned than the raw one for long durations. Rows are
  // derivative orders 0..3 at tau=0, then 0..3 at tau=1, with the right-hand
  // side scaled by T^order; coefficients rescale by T^-d afterwards.
  Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
  for (int order = 0; order < 4; ++order) {
    A(order, order) = deriv_factor(order, order);
    for (int d = order; d < 8; ++d) A(4 + order, d) = deriv_factor(d, order);
  }

  Eigen::PartialPivLU<Eigen::Matrix<double, 8, 8>> lu(A);

  Segment3D seg;
  seg.duration = duration;
  Polynomial1D* axes[3] = {&seg.x, &seg.y, &seg.z};
  double tpow[4] = {1.0, duration, duration * duration,
                    duration * duration * duration};
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Matrix<double, 8, 1> b;
    b << start.position[axis], tpow[1] * start.velocity[axis],
        tpow[2] * start.acceleration[axis], tpow[3] * start.jerk[axis],
        end.position[axis], tpow[1] * end.velocity[axis],
        tpow[2] * end.acceleration[axis], tpow[3] * end.jerk[axis];
    Eigen::Matrix<double, 8, 1> c = lu.solve(b);
    // one round of iterative refinement keeps boundary residuals near
    // machine precision even for ill-scaled boundary values
    c += lu.solve(b - A * c);
    if (!c.allFinite())
      throw std::logic_error("singular boundary system; should be impossible for T > 0");
    double scale = 1.0;
    for (int d = 0; d < 8; ++d) {
      axes[axis]->coefficients[static_cast<size_t>(d)] = c[d] * scale;
      scale /= duration;
    }
    axes[axis]->duration = duration;
  }
  return seg;
}

Eigen::Vector3d evaluate(const Segment3D& segment, double t, int derivative_order) {
  if (derivative_order < 0 || derivative_order > 4)
    throw InvalidDerivativeOrder("derivative order must be in 0..4");
  if (t < 0.0 || t > segment.duration)
    throw TimeOutOfRange("t outside [0, duration]");
  return {segment.x.eval(t, derivative_order), segment.y.eval(t, derivative_order),
          segment.z.eval(t, derivative_order)};
}

double snap_cost(const Segment3D& segment) {
  // Gram form: integral of (sum_k c_k k!/(k-4)! t^{k-4})^2 over [0, T].
  double total = 0.0;
  const Polynomial1D* axes[3] = {&segment.x, &segment.y, &segment.z};
  for (const Polynomial1D* p : axes) {
    for (int k = 4; k < 8; ++k) {
      for (int l = 4; l < 8; ++l) {
        const int power = k + l - 8;
        total += p->coefficients[static_cast<size_t>(k)] *
                 p->coefficients[static_cast<size_t>(l)] * deriv_factor(k, 4) *
                 deriv_factor(l, 4) * std::pow(segment.duration, power + 1) /
                 static_cast<double>(power + 1);
      }
    }
  }
  return total;
}

}  // namespace peacock

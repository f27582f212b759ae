#pragma once

// Explicit Runge-Kutta integrator (Dormand-Prince 5(4)) with embedded error
// control, a PI step-size controller, 4th-order dense output, and event
// location by bisection on the dense interpolant.  Deterministic: the same
// problem and config always produce the same trajectory.

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fw {

class OdeError : public std::runtime_error {
 public:
  explicit OdeError(const std::string& what) : std::runtime_error(what) {}
};

using Field = std::function<void(double x, const std::vector<double>& y,
                                 std::vector<double>& dydx)>;

// Scalar event function g(x, y); an event fires where g crosses zero.
struct EventSpec {
  std::function<double(double x, const std::vector<double>& y)> g;
  bool terminal = true;
  int direction = 0;  // +1: only rising crossings, -1: only falling, 0: any
  std::string name;
};

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;           // 0 => choose automatically
  long max_steps = 1'000'000;
  double divergence_radius = 1e6;    // |y|_inf above this => Diverged
  double event_tol = 1e-10;          // bisection width for event location
  bool store_dense = false;          // keep dense coefficients for resampling
};

enum class Termination { ReachedEnd, Event, Diverged, StepLimit, StepUnderflow };

struct EventHit {
  int index = -1;      // which EventSpec fired
  double x = 0.0;
  std::vector<double> y;
};

// One accepted step's dense-output coefficients (quartic in the local
// normalized coordinate theta = (x - x0)/h).
struct DenseSegment {
  double x0 = 0.0, h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;
  void eval(double x, std::vector<double>& y) const;
  void eval_theta(double theta, std::vector<double>& y) const;
};

struct Trajectory {
  std::vector<double> xs;                    // accepted step endpoints (incl. start)
  std::vector<std::vector<double>> ys;
  std::vector<DenseSegment> dense;           // filled iff store_dense
  std::vector<EventHit> events;
  Termination termination = Termination::ReachedEnd;
  long n_steps = 0, n_rejected = 0;

  const std::vector<double>& back() const { return ys.back(); }
  double x_back() const { return xs.back(); }
  // Dense evaluation anywhere inside the covered span (requires store_dense).
  void sample(double x, std::vector<double>& y) const;
};

// Integrate y' = f(x, y) from (x0, y0) to x1 (x1 > x0).  Stops early at the
// first terminal event, on divergence, or when the step budget is exhausted.
Trajectory integrate(const Field& f, double x0, double x1,
                     const std::vector<double>& y0,
                     const IntegratorConfig& cfg = {},
                     const std::vector<EventSpec>& events = {});

}  // namespace fw

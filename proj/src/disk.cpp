#include "singforge/disk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "singforge/errors.hpp"

namespace sf {

namespace {

const double kPi = 3.14159265358979323846;

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Vec2 rk4_step(const DiskField& f, const Vec2& p, double h) {
  Vec2 k1 = f.eval(p.x, p.y);
  Vec2 q = p + k1 * (h * 0.5);
  Vec2 k2 = f.eval(q.x, q.y);
  q = p + k2 * (h * 0.5);
  Vec2 k3 = f.eval(q.x, q.y);
  q = p + k3 * h;
  Vec2 k4 = f.eval(q.x, q.y);
  return p + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
}

}  // namespace

DiskField disk_power(int n) {
  return {[n](double x, double y) {
            std::complex<double> w = std::pow(std::complex<double>(x, y), n);
            return Vec2(w.real(), w.imag());
          },
          "z^" + std::to_string(n)};
}

DiskField disk_conj_power(int n) {
  return {[n](double x, double y) {
            std::complex<double> w = std::pow(std::complex<double>(x, -y), n);
            return Vec2(w.real(), w.imag());
          },
          "conj(z)^" + std::to_string(n)};
}

DiskField disk_poly_gradient(const std::vector<double>& coeffs) {
  int degree = 0;
  size_t need = 1;
  while (need < coeffs.size()) {
    ++degree;
    need += degree + 1;
  }
  if (coeffs.empty() || need != coeffs.size())
    throw Error(ErrorCode::ParseError,
                "polynomial wants a triangular coefficient count, got " +
                    std::to_string(coeffs.size()));

  std::string model = "grad:";
  for (size_t i = 0; i < coeffs.size(); ++i)
    model += (i ? "," : "") + fmt_num(coeffs[i]);

  auto eval = [coeffs, degree](double x, double y) {
    double gx = 0.0, gy = 0.0;
    size_t idx = 0;
    for (int d = 0; d <= degree; ++d)
      for (int j = 0; j <= d; ++j, ++idx) {
        double c = coeffs[idx];
        if (c == 0.0) continue;
        int px = d - j, py = j;
        if (px > 0) gx += c * px * std::pow(x, px - 1) * std::pow(y, py);
        if (py > 0) gy += c * py * std::pow(x, px) * std::pow(y, py - 1);
      }
    return Vec2(gx, gy);
  };
  return {eval, model};
}

DiskField disk_grid(std::vector<Vec2> values, int nx, int ny) {
  if (nx < 2 || ny < 2 || values.size() != static_cast<size_t>(nx) * ny)
    throw Error(ErrorCode::ConditionViolated,
                "grid needs nx*ny samples with nx, ny >= 2");
  auto eval = [values = std::move(values), nx, ny](double x, double y) {
    double u = (x + 1.0) * 0.5 * (nx - 1);
    double v = (y + 1.0) * 0.5 * (ny - 1);
    u = std::clamp(u, 0.0, nx - 1.000001);
    v = std::clamp(v, 0.0, ny - 1.000001);
    int i = static_cast<int>(u), j = static_cast<int>(v);
    double fu = u - i, fv = v - j;
    const Vec2& a = values[j * nx + i];
    const Vec2& b = values[j * nx + i + 1];
    const Vec2& c = values[(j + 1) * nx + i];
    const Vec2& d = values[(j + 1) * nx + i + 1];
    return (a * (1 - fu) + b * fu) * (1 - fv) + (c * (1 - fu) + d * fu) * fv;
  };
  return {eval, "grid"};
}

namespace {

// "z" -> 1, "z^12" -> 12, anything else -> -1
int parse_power(const std::string& text, const std::string& head) {
  if (text == head) return 1;
  if (text.size() <= head.size() + 1 || text.compare(0, head.size(), head) != 0 ||
      text[head.size()] != '^')
    return -1;
  int n = 0;
  for (size_t i = head.size() + 1; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return -1;
    n = n * 10 + (text[i] - '0');
  }
  return n;
}

}  // namespace

DiskField parse_disk_model(const std::string& text) {
  if (int n = parse_power(text, "z"); n >= 0) return disk_power(n);
  if (int n = parse_power(text, "conj(z)"); n >= 0) return disk_conj_power(n);
  if (text.rfind("grad:", 0) == 0) {
    std::vector<double> coeffs;
    size_t pos = 5;
    while (pos <= text.size()) {
      size_t comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      try {
        size_t used = 0;
        std::string piece = text.substr(pos, comma - pos);
        coeffs.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad coefficient in '" + text + "'");
      }
      pos = comma + 1;
    }
    return disk_poly_gradient(coeffs);
  }
  throw Error(ErrorCode::ParseError, "unknown disk model '" + text + "'");
}

AngleProfile boundary_angle_profile(const DiskField& disk, int samples) {
  if (samples < 64)
    throw Error(ErrorCode::ConditionViolated,
                "angle profile needs at least 64 samples");

  AngleProfile out;
  out.t.resize(samples + 1);
  out.alpha.resize(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    double t = 2.0 * kPi * i / samples;
    double cx = std::cos(t), cy = std::sin(t);
    Vec2 v = disk.eval(cx, cy);
    if (norm(v) < 1e-12)
      throw Error(ErrorCode::ZeroOnCircle,
                  "field vanishes on the unit circle near t=" + fmt_num(t));
    Vec2 tau(-cy, cx);  // counterclockwise tangent
    double raw = std::atan2(cross(tau, v), dot(tau, v));
    out.t[i] = t;
    if (i == 0) {
      out.alpha[0] = raw;
    } else {
      double step = wrap_angle(raw - out.alpha[i - 1]);
      // Steps near a half turn cannot be unwrapped reliably; refuse anything
      // beyond three quarters of one as a safety margin.
      if (std::abs(step) > 0.75 * kPi)
        throw Error(ErrorCode::UnwrapJump,
                    "adjacent samples are almost half a turn apart near t=" +
                        fmt_num(t) + "; increase samples");
      out.alpha[i] = out.alpha[i - 1] + step;
    }
  }

  double turns = (out.alpha[samples] - out.alpha[0]) / (2.0 * kPi);
  double k_raw = turns + 1.0;
  if (std::abs(k_raw - std::round(k_raw)) > 1e-6)
    throw Error(ErrorCode::UnwrapJump,
                "profile does not close to a whole number of turns");
  out.k = static_cast<int>(std::lround(k_raw));

  for (int i = 0; i < samples; ++i) {
    double a = out.alpha[i], b = out.alpha[i + 1];
    double t0 = out.t[i], dt = out.t[i + 1] - out.t[i];
    if (b > a) {
      // levels in (a, b], crossed in ascending order
      int lo = static_cast<int>(std::floor(a / kPi)) + 1;
      int hi = static_cast<int>(std::floor(b / kPi));
      for (int n = lo; n <= hi; ++n)
        out.crossings.push_back({t0 + dt * (n * kPi - a) / (b - a), n, true});
    } else if (a > b) {
      // levels in [b, a), crossed in descending order
      int hi = static_cast<int>(std::ceil(a / kPi)) - 1;
      int lo = static_cast<int>(std::ceil(b / kPi));
      for (int n = hi; n >= lo; --n)
        out.crossings.push_back({t0 + dt * (a - n * kPi) / (a - b), n, false});
    }
  }
  return out;
}

bool crossing_census_check(const AngleProfile& profile) {
  int up = 0, down = 0;
  for (const LevelCrossing& c : profile.crossings) (c.increasing ? up : down)++;
  return up - down == 2 * (profile.k - 1);
}

std::vector<EntryCheck> crossing_entry_check(const DiskField& disk,
                                             const AngleProfile& profile) {
  const double h = 1e-4;
  const int steps = 100;  // horizon 1e-2
  std::vector<EntryCheck> out;
  for (const LevelCrossing& c : profile.crossings) {
    Vec2 p0(std::cos(c.t), std::sin(c.t));
    EntryCheck e{c, false, 1.0};
    for (double sgn : {1.0, -1.0}) {
      Vec2 p = p0;
      for (int s = 0; s < steps; ++s) {
        p = rk4_step(disk, p, sgn * h);
        double r = norm(p);
        e.worst = c.increasing ? std::max(e.worst, r) : std::min(e.worst, r);
      }
    }
    e.pass = c.increasing ? e.worst <= 1.0 + 1e-9 : e.worst >= 1.0 - 1e-9;
    out.push_back(e);
  }
  return out;
}

GradientVerdict gradient_obstruction(const DiskField& disk) {
  for (double r : {0.5, 0.85})
    for (int i = 0; i < 256; ++i) {
      double t = 2.0 * kPi * i / 256;
      Vec2 v = disk.eval(r * std::cos(t), r * std::sin(t));
      if (norm(v) < 1e-9)
        throw Error(ErrorCode::MultipleSingularities,
                    "field vanishes away from the origin at radius " + fmt_num(r) +
                        ", t=" + fmt_num(t));
    }

  AngleProfile prof = boundary_angle_profile(disk, 512);
  GradientVerdict out;
  out.k = prof.k;
  out.gradient_possible = prof.k <= 1;
  if (out.gradient_possible) {
    out.reason = "index " + std::to_string(prof.k) +
                 " is below two, within reach of a gradient flow";
    return out;
  }
  out.reason = "index " + std::to_string(prof.k) +
               " is not below two; no gradient flow attains it";

  // Trajectories through the first increasing passages fall back to the
  // singular point in both time directions, so no potential can grow along
  // the flow.
  int examined = 0;
  for (const LevelCrossing& c : prof.crossings) {
    if (!c.increasing) continue;
    if (++examined > 2) break;
    Vec2 p0(std::cos(c.t), std::sin(c.t));
    bool home = true;
    for (double sgn : {1.0, -1.0}) {
      Vec2 p = p0;
      bool reached = false;
      for (int s = 0; s < 30000 && !reached; ++s) {
        p = rk4_step(disk, p, sgn * 1e-3);
        if (norm(p) < 0.2) reached = true;
        if (norm(p) > 1.5) break;
      }
      home = home && reached;
    }
    if (home) out.returning.push_back(p0);
  }
  if (!out.returning.empty())
    out.reason += "; " + std::to_string(out.returning.size()) +
                  " boundary trajectories fall back to the origin both ways";
  return out;
}

}  // namespace sf

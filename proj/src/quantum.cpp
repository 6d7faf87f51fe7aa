#include "oddcycle/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oddcycle/spectrum.hpp"

namespace oddcycle {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat4 = std::array<cplx, 16>;

cplx& at4(Mat4& m, int r, int c) { return m[static_cast<std::size_t>(r) * 4 + c]; }
cplx at4(const Mat4& m, int r, int c) { return m[static_cast<std::size_t>(r) * 4 + c]; }

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 k{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          at4(k, 2 * i + p, 2 * j + q) = a.at(i, j) * b.at(p, q);
  return k;
}

Mat4 mul4(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      cplx aik = at4(a, i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < 4; ++j) at4(r, i, j) += aik * at4(b, k, j);
    }
  return r;
}

Mat4 adjoint4(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) at4(r, i, j) = std::conj(at4(a, j, i));
  return r;
}

TwoQubitState conjugate_by(const Mat4& u, const TwoQubitState& s) {
  TwoQubitState out;
  out.rho = mul4(mul4(u, s.rho), adjoint4(u));
  return out;
}

void validate_bit(int bit, const char* what) {
  if (bit != 0 && bit != 1)
    throw ValidationError(std::string(what) + " must be 0 or 1");
}

// Independent symmetric bit flips with probability eps on each measured bit.
std::array<double, 4> readout_mix(const std::array<double, 4>& p, double eps) {
  if (eps == 0.0) return p;
  auto flip = [eps](int out, int in) { return out == in ? 1.0 - eps : eps; };
  std::array<double, 4> q{};
  for (int oa = 0; oa < 2; ++oa)
    for (int ob = 0; ob < 2; ++ob)
      for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
          q[2 * oa + ob] += p[2 * ia + ib] * flip(oa, ia) * flip(ob, ib);
  return q;
}

}  // namespace

Mat2 Mat2::identity() {
  Mat2 i;
  i.at(0, 0) = 1.0;
  i.at(1, 1) = 1.0;
  return i;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
  return r;
}

Mat2 adjoint(const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = std::conj(a.at(j, i));
  return r;
}

std::array<double, 4> state_eigenvalues(const TwoQubitState& state) {
  // Real embedding [[Re, -Im], [Im, Re]] is symmetric for Hermitian input and
  // carries the same spectrum, each eigenvalue doubled.
  std::vector<double> e(64, 0.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      double re = state.at(r, c).real();
      double im = state.at(r, c).imag();
      e[static_cast<std::size_t>(r) * 8 + c] = re;
      e[static_cast<std::size_t>(r) * 8 + c + 4] = -im;
      e[static_cast<std::size_t>(r + 4) * 8 + c] = im;
      e[static_cast<std::size_t>(r + 4) * 8 + c + 4] = re;
    }
  auto ev = symmetric_eigenvalues(std::move(e), 8);
  // Ascending; take every other one to undo the doubling.
  return {ev[0], ev[2], ev[4], ev[6]};
}

void validate_state(const TwoQubitState& state) {
  double trace = 0.0;
  for (int r = 0; r < 4; ++r) {
    trace += state.at(r, r).real();
    if (std::fabs(state.at(r, r).imag()) > kHermitianTol)
      throw ValidationError("state has a complex diagonal entry");
    for (int c = 0; c < 4; ++c) {
      cplx d = state.at(r, c) - std::conj(state.at(c, r));
      if (std::abs(d) > kHermitianTol)
        throw ValidationError("state is not Hermitian within tolerance");
    }
  }
  if (std::fabs(trace - 1.0) > kTraceTol)
    throw ValidationError("state trace differs from 1 beyond tolerance");
  auto ev = state_eigenvalues(state);
  if (ev[0] < kEigenFloor)
    throw ValidationError("state has a negative eigenvalue beyond tolerance");
}

bool is_valid_state(const TwoQubitState& state) {
  try {
    validate_state(state);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

double purity(const TwoQubitState& state) {
  double p = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      p += (state.at(r, c) * state.at(c, r)).real();
  return p;
}

double trace_product(const TwoQubitState& a, const TwoQubitState& b) {
  double p = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      p += (a.at(r, c) * b.at(c, r)).real();
  return p;
}

HeraldPattern default_herald_pattern() {
  return HeraldPattern{{0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0}};
}

void validate_herald_pattern(const HeraldPattern& pattern) {
  for (double phase : pattern.phases)
    if (!(phase >= 0.0 && phase < 2.0 * kPi))
      throw ValidationError("herald phases must lie in [0, 2pi)");
}

void validate_noise(const NoiseModel& noise) {
  if (!(noise.visibility >= 0.0 && noise.visibility <= 1.0))
    throw ValidationError("visibility must lie in [0, 1]");
  if (!(noise.readout_error >= 0.0 && noise.readout_error <= 0.5))
    throw ValidationError("readout error must lie in [0, 0.5]");
}

TwoQubitState bell_state(double theta) {
  // |psi> = (|01> + e^{i theta}|10>)/sqrt(2)
  cplx a01{0.5, 0.0};
  cplx phase = std::exp(cplx{0.0, theta});
  TwoQubitState s;
  s.at(1, 1) = a01;
  s.at(2, 2) = a01;
  s.at(2, 1) = 0.5 * phase;             // a10 * conj(a01)
  s.at(1, 2) = 0.5 * std::conj(phase);  // a01 * conj(a10)
  return s;
}

TwoQubitState phase_correction(const TwoQubitState& state,
                               const HeraldPattern& pattern, int gamma) {
  validate_herald_pattern(pattern);
  if (gamma < 0 || gamma > 3)
    throw ValidationError("herald index must lie in 0..3");
  double half = 0.5 * pattern.phases[gamma];
  // Bob-side diagonal that cancels the heralded relative phase.
  Mat2 gate;
  gate.at(0, 0) = std::exp(cplx{0.0, -half});
  gate.at(1, 1) = std::exp(cplx{0.0, half});
  return conjugate_by(kron(Mat2::identity(), gate), state);
}

double alpha_angle(int n, int vertex) {
  validate_game_size(n);
  if (vertex < 0 || vertex >= n) throw ValidationError("vertex out of range");
  double phi = kPi * vertex * (n - 1.0) / n;
  return phi - kPi / (2.0 * n);
}

double beta_angle(int n, int vertex) {
  validate_game_size(n);
  if (vertex < 0 || vertex >= n) throw ValidationError("vertex out of range");
  return -kPi * vertex * (n - 1.0) / n;
}

MeasurementAngles angles(int n, const Query& q) {
  return MeasurementAngles{alpha_angle(n, q.s), beta_angle(n, q.t)};
}

Mat2 ry(double theta) {
  double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  Mat2 r;
  r.at(0, 0) = c;
  r.at(0, 1) = -s;
  r.at(1, 0) = s;
  r.at(1, 1) = c;
  return r;
}

Mat2 equatorial_pulse(double azimuth) {
  // cos(pi/4) I - i sin(pi/4) (cos(az) X + sin(az) Y)
  double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
  Mat2 p;
  p.at(0, 0) = c;
  p.at(1, 1) = c;
  p.at(0, 1) = cplx{0.0, -s} * std::exp(cplx{0.0, -azimuth});
  p.at(1, 0) = cplx{0.0, -s} * std::exp(cplx{0.0, azimuth});
  return p;
}

std::pair<Mat2, Mat2> compile_pulse_sequence(double theta) {
  return {equatorial_pulse(0.0), equatorial_pulse(kPi - theta)};
}

TwoQubitState apply_strategy(const TwoQubitState& state, const MeasurementAngles& a) {
  return conjugate_by(kron(ry(a.alpha), ry(a.beta)), state);
}

std::array<double, 4> outcome_distribution(const TwoQubitState& state) {
  validate_state(state);
  std::array<double, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = state.at(i, i).real();
  return p;
}

OutcomePair to_outputs(int m_a, int m_b) {
  validate_bit(m_a, "measurement bit");
  validate_bit(m_b, "measurement bit");
  return OutcomePair{1 - m_a, m_b};
}

TwoQubitState apply_noise(const TwoQubitState& state, const NoiseModel& noise) {
  validate_noise(noise);
  double v = noise.visibility;
  TwoQubitState out;
  for (int i = 0; i < 16; ++i) out.rho[i] = v * state.rho[i];
  for (int d = 0; d < 4; ++d) out.at(d, d) += (1.0 - v) * 0.25;
  return out;
}

std::array<double, 4> measured_distribution(const TwoQubitState& prepared,
                                            const MeasurementAngles& angles,
                                            const NoiseModel& noise) {
  validate_noise(noise);
  TwoQubitState mixed = apply_noise(prepared, noise);
  TwoQubitState rotated = apply_strategy(mixed, angles);
  return readout_mix(outcome_distribution(rotated), noise.readout_error);
}

double win_probability_for_state(const TwoQubitState& prepared, int n,
                                 const Query& q, const NoiseModel& noise) {
  auto dist = measured_distribution(prepared, angles(n, q), noise);
  double p = 0.0;
  for (int ma = 0; ma < 2; ++ma)
    for (int mb = 0; mb < 2; ++mb) {
      OutcomePair out = to_outputs(ma, mb);
      if (wins(q, out.a, out.b)) p += dist[2 * ma + mb];
    }
  return p;
}

double win_probability_exact(int n, const Query& q, const NoiseModel& noise) {
  return win_probability_for_state(bell_state(0.0), n, q, noise);
}

double omega_q(int n) {
  validate_game_size(n);
  double c = std::cos(kPi / (4.0 * n));
  return c * c;
}

OutcomePair sample_round(Rng& rng, int n, const Query& q, const NoiseModel& noise) {
  auto dist = measured_distribution(bell_state(0.0), angles(n, q), noise);
  double u = rng.unit();
  int cell = 3;
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    acc += dist[i];
    if (u < acc) {
      cell = i;
      break;
    }
  }
  return to_outputs(cell >> 1, cell & 1);
}

}  // namespace oddcycle

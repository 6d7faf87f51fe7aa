#pragma once

#include <array>
#include <complex>
#include <utility>

#include "oddcycle/game.hpp"
#include "oddcycle/rng.hpp"

namespace oddcycle {

using cplx = std::complex<double>;

struct Mat2 {
  std::array<cplx, 4> m{};
  cplx& at(int r, int c) { return m[static_cast<std::size_t>(r) * 2 + c]; }
  const cplx& at(int r, int c) const { return m[static_cast<std::size_t>(r) * 2 + c]; }
  static Mat2 identity();
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& a);

// Two-qubit density matrix, row-major 4x4, basis order |00>,|01>,|10>,|11>
// with Alice's qubit first.
struct TwoQubitState {
  std::array<cplx, 16> rho{};
  cplx& at(int r, int c) { return rho[static_cast<std::size_t>(r) * 4 + c]; }
  const cplx& at(int r, int c) const { return rho[static_cast<std::size_t>(r) * 4 + c]; }
};

// Validity tolerances: Hermiticity and unit trace to 1e-12, eigenvalues
// >= -1e-10. States outside tolerance are rejected, never clipped.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;

void validate_state(const TwoQubitState& state);
bool is_valid_state(const TwoQubitState& state);
std::array<double, 4> state_eigenvalues(const TwoQubitState& state);
double purity(const TwoQubitState& state);
// Tr(a*b); real part (both Hermitian). Fidelity against a pure state.
double trace_product(const TwoQubitState& a, const TwoQubitState& b);

// Herald pattern table: four entanglement events gamma in {0,1,2,3}, each
// producing (|01> + e^{i phase}|10>)/sqrt(2). Phases live in [0, 2pi).
struct HeraldPattern {
  std::array<double, 4> phases{};
};
HeraldPattern default_herald_pattern();  // {0, pi/2, pi, 3pi/2}
void validate_herald_pattern(const HeraldPattern& pattern);

struct MeasurementAngles {
  double alpha = 0.0;  // Alice's rotation
  double beta = 0.0;   // Bob's rotation
};

// Depolarized-singlet mixing (visibility V) plus symmetric readout bit flips
// (probability epsilon per qubit) applied at measurement.
struct NoiseModel {
  double visibility = 1.0;
  double readout_error = 0.0;
};
void validate_noise(const NoiseModel& noise);

struct OutcomePair {
  int a = 0;
  int b = 0;
  friend bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

// (|01> + e^{i theta}|10>)/sqrt(2) as a density matrix.
TwoQubitState bell_state(double theta);

// Bob-side phase gate cancelling the heralded phase: for
// state = bell_state(pattern.phases[gamma]) the output equals bell_state(0).
TwoQubitState phase_correction(const TwoQubitState& state,
                               const HeraldPattern& pattern, int gamma);

// Measurement pre-rotation angles. phi_v = pi*v*(n-1)/n;
// alpha_v = phi_v - pi/(2n), beta_v = -phi_v.
double alpha_angle(int n, int vertex);
double beta_angle(int n, int vertex);
MeasurementAngles angles(int n, const Query& q);

// Rotation about Y by theta: cos(theta/2) I - i sin(theta/2) Y.
Mat2 ry(double theta);

// Hardware-style decomposition: a pi/2 pulse about X followed by a pi/2 pulse
// about the equatorial axis at azimuth pi - theta. The composition reproduces
// ry(theta) up to a pre-measurement phase diag(e^{i theta/2}, e^{-i theta/2}),
// so its computational-basis statistics match ry(theta) exactly.
std::pair<Mat2, Mat2> compile_pulse_sequence(double theta);

// Equatorial pi/2 pulse about cos(azimuth) X + sin(azimuth) Y.
Mat2 equatorial_pulse(double azimuth);

// rho -> (ry(alpha) (x) ry(beta)) rho (.)^dagger.
TwoQubitState apply_strategy(const TwoQubitState& state, const MeasurementAngles& a);

// Diagonal of the state in the computational basis, validated first.
// Order P(00), P(01), P(10), P(11) of the raw measurement bits (m_a, m_b).
std::array<double, 4> outcome_distribution(const TwoQubitState& state);

// Output convention: Alice flips her measured bit, Bob reports his.
OutcomePair to_outputs(int m_a, int m_b);

// V * rho + (1-V) * I/4. Readout error is applied at sampling, not here.
TwoQubitState apply_noise(const TwoQubitState& state, const NoiseModel& noise);

// Distribution of raw measurement bits for a prepared (pre-rotation) state:
// visibility mixing, both rotations, then independent readout flips folded in.
std::array<double, 4> measured_distribution(const TwoQubitState& prepared,
                                            const MeasurementAngles& angles,
                                            const NoiseModel& noise);

// Exact win probability for a query, starting from an arbitrary prepared
// state (post herald handling, pre rotation).
double win_probability_for_state(const TwoQubitState& prepared, int n,
                                 const Query& q, const NoiseModel& noise);

// Exact win probability of the ideal heralded pipeline (corrected state).
// Query-independent: equals cos^2(pi/(4n)) when noise is trivial, and
// V * ideal + (1-V)/2 at readout_error = 0.
double win_probability_exact(int n, const Query& q, const NoiseModel& noise);

// cos^2(pi/(4n)).
double omega_q(int n);

// One sampled round: categorical draw from the exact measured distribution,
// then the output convention. Deterministic for a fixed rng state.
OutcomePair sample_round(Rng& rng, int n, const Query& q, const NoiseModel& noise);

}  // namespace oddcycle

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqed/system_model.hpp"

namespace cqed
{

// One-excitation manifold of two qubits and the resonator, basis {|e,g,0>, |g,g,1>, |g,e,0>}.
// Energies are relative to the (common) bare qubit energy.

namespace basis
{
inline constexpr int eg0 = 0;
inline constexpr int gg1 = 1;
inline constexpr int ge0 = 2;
}  // namespace basis

struct OneExcitationModel
{
	double g1 = 0.0;
	double g2 = 0.0;
	double delta_r = 0.0;  ///< nu_r - nu_q

	Eigen::Matrix3d hamiltonian() const;
};

struct EigenTriple
{
	Eigen::Vector3d energies;    ///< ascending
	Eigen::Matrix3cd states;     ///< column j is the state at energies(j)
	Eigen::Vector3d resonator_weight;  ///< |<g,g,1|psi>|^2
	Eigen::Vector3d drive_brightness;  ///< |(<e,g,0| + <g,e,0|) psi|^2 / 2
};

/// Fills both brightness vectors from `states`.
void compute_brightness(EigenTriple & triple);

/// Closed-form triplet at Delta_r = 0: {-g_c, 0, +g_c}.
EigenTriple resonant_triplet(double g1, double g2);

struct DispersiveEigensystem
{
	EigenTriple exact;
	EigenTriple perturbative;  ///< |-'>, |+'>, |1'> sorted by perturbative energy
	Eigen::Vector3d energy_deviation;  ///< exact - perturbative, ascending order
};

DispersiveEigensystem dispersive_eigensystem(OneExcitationModel const & model);

enum class ExchangeConvention
{
	dressed_resonant,  ///< 2 g1 g2 / Delta_r
	bare_resonant      ///< (g1^2 + g2^2) / Delta_r
};

std::string to_string(ExchangeConvention c);
ExchangeConvention parse_convention(std::string const & name);

double exchange_splitting(double g1, double g2, double delta_r, ExchangeConvention convention);

/// Second-order effective qubit Hamiltonian in basis {|e,g>, |g,e>}:
/// -(1/Delta_r) [[g1^2, g1 g2], [g1 g2, g2^2]], eigenvalues {-g_c^2 / Delta_r, 0}.
Eigen::Matrix2d perturbative_two_qubit_hamiltonian(double g1, double g2, double delta_r);

/// Minimum splitting of the two qubit-like states of the exact 3x3 problem as the second
/// qubit's bare energy is tuned (first qubit fixed at 0). This is the spectroscopic 2J when
/// the dressed qubit frequencies are brought into resonance.
struct Anticrossing
{
	double gap;
	double qubit2_offset;  ///< bare energy of qubit 2 at the minimum
};

Anticrossing exact_anticrossing(double g1, double g2, double delta_r);

struct DarkStateRow
{
	double delta_r;
	double dark_energy;         ///< exact qubit-like energy of the decoupled branch
	double bright_energy;       ///< exact qubit-like energy of the bright branch
	double bright_perturbative; ///< -g_c^2 / Delta_r
	double bright_resonator_amplitude;  ///< |<g,g,1|bright>|
	double bright_resonator_weight;     ///< |<g,g,1|bright>|^2
	double exact_splitting;
};

struct DarkStateReport
{
	std::vector<DarkStateRow> rows;
	double dark_variation;   ///< max - min dark energy over rows with Delta_r >= 8 max g
	double tolerance;        ///< 1% of g_c^2 / min Delta_r
	bool dark_fixed;
};

DarkStateReport dark_state_fixed_frequency_check(double g1, double g2, std::span<double const> delta_r);

/// Lab-frame one-excitation transition frequencies (ascending) of the RWA Hamiltonian for a
/// config with one or two DQDs, using effective couplings g_k sin(theta_k).
std::vector<double> transition_frequencies(SystemConfig const & config);

/// Symmetric tridiagonal 3x3 eigen-solve shared by the analytic routines.
EigenTriple diagonalize(Eigen::Matrix3d const & h);

}  // namespace cqed

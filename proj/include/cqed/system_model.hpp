#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/operators.hpp"

namespace cqed
{

// All frequencies and rates are nu = omega / 2pi in MHz.

enum class NoiseMode
{
	explicit_rates,
	derived_from_spectrum
};

/// White-noise environment of one DQD; c0 = C(0), c_omega = C(omega_k).
struct NoiseSpectrum
{
	double c0 = 0.0;
	double c_omega = 0.0;
	NoiseMode mode = NoiseMode::explicit_rates;
};

struct DqdParams
{
	double delta = 0.0;      ///< charge detuning
	double t = 0.0;          ///< half the tunnel splitting 2t
	double gamma1 = 0.0;     ///< relaxation rate
	double gamma_phi = 0.0;  ///< pure dephasing rate
	std::optional<NoiseSpectrum> noise;

	/// gamma2* = gamma1 / 2 + gamma_phi, the linewidth extracted from spectra.
	double gamma2_star() const { return 0.5 * gamma1 + gamma_phi; }
};

struct ResonatorParams
{
	double omega_r = 0.0;
	double kappa_int = 0.0;
	double kappa_ext = 1.0;

	double kappa_total() const { return kappa_int + kappa_ext; }
};

struct ProbeParams
{
	double omega_p = 0.0;
	Complex alpha = 1.0;  ///< coherent input amplitude, |alpha|^2 is the input photon flux
};

struct SystemConfig
{
	ResonatorParams resonator;
	std::vector<DqdParams> dqds;
	std::vector<double> couplings;
	ProbeParams probe;
	HilbertLayout layout;
	bool rwa = true;

	int num_qubits() const { return static_cast<int>(dqds.size()); }

	/// Throws ConfigError naming the first offending field.
	void validate() const;
};

struct MixingAngle
{
	double sin_theta;
	double cos_theta;
};

struct DecayRates
{
	double gamma1;
	double gamma_phi;
};

double qubit_frequency(DqdParams const & dqd);

/// sin(theta) = 2t / nu_q, cos(theta) = delta / nu_q.
MixingAngle mixing_angle(DqdParams const & dqd);

/// gamma1 = sin^2(theta) C(nu_q), gamma_phi = cos^2(theta) C(0); explicit-rates mode returns the stored rates.
DecayRates decay_rates(DqdParams const & dqd, NoiseSpectrum const & noise);

/// Rates actually used by the simulator for `dqd`, honoring its optional noise spectrum.
DecayRates effective_rates(DqdParams const & dqd);

/// Effective transverse coupling g_k sin(theta_k).
double effective_coupling(SystemConfig const & config, int k);

/// Probe amplitude that puts `photons` in the empty resonator when driven on resonance.
double alpha_for_photons(ResonatorParams const & resonator, double photons);

/// Rotating-frame (RWA) or lab-frame (full) Hamiltonian on config.layout.
OperatorMatrix build_hamiltonian(SystemConfig const & config);

struct CollapseSet
{
	std::vector<OperatorMatrix> channels;  ///< non-radiative channels
	OperatorMatrix scattering;             ///< L = sqrt(kappa_ext) a + alpha, the monitored channel

	/// All channels including L, in the order they enter the dissipator sum.
	std::vector<OperatorMatrix> all() const;
};

CollapseSet build_collapse_ops(SystemConfig const & config);

/// Addressable scalar fields of SystemConfig, e.g. "resonator.omega_r", "dqds[1].delta",
/// "couplings[0]", "probe.alpha". Derived paths "dqds[k].two_t" and "dqds[k].gamma2_star"
/// are also accepted; writing gamma2_star sets gamma1 = 2 (gamma2* - gamma_phi).
double get_parameter(SystemConfig const & config, std::string const & path);
void set_parameter(SystemConfig & config, std::string const & path, double value);

/// Config with DQD `k` removed; the layout shrinks accordingly.
SystemConfig without_qubit(SystemConfig const & config, int k);

}  // namespace cqed
